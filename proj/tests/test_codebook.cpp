#include <doctest.h>

#include <random>
#include <sstream>

#include "lfsim/codebook.hpp"
#include "lfsim/error.hpp"
#include "oracles.hpp"

using namespace lfsim;

namespace {

const std::string kSource = LFSIM_SOURCE_DIR;

BeamCodebook beam_from(const std::string& text, std::vector<std::string>* warnings = nullptr) {
    std::istringstream in(text);
    return make_beam_codebook(parse_codebook(in), warnings);
}

PrecoderCodebook precoder_from(const std::string& text) {
    std::istringstream in(text);
    return make_precoder_codebook(parse_codebook(in));
}

const char* kUnit2 = "2 2 1\n1 0\n0 0\n0 0\n1 0\n";

ComplexMatrix diag(std::initializer_list<double> d) {
    ComplexMatrix m(d.size(), d.size());
    std::size_t i = 0;
    for (double v : d) m(i, i) = v, ++i;
    return m;
}

}  // namespace

TEST_CASE("a two-entry identity codebook loads as unit vectors") {
    const BeamCodebook cb = beam_from(kUnit2);
    REQUIRE(cb.size() == 2);
    CHECK(cb.n_tx() == 2);
    CHECK(cb.vector(0)[0] == cdouble(1.0));
    CHECK(cb.vector(1)[1] == cdouble(1.0));
    CHECK(norm2_squared(cb.vector(0)) == doctest::Approx(1.0));
}

TEST_CASE("malformed codebook files are rejected") {
    CHECK_THROWS_AS(beam_from("2 2 1\n1 0\n0 0\n0 0\n0 0\n"), Error);  // zero vector
    CHECK_THROWS_AS(beam_from("2 2 1\n2 0\n0 0\n0 0\n1 0\n"), Error);  // not unit norm
    CHECK_THROWS_AS(beam_from("1 2 1\n1 0\n0 0\n"), Error);             // N < 2
    CHECK_THROWS_AS(beam_from("2 2 1\n1 0\n0 0\n0 0\n"), Error);        // truncated
    CHECK_THROWS_AS(beam_from("2 2 1\n1 0\n0 x\n0 0\n1 0\n"), Error);   // bad number
    CHECK_THROWS_AS(precoder_from("2 2 2\n1 0 1 0\n0 0 0 0\n1 0 0 0\n0 0 1 0\n"), Error);  // dependent columns
    CHECK_THROWS_AS(load_beam_codebook("/nonexistent.cb"), Error);
}

TEST_CASE("a size that is not a power of two loads with a warning") {
    std::vector<std::string> warnings;
    const BeamCodebook cb = beam_from("3 2 1\n1 0\n0 0\n0 0\n1 0\n0.6 0\n0.8 0\n", &warnings);
    CHECK(cb.size() == 3);
    CHECK(warnings.size() == 1);
}

TEST_CASE("the shipped codebooks load and are well separated") {
    const BeamCodebook g = load_beam_codebook(kSource + "/codebooks/grass_4x1_n16.cb");
    CHECK(g.size() == 16);
    CHECK(g.n_tx() == 4);
    double worst = 1.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            const double c = std::abs(inner(g.vector(i), g.vector(j)));
            worst = std::min(worst, std::sqrt(std::max(0.0, 1.0 - c * c)));
        }
    CHECK(worst > 0.0);
    CHECK(min_chordal_distance(g) == doctest::Approx(worst).epsilon(1e-12));

    const PrecoderCodebook p = load_precoder_codebook(kSource + "/codebooks/lte_4x2_n16.cb");
    CHECK(p.size() == 16);
    CHECK(p.n_streams() == 2);
    CHECK(min_chordal_distance(p) > 0.0);
    const ComplexMatrix gram = p.matrix(3).adjoint() * p.matrix(3);
    CHECK(std::abs(gram(0, 0) - 1.0) <= 1e-12);
    CHECK(std::abs(gram(0, 1)) <= 1e-12);
    CHECK((p.scaled(3).adjoint() * p.scaled(3))(1, 1).real() == doctest::Approx(0.5));
    for (const char* name : {"grass_2x1_n4", "grass_2x1_n8", "grass_2x1_n16", "lte_4x1_n16"})
        CHECK(load_beam_codebook(kSource + "/codebooks/" + name + ".cb").size() >= 4);
    CHECK(load_precoder_codebook(kSource + "/codebooks/grass_4x2_n16.cb").size() == 16);
}

TEST_CASE("quantize_beam picks the strongest codeword, ties to the lowest index") {
    const BeamCodebook cb = beam_from(kUnit2);
    CHECK(quantize_beam(diag({2, 1}), cb) == 0);
    CHECK(quantize_beam(diag({1, 1}), cb) == 0);
    CHECK(quantize_beam(diag({1, 3}), cb) == 1);
    CHECK(quantize_beam(ComplexMatrix(2, 2), cb) == 0);
}

TEST_CASE("quantize_beam matches an exhaustive scan") {
    const BeamCodebook cb = load_beam_codebook(kSource + "/codebooks/grass_4x1_n16.cb");
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const ComplexMatrix h = oracle::random_gaussian(4, 4, rng);
        const oracle::CMat eh = oracle::to_eigen(h);
        std::size_t best = 0;
        double best_gain = -1.0;
        for (std::size_t l = 0; l < cb.size(); ++l) {
            Eigen::VectorXcd v(4);
            for (int i = 0; i < 4; ++i) v(i) = cb.vector(l)[i];
            const double g = (eh * v).squaredNorm();
            if (g > best_gain) best_gain = g, best = l;
        }
        double reported = 0.0;
        CHECK(quantize_beam(h, cb) == best);
        CHECK(quantize_beam(h.data(), 4, cb, &reported) == best);
        CHECK(reported == doctest::Approx(best_gain).epsilon(1e-12));
        CHECK(beam_gain(h.data(), 4, cb.vector(best)) == doctest::Approx(best_gain).epsilon(1e-12));
    }
}

TEST_CASE("quantize_precoder keeps the stronger singular directions") {
    const PrecoderCodebook cb = precoder_from(
        "2 4 2\n"
        "1 0 0 0\n0 0 1 0\n0 0 0 0\n0 0 0 0\n"
        "0 0 0 0\n0 0 0 0\n1 0 0 0\n0 0 1 0\n");
    CHECK(quantize_precoder(diag({3, 2, 1, 0.1}), cb) == 0);
    CHECK(quantize_precoder(diag({0.1, 1, 2, 3}), cb) == 1);
    CHECK(quantize_precoder(ComplexMatrix(4, 4), cb) == 0);
}

TEST_CASE("quantize_precoder matches an exhaustive scan of the mutual information") {
    const PrecoderCodebook cb = load_precoder_codebook(kSource + "/codebooks/lte_4x2_n16.cb");
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexMatrix h = oracle::random_gaussian(4, 4, rng);
        std::size_t best = 0;
        double best_mi = -1.0;
        for (std::size_t l = 0; l < cb.size(); ++l) {
            // Stored matrix scaled by 1/sqrt(Ns), then (1/Ns) inside the determinant.
            const oracle::CMat hf = oracle::to_eigen(h) * oracle::to_eigen(cb.matrix(l)) / std::sqrt(2.0);
            const double mi = oracle::logdet_eig(hf.adjoint() * hf / 2.0);
            if (mi > best_mi) best_mi = mi, best = l;
        }
        CHECK(quantize_precoder(h, cb) == best);
        CHECK(precoder_metric(h, cb.scaled(best)) == doctest::Approx(best_mi).epsilon(1e-10));
    }
}
