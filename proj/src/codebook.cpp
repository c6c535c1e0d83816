#include "lfsim/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lfsim/error.hpp"

namespace lfsim {

namespace {

constexpr double kNormTolerance = 1e-6;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_size(std::size_t n, const std::string& origin, std::vector<std::string>* warnings) {
    if (n < 2) fail(ErrorKind::Data, origin + ": a codebook needs at least 2 entries");
    if (!is_power_of_two(n) && warnings)
        warnings->push_back(origin + ": codebook size " + std::to_string(n) + " is not a power of two");
}

// Column-wise Gram-Schmidt after checking the input is already orthonormal
// within tolerance.
ComplexMatrix orthonormalize(const ComplexMatrix& m, const std::string& what) {
    ComplexMatrix q = m;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        double norm2 = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) norm2 += std::norm(m(r, c));
        if (!(std::abs(std::sqrt(norm2) - 1.0) <= kNormTolerance))
            fail(ErrorKind::Data, what + ": column " + std::to_string(c + 1) + " has norm " +
                                      std::to_string(std::sqrt(norm2)));
        for (std::size_t p = 0; p < c; ++p) {
            cdouble ip = 0.0;
            for (std::size_t r = 0; r < m.rows(); ++r) ip += std::conj(m(r, p)) * m(r, c);
            if (std::abs(ip) > kNormTolerance)
                fail(ErrorKind::Data, what + ": columns " + std::to_string(p + 1) + " and " +
                                          std::to_string(c + 1) + " are not orthogonal");
        }
    }
    for (std::size_t c = 0; c < q.cols(); ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            cdouble ip = 0.0;
            for (std::size_t r = 0; r < q.rows(); ++r) ip += std::conj(q(r, p)) * q(r, c);
            for (std::size_t r = 0; r < q.rows(); ++r) q(r, c) -= ip * q(r, p);
        }
        double norm2 = 0.0;
        for (std::size_t r = 0; r < q.rows(); ++r) norm2 += std::norm(q(r, c));
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t r = 0; r < q.rows(); ++r) q(r, c) *= inv;
    }
    return q;
}

}  // namespace

BeamCodebook::BeamCodebook(std::size_t n_tx, std::vector<cdouble> entries)
    : n_tx_(n_tx), n_(n_tx ? entries.size() / n_tx : 0), entries_(std::move(entries)) {
    require(n_tx_ >= 1 && entries_.size() == n_ * n_tx_, "beam codebook: entry count is not a multiple of Nt");
    require(n_ >= 2, "beam codebook: at least 2 codewords are required");
    for (std::size_t l = 0; l < n_; ++l)
        require(std::abs(norm2_squared(vector(l)) - 1.0) <= 2e-9, "beam codebook: codeword is not unit norm");
}

PrecoderCodebook::PrecoderCodebook(std::size_t n_tx, std::size_t n_streams, std::vector<ComplexMatrix> matrices)
    : n_tx_(n_tx), n_streams_(n_streams), matrices_(std::move(matrices)) {
    require(n_streams_ >= 1 && n_streams_ <= n_tx_, "precoder codebook: need 1 <= Ns <= Nt");
    require(matrices_.size() >= 2, "precoder codebook: at least 2 precoders are required");
    const cdouble s = 1.0 / std::sqrt(static_cast<double>(n_streams_));
    for (const auto& m : matrices_) {
        require(m.rows() == n_tx_ && m.cols() == n_streams_, "precoder codebook: matrix shape mismatch");
        const ComplexMatrix gram = m.adjoint() * m;
        for (std::size_t i = 0; i < n_streams_; ++i)
            for (std::size_t j = 0; j < n_streams_; ++j)
                require(std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) <= 2e-9,
                        "precoder codebook: columns are not orthonormal");
        scaled_.push_back(s * m);
    }
}

CodebookFile parse_codebook(std::istream& in, const std::string& origin) {
    CodebookFile out;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<cdouble> values;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        const std::string where = origin + ":" + std::to_string(line_no);
        if (!have_header) {
            long long n = 0, nt = 0, ns = 0;
            std::string extra;
            if (!(ls >> n >> nt >> ns) || (ls >> extra) || n < 1 || nt < 1 || ns < 1)
                fail(ErrorKind::Data, where + ": expected header `N Nt Ns`");
            out.n = static_cast<std::size_t>(n);
            out.n_tx = static_cast<std::size_t>(nt);
            out.n_streams = static_cast<std::size_t>(ns);
            if (out.n_streams > out.n_tx) fail(ErrorKind::Data, where + ": Ns exceeds Nt");
            have_header = true;
            continue;
        }
        if (values.size() == out.n * out.n_tx * out.n_streams)
            fail(ErrorKind::Data, where + ": unexpected data after the last block");
        for (std::size_t s = 0; s < out.n_streams; ++s) {
            double re = 0.0, im = 0.0;
            if (!(ls >> re >> im) || !std::isfinite(re) || !std::isfinite(im))
                fail(ErrorKind::Data, where + ": expected " + std::to_string(out.n_streams) + " `re im` pairs");
            values.emplace_back(re, im);
        }
        std::string extra;
        if (ls >> extra) fail(ErrorKind::Data, where + ": trailing tokens");
    }
    if (!have_header) fail(ErrorKind::Data, origin + ": empty codebook file");
    if (values.size() != out.n * out.n_tx * out.n_streams)
        fail(ErrorKind::Data, origin + ": expected " + std::to_string(out.n) + " blocks of " +
                                  std::to_string(out.n_tx) + " lines");
    const std::size_t block = out.n_tx * out.n_streams;
    for (std::size_t l = 0; l < out.n; ++l)
        out.blocks.emplace_back(out.n_tx, out.n_streams,
                                std::vector<cdouble>(values.begin() + l * block, values.begin() + (l + 1) * block));
    return out;
}

BeamCodebook make_beam_codebook(const CodebookFile& file, std::vector<std::string>* warnings) {
    if (file.n_streams != 1) fail(ErrorKind::Data, "beam codebook requires Ns = 1");
    check_size(file.n, "beam codebook", warnings);
    std::vector<cdouble> entries;
    for (std::size_t l = 0; l < file.n; ++l) {
        const ComplexMatrix v = orthonormalize(file.blocks[l], "codeword " + std::to_string(l + 1));
        entries.insert(entries.end(), v.data().begin(), v.data().end());
    }
    return BeamCodebook(file.n_tx, std::move(entries));
}

PrecoderCodebook make_precoder_codebook(const CodebookFile& file, std::vector<std::string>* warnings) {
    check_size(file.n, "precoder codebook", warnings);
    std::vector<ComplexMatrix> mats;
    for (std::size_t l = 0; l < file.n; ++l)
        mats.push_back(orthonormalize(file.blocks[l], "precoder " + std::to_string(l + 1)));
    return PrecoderCodebook(file.n_tx, file.n_streams, std::move(mats));
}

namespace {

CodebookFile read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Data, "cannot open codebook file: " + path);
    return parse_codebook(in, path);
}

}  // namespace

BeamCodebook load_beam_codebook(const std::string& path, std::vector<std::string>* warnings) {
    const CodebookFile file = read_file(path);
    try {
        return make_beam_codebook(file, warnings);
    } catch (const Error& e) {
        fail(ErrorKind::Data, path + ": " + e.what());
    }
}

PrecoderCodebook load_precoder_codebook(const std::string& path, std::vector<std::string>* warnings) {
    const CodebookFile file = read_file(path);
    try {
        return make_precoder_codebook(file, warnings);
    } catch (const Error& e) {
        fail(ErrorKind::Data, path + ": " + e.what());
    }
}

double beam_gain(std::span<const cdouble> h, std::size_t n_rx, std::span<const cdouble> v) {
    const std::size_t nt = v.size();
    double acc = 0.0;
    for (std::size_t r = 0; r < n_rx; ++r) {
        cdouble s = 0.0;
        for (std::size_t c = 0; c < nt; ++c) s += h[r * nt + c] * v[c];
        acc += std::norm(s);
    }
    return acc;
}

std::size_t quantize_beam(std::span<const cdouble> h, std::size_t n_rx, const BeamCodebook& cb, double* best_gain) {
    require(h.size() == n_rx * cb.n_tx(), "quantize_beam: channel has the wrong number of columns");
    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t l = 0; l < cb.size(); ++l) {
        const double g = beam_gain(h, n_rx, cb.vector(l));
        if (g > best_value) {
            best_value = g;
            best = l;
        }
    }
    if (best_gain) *best_gain = best_value;
    return best;
}

std::size_t quantize_beam(const ComplexMatrix& h, const BeamCodebook& cb) {
    require(h.cols() == cb.n_tx(), "quantize_beam: channel has the wrong number of columns");
    return quantize_beam(h.data(), h.rows(), cb);
}

double precoder_metric(const ComplexMatrix& h, const ComplexMatrix& f_scaled) {
    require(h.cols() == f_scaled.rows(), "precoder_metric: shape mismatch");
    const ComplexMatrix hf = h * f_scaled;
    ComplexMatrix gram = hf.adjoint() * hf;
    gram *= 1.0 / static_cast<double>(f_scaled.cols());
    return logdet_i_plus_hermitian(gram);
}

std::size_t quantize_precoder(const ComplexMatrix& h, const PrecoderCodebook& cb) {
    require(h.cols() == cb.n_tx(), "quantize_precoder: channel has the wrong number of columns");
    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t l = 0; l < cb.size(); ++l) {
        const double m = precoder_metric(h, cb.scaled(l));
        if (m > best_value) {
            best_value = m;
            best = l;
        }
    }
    return best;
}

double min_chordal_distance(const BeamCodebook& cb) {
    double best = 1.0;
    for (std::size_t i = 0; i < cb.size(); ++i)
        for (std::size_t j = i + 1; j < cb.size(); ++j) {
            const double overlap = std::norm(inner(cb.vector(i), cb.vector(j)));
            best = std::min(best, std::sqrt(std::max(0.0, 1.0 - overlap)));
        }
    return best;
}

double min_chordal_distance(const PrecoderCodebook& cb) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cb.size(); ++i)
        for (std::size_t j = i + 1; j < cb.size(); ++j) {
            const ComplexMatrix a = cb.matrix(i) * cb.matrix(i).adjoint();
            const ComplexMatrix b = cb.matrix(j) * cb.matrix(j).adjoint();
            best = std::min(best, (a - b).frobenius_norm() / std::sqrt(2.0));
        }
    return best;
}

}  // namespace lfsim
