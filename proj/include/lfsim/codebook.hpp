#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "lfsim/numerics.hpp"

namespace lfsim {

/// N unit-norm beamforming vectors of length Nt.
class BeamCodebook {
public:
    BeamCodebook(std::size_t n_tx, std::vector<cdouble> entries);

    std::size_t size() const noexcept { return n_; }
    std::size_t n_tx() const noexcept { return n_tx_; }
    std::span<const cdouble> vector(std::size_t l) const { return {entries_.data() + l * n_tx_, n_tx_}; }

private:
    std::size_t n_tx_;
    std::size_t n_;
    std::vector<cdouble> entries_;
};

/// N Nt x Ns matrices with orthonormal columns. The 1/sqrt(Ns) power split
/// is applied by scaled(), never in storage.
class PrecoderCodebook {
public:
    PrecoderCodebook(std::size_t n_tx, std::size_t n_streams, std::vector<ComplexMatrix> matrices);

    std::size_t size() const noexcept { return matrices_.size(); }
    std::size_t n_tx() const noexcept { return n_tx_; }
    std::size_t n_streams() const noexcept { return n_streams_; }
    const ComplexMatrix& matrix(std::size_t l) const { return matrices_[l]; }
    const ComplexMatrix& scaled(std::size_t l) const { return scaled_[l]; }

private:
    std::size_t n_tx_;
    std::size_t n_streams_;
    std::vector<ComplexMatrix> matrices_;
    std::vector<ComplexMatrix> scaled_;
};

/// Raw contents of a codebook file: `N Nt Ns`, then N blocks of Nt lines of
/// Ns `re im` pairs. Lines starting with '#' are comments.
struct CodebookFile {
    std::size_t n = 0;
    std::size_t n_tx = 0;
    std::size_t n_streams = 0;
    std::vector<ComplexMatrix> blocks;
};

CodebookFile parse_codebook(std::istream& in, const std::string& origin = "<stream>");

/// Loaders validate the entries (norm / orthogonality within 1e-6, then exact
/// renormalization). A size that is not a power of two is reported through
/// `warnings` but accepted.
BeamCodebook load_beam_codebook(const std::string& path, std::vector<std::string>* warnings = nullptr);
PrecoderCodebook load_precoder_codebook(const std::string& path, std::vector<std::string>* warnings = nullptr);
BeamCodebook make_beam_codebook(const CodebookFile& file, std::vector<std::string>* warnings = nullptr);
PrecoderCodebook make_precoder_codebook(const CodebookFile& file, std::vector<std::string>* warnings = nullptr);

/// ||H v||^2 for a row-major Nr x Nt channel.
double beam_gain(std::span<const cdouble> h, std::size_t n_rx, std::span<const cdouble> v);

/// argmax_l ||H v_l||^2, zero-based, ties to the lowest index.
std::size_t quantize_beam(const ComplexMatrix& h, const BeamCodebook& cb);
std::size_t quantize_beam(std::span<const cdouble> h, std::size_t n_rx, const BeamCodebook& cb,
                          double* best_gain = nullptr);

/// log2 det(I + (1/Ns) (H F)^H (H F)) for the scaled precoder F.
double precoder_metric(const ComplexMatrix& h, const ComplexMatrix& f_scaled);

/// argmax of precoder_metric over the codebook, zero-based, ties to the lowest index.
std::size_t quantize_precoder(const ComplexMatrix& h, const PrecoderCodebook& cb);

/// Smallest pairwise chordal distance sqrt(1 - |v_i^H v_j|^2).
double min_chordal_distance(const BeamCodebook& cb);
/// Smallest pairwise subspace chordal distance ||A A^H - B B^H||_F / sqrt(2).
double min_chordal_distance(const PrecoderCodebook& cb);

}  // namespace lfsim
