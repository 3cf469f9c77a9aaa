#pragma once

#include <cstddef>
#include <vector>

#include "specfilt/embedding.hpp"
#include "specfilt/errors.hpp"

namespace specfilt {

/// d x n matrix of DCT-II coefficients; row j holds the spectrum of channel j,
/// entry (j, m) the coefficient of frequency m.
class SpectralMatrix {
public:
    SpectralMatrix(std::size_t channel_count, std::size_t frequency_count)
        : d_(channel_count), n_(frequency_count) {
        if (d_ == 0 || n_ == 0) throw DataError("spectrum must be at least 1x1");
        coeffs_.assign(d_ * n_, 0.0);
    }

    std::size_t channel_count() const { return d_; }
    std::size_t frequency_count() const { return n_; }

    double at(std::size_t channel, std::size_t frequency) const {
        return coeffs_[channel * n_ + frequency];
    }
    double& at(std::size_t channel, std::size_t frequency) {
        return coeffs_[channel * n_ + frequency];
    }

    const std::vector<double>& coeffs() const { return coeffs_; }
    std::vector<double>& coeffs() { return coeffs_; }

    bool all_finite() const {
        for (double v : coeffs_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

private:
    std::size_t d_;
    std::size_t n_;
    std::vector<double> coeffs_;
};

/// Set of frequency indices zeroed by a band-stop filter. Canonical form:
/// sorted, deduplicated, every index in [0, n-1]. One filter applies
/// uniformly to all channels.
class BandFilter {
public:
    BandFilter(std::size_t frequency_count, std::vector<std::size_t> masked);

    static BandFilter none(std::size_t frequency_count) {
        return BandFilter(frequency_count, {});
    }
    static BandFilter all(std::size_t frequency_count);

    std::size_t frequency_count() const { return n_; }
    const std::vector<std::size_t>& masked() const { return masked_; }
    bool masks(std::size_t frequency) const;
    bool empty() const { return masked_.empty(); }

private:
    std::size_t n_;
    std::vector<std::size_t> masked_;
};

enum class DctBackend {
    direct,  // term-by-term summation, the reference path
    fast,    // FFTW-backed O(n log n) path
};

/// Forward un-normalized DCT-II of every channel:
///   coeffs(j, m) = sum_i data(i, j) * cos(pi*m*(i + 1/2)/n).
SpectralMatrix dct_forward(const EmbeddingSequence& seq,
                           DctBackend backend = DctBackend::fast);

/// Exact inverse of dct_forward:
///   data(i, j) = (1/n) * (f0 + 2 * sum_{m>=1} f_m * cos(pi*m*(i + 1/2)/n)).
EmbeddingSequence dct_inverse(const SpectralMatrix& spec,
                              DctBackend backend = DctBackend::fast);

/// Copy of `spec` with every masked column zeroed.
SpectralMatrix apply_filter(const SpectralMatrix& spec, const BandFilter& filter);

/// dct_inverse(apply_filter(dct_forward(seq))) : the band-stopped sequence.
EmbeddingSequence filter_sequence(const EmbeddingSequence& seq,
                                  const BandFilter& filter,
                                  DctBackend backend = DctBackend::fast);

namespace detail {
// Weight of frequency m in row `token` of the inverse transform.
double idct_row_weight(std::size_t token, std::size_t frequency, std::size_t n);
}  // namespace detail

}  // namespace specfilt
