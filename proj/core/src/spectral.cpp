#include "specfilt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dct_fftw.hpp"

namespace specfilt {

namespace {

void require_finite(const EmbeddingSequence& seq) {
    if (!seq.all_finite()) {
        throw DataError("sequence contains non-finite values");
    }
}

void require_finite(const SpectralMatrix& spec) {
    if (!spec.all_finite()) {
        throw DataError("spectrum contains non-finite values");
    }
}

// cos(pi*m*(i + 1/2)/n), row m contiguous over i.
std::vector<double> cosine_table(std::size_t n) {
    std::vector<double> table(n * n);
    const double step = std::numbers::pi / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            table[m * n + i] =
                std::cos(step * static_cast<double>(m) * (static_cast<double>(i) + 0.5));
        }
    }
    return table;
}

}  // namespace

BandFilter::BandFilter(std::size_t frequency_count, std::vector<std::size_t> masked)
    : n_(frequency_count), masked_(std::move(masked)) {
    if (n_ == 0) throw DataError("filter must cover at least one frequency");
    std::sort(masked_.begin(), masked_.end());
    masked_.erase(std::unique(masked_.begin(), masked_.end()), masked_.end());
    if (!masked_.empty() && masked_.back() >= n_) {
        throw IndexError("masked frequency index " + std::to_string(masked_.back()) +
                         " out of range for n=" + std::to_string(n_));
    }
}

BandFilter BandFilter::all(std::size_t frequency_count) {
    std::vector<std::size_t> everything(frequency_count);
    for (std::size_t m = 0; m < frequency_count; ++m) everything[m] = m;
    return BandFilter(frequency_count, std::move(everything));
}

bool BandFilter::masks(std::size_t frequency) const {
    return std::binary_search(masked_.begin(), masked_.end(), frequency);
}

SpectralMatrix dct_forward(const EmbeddingSequence& seq, DctBackend backend) {
    require_finite(seq);
    const std::size_t n = seq.token_count();
    const std::size_t d = seq.channel_count();
    SpectralMatrix spec(d, n);

    if (backend == DctBackend::fast) {
        detail::fftw_forward(seq.values(), n, d, spec.coeffs());
        return spec;
    }

    const std::vector<double> table = cosine_table(n);
    const std::vector<double>& x = seq.values();
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t m = 0; m < n; ++m) {
            double acc = 0.0;
            const double* row = table.data() + m * n;
            for (std::size_t i = 0; i < n; ++i) {
                acc += x[i * d + j] * row[i];
            }
            spec.at(j, m) = acc;
        }
    }
    return spec;
}

EmbeddingSequence dct_inverse(const SpectralMatrix& spec, DctBackend backend) {
    require_finite(spec);
    const std::size_t n = spec.frequency_count();
    const std::size_t d = spec.channel_count();
    EmbeddingSequence seq(n, d);

    if (backend == DctBackend::fast) {
        detail::fftw_inverse(spec.coeffs(), n, d, seq.values());
        return seq;
    }

    const std::vector<double> table = cosine_table(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = spec.at(j, 0);
            for (std::size_t m = 1; m < n; ++m) {
                acc += 2.0 * spec.at(j, m) * table[m * n + i];
            }
            seq.at(i, j) = acc * scale;
        }
    }
    return seq;
}

SpectralMatrix apply_filter(const SpectralMatrix& spec, const BandFilter& filter) {
    if (filter.frequency_count() != spec.frequency_count()) {
        throw ShapeError("filter covers " + std::to_string(filter.frequency_count()) +
                         " frequencies but spectrum has " +
                         std::to_string(spec.frequency_count()));
    }
    SpectralMatrix out = spec;
    const std::size_t n = out.frequency_count();
    const std::size_t d = out.channel_count();
    for (std::size_t j = 0; j < d; ++j) {
        double* row = out.coeffs().data() + j * n;
        for (std::size_t m : filter.masked()) {
            row[m] = 0.0;
        }
    }
    return out;
}

EmbeddingSequence filter_sequence(const EmbeddingSequence& seq,
                                  const BandFilter& filter, DctBackend backend) {
    if (filter.frequency_count() != seq.token_count()) {
        throw ShapeError("filter covers " + std::to_string(filter.frequency_count()) +
                         " frequencies but sequence has " +
                         std::to_string(seq.token_count()) + " tokens");
    }
    return dct_inverse(apply_filter(dct_forward(seq, backend), filter), backend);
}

namespace detail {

double idct_row_weight(std::size_t token, std::size_t frequency, std::size_t n) {
    if (frequency == 0) return 1.0 / static_cast<double>(n);
    const double angle = std::numbers::pi * static_cast<double>(frequency) *
                         (static_cast<double>(token) + 0.5) / static_cast<double>(n);
    return 2.0 * std::cos(angle) / static_cast<double>(n);
}

}  // namespace detail

}  // namespace specfilt
