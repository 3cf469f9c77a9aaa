// Independent brute-force reference for the spectral pipeline. Everything here
// is a term-by-term evaluation of the defining sums over raw buffers; it
// deliberately shares no code with the library paths it checks. The cosine
// factors depend only on (m, i), so each call tabulates them once instead of
// re-evaluating std::cos per channel — same sum, same order, fewer cos calls.
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <set>
#include <vector>

namespace refdct {

// table[m*n + i] = cos(pi * m * (i + 1/2) / n)
inline std::vector<double> cosine_factors(std::size_t n) {
    std::vector<double> table(n * n);
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            table[m * n + i] = std::cos(std::numbers::pi * static_cast<double>(m) *
                                        (static_cast<double>(i) + 0.5) /
                                        static_cast<double>(n));
        }
    }
    return table;
}

// Forward coefficients, channel-major result: out[j*n + m].
// in is token-major: in[i*d + j].
inline std::vector<double> forward(const std::vector<double>& in, std::size_t n,
                                   std::size_t d) {
    const std::vector<double> table = cosine_factors(n);
    // channel-major copy so the inner summation walks contiguous memory
    std::vector<double> by_channel(d * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) by_channel[j * n + i] = in[i * d + j];
    }
    std::vector<double> out(d * n, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t m = 0; m < n; ++m) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += by_channel[j * n + i] * table[m * n + i];
            }
            out[j * n + m] = acc;
        }
    }
    return out;
}

// Inverse of `forward`, token-major result: out[i*d + j].
inline std::vector<double> inverse(const std::vector<double>& coeffs, std::size_t n,
                                   std::size_t d) {
    // transposed factors: by_token[i*n + m] = cos(pi * m * (i + 1/2) / n)
    const std::vector<double> table = cosine_factors(n);
    std::vector<double> by_token(n * n);
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t i = 0; i < n; ++i) by_token[i * n + m] = table[m * n + i];
    }
    std::vector<double> out(n * d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = coeffs[j * n + 0];
            for (std::size_t m = 1; m < n; ++m) {
                acc += 2.0 * coeffs[j * n + m] * by_token[i * n + m];
            }
            out[i * d + j] = acc / static_cast<double>(n);
        }
    }
    return out;
}

// Full band-stop pipeline: forward, zero masked columns, inverse.
inline std::vector<double> filter(const std::vector<double>& in, std::size_t n,
                                  std::size_t d, const std::set<std::size_t>& masked) {
    std::vector<double> coeffs = forward(in, n, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t m : masked) {
            coeffs[j * n + m] = 0.0;
        }
    }
    return inverse(coeffs, n, d);
}

}  // namespace refdct
