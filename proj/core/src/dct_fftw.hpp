// Internal FFTW-backed transform kernels. Outputs use the library's
// coefficient convention (see spectral.hpp), not FFTW's.
#pragma once

#include <cstddef>
#include <vector>

namespace specfilt::detail {

// in: n x d token-major. out: d x n channel-major DCT-II coefficients.
void fftw_forward(const std::vector<double>& in, std::size_t n, std::size_t d,
                  std::vector<double>& out);

// coeffs: d x n channel-major. out: n x d token-major samples.
void fftw_inverse(const std::vector<double>& coeffs, std::size_t n, std::size_t d,
                  std::vector<double>& out);

}  // namespace specfilt::detail
