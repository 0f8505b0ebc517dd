#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace memnoise::fft {

/// In-place iterative radix-2 transform; size must be a power of two.
/// Forward: X[k] = sum_m x[m] exp(-2*pi*i*k*m/n). Inverse applies the 1/n
/// factor. Kept in-house (rather than an external FFT) so the operation
/// order, and hence the rounding, is fixed by this code alone.
void transform(std::vector<std::complex<double>>& data, bool inverse);

/// Real-input forward transform; returns bins 0..n/2 (the Hermitian half).
std::vector<std::complex<double>> real_forward(std::span<const double> x);

/// Inverse of real_forward: spectrum holds bins 0..n/2, output has length n.
/// Imaginary parts of bins 0 and n/2 are ignored (they are zero for any
/// spectrum of a real signal).
std::vector<double> real_inverse(std::span<const std::complex<double>> spectrum,
                                 std::size_t n);

}  // namespace memnoise::fft
