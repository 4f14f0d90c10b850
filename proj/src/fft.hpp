#pragma once

#include <complex>
#include <span>
#include <vector>

namespace doppler::detail {

enum class FftSign { Negative, Positive };

/// Unnormalized DFT: out[v] = sum_j in[j] exp(-+ 2 pi i j v / n), the sign
/// chosen by `sign`. Plans are built per call under a process-wide lock.
std::vector<std::complex<double>> fft(std::span<const std::complex<double>> in, FftSign sign);

/// Smallest size >= n of the form 2^a 3^b 5^c.
std::size_t fast_fft_size(std::size_t n);

}  // namespace doppler::detail
