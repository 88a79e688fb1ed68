#pragma once

#include <complex>
#include <span>

namespace fracnls::detail {

// Unnormalised DFT, out[k] = sum_j in[j] exp(-+ 2 pi i j k / N).
// in and out must not alias. Safe to call concurrently.
void dft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
void dft_backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

}  // namespace fracnls::detail
