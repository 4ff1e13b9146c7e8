#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gnv::detail {

/// Unnormalised forward DFT, out[k] = sum_j in[j] exp(-2 pi i jk / N). Thread-safe; plans are
/// cached per length.
std::vector<std::complex<double>> forward_dft(std::span<const std::complex<double>> in);

}  // namespace gnv::detail
