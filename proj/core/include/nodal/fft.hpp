#pragma once

#include <complex>
#include <vector>

namespace nodal {

/// In-place unnormalised DFT, X_k = sum_m x_m exp(-2 pi i k m / n) for
/// `forward`, and the conjugate kernel otherwise. Thread-safe; plans are
/// cached per (size, direction).
void fft_inplace(std::vector<std::complex<double>>& data, bool forward);

}  // namespace nodal
