#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ddsp::fft {

// In-place radix-2 complex transforms. Sizes must be powers of two.
// forward() applies no scaling; inverse() includes the 1/N factor.
void forward(std::complex<double>* x, int n);
void inverse(std::complex<double>* x, int n);

inline void forward(std::vector<std::complex<double>>& x) {
  forward(x.data(), static_cast<int>(x.size()));
}
inline void inverse(std::vector<std::complex<double>>& x) {
  inverse(x.data(), static_cast<int>(x.size()));
}

// Real transform pair: rfft returns bins 0..n/2, irfft expects the same
// half spectrum and reconstructs a length-n real signal (Hermitian
// extension implied).
Eigen::VectorXcd rfft(const Eigen::VectorXd& x);
Eigen::VectorXd irfft(const Eigen::VectorXcd& half, int n);

}  // namespace ddsp::fft
