#include "ddsp/fft.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace ddsp::fft {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Plan {
  int n = 0;
  std::vector<int> bitrev;
  // twiddles for the forward transform, one table per stage length,
  // flattened: for stage len, entries exp(-i*2*pi*j/len), j < len/2
  std::vector<std::complex<double>> twiddle;
  std::vector<int> stage_offset;  // indexed by log2(len)
};

const Plan& plan_for(int n) {
  static std::unordered_map<int, Plan> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  if (n < 1 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft size must be a power of two");

  Plan p;
  p.n = n;
  p.bitrev.resize(n);
  int log2n = 0;
  while ((1 << log2n) < n) ++log2n;
  for (int i = 0; i < n; ++i) {
    int r = 0;
    for (int b = 0; b < log2n; ++b) r |= ((i >> b) & 1) << (log2n - 1 - b);
    p.bitrev[i] = r;
  }
  p.stage_offset.assign(log2n + 1, 0);
  int off = 0;
  for (int s = 1; s <= log2n; ++s) {
    p.stage_offset[s] = off;
    int len = 1 << s;
    for (int j = 0; j < len / 2; ++j)
      p.twiddle.push_back(std::polar(1.0, -2.0 * kPi * j / len));
    off += len / 2;
  }
  return cache.emplace(n, std::move(p)).first->second;
}

void transform(std::complex<double>* x, int n, bool invert) {
  const Plan& p = plan_for(n);
  for (int i = 0; i < n; ++i) {
    int j = p.bitrev[i];
    if (i < j) std::swap(x[i], x[j]);
  }
  int log2n = 0;
  while ((1 << log2n) < n) ++log2n;
  for (int s = 1; s <= log2n; ++s) {
    const int len = 1 << s;
    const int half = len / 2;
    const std::complex<double>* tw = p.twiddle.data() + p.stage_offset[s];
    for (int i = 0; i < n; i += len) {
      for (int j = 0; j < half; ++j) {
        std::complex<double> w = tw[j];
        if (invert) w = std::conj(w);
        const std::complex<double> u = x[i + j];
        const std::complex<double> t = w * x[i + j + half];
        x[i + j] = u + t;
        x[i + j + half] = u - t;
      }
    }
  }
  if (invert) {
    const double inv = 1.0 / n;
    for (int i = 0; i < n; ++i) x[i] *= inv;
  }
}

}  // namespace

void forward(std::complex<double>* x, int n) { transform(x, n, false); }
void inverse(std::complex<double>* x, int n) { transform(x, n, true); }

Eigen::VectorXcd rfft(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::complex<double>> buf(n);
  for (int i = 0; i < n; ++i) buf[i] = x[i];
  forward(buf);
  Eigen::VectorXcd half(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) half[k] = buf[k];
  return half;
}

Eigen::VectorXd irfft(const Eigen::VectorXcd& half, int n) {
  if (half.size() != n / 2 + 1)
    throw std::invalid_argument("irfft: half spectrum size mismatch");
  std::vector<std::complex<double>> buf(n);
  for (int k = 0; k <= n / 2; ++k) buf[k] = half[k];
  for (int k = n / 2 + 1; k < n; ++k) buf[k] = std::conj(half[n - k]);
  inverse(buf);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = buf[i].real();
  return out;
}

}  // namespace ddsp::fft
