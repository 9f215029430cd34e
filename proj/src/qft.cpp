#include "hsplab/qft.hpp"

#include <cmath>
#include <numbers>

#include "hsplab/errors.hpp"

namespace hsplab {

namespace {

std::vector<Complex> twiddles(std::size_t n, bool inverse) {
  const double sign = inverse ? -1.0 : 1.0;
  std::vector<Complex> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
    w[k] = Complex(std::cos(angle), std::sin(angle));
  }
  return w;
}

DenseUnitary fourier_matrix(std::size_t n, bool inverse) {
  if (n == 0) throw InvalidArgument("Fourier transform needs N >= 1");
  if (n > dimension_cap() / n) {
    throw DimensionCapExceeded("dense Fourier matrix exceeds dimension cap");
  }
  const auto w = twiddles(n, inverse);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Complex> m(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t a = 0; a < n; ++a) m[x * n + a] = w[(x * a) % n] * norm;
  }
  return DenseUnitary::from_matrix(n, std::move(m));
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_in_place(std::span<Complex> a, const std::vector<Complex>& w) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w[k * step];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace

DenseUnitary fourier(std::size_t n) { return fourier_matrix(n, false); }
DenseUnitary inverse_fourier(std::size_t n) { return fourier_matrix(n, true); }

QuantumState apply_fourier(QuantumState s, std::size_t reg, bool inverse) {
  const std::size_t n = s.layout().dim(reg);
  if (n == 1) return s;
  const auto w = twiddles(n, inverse);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  if (is_power_of_two(n)) {
    return transform_register(std::move(s), reg, [&](std::span<Complex> f) {
      fft_in_place(f, w);
      for (auto& v : f) v *= norm;
    });
  }
  std::vector<Complex> out(n);
  return transform_register(std::move(s), reg, [&](std::span<Complex> f) {
    for (std::size_t x = 0; x < n; ++x) {
      Complex acc = 0.0;
      std::size_t idx = 0;
      for (std::size_t a = 0; a < n; ++a) {
        acc += w[idx] * f[a];
        idx += x;
        if (idx >= n) idx -= n;
      }
      out[x] = acc * norm;
    }
    std::copy(out.begin(), out.end(), f.begin());
  });
}

double circular_distance(std::uint64_t x, std::uint64_t n, double phi) {
  double d = std::fabs(static_cast<double>(x) / static_cast<double>(n) - phi);
  d = std::fmod(d, 1.0);
  return std::min(d, 1.0 - d);
}

std::uint64_t EstimatorDistribution::closest_outcome() const {
  std::uint64_t best = 0;
  double best_d = circular_distance(0, n, phi);
  for (std::uint64_t x = 1; x < n; ++x) {
    const double d = circular_distance(x, n, phi);
    if (d < best_d - 1e-15) {
      best = x;
      best_d = d;
    }
  }
  return best;
}

double EstimatorDistribution::mass_within(unsigned k) const {
  double acc = 0.0;
  const double nd = static_cast<double>(n);
  for (std::uint64_t x = 0; x < n; ++x) {
    if (circular_distance(x, n, phi) * nd <= static_cast<double>(k) + 1e-9) {
      acc += probs[x];
    }
  }
  return acc;
}

EstimatorDistribution estimator_distribution(double phi, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("N must be >= 1");
  if (!(phi >= 0.0 && phi < 1.0)) throw InvalidArgument("phi must lie in [0, 1)");
  EstimatorDistribution out{n, phi, std::vector<double>(n)};
  const double nd = static_cast<double>(n);
  for (std::uint64_t x = 0; x < n; ++x) {
    // Geometric sum (1/N) sum_y e^{2 pi i delta y} has modulus
    // |sin(pi N delta) / (N sin(pi delta))|.
    double delta = phi - static_cast<double>(x) / nd;
    delta -= std::round(delta);
    const double den = std::sin(std::numbers::pi * delta);
    if (std::fabs(den) < 1e-15) {
      out.probs[x] = 1.0;
      continue;
    }
    const double ratio = std::sin(std::numbers::pi * nd * delta) / (nd * den);
    out.probs[x] = ratio * ratio;
  }
  return out;
}

std::uint64_t choose_register_size(std::uint64_t m, double epsilon,
                                   bool power_of_two) {
  if (m == 0) throw InvalidArgument("precision M must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("epsilon must lie in (0, 1)");
  }
  const long double bound =
      static_cast<long double>(m) * (1.0L / epsilon + 1.0L) / 2.0L;
  auto n = static_cast<std::uint64_t>(std::ceil(bound * (1.0L - 1e-15L)));
  if (n == 0) n = 1;
  if (power_of_two) {
    std::uint64_t p = 1;
    while (p < n) p <<= 1;
    n = p;
  }
  return n;
}

bool register_size_admissible(std::uint64_t n, std::uint64_t m, double epsilon) {
  const long double bound =
      static_cast<long double>(m) * (1.0L / epsilon + 1.0L) / 2.0L;
  return static_cast<long double>(n) >= bound * (1.0L - 1e-15L);
}

}  // namespace hsplab
