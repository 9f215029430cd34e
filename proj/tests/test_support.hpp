#pragma once

// Seeded generators and brute-force reference oracles shared by the tests.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "hsplab/amplitudes.hpp"
#include "hsplab/groups.hpp"
#include "hsplab/oracles.hpp"

namespace hsplab::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_);
  }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  std::uint64_t raw() { return rng_(); }

  std::vector<Complex> amplitudes(std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<Complex> v(n);
    for (auto& a : v) a = {g(rng_), g(rng_)};
    return v;
  }

  // Random element of a finite group as raw coordinates.
  std::vector<std::int64_t> element(const std::vector<std::uint64_t>& moduli) {
    std::vector<std::int64_t> x;
    for (auto d : moduli) x.push_back(static_cast<std::int64_t>(below(d)));
    return x;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::set<std::vector<std::int64_t>> closure(
    const std::vector<std::uint64_t>& moduli,
    const std::vector<std::vector<std::int64_t>>& gens) {
  std::set<std::vector<std::int64_t>> seen{std::vector<std::int64_t>(moduli.size(), 0)};
  std::vector<std::vector<std::int64_t>> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& x : frontier) {
      for (const auto& g : gens) {
        std::vector<std::int64_t> y(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
          const auto d = static_cast<std::int64_t>(moduli[j]);
          y[j] = ((x[j] + g[j]) % d + d) % d;
        }
        if (seen.insert(y).second) next.push_back(y);
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

inline std::vector<std::vector<std::int64_t>> coords_of(const SubgroupGenerators& k) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& g : k.gens) out.push_back(g.coords);
  return out;
}

inline std::set<std::vector<std::int64_t>> elements_of(const SubgroupGenerators& k) {
  return closure(k.spec.moduli, coords_of(k));
}

// Every element of Z_{d_1} x ... x Z_{d_l}, first coordinate most significant.
inline std::vector<std::vector<std::int64_t>> all_elements(
    const std::vector<std::uint64_t>& moduli) {
  std::vector<std::vector<std::int64_t>> out{{}};
  for (auto d : moduli) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& x : out) {
      for (std::uint64_t v = 0; v < d; ++v) {
        auto y = x;
        y.push_back(static_cast<std::int64_t>(v));
        next.push_back(y);
      }
    }
    out = std::move(next);
  }
  return out;
}

// {k : f(x + k) = f(x) for every x}, by exhaustion.
inline std::set<std::vector<std::int64_t>> periods_by_exhaustion(
    const OracleInstance& f) {
  const auto& moduli = f.domain().moduli;
  const auto elems = all_elements(moduli);
  std::set<std::vector<std::int64_t>> out;
  for (const auto& k : elems) {
    bool ok = true;
    for (const auto& x : elems) {
      std::vector<std::int64_t> y(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) {
        y[j] = (x[j] + k[j]) % static_cast<std::int64_t>(moduli[j]);
      }
      if (f.evaluate_in_superposition(x) != f.evaluate_in_superposition(y)) {
        ok = false;
        break;
      }
    }
    if (ok) out.insert(k);
  }
  return out;
}

// Least d >= 1 with f(t + d) = f(t) for t in [0, horizon).
inline std::uint64_t least_period(const OracleInstance& f, std::uint64_t limit,
                                  std::uint64_t horizon = 256) {
  for (std::uint64_t d = 1; d <= limit; ++d) {
    bool ok = true;
    for (std::uint64_t t = 0; t < horizon && ok; ++t) {
      const std::int64_t a[1] = {static_cast<std::int64_t>(t)};
      const std::int64_t b[1] = {static_cast<std::int64_t>(t + d)};
      ok = f.evaluate_in_superposition(a) == f.evaluate_in_superposition(b);
    }
    if (ok) return d;
  }
  return 0;
}

inline std::uint64_t iterate_order(std::uint64_t a, std::uint64_t n) {
  std::uint64_t x = a % n;
  std::uint64_t r = 1;
  while (x != 1 % n) {
    x = x * a % n;
    ++r;
  }
  return r;
}

inline std::uint64_t slow_pow(std::uint64_t a, std::uint64_t e, std::uint64_t n) {
  std::uint64_t x = 1 % n;
  for (std::uint64_t i = 0; i < e; ++i) x = x * (a % n) % n;
  return x;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return acc / 2.0;
}

}  // namespace hsplab::testing
