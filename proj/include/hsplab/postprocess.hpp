#pragma once

// Exact continued-fraction post-processing of phase estimates.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hsplab {

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  bool operator==(const Fraction&) const = default;
};

struct ConvergentList {
  std::uint64_t x = 0;
  std::uint64_t n = 1;
  std::vector<Fraction> convergents;  // lowest terms, denominators increasing
};

// Euclidean expansion of x/N with every convergent. Requires 0 <= x < N.
ConvergentList continued_fractions(std::uint64_t x, std::uint64_t n);

// The convergent of x/N with the largest denominator not exceeding `bound`.
// When |x/N - k/r| < 1/(2 bound^2) with r <= bound this is exactly k/r.
Fraction best_denominator_bounded(std::uint64_t x, std::uint64_t n,
                                  std::uint64_t bound);

// Running lcm over the candidate denominators, returned as soon as
// `verifier` accepts it. Throws InvalidArgument if no prefix verifies.
std::uint64_t combine_denominators(
    std::span<const std::uint64_t> candidates,
    const std::function<bool(std::uint64_t)>& verifier);

}  // namespace hsplab
