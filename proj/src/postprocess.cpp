#include "hsplab/postprocess.hpp"

#include "hsplab/errors.hpp"
#include "hsplab/numtheory.hpp"

namespace hsplab {

ConvergentList continued_fractions(std::uint64_t x, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("denominator must be positive");
  if (x >= n) throw InvalidArgument("continued_fractions needs 0 <= x < N");
  ConvergentList out{x, n, {}};
  // h_{-1}/k_{-1} = 1/0 and h_{-2}/k_{-2} = 0/1
  std::int64_t h_prev = 1, h_prev2 = 0;
  std::int64_t k_prev = 0, k_prev2 = 1;
  std::uint64_t num = x, den = n;
  while (den != 0) {
    const auto a = static_cast<std::int64_t>(num / den);
    const std::uint64_t rem = num % den;
    const std::int64_t h = a * h_prev + h_prev2;
    const std::int64_t k = a * k_prev + k_prev2;
    out.convergents.push_back(Fraction{h, k});
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    num = den;
    den = rem;
  }
  // For x/N > 1/2 the expansion starts 0/1, 1/1; keep only the closer one so
  // denominators strictly increase.
  auto& c = out.convergents;
  if (c.size() > 1 && c[1].den == c[0].den) c.erase(c.begin());
  return out;
}

Fraction best_denominator_bounded(std::uint64_t x, std::uint64_t n,
                                  std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("denominator bound must be >= 1");
  const auto list = continued_fractions(x, n);
  Fraction best = list.convergents.front();
  for (const auto& f : list.convergents) {
    if (static_cast<std::uint64_t>(f.den) > bound) break;
    best = f;
  }
  return best;
}

std::uint64_t combine_denominators(
    std::span<const std::uint64_t> candidates,
    const std::function<bool(std::uint64_t)>& verifier) {
  std::uint64_t acc = 1;
  for (const auto r : candidates) {
    if (r == 0) throw InvalidArgument("candidate denominator must be >= 1");
    acc = lcm_u64(acc, r);
    if (verifier(acc)) return acc;
  }
  throw InvalidArgument("no candidate lcm passed verification");
}

}  // namespace hsplab
