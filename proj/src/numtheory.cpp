#include "hsplab/numtheory.hpp"

#include <numeric>

#include "hsplab/errors.hpp"

namespace hsplab {

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  return std::gcd(a, b);
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / std::gcd(a, b) * b;
}

std::int64_t mod_floor(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % n);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t n) {
  if (n == 1) return 0;
  std::uint64_t result = 1;
  base %= n;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, n);
    base = mul_mod(base, base, n);
    exp >>= 1;
  }
  return result;
}

std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t n) {
  if (n == 1) return 0;
  std::int64_t old_r = static_cast<std::int64_t>(a % n);
  std::int64_t r = static_cast<std::int64_t>(n);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) return std::nullopt;
  return static_cast<std::uint64_t>(mod_floor(old_s, static_cast<std::int64_t>(n)));
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("modulus must be positive");
  if (gcd_u64(a % n, n) != 1) {
    throw InvalidArgument("element is not a unit modulo n");
  }
  if (n == 1) return 1;
  std::uint64_t x = a % n;
  std::uint64_t r = 1;
  while (x != 1) {
    x = mul_mod(x, a, n);
    ++r;
  }
  return r;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("cannot factor zero");
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  const auto f = factorize(n);
  return f.size() == 1 && f[0].second == 1;
}

std::optional<std::pair<std::uint64_t, unsigned>> prime_power_root(
    std::uint64_t n) {
  if (n < 2) return std::nullopt;
  const auto f = factorize(n);
  if (f.size() != 1) return std::nullopt;
  return f[0];
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

unsigned ceil_log2(std::uint64_t n) {
  unsigned l = 0;
  while ((std::uint64_t{1} << l) < n) ++l;
  return l;
}

}  // namespace hsplab
