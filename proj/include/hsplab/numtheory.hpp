#pragma once

// Small exact integer helpers shared by the group, oracle and solver code.
// Moduli are limited to 2^31 so products fit comfortably in 64 bits.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace hsplab {

inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);

// Non-negative residue of a mod n (n >= 1).
std::int64_t mod_floor(std::int64_t a, std::int64_t n);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t n);

// Inverse of a modulo n; nullopt when gcd(a, n) != 1.
std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t n);

// Least r >= 1 with a^r = 1 mod n. Requires gcd(a, n) = 1.
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t n);

// Trial-division factorisation as (prime, exponent) pairs, ascending primes.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

bool is_prime(std::uint64_t n);

// (p, e) with n = p^e, e >= 1, or nullopt when n is not a prime power.
std::optional<std::pair<std::uint64_t, unsigned>> prime_power_root(
    std::uint64_t n);

std::uint64_t ipow(std::uint64_t base, unsigned exp);

// Smallest l with 2^l >= n.
unsigned ceil_log2(std::uint64_t n);

}  // namespace hsplab
