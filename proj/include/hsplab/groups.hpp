#pragma once

// Finite Abelian groups Z_{d_1} x ... x Z_{d_l}, their subgroups, and the
// character relations used to recover a hidden subgroup from sampled
// characters.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace hsplab {

struct GroupSpec {
  std::vector<std::uint64_t> moduli;

  GroupSpec() = default;
  // Validates 1 <= d_j <= 2^31.
  explicit GroupSpec(std::vector<std::uint64_t> moduli);

  std::size_t rank() const { return moduli.size(); }
  // Throws InvalidArgument if the order does not fit in 63 bits.
  std::uint64_t order() const;

  bool operator==(const GroupSpec&) const = default;
};

// G = Z_{p^{m_1}} x ... x Z_{p^{m_l}} with m_1 <= ... <= m_l = m.
struct PrimePowerForm {
  std::uint64_t prime = 2;
  std::vector<unsigned> exponents;
  unsigned max_exponent = 0;
  std::uint64_t top_modulus = 1;  // p^m
};

// nullopt unless every modulus is a power of one prime and the exponents are
// sorted ascending. Factors equal to 1 count as p^0.
std::optional<PrimePowerForm> prime_power_form(const GroupSpec& spec);

struct GroupElement {
  std::vector<std::int64_t> coords;

  auto operator<=>(const GroupElement&) const = default;
};

// Reduces raw integer coordinates into [0, d_j).
GroupElement make_element(const GroupSpec& spec, std::vector<std::int64_t> raw);
GroupElement zero_element(const GroupSpec& spec);
GroupElement add(const GroupSpec& spec, const GroupElement& a,
                 const GroupElement& b);
GroupElement negate(const GroupSpec& spec, const GroupElement& a);
GroupElement scale(const GroupSpec& spec, const GroupElement& a,
                   std::int64_t k);
GroupElement unit_vector(const GroupSpec& spec, std::size_t j);

// Mixed-radix index of an element, coordinate 0 most significant.
std::uint64_t element_index(const GroupSpec& spec, const GroupElement& e);
GroupElement element_at(const GroupSpec& spec, std::uint64_t index);

struct SubgroupGenerators {
  GroupSpec spec;
  std::vector<GroupElement> gens;
};

// Hermite normal form of the lattice  span(generators) + sum_j d_j Z e_j  in
// Z^l. A modulus of 0 stands for an infinite cyclic factor Z, which lets the
// same machinery describe subgroups of finitely generated groups such as
// Z x Z_2. The basis is upper triangular with positive pivots and entries
// above each pivot reduced into [0, pivot), so it is unique for a given
// subgroup.
class HermiteLattice {
 public:
  HermiteLattice(std::vector<std::uint64_t> moduli,
                 std::span<const std::vector<std::int64_t>> generators);

  std::size_t dimension() const { return moduli_.size(); }
  const std::vector<std::uint64_t>& moduli() const { return moduli_; }
  bool full_rank() const;
  // Pivot of column c, or 0 if the column has none.
  std::int64_t pivot(std::size_t c) const { return pivots_.at(c); }
  // Basis row for pivot column c (empty if no pivot).
  const std::vector<std::int64_t>& row(std::size_t c) const {
    return rows_.at(c);
  }

  // Canonical coset representative of x: 0 <= r_c < pivot(c).
  std::vector<std::int64_t> reduce(std::span<const std::int64_t> x) const;
  bool contains(std::span<const std::int64_t> x) const;

  // Index of the lattice in Z^l; finite only when full_rank().
  std::uint64_t index() const;
  std::uint64_t coset_index(std::span<const std::int64_t> x) const;
  std::vector<std::int64_t> coset_representative(std::uint64_t index) const;

  // Basis rows reduced modulo the finite moduli, zero rows dropped.
  std::vector<std::vector<std::int64_t>> canonical_generators() const;

 private:
  std::vector<std::uint64_t> moduli_;
  std::vector<std::vector<std::int64_t>> rows_;
  std::vector<std::int64_t> pivots_;
};

// One prime component of a coprime split. Coordinate c of `spec` is the
// p-part of factor `source_factor[c]` of the original group.
struct PrimeComponent {
  std::uint64_t prime = 2;
  GroupSpec spec;
  std::vector<std::size_t> source_factor;
};

class CoprimeSplit {
 public:
  CoprimeSplit(GroupSpec original, std::vector<PrimeComponent> components);

  const GroupSpec& original() const { return original_; }
  const std::vector<PrimeComponent>& components() const { return components_; }

  // Coordinates of x in each prime component.
  std::vector<GroupElement> project(const GroupElement& x) const;
  // Image of a component element in the original group (other parts zero).
  GroupElement embed(std::size_t component, const GroupElement& y) const;
  // Chinese-remainder recombination, inverse of project().
  GroupElement combine(std::span<const GroupElement> parts) const;

 private:
  GroupSpec original_;
  std::vector<PrimeComponent> components_;
};

CoprimeSplit coprime_split(const GroupSpec& spec);

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// Brute-force closure under addition; throws DimensionCapExceeded past `cap`.
std::set<GroupElement> subgroup_enumerate(
    const SubgroupGenerators& k, std::size_t cap = kDefaultEnumerationCap);

SubgroupGenerators canonical_subgroup(const SubgroupGenerators& k);
std::uint64_t subgroup_order(const SubgroupGenerators& k);
bool subgroup_contains(const SubgroupGenerators& k, const GroupElement& x);
// Compares canonical forms; equal iff the generated subgroups coincide.
bool subgroups_equal(const SubgroupGenerators& a, const SubgroupGenerators& b);

// Every subgroup of a (small) finite Abelian group, canonicalised.
std::vector<SubgroupGenerators> all_subgroups(
    const GroupSpec& spec, std::size_t cap = kDefaultEnumerationCap);

// All finite Abelian groups of order n in invariant-factor form d_1 | d_2 | ...
// For prime powers this coincides with the ascending prime-power form.
std::vector<GroupSpec> abelian_groups_of_order(std::uint64_t n);

struct CharacterSample {
  GroupSpec spec;
  std::vector<std::int64_t> t;
};

// sum_j (L / d_j) h_j t_j == 0 mod L with L = lcm(d_j). For prime-power
// groups L = p^m and L / d_j = p^{m - m_j}.
bool satisfies_character_relation(const GroupSpec& spec,
                                  std::span<const std::int64_t> t,
                                  std::span<const std::int64_t> h);

// Brute-force list of every t in G satisfying the relation against all of K.
std::vector<std::vector<std::int64_t>> character_group(
    const SubgroupGenerators& k);

// Generators of { h : every sample t satisfies the relation against h }.
// Requires a prime-power spec.
SubgroupGenerators character_kernel(std::span<const CharacterSample> samples,
                                    const GroupSpec& spec);

bool spans_full_character_group(std::span<const CharacterSample> samples,
                                const GroupSpec& spec,
                                const SubgroupGenerators& planted);

}  // namespace hsplab
