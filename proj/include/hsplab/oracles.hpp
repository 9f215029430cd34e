#pragma once

// Black-box hidden-subgroup instances f : G -> X. Solvers only ever see an
// OracleInstance; the planted answer travels separately in GroundTruth so
// that verification code is the only consumer of it.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsplab/amplitudes.hpp"
#include "hsplab/groups.hpp"

namespace hsplab {

// Domain Z_{d_1} x ... x Z_{d_l}; a modulus of 0 stands for Z. Order and
// period instances live on Z and callers pick a bounded control range.
struct DomainSpec {
  std::vector<std::uint64_t> moduli;

  bool is_finite() const;
  std::size_t rank() const { return moduli.size(); }
  GroupSpec finite_spec() const;

  bool operator==(const DomainSpec&) const = default;
};

enum class InstanceKind {
  kDeutsch,
  kSimon,
  kOrder,
  kPeriod,
  kDiscreteLog,
  kStabiliser,
  kHiddenSubgroup,
  kManyToOne,
  kDerived,
};

std::string_view to_string(InstanceKind kind);

struct QueryCounts {
  std::uint64_t quantum = 0;    // applications of U_f or of a shift map
  std::uint64_t classical = 0;  // direct evaluations of f
};

class OracleInstance {
 public:
  using Point = std::span<const std::int64_t>;
  using EvalFn = std::function<std::uint64_t(Point)>;
  // (generator j, amount x, label y) -> label of f(y' + x e_j) where f(y') = y.
  using ShiftFn =
      std::function<std::uint64_t(std::size_t, std::int64_t, std::uint64_t)>;
  using EmbedFn = std::function<std::vector<std::int64_t>(Point)>;

  OracleInstance(InstanceKind kind, DomainSpec domain,
                 std::uint64_t codomain_size, EvalFn eval,
                 ShiftFn shift = {});

  InstanceKind kind() const { return kind_; }
  const DomainSpec& domain() const { return domain_; }
  std::uint64_t codomain_size() const { return codomain_size_; }
  bool shift_available() const { return static_cast<bool>(shift_); }

  // Classical query; counted.
  std::uint64_t evaluate(Point x) const;
  std::uint64_t evaluate(std::int64_t t) const;

  // Label permutation U_{f(x e_j)}; throws ShiftUnavailable when the
  // instance hides its homomorphism structure.
  std::uint64_t shift(std::size_t generator, std::int64_t amount,
                      std::uint64_t label) const;

  QueryCounts queries() const;
  void reset_queries() const;

  // t -> f(stride * t * e_j) on the domain Z. Shares the black box and the
  // query counters with this instance.
  OracleInstance along_generator(std::size_t j, std::int64_t stride = 1) const;

  // y -> f(embed(y)) on a new domain; `embed` must be a homomorphism so the
  // result is again constant on cosets. Shares counters.
  OracleInstance restricted(DomainSpec domain, EmbedFn embed,
                            ShiftFn shift = {}) const;

  // Uncounted evaluation used while simulating U_f, which is itself counted
  // once per application.
  std::uint64_t evaluate_in_superposition(Point x) const { return eval_(x); }
  void record_application() const;

 private:
  struct Counters {
    std::atomic<std::uint64_t> quantum{0};
    std::atomic<std::uint64_t> classical{0};
  };

  InstanceKind kind_;
  DomainSpec domain_;
  std::uint64_t codomain_size_;
  EvalFn eval_;
  ShiftFn shift_;
  std::shared_ptr<Counters> counters_;
};

// Planted answer for an instance. `planted` generates the subgroup the
// instance was built around; `effective` generates the subgroup the exposed
// function is actually periodic under, which differs only when a many-to-one
// merge created extra coincidences. Generators are integer vectors over the
// domain (relations d_j e_j are implicit).
struct GroundTruth {
  DomainSpec domain;
  std::vector<std::vector<std::int64_t>> planted;
  std::vector<std::vector<std::int64_t>> effective;
  std::optional<std::uint64_t> period;
  std::optional<std::uint64_t> effective_period;
  std::optional<std::uint64_t> dlog_exponent;
  std::uint64_t multiplicity = 1;
  std::vector<std::string> warnings;

  SubgroupGenerators planted_subgroup() const;
  SubgroupGenerators effective_subgroup() const;
};

struct PlantedInstance {
  OracleInstance oracle;
  GroundTruth truth;
};

// f(t) = a^t mod N on Z; shifts are multiplication by a^x.
PlantedInstance make_order_instance(std::uint64_t modulus, std::uint64_t a);

// f(t) = relabeling[t mod r] on Z; no shifts exposed.
PlantedInstance make_period_instance(std::uint64_t r,
                                     std::vector<std::uint64_t> relabeling);
PlantedInstance make_period_instance(std::uint64_t r, std::uint64_t seed);

// Coset labelling of Z_2^l by {0, s}. `s` is a bit vector, s[0] being the
// first coordinate. s = 0 is rejected unless allow_zero is set.
PlantedInstance make_simon_instance(std::size_t l, std::vector<int> s,
                                    bool allow_zero = false,
                                    std::uint64_t seed = 0);
PlantedInstance make_simon_instance(std::string_view bits,
                                    bool allow_zero = false,
                                    std::uint64_t seed = 0);

// Cyclic group in which discrete logs are taken: the units mod `modulus`
// (multiplicative) or Z_modulus written additively.
struct DlogGroup {
  enum class Kind { kMultiplicative, kAdditive };
  Kind kind = Kind::kMultiplicative;
  std::uint64_t modulus = 0;
};

// f(x, y) = a^x b^y on Z_r x Z_r, with the order of a dividing r and b = a^m.
PlantedInstance make_dlog_instance(std::uint64_t r, DlogGroup group,
                                   std::uint64_t a, std::uint64_t b);

PlantedInstance make_deutsch_instance(int f0, int f1);

// action(g, x) for a finite Abelian group acting on points [0, num_points).
using GroupAction =
    std::function<std::uint64_t(const GroupElement&, std::uint64_t)>;

PlantedInstance make_stabiliser_instance(const GroupSpec& spec,
                                         GroupAction action,
                                         std::uint64_t num_points,
                                         std::uint64_t x0);

// f = h o g where g is the quotient map onto G/K and h is a seeded random
// bijection onto [0, [G:K]). Seed 0 keeps the canonical coset numbering.
PlantedInstance make_hidden_subgroup_instance(
    const DomainSpec& domain,
    const std::vector<std::vector<std::int64_t>>& generators,
    std::uint64_t seed = 0, bool expose_shift = true);

struct ManyToOnePolicy {
  // Reject instances where the multiplicity bound is not below the smallest
  // prime factor of |K| (or of r for period instances) instead of warning.
  bool reject_unsolvable = false;
};

// f' = merge o f. merge[y] is the output label for inner label y and no output
// label may collect more than `multiplicity` inner labels.
PlantedInstance wrap_many_to_one(const PlantedInstance& inner,
                                 std::vector<std::uint64_t> merge,
                                 std::uint64_t multiplicity,
                                 ManyToOnePolicy policy = {});

// |x>|y> -> |x>|y + f(x) mod |X|>; control register j holds coordinate j of x.
// Target values >= |X| are left alone. Counts one oracle application.
QuantumState apply_oracle(QuantumState s, std::span<const std::size_t> controls,
                          std::size_t target, const OracleInstance& instance);

// Same map with a single control register holding x and input point x e_j.
QuantumState apply_oracle_along(QuantumState s, std::size_t control,
                                std::size_t target,
                                const OracleInstance& instance,
                                std::size_t generator);

// |x>|f(y)> -> |x>|f(y + x e_j)>. Counts one oracle application.
QuantumState apply_shift(QuantumState s, std::size_t control, std::size_t target,
                         const OracleInstance& instance, std::size_t generator,
                         std::int64_t control_stride = 1);

// Random bijection on [0, n) drawn from `seed`; identity for seed 0.
std::vector<std::uint64_t> seeded_permutation(std::uint64_t n,
                                              std::uint64_t seed);

}  // namespace hsplab
