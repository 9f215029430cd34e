#include "hsplab/oracles.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "hsplab/errors.hpp"
#include "hsplab/numtheory.hpp"

namespace hsplab {

namespace {

constexpr std::uint64_t kExhaustiveCheckCap = 4096;

std::vector<std::int64_t> point_on_axis(std::size_t rank, std::size_t j,
                                        std::int64_t value) {
  std::vector<std::int64_t> p(rank, 0);
  p.at(j) = value;
  return p;
}

std::vector<std::vector<std::int64_t>> lattice_generators(
    const DomainSpec& domain, const std::vector<std::vector<std::int64_t>>& gens) {
  HermiteLattice lat(domain.moduli, gens);
  return lat.canonical_generators();
}

// Smallest prime factor of the order of the planted subgroup, or 0 when the
// subgroup is trivial (no prime factor, so no restriction applies).
std::uint64_t smallest_prime_of_planted(const GroundTruth& t) {
  std::uint64_t order = 0;
  if (t.period) {
    order = *t.period;
  } else if (t.domain.is_finite()) {
    order = subgroup_order(t.planted_subgroup());
  }
  if (order <= 1) return 0;
  return factorize(order).front().first;
}

}  // namespace

bool DomainSpec::is_finite() const {
  return std::all_of(moduli.begin(), moduli.end(),
                     [](std::uint64_t d) { return d != 0; });
}

GroupSpec DomainSpec::finite_spec() const {
  if (!is_finite()) throw InvalidArgument("domain has an infinite factor");
  return GroupSpec(moduli);
}

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kDeutsch: return "deutsch";
    case InstanceKind::kSimon: return "simon";
    case InstanceKind::kOrder: return "order";
    case InstanceKind::kPeriod: return "period";
    case InstanceKind::kDiscreteLog: return "dlog";
    case InstanceKind::kStabiliser: return "stabiliser";
    case InstanceKind::kHiddenSubgroup: return "hsp";
    case InstanceKind::kManyToOne: return "many-to-one";
    case InstanceKind::kDerived: return "derived";
  }
  return "unknown";
}

OracleInstance::OracleInstance(InstanceKind kind, DomainSpec domain,
                               std::uint64_t codomain_size, EvalFn eval,
                               ShiftFn shift)
    : kind_(kind),
      domain_(std::move(domain)),
      codomain_size_(codomain_size),
      eval_(std::move(eval)),
      shift_(std::move(shift)),
      counters_(std::make_shared<Counters>()) {
  if (codomain_size_ == 0) throw InvalidArgument("codomain must be non-empty");
  if (domain_.rank() == 0) throw InvalidArgument("domain must have rank >= 1");
  if (!eval_) throw InvalidArgument("oracle needs an evaluation function");
}

std::uint64_t OracleInstance::evaluate(Point x) const {
  if (x.size() != domain_.rank()) {
    throw DimensionMismatch("point rank does not match oracle domain");
  }
  counters_->classical.fetch_add(1, std::memory_order_relaxed);
  return eval_(x);
}

std::uint64_t OracleInstance::evaluate(std::int64_t t) const {
  const std::int64_t p[1] = {t};
  return evaluate(std::span<const std::int64_t>(p, 1));
}

std::uint64_t OracleInstance::shift(std::size_t generator, std::int64_t amount,
                                    std::uint64_t label) const {
  if (!shift_) {
    throw ShiftUnavailable(std::string("instance of kind ") +
                           std::string(to_string(kind_)) +
                           " does not expose shift maps");
  }
  if (generator >= domain_.rank()) throw InvalidArgument("generator out of range");
  return shift_(generator, amount, label);
}

QueryCounts OracleInstance::queries() const {
  return QueryCounts{counters_->quantum.load(), counters_->classical.load()};
}

void OracleInstance::reset_queries() const {
  counters_->quantum.store(0);
  counters_->classical.store(0);
}

void OracleInstance::record_application() const {
  counters_->quantum.fetch_add(1, std::memory_order_relaxed);
}

OracleInstance OracleInstance::along_generator(std::size_t j,
                                               std::int64_t stride) const {
  if (j >= domain_.rank()) throw InvalidArgument("generator out of range");
  const std::size_t rank = domain_.rank();
  EvalFn inner = eval_;
  EvalFn eval = [inner, rank, j, stride](Point t) {
    const auto p = point_on_axis(rank, j, stride * t[0]);
    return inner(p);
  };
  ShiftFn shift;
  if (shift_) {
    ShiftFn parent = shift_;
    shift = [parent, j, stride](std::size_t, std::int64_t amount,
                                std::uint64_t label) {
      return parent(j, stride * amount, label);
    };
  }
  OracleInstance out(InstanceKind::kDerived, DomainSpec{{0}}, codomain_size_,
                     std::move(eval), std::move(shift));
  out.counters_ = counters_;
  return out;
}

OracleInstance OracleInstance::restricted(DomainSpec domain, EmbedFn embed,
                                          ShiftFn shift) const {
  EvalFn inner = eval_;
  const std::size_t rank = domain_.rank();
  EvalFn eval = [inner, embed = std::move(embed), rank](Point y) {
    const auto x = embed(y);
    if (x.size() != rank) throw DimensionMismatch("embedding has wrong rank");
    return inner(x);
  };
  OracleInstance out(InstanceKind::kDerived, std::move(domain), codomain_size_,
                     std::move(eval), std::move(shift));
  out.counters_ = counters_;
  return out;
}

SubgroupGenerators GroundTruth::planted_subgroup() const {
  const GroupSpec spec = domain.finite_spec();
  SubgroupGenerators k{spec, {}};
  for (const auto& g : planted) k.gens.push_back(make_element(spec, g));
  return k;
}

SubgroupGenerators GroundTruth::effective_subgroup() const {
  const GroupSpec spec = domain.finite_spec();
  SubgroupGenerators k{spec, {}};
  for (const auto& g : effective) k.gens.push_back(make_element(spec, g));
  return k;
}

std::vector<std::uint64_t> seeded_permutation(std::uint64_t n,
                                              std::uint64_t seed) {
  std::vector<std::uint64_t> p(n);
  std::iota(p.begin(), p.end(), std::uint64_t{0});
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(p.begin(), p.end(), rng);
  }
  return p;
}

PlantedInstance make_order_instance(std::uint64_t modulus, std::uint64_t a) {
  if (modulus < 2 || modulus > kMaxModulus) {
    throw InvalidArgument("order finding needs 2 <= N <= 2^31");
  }
  a %= modulus;
  if (gcd_u64(a, modulus) != 1) {
    throw InvalidArgument("order finding needs gcd(a, N) = 1");
  }
  const std::uint64_t r = multiplicative_order(a, modulus);
  const std::uint64_t a_inv = *inverse_mod(a, modulus);
  auto power = [=](std::int64_t t) {
    return t >= 0 ? pow_mod(a, static_cast<std::uint64_t>(t), modulus)
                  : pow_mod(a_inv, static_cast<std::uint64_t>(-t), modulus);
  };
  OracleInstance::EvalFn eval = [power](OracleInstance::Point t) {
    return power(t[0]);
  };
  OracleInstance::ShiftFn shift = [power, modulus](std::size_t, std::int64_t x,
                                                   std::uint64_t label) {
    if (label >= modulus) return label;
    return mul_mod(label, power(x), modulus);
  };
  GroundTruth truth;
  truth.domain = DomainSpec{{0}};
  truth.planted = {{static_cast<std::int64_t>(r)}};
  truth.effective = truth.planted;
  truth.period = r;
  truth.effective_period = r;
  return {OracleInstance(InstanceKind::kOrder, truth.domain, modulus,
                         std::move(eval), std::move(shift)),
          truth};
}

PlantedInstance make_period_instance(std::uint64_t r,
                                     std::vector<std::uint64_t> relabeling) {
  if (r == 0) throw InvalidArgument("period must be >= 1");
  if (relabeling.size() != r) {
    throw InvalidArgument("relabeling must list one label per residue");
  }
  std::vector<std::uint64_t> sorted = relabeling;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("relabeling is not injective");
  }
  const std::uint64_t codomain = sorted.back() + 1;
  auto table = std::make_shared<const std::vector<std::uint64_t>>(
      std::move(relabeling));
  OracleInstance::EvalFn eval = [table, r](OracleInstance::Point t) {
    return (*table)[static_cast<std::size_t>(
        mod_floor(t[0], static_cast<std::int64_t>(r)))];
  };
  GroundTruth truth;
  truth.domain = DomainSpec{{0}};
  truth.planted = {{static_cast<std::int64_t>(r)}};
  truth.effective = truth.planted;
  truth.period = r;
  truth.effective_period = r;
  return {OracleInstance(InstanceKind::kPeriod, truth.domain, codomain,
                         std::move(eval)),
          truth};
}

PlantedInstance make_period_instance(std::uint64_t r, std::uint64_t seed) {
  if (r == 0) throw InvalidArgument("period must be >= 1");
  return make_period_instance(r, seeded_permutation(r, seed));
}

namespace {

PlantedInstance coset_instance(InstanceKind kind, const DomainSpec& domain,
                               const std::vector<std::vector<std::int64_t>>& gens,
                               std::uint64_t seed, bool expose_shift) {
  if (domain.rank() == 0) throw InvalidArgument("domain must have rank >= 1");
  for (const auto& g : gens) {
    if (g.size() != domain.rank()) {
      throw DimensionMismatch("generator rank does not match domain");
    }
  }
  auto lat = std::make_shared<const HermiteLattice>(domain.moduli, gens);
  if (!lat->full_rank()) {
    throw InvalidArgument("hidden subgroup has infinite index in the domain");
  }
  const std::uint64_t index = lat->index();
  if (index > kMaxModulus) throw DimensionCapExceeded("too many cosets");
  auto perm = std::make_shared<const std::vector<std::uint64_t>>(
      seeded_permutation(index, seed));
  auto inv = std::make_shared<std::vector<std::uint64_t>>(index);
  for (std::uint64_t i = 0; i < index; ++i) (*inv)[(*perm)[i]] = i;

  OracleInstance::EvalFn eval = [lat, perm](OracleInstance::Point x) {
    return (*perm)[lat->coset_index(x)];
  };
  OracleInstance::ShiftFn shift;
  if (expose_shift) {
    std::shared_ptr<const std::vector<std::uint64_t>> cinv = inv;
    shift = [lat, perm, cinv, index](std::size_t j, std::int64_t amount,
                                     std::uint64_t label) {
      if (label >= index) return label;
      auto rep = lat->coset_representative((*cinv)[label]);
      rep[j] += amount;
      return (*perm)[lat->coset_index(rep)];
    };
  }
  GroundTruth truth;
  truth.domain = domain;
  truth.planted = lat->canonical_generators();
  truth.effective = truth.planted;
  if (domain.rank() == 1 && domain.moduli[0] == 0) {
    truth.period = static_cast<std::uint64_t>(lat->pivot(0));
    truth.effective_period = truth.period;
  }
  return {OracleInstance(kind, domain, index, std::move(eval), std::move(shift)),
          truth};
}

}  // namespace

PlantedInstance make_hidden_subgroup_instance(
    const DomainSpec& domain,
    const std::vector<std::vector<std::int64_t>>& generators,
    std::uint64_t seed, bool expose_shift) {
  return coset_instance(InstanceKind::kHiddenSubgroup, domain, generators, seed,
                        expose_shift);
}

PlantedInstance make_simon_instance(std::size_t l, std::vector<int> s,
                                    bool allow_zero, std::uint64_t seed) {
  if (l == 0) throw InvalidArgument("Simon instance needs l >= 1");
  if (s.size() != l) throw InvalidArgument("s must have length l");
  bool nonzero = false;
  std::vector<std::int64_t> g(l);
  for (std::size_t i = 0; i < l; ++i) {
    if (s[i] != 0 && s[i] != 1) throw InvalidArgument("s must be a bit vector");
    g[i] = s[i];
    nonzero = nonzero || s[i] == 1;
  }
  if (!nonzero && !allow_zero) {
    throw InvalidArgument("Simon instance needs s != 0");
  }
  DomainSpec domain{std::vector<std::uint64_t>(l, 2)};
  std::vector<std::vector<std::int64_t>> gens;
  if (nonzero) gens.push_back(g);
  return coset_instance(InstanceKind::kSimon, domain, gens, seed, true);
}

PlantedInstance make_simon_instance(std::string_view bits, bool allow_zero,
                                    std::uint64_t seed) {
  std::vector<int> s;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InvalidArgument("s must be a bitstring");
    s.push_back(c - '0');
  }
  const std::size_t l = s.size();
  return make_simon_instance(l, std::move(s), allow_zero, seed);
}

PlantedInstance make_dlog_instance(std::uint64_t r, DlogGroup group,
                                   std::uint64_t a, std::uint64_t b) {
  if (r == 0) throw InvalidArgument("r must be >= 1");
  if (r > kMaxModulus) throw InvalidArgument("r must be <= 2^31");
  const std::uint64_t q = group.modulus;
  if (q < 1 || q > kMaxModulus) throw InvalidArgument("bad group modulus");
  const bool mult = group.kind == DlogGroup::Kind::kMultiplicative;
  a %= q;
  b %= q;
  std::uint64_t ord = 0;
  if (mult) {
    if (q < 2 || gcd_u64(a, q) != 1 || gcd_u64(b, q) != 1) {
      throw InvalidArgument("a and b must be units modulo q");
    }
    ord = multiplicative_order(a, q);
  } else {
    ord = q / gcd_u64(a, q);
  }
  if (r % ord != 0) throw InvalidArgument("order of a must divide r");

  auto op = [=](std::uint64_t base, std::int64_t e) {
    const auto k = static_cast<std::uint64_t>(
        mod_floor(e, static_cast<std::int64_t>(ord)));
    return mult ? pow_mod(base, k, q) : mul_mod(base, k, q);
  };
  auto combine = [=](std::uint64_t u, std::uint64_t v) {
    return mult ? mul_mod(u, v, q) : (u + v) % q;
  };
  std::optional<std::uint64_t> m;
  std::uint64_t acc = mult ? 1 % q : 0;
  for (std::uint64_t k = 0; k < ord; ++k) {
    if (acc == b) {
      m = k;
      break;
    }
    acc = combine(acc, a);
  }
  if (!m) throw InvalidArgument("b is not in the subgroup generated by a");

  // f(x, y) = a^{x + m y}; only the exponent modulo ord(a) matters.
  OracleInstance::EvalFn eval = [=](OracleInstance::Point p) {
    return combine(op(a, p[0]), op(b, p[1]));
  };
  OracleInstance::ShiftFn shift = [=](std::size_t j, std::int64_t x,
                                      std::uint64_t label) {
    if (label >= q) return label;
    return combine(label, op(j == 0 ? a : b, x));
  };
  GroundTruth truth;
  truth.domain = DomainSpec{{r, r}};
  const auto ri = static_cast<std::int64_t>(r);
  truth.planted = lattice_generators(
      truth.domain, {{mod_floor(-static_cast<std::int64_t>(*m), ri), 1},
                     {static_cast<std::int64_t>(ord), 0}});
  truth.effective = truth.planted;
  truth.dlog_exponent = *m;
  return {OracleInstance(InstanceKind::kDiscreteLog, truth.domain, q,
                         std::move(eval), std::move(shift)),
          truth};
}

PlantedInstance make_deutsch_instance(int f0, int f1) {
  if ((f0 != 0 && f0 != 1) || (f1 != 0 && f1 != 1)) {
    throw InvalidArgument("Deutsch values must be bits");
  }
  const auto v0 = static_cast<std::uint64_t>(f0);
  const auto v1 = static_cast<std::uint64_t>(f1);
  const bool constant = f0 == f1;
  OracleInstance::EvalFn eval = [v0, v1](OracleInstance::Point x) {
    return mod_floor(x[0], 2) == 0 ? v0 : v1;
  };
  OracleInstance::ShiftFn shift = [constant](std::size_t, std::int64_t x,
                                             std::uint64_t label) {
    if (constant || label > 1) return label;
    return label ^ static_cast<std::uint64_t>(mod_floor(x, 2));
  };
  GroundTruth truth;
  truth.domain = DomainSpec{{2}};
  if (constant) truth.planted = {{1}};
  truth.effective = truth.planted;
  return {OracleInstance(InstanceKind::kDeutsch, truth.domain, 2,
                         std::move(eval), std::move(shift)),
          truth};
}

PlantedInstance make_stabiliser_instance(const GroupSpec& spec,
                                         GroupAction action,
                                         std::uint64_t num_points,
                                         std::uint64_t x0) {
  if (!action) throw InvalidArgument("stabiliser instance needs an action");
  if (num_points == 0 || x0 >= num_points) {
    throw InvalidArgument("x0 must be one of the points");
  }
  const std::uint64_t order = spec.order();
  if (order > kExhaustiveCheckCap * 16) {
    throw DimensionCapExceeded("group too large for exhaustive action checks");
  }
  std::vector<GroupElement> elems;
  elems.reserve(order);
  for (std::uint64_t i = 0; i < order; ++i) elems.push_back(element_at(spec, i));

  const auto zero = zero_element(spec);
  for (std::uint64_t x = 0; x < num_points; ++x) {
    if (action(zero, x) != x) {
      throw InvalidArgument("action axioms violated: identity moves a point");
    }
  }
  // Compatibility is checked on every pair when that is affordable and against
  // the generators e_j otherwise, which still implies it for the whole group.
  std::vector<GroupElement> left;
  if (order * order * num_points <= 10'000'000) {
    left = elems;
  } else {
    for (std::size_t j = 0; j < spec.rank(); ++j) left.push_back(unit_vector(spec, j));
  }
  for (const auto& g : left) {
    for (const auto& h : elems) {
      const auto gh = add(spec, g, h);
      for (std::uint64_t x = 0; x < num_points; ++x) {
        const auto hx = action(h, x);
        if (hx >= num_points) {
          throw InvalidArgument("action maps outside the point set");
        }
        if (action(g, hx) != action(gh, x)) {
          throw InvalidArgument("action axioms violated: g(h(x)) != (g+h)(x)");
        }
      }
    }
  }

  std::vector<std::vector<std::int64_t>> stab;
  for (const auto& g : elems) {
    if (action(g, x0) == x0) stab.push_back(g.coords);
  }
  auto spec_copy = std::make_shared<const GroupSpec>(spec);
  OracleInstance::EvalFn eval = [action, spec_copy, x0](OracleInstance::Point p) {
    return action(make_element(*spec_copy, {p.begin(), p.end()}), x0);
  };
  OracleInstance::ShiftFn shift = [action, spec_copy, num_points](
                                      std::size_t j, std::int64_t x,
                                      std::uint64_t label) {
    if (label >= num_points) return label;
    return action(scale(*spec_copy, unit_vector(*spec_copy, j), x), label);
  };
  GroundTruth truth;
  truth.domain = DomainSpec{spec.moduli};
  truth.planted = lattice_generators(truth.domain, stab);
  truth.effective = truth.planted;
  return {OracleInstance(InstanceKind::kStabiliser, truth.domain, num_points,
                         std::move(eval), std::move(shift)),
          truth};
}

PlantedInstance wrap_many_to_one(const PlantedInstance& inner,
                                 std::vector<std::uint64_t> merge,
                                 std::uint64_t multiplicity,
                                 ManyToOnePolicy policy) {
  if (multiplicity == 0) throw InvalidArgument("multiplicity bound must be >= 1");
  if (merge.size() != inner.oracle.codomain_size()) {
    throw InvalidArgument("merge must map every inner label");
  }
  std::map<std::uint64_t, std::uint64_t> hits;
  for (auto v : merge) ++hits[v];
  for (const auto& [label, count] : hits) {
    if (count > multiplicity) {
      throw InvalidArgument("merge collapses " + std::to_string(count) +
                            " labels onto " + std::to_string(label) +
                            ", exceeding the multiplicity bound");
    }
  }
  const std::uint64_t codomain = hits.rbegin()->first + 1;

  GroundTruth truth = inner.truth;
  truth.multiplicity = std::max(truth.multiplicity, multiplicity);
  const std::uint64_t p = smallest_prime_of_planted(truth);
  if (p != 0 && multiplicity >= p) {
    const std::string msg =
        "multiplicity bound " + std::to_string(multiplicity) +
        " is not below the smallest prime factor " + std::to_string(p) +
        " of the hidden subgroup order; the subgroup may be unrecoverable";
    if (policy.reject_unsolvable) throw InvalidArgument(msg);
    truth.warnings.push_back(msg);
  }

  auto table = std::make_shared<const std::vector<std::uint64_t>>(std::move(merge));
  const OracleInstance& base = inner.oracle;
  OracleInstance::EvalFn eval = [base, table](OracleInstance::Point x) {
    return (*table)[base.evaluate_in_superposition(x)];
  };
  OracleInstance out(InstanceKind::kManyToOne, base.domain(), codomain,
                     std::move(eval));

  // Work out which subgroup the merged function is really periodic under.
  auto f = [&](std::span<const std::int64_t> x) {
    return out.evaluate_in_superposition(x);
  };
  if (truth.period) {
    const std::uint64_t r = *truth.period;
    if (r <= 1'000'000) {
      std::uint64_t best = r;
      for (std::uint64_t d = 1; d < r; ++d) {
        if (r % d != 0) continue;
        bool ok = true;
        for (std::uint64_t t = 0; t < r && ok; ++t) {
          const std::int64_t a[1] = {static_cast<std::int64_t>(t)};
          const std::int64_t b[1] = {static_cast<std::int64_t>(t + d)};
          ok = f(a) == f(b);
        }
        if (ok) {
          best = d;
          break;
        }
      }
      truth.effective_period = best;
      truth.effective = {{static_cast<std::int64_t>(best)}};
    } else {
      truth.warnings.push_back("effective period not computed (r too large)");
    }
  } else if (truth.domain.is_finite()) {
    HermiteLattice planted(truth.domain.moduli, truth.planted);
    const std::uint64_t n = planted.index();
    if (n <= kExhaustiveCheckCap) {
      std::vector<std::vector<std::int64_t>> reps(n);
      std::vector<std::uint64_t> values(n);
      for (std::uint64_t i = 0; i < n; ++i) {
        reps[i] = planted.coset_representative(i);
        values[i] = f(reps[i]);
      }
      auto gens = truth.planted;
      for (std::uint64_t k = 1; k < n; ++k) {
        bool ok = true;
        for (std::uint64_t i = 0; i < n && ok; ++i) {
          std::vector<std::int64_t> y = reps[i];
          for (std::size_t c = 0; c < y.size(); ++c) y[c] += reps[k][c];
          ok = f(y) == values[i];
        }
        if (ok) gens.push_back(reps[k]);
      }
      truth.effective = lattice_generators(truth.domain, gens);
    } else {
      truth.warnings.push_back("effective subgroup not computed (index too large)");
    }
  }
  return {std::move(out), std::move(truth)};
}

namespace {

void check_registers(const RegisterLayout& layout,
                     std::span<const std::size_t> controls, std::size_t target,
                     std::uint64_t codomain) {
  std::set<std::size_t> seen;
  for (auto c : controls) {
    if (c >= layout.num_registers()) throw InvalidArgument("control register out of range");
    if (!seen.insert(c).second) throw InvalidArgument("control register repeated");
  }
  if (target >= layout.num_registers()) throw InvalidArgument("target register out of range");
  if (seen.count(target)) throw InvalidArgument("target is also a control");
  if (layout.dim(target) < codomain) {
    throw DimensionMismatch("target register smaller than the oracle codomain");
  }
}

// Joint permutation adding table[x] (mod |X|) to the target, where x is the
// mixed-radix value of the control registers.
QuantumState add_to_target(QuantumState s, std::span<const std::size_t> controls,
                           std::size_t target, std::uint64_t codomain,
                           const std::vector<std::uint64_t>& table) {
  const auto& layout = s.layout();
  const std::size_t total = layout.total_dimension();
  const std::size_t tstride = layout.stride(target);
  std::vector<std::size_t> map(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t combo = 0;
    for (auto c : controls) combo = combo * layout.dim(c) + layout.digit(i, c);
    const std::size_t y = layout.digit(i, target);
    std::size_t y2 = y;
    if (y < codomain) y2 = static_cast<std::size_t>((y + table[combo]) % codomain);
    map[i] = i - y * tstride + y2 * tstride;
  }
  return apply_basis_permutation(std::move(s), map);
}

}  // namespace

QuantumState apply_oracle(QuantumState s, std::span<const std::size_t> controls,
                          std::size_t target, const OracleInstance& instance) {
  if (controls.size() != instance.domain().rank()) {
    throw DimensionMismatch("number of control registers must equal domain rank");
  }
  check_registers(s.layout(), controls, target, instance.codomain_size());
  std::size_t combos = 1;
  for (auto c : controls) combos *= s.layout().dim(c);
  std::vector<std::uint64_t> table(combos);
  std::vector<std::int64_t> point(controls.size());
  for (std::size_t idx = 0; idx < combos; ++idx) {
    std::size_t rest = idx;
    for (std::size_t k = controls.size(); k-- > 0;) {
      const std::size_t d = s.layout().dim(controls[k]);
      point[k] = static_cast<std::int64_t>(rest % d);
      rest /= d;
    }
    table[idx] = instance.evaluate_in_superposition(point);
  }
  instance.record_application();
  return add_to_target(std::move(s), controls, target, instance.codomain_size(),
                       table);
}

QuantumState apply_oracle_along(QuantumState s, std::size_t control,
                                std::size_t target,
                                const OracleInstance& instance,
                                std::size_t generator) {
  if (generator >= instance.domain().rank()) {
    throw InvalidArgument("generator out of range");
  }
  const std::size_t controls[1] = {control};
  check_registers(s.layout(), controls, target, instance.codomain_size());
  const std::size_t d = s.layout().dim(control);
  std::vector<std::uint64_t> table(d);
  for (std::size_t x = 0; x < d; ++x) {
    const auto p = point_on_axis(instance.domain().rank(), generator,
                                 static_cast<std::int64_t>(x));
    table[x] = instance.evaluate_in_superposition(p);
  }
  instance.record_application();
  return add_to_target(std::move(s), controls, target, instance.codomain_size(),
                       table);
}

QuantumState apply_shift(QuantumState s, std::size_t control, std::size_t target,
                         const OracleInstance& instance, std::size_t generator,
                         std::int64_t control_stride) {
  if (!instance.shift_available()) {
    throw ShiftUnavailable("instance does not expose shift maps");
  }
  if (generator >= instance.domain().rank()) {
    throw InvalidArgument("generator out of range");
  }
  const std::size_t controls[1] = {control};
  const std::uint64_t codomain = instance.codomain_size();
  check_registers(s.layout(), controls, target, codomain);
  const auto& layout = s.layout();
  const std::size_t dc = layout.dim(control);
  const std::size_t dt = layout.dim(target);
  // table[x * dt + y] = image of label y under U_{f(x e_j)}
  std::vector<std::size_t> table(dc * dt);
  for (std::size_t x = 0; x < dc; ++x) {
    for (std::size_t y = 0; y < dt; ++y) {
      table[x * dt + y] =
          y < codomain ? static_cast<std::size_t>(instance.shift(
                             generator,
                             static_cast<std::int64_t>(x) * control_stride, y))
                       : y;
    }
  }
  const std::size_t total = layout.total_dimension();
  const std::size_t tstride = layout.stride(target);
  std::vector<std::size_t> map(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t x = layout.digit(i, control);
    const std::size_t y = layout.digit(i, target);
    const std::size_t y2 = table[x * dt + y];
    if (y2 >= dt) throw InvalidArgument("shift map leaves the target register");
    map[i] = i - y * tstride + y2 * tstride;
  }
  instance.record_application();
  return apply_basis_permutation(std::move(s), map);
}

}  // namespace hsplab
