#include "hsplab/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "hsplab/errors.hpp"
#include "hsplab/numtheory.hpp"
#include "hsplab/postprocess.hpp"
#include "hsplab/qft.hpp"

namespace hsplab {

namespace {

constexpr std::uint64_t kSpotStream = 0x5107c4ec;
constexpr std::uint64_t kTailCap = 100'000;

struct Precision {
  unsigned bits = 0;
  std::uint64_t n = 1;
  std::uint64_t bound = 1;
};

std::uint64_t isqrt_below(std::uint64_t n) {
  // largest b with b * b < n
  auto b = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (b > 0 && b * b >= n) --b;
  while ((b + 1) * (b + 1) < n) ++b;
  return std::max<std::uint64_t>(b, 1);
}

Precision precision_for(unsigned control_bits, std::uint64_t period_bound) {
  Precision p;
  if (control_bits > 0) {
    if (control_bits > 40) throw InvalidArgument("too many control bits");
    p.bits = control_bits;
    p.n = std::uint64_t{1} << control_bits;
    p.bound = period_bound > 0 ? period_bound : isqrt_below(p.n);
  } else if (period_bound > 0) {
    if (period_bound > (std::uint64_t{1} << 20)) {
      throw InvalidArgument("period bound too large to simulate");
    }
    p.bound = period_bound;
    p.bits = ceil_log2(period_bound * period_bound) + 1;
    p.n = std::uint64_t{1} << p.bits;
  } else {
    throw InvalidArgument("period estimation needs control_bits or period_bound");
  }
  return p;
}

void require_rank_one(const OracleInstance& instance) {
  if (instance.domain().rank() != 1) {
    throw InvalidArgument("period finding needs a rank-one domain");
  }
}

std::uint64_t strip_primes(std::uint64_t d,
                           const std::function<bool(std::uint64_t)>& is_period) {
  for (const auto& [p, e] : factorize(d)) {
    (void)e;
    while (d % p == 0 && is_period(d / p)) d /= p;
  }
  return d;
}

// Sample, continued fractions, running lcm, classical verification. Returns
// false when the budget runs out.
bool period_search(const OracleInstance& instance, bool use_shift,
                   const Precision& prec, std::size_t budget, std::uint64_t seed,
                   OrderResult& out) {
  const std::uint64_t f0 = instance.evaluate(0);
  auto is_period = [&](std::uint64_t d) {
    return instance.evaluate(static_cast<std::int64_t>(d)) == f0;
  };
  std::uint64_t acc = 1;
  for (std::size_t t = 0; t < budget; ++t) {
    const std::uint64_t s = mix_seed(seed, t);
    PhaseSample sample;
    if (use_shift) {
      sample = phase_estimate_register(instance, 0, prec.n, s);
    } else {
      const auto x = sample_control_registers(
          instance, {static_cast<std::size_t>(prec.n)}, s);
      sample = make_phase_sample(x[0], prec.n, s);
    }
    out.samples.push_back(sample);
    ++out.trials;
    const Fraction frac = best_denominator_bounded(sample.observed, prec.n, prec.bound);
    const auto den = static_cast<std::uint64_t>(frac.den);
    std::uint64_t next = lcm_u64(acc, den);
    // A tail sample can contribute a denominator that does not divide r; once
    // the lcm passes the bound it cannot be r, so start again from this one.
    if (next > prec.bound) next = den;
    acc = next;
    if (is_period(acc)) {
      out.r = strip_primes(acc, is_period);
      out.verified = true;
      return true;
    }
  }
  return false;
}

OrderResult run_period_finding(const OracleInstance& instance,
                               const SolverParams& params, bool use_shift) {
  params.validate();
  require_rank_one(instance);
  const QueryCounts before = instance.queries();
  OrderResult out;
  auto finish = [&] {
    const QueryCounts after = instance.queries();
    out.queries = {after.quantum - before.quantum, after.classical - before.classical};
    return out;
  };
  if (!params.doubling) {
    const Precision prec = precision_for(params.control_bits, params.period_bound);
    if (period_search(instance, use_shift, prec, params.trial_budget, params.seed, out)) {
      return finish();
    }
    throw BudgetExhausted("period not verified within " +
                          std::to_string(params.trial_budget) + " trials");
  }
  const std::uint64_t codomain = instance.codomain_size();
  for (std::uint64_t guess = 2, round = 0;; guess *= 2, ++round) {
    const Precision prec = precision_for(0, guess);
    if (prec.n * codomain > dimension_cap()) break;
    if (period_search(instance, use_shift, prec, params.trial_budget,
                      mix_seed(params.seed, 1000 + round), out)) {
      return finish();
    }
  }
  throw BudgetExhausted("doubling reached the dimension cap without a period");
}

std::vector<std::int64_t> random_point(const std::vector<std::uint64_t>& moduli,
                                       std::mt19937_64& rng) {
  std::vector<std::int64_t> x(moduli.size());
  for (std::size_t j = 0; j < moduli.size(); ++j) {
    const std::uint64_t d = moduli[j] == 0 ? kMaxModulus : moduli[j];
    x[j] = static_cast<std::int64_t>(rng() % d);
  }
  return x;
}

// f(x + h) == f(x) for `checks` random x.
bool spot_check(const OracleInstance& instance, std::span<const std::int64_t> h,
                std::size_t checks, std::mt19937_64& rng) {
  const auto& moduli = instance.domain().moduli;
  for (std::size_t c = 0; c < checks; ++c) {
    auto x = random_point(moduli, rng);
    const std::uint64_t fx = instance.evaluate(x);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += h[j];
    if (instance.evaluate(x) != fx) return false;
  }
  return true;
}

CharacterSample draw_character(const OracleInstance& instance,
                               const GroupSpec& spec, std::uint64_t seed) {
  std::vector<std::size_t> sizes(spec.moduli.begin(), spec.moduli.end());
  const auto t = sample_control_registers(instance, sizes, seed);
  return CharacterSample{spec, std::vector<std::int64_t>(t.begin(), t.end())};
}

std::size_t samples_per_round(const SolverParams& params, std::size_t rank) {
  return params.hsp_samples > 0 ? params.hsp_samples : 4 * rank + 10;
}

void check_promise(const OracleInstance& instance, const SubgroupGenerators& k) {
  std::vector<std::vector<std::int64_t>> gens;
  for (const auto& g : k.gens) gens.push_back(g.coords);
  const HermiteLattice lattice(k.spec.moduli, gens);
  const std::uint64_t n = lattice.index();
  if (n > 4096) return;
  std::map<std::uint64_t, std::uint64_t> seen;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto v = instance.evaluate(lattice.coset_representative(i));
    if (!seen.emplace(v, i).second) {
      throw PromiseViolation("f takes the same value on two cosets of the "
                             "recovered subgroup");
    }
  }
}

using ComponentSolver =
    std::function<HspResult(const OracleInstance&, const SolverParams&)>;

HspResult solve_by_components(const OracleInstance& instance,
                              const SolverParams& params,
                              const ComponentSolver& solve_component) {
  const GroupSpec spec = instance.domain().finite_spec();
  const CoprimeSplit split = coprime_split(spec);
  HspResult out;
  SubgroupGenerators k{spec, {}};
  const QueryCounts before = instance.queries();
  out.verified = true;
  for (std::size_t c = 0; c < split.components().size(); ++c) {
    const auto& comp = split.components()[c];
    auto embed = [split, c, comp](OracleInstance::Point y) {
      return split.embed(c, make_element(comp.spec, {y.begin(), y.end()})).coords;
    };
    const OracleInstance sub =
        instance.restricted(DomainSpec{comp.spec.moduli}, embed);
    SolverParams p = params;
    p.seed = mix_seed(params.seed, c + 1);
    HspResult part = solve_component(sub, p);
    for (const auto& g : part.k.gens) k.gens.push_back(split.embed(c, g));
    out.trials += part.trials;
    out.tail_scan_evaluations += part.tail_scan_evaluations;
    out.verified = out.verified && part.verified;
    for (auto& s : part.samples) out.samples.push_back(std::move(s));
  }
  out.k = canonical_subgroup(k);
  const QueryCounts after = instance.queries();
  out.queries = {after.quantum - before.quantum, after.classical - before.classical};
  return out;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> merge_congruences(
    std::uint64_t a1, std::uint64_t m1, std::uint64_t a2, std::uint64_t m2) {
  // x = a1 mod m1 and x = a2 mod m2
  const std::uint64_t g = gcd_u64(m1, m2);
  const auto diff = mod_floor(static_cast<std::int64_t>(a2) - static_cast<std::int64_t>(a1),
                              static_cast<std::int64_t>(m2));
  if (diff % static_cast<std::int64_t>(g) != 0) return std::nullopt;
  const std::uint64_t m2g = m2 / g;
  const std::uint64_t l = m1 * m2g;
  if (m2g == 1) return std::make_pair(a1 % l, l);
  const std::uint64_t inv = *inverse_mod((m1 / g) % m2g, m2g);
  const std::uint64_t k = mul_mod(static_cast<std::uint64_t>(diff) / g % m2g, inv, m2g);
  return std::make_pair((a1 + m1 * k) % l, l);
}

}  // namespace

void SolverParams::validate() const {
  if (trial_budget == 0) throw InvalidArgument("trial budget must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("epsilon must lie in (0, 1)");
  }
  if (multiplicity == 0) throw InvalidArgument("multiplicity must be >= 1");
  if (zero_run_threshold == 0) throw InvalidArgument("zero-run threshold must be >= 1");
  if (spot_checks == 0) throw InvalidArgument("spot checks must be >= 1");
}

OrderResult find_order(const OracleInstance& instance, const SolverParams& params) {
  if (!instance.shift_available()) {
    throw ShiftUnavailable("find_order needs the multiplication maps; use find_period");
  }
  if (params.control_bits == 0 && params.period_bound == 0 && !params.doubling) {
    // The order of a unit mod N is below N.
    SolverParams bounded = params;
    bounded.period_bound = instance.codomain_size();
    return run_period_finding(instance, bounded, true);
  }
  return run_period_finding(instance, params, true);
}

OrderResult find_period(const OracleInstance& instance, const SolverParams& params) {
  return run_period_finding(instance, params, false);
}

FactorResult factor_via_order(std::uint64_t n, const SolverParams& params) {
  params.validate();
  if (n < 4) throw InvalidArgument("N must be composite");
  FactorResult out;
  out.n = n;
  if (n % 2 == 0) {
    out.factor = 2;
    out.classical_shortcut = true;
    return out;
  }
  if (is_prime(n)) throw InvalidArgument("N is prime");
  if (const auto root = prime_power_root(n)) {
    out.factor = root->first;
    out.classical_shortcut = true;
    return out;
  }
  std::mt19937_64 rng(mix_seed(params.seed, 0xfac7));
  SolverParams inner = params;
  if (inner.control_bits == 0 && inner.period_bound == 0) {
    inner.control_bits = ceil_log2(n * n);
    inner.period_bound = n;
  }
  for (std::size_t attempt = 0; attempt < params.trial_budget; ++attempt) {
    ++out.attempts;
    const std::uint64_t a = 2 + rng() % (n - 3);
    const std::uint64_t g = gcd_u64(a, n);
    if (g > 1) {
      out.factor = g;
      out.witness = a;
      out.classical_shortcut = true;
      return out;
    }
    inner.seed = mix_seed(params.seed, attempt + 1);
    OrderResult order;
    try {
      order = find_order(make_order_instance(n, a).oracle, inner);
    } catch (const BudgetExhausted&) {
      continue;
    }
    const std::uint64_t r = order.r;
    if (r % 2 != 0) continue;
    const std::uint64_t half = pow_mod(a, r / 2, n);
    if (half == n - 1) continue;
    for (const std::uint64_t c : {(half + n - 1) % n, (half + 1) % n}) {
      const std::uint64_t f = gcd_u64(c, n);
      if (f > 1 && f < n) {
        out.factor = f;
        out.witness = a;
        out.order = r;
        return out;
      }
    }
  }
  throw BudgetExhausted("no factor of " + std::to_string(n) + " within budget");
}

std::vector<std::uint64_t> reduce_finitely_generated(const OracleInstance& instance,
                                                     const SolverParams& params) {
  std::vector<std::uint64_t> out;
  for (std::size_t j = 0; j < instance.domain().rank(); ++j) {
    SolverParams p = params;
    p.seed = mix_seed(params.seed, j);
    out.push_back(find_period(instance.along_generator(j), p).r);
  }
  return out;
}

OracleInstance finite_quotient(const OracleInstance& instance,
                               const std::vector<std::uint64_t>& orders) {
  if (orders.size() != instance.domain().rank()) {
    throw DimensionMismatch("one order per generator is required");
  }
  for (std::size_t j = 0; j < orders.size(); ++j) {
    const auto d = instance.domain().moduli[j];
    if (orders[j] == 0 || (d != 0 && d % orders[j] != 0)) {
      throw InvalidArgument("orders must be positive and divide finite moduli");
    }
  }
  OracleInstance::ShiftFn shift;
  if (instance.shift_available()) {
    shift = [instance](std::size_t j, std::int64_t x, std::uint64_t label) {
      return instance.shift(j, x, label);
    };
  }
  return instance.restricted(
      DomainSpec{orders},
      [](OracleInstance::Point y) { return std::vector<std::int64_t>(y.begin(), y.end()); },
      std::move(shift));
}

HspResult solve_hsp(const OracleInstance& instance, const SolverParams& params) {
  params.validate();
  const GroupSpec spec = instance.domain().finite_spec();
  if (!prime_power_form(spec)) {
    throw InvalidArgument("solve_hsp needs a prime-power group; use solve_hsp_general");
  }
  const QueryCounts before = instance.queries();
  std::mt19937_64 rng(mix_seed(params.seed, kSpotStream));
  HspResult out;
  const std::size_t l = spec.rank();
  for (std::size_t round = 0; round < params.trial_budget; ++round) {
    const std::size_t count = round == 0 ? samples_per_round(params, l) : l + 2;
    for (std::size_t i = 0; i < count; ++i) {
      out.samples.push_back(
          draw_character(instance, spec, mix_seed(params.seed, out.samples.size() + 1)));
    }
    out.trials = out.samples.size();
    SubgroupGenerators k = character_kernel(out.samples, spec);
    const bool ok = std::all_of(k.gens.begin(), k.gens.end(), [&](const GroupElement& g) {
      return spot_check(instance, g.coords, params.spot_checks, rng);
    });
    if (!ok) continue;
    if (params.multiplicity == 1) check_promise(instance, k);
    out.k = std::move(k);
    out.verified = true;
    const QueryCounts after = instance.queries();
    out.queries = {after.quantum - before.quantum, after.classical - before.classical};
    return out;
  }
  throw BudgetExhausted("hidden subgroup not verified within budget");
}

HspResult solve_hsp_general(const OracleInstance& instance,
                            const SolverParams& params) {
  const GroupSpec spec = instance.domain().finite_spec();
  if (prime_power_form(spec)) return solve_hsp(instance, params);
  return solve_by_components(instance, params, solve_hsp);
}

DlogResult solve_dlog(const OracleInstance& instance, std::uint64_t r,
                      const SolverParams& params) {
  params.validate();
  if (instance.domain() != DomainSpec{{r, r}}) {
    throw InvalidArgument("discrete log instance must live on Z_r x Z_r");
  }
  if (!instance.shift_available()) {
    throw ShiftUnavailable("discrete log needs the maps U_a and U_b");
  }
  const QueryCounts before = instance.queries();
  DlogResult out;
  out.r = r;
  out.live_control_registers = 1;
  const std::uint64_t n = choose_register_size(2 * r, params.epsilon, true);
  out.control_size = n;
  const std::int64_t target_b[2] = {0, 1};
  const std::uint64_t fb = instance.evaluate(target_b);
  auto solves = [&](std::uint64_t m) {
    const std::int64_t p[2] = {static_cast<std::int64_t>(m), 0};
    return instance.evaluate(p) == fb;
  };
  // Nearest k with x / N close to k / r.
  auto nearest = [&](std::uint64_t x) {
    return ((2 * x * r + n) / (2 * n)) % r;
  };
  auto finish = [&](std::uint64_t m) {
    out.m = m;
    out.verified = true;
    const QueryCounts after = instance.queries();
    out.queries = {after.quantum - before.quantum, after.classical - before.classical};
    return out;
  };
  std::uint64_t m0 = 0, mod0 = 1;
  std::size_t zero_run = 0;
  for (std::size_t t = 0; t < params.trial_budget; ++t) {
    ++out.trials;
    const RegisterRun first =
        run_register_estimation(instance, 0, n, mix_seed(params.seed, 2 * t));
    out.stage_one.push_back(first.sample);
    const std::uint64_t k = nearest(first.sample.observed);
    if (k == 0) {
      ++out.zero_retries;
      // Only phase 0 keeps turning up when a = 1, and then b = 1 as well.
      if (++zero_run >= params.zero_run_threshold && solves(0)) return finish(0);
      continue;
    }
    zero_run = 0;
    // The target is now close to the eigenvector for k/r, which U_b shares.
    const QuantumState kept = keep_target_after_measurement(first);
    const RegisterRun second =
        run_register_estimation(instance, 1, n, mix_seed(params.seed, 2 * t + 1), kept);
    out.target_reused = true;
    out.stage_two.push_back(second.sample);
    const std::uint64_t km = nearest(second.sample.observed);
    // k m = km (mod r) determines m modulo r / gcd(k, r).
    const std::uint64_t g = gcd_u64(k, r);
    if (km % g != 0) continue;
    const std::uint64_t mod = r / g;
    const std::uint64_t m =
        mod == 1 ? 0 : mul_mod(km / g % mod, *inverse_mod(k / g % mod, mod), mod);
    if (auto merged = merge_congruences(m0, mod0, m, mod)) {
      m0 = merged->first;
      mod0 = merged->second;
    } else {
      m0 = m;
      mod0 = mod;
    }
    if (solves(m0)) {
      std::uint64_t best = m0;
      for (std::uint64_t d = 1; d <= mod0; ++d) {
        if (mod0 % d == 0 && solves(m0 % d)) {
          best = m0 % d;
          break;
        }
      }
      return finish(best);
    }
  }
  if (solves(0)) return finish(0);
  throw BudgetExhausted("discrete log not pinned within budget");
}

OrderResult robust_period(const OracleInstance& instance, const SolverParams& params) {
  params.validate();
  if (params.multiplicity <= 1) return find_period(instance, params);
  require_rank_one(instance);
  if (params.period_bound == 0) {
    throw InvalidArgument("robust period finding needs a period bound");
  }
  const std::uint64_t m2 = params.multiplicity * params.multiplicity;
  const std::uint64_t bound = params.period_bound;
  const std::uint64_t n =
      choose_register_size(2 * bound * bound,
                           params.epsilon / static_cast<double>(m2), true);
  if (n * instance.codomain_size() > dimension_cap()) {
    throw DimensionCapExceeded("robust control register exceeds the dimension cap");
  }
  const QueryCounts before = instance.queries();
  std::mt19937_64 rng(mix_seed(params.seed, kSpotStream));
  OrderResult out;
  const std::uint64_t f0 = instance.evaluate(0);
  // A wrong shift can agree with f on up to (m-1)/m of the points, so the
  // check budget grows with m^2.
  const std::size_t checks = params.spot_checks * m2;
  auto is_period = [&](std::uint64_t d) {
    const std::int64_t h[1] = {static_cast<std::int64_t>(d)};
    return spot_check(instance, h, checks, rng);
  };
  auto finish = [&](std::uint64_t p) {
    // Divisors of the accepted period: one full window of p decides exactly
    // when it fits in the check budget.
    auto divides_period = [&](std::uint64_t d) {
      bool ok = true;
      if (p <= checks) {
        for (std::uint64_t t = 0; t < p && ok; ++t) {
          ok = instance.evaluate(static_cast<std::int64_t>(t + d)) ==
               instance.evaluate(static_cast<std::int64_t>(t));
        }
      } else {
        ok = is_period(d);
      }
      (ok ? out.accepted_candidates : out.rejected_candidates).push_back(d);
      return ok;
    };
    out.r = strip_primes(p, divides_period);
    out.verified = true;
    const QueryCounts after = instance.queries();
    out.queries = {after.quantum - before.quantum, after.classical - before.classical};
    return out;
  };

  std::uint64_t factor = 1;  // sampling f(factor * t), whose period is r / factor
  std::size_t zero_run = 0;
  for (std::size_t t = 0; t < params.trial_budget; ++t) {
    const OracleInstance g = instance.along_generator(0, static_cast<std::int64_t>(factor));
    const std::uint64_t s = mix_seed(params.seed, t + 1);
    const auto x = sample_control_registers(g, {static_cast<std::size_t>(n)}, s);
    out.samples.push_back(make_phase_sample(x[0], n, s));
    ++out.trials;
    const std::uint64_t remaining = std::max<std::uint64_t>(1, bound / factor);
    const Fraction frac = best_denominator_bounded(x[0], n, remaining);
    if (frac.den == 1) {
      if (++zero_run < params.zero_run_threshold) continue;
      // Mostly zeros: what is left of the period is below m^2, so scan it.
      for (std::uint64_t step = 1; step <= m2; ++step) {
        ++out.tail_scan_evaluations;
        const std::uint64_t cand = factor * step;
        if (instance.evaluate(static_cast<std::int64_t>(cand)) != f0) continue;
        if (is_period(cand)) {
          out.accepted_candidates.push_back(cand);
          return finish(cand);
        }
        out.rejected_candidates.push_back(cand);
      }
      zero_run = 0;
      factor = 1;
      out.factors.clear();
      continue;
    }
    zero_run = 0;
    const auto den = static_cast<std::uint64_t>(frac.den);
    const std::uint64_t cand = factor * den;
    if (is_period(cand)) {
      out.accepted_candidates.push_back(cand);
      return finish(cand);
    }
    out.rejected_candidates.push_back(cand);
    factor = cand;
    out.factors.push_back(den);
    if (factor > bound) {
      factor = 1;
      out.factors.clear();
    }
  }
  throw BudgetExhausted("robust period not verified within budget");
}

HspResult robust_hsp(const OracleInstance& instance, const SolverParams& params) {
  params.validate();
  const GroupSpec spec = instance.domain().finite_spec();
  if (params.multiplicity <= 1) return solve_hsp_general(instance, params);
  if (!prime_power_form(spec)) {
    return solve_by_components(instance, params, robust_hsp);
  }
  const QueryCounts before = instance.queries();
  std::mt19937_64 rng(mix_seed(params.seed, kSpotStream));
  const std::uint64_t m2 = params.multiplicity * params.multiplicity;
  const std::size_t l = spec.rank();
  const std::uint64_t f0 = instance.evaluate(std::vector<std::int64_t>(l, 0));
  HspResult out;

  for (std::size_t round = 0;; ++round) {
    const std::size_t count = round == 0 ? samples_per_round(params, l) : l + 2;
    for (std::size_t i = 0; i < count; ++i) {
      out.samples.push_back(
          draw_character(instance, spec, mix_seed(params.seed, out.samples.size() + 1)));
    }
    out.trials = out.samples.size();
    // Samples are characters trivial on the effective subgroup, so their
    // common kernel contains it. Generators that survive spot checks are
    // relations already pinned down.
    const SubgroupGenerators h = character_kernel(out.samples, spec);
    std::vector<std::vector<std::int64_t>> pinned;
    for (const auto& g : h.gens) {
      if (spot_check(instance, g.coords, params.spot_checks, rng)) {
        pinned.push_back(g.coords);
      }
    }
    const HermiteLattice pinned_lattice(spec.moduli, pinned);
    const std::uint64_t residual = subgroup_order(h) / std::max<std::uint64_t>(
        1, spec.order() / pinned_lattice.index());
    const bool last = round + 1 >= params.trial_budget;
    if (pinned.size() != h.gens.size() && residual > m2 && !last) continue;
    if (residual > kTailCap) {
      throw BudgetExhausted("residual quotient too large for the exhaustive tail");
    }
    if (pinned.size() != h.gens.size()) {
      // Exhaustive tail over the residual quotient h / pinned.
      std::map<std::uint64_t, std::vector<std::int64_t>> reps;
      for (const auto& e : subgroup_enumerate(h)) {
        reps.emplace(pinned_lattice.coset_index(e.coords), e.coords);
      }
      const auto zero_coset = pinned_lattice.coset_index(std::vector<std::int64_t>(l, 0));
      for (const auto& [idx, rep] : reps) {
        if (idx == zero_coset) continue;
        ++out.tail_scan_evaluations;
        if (instance.evaluate(rep) != f0) continue;
        if (spot_check(instance, rep, params.spot_checks, rng)) pinned.push_back(rep);
      }
    }
    SubgroupGenerators k{spec, {}};
    for (auto& g : pinned) k.gens.push_back(make_element(spec, std::move(g)));
    out.k = canonical_subgroup(k);
    out.verified = true;
    const QueryCounts after = instance.queries();
    out.queries = {after.quantum - before.quantum, after.classical - before.classical};
    return out;
  }
}

}  // namespace hsplab
