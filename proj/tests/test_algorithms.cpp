#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "hsplab/algorithms.hpp"
#include "hsplab/errors.hpp"
#include "hsplab/numtheory.hpp"
#include "test_support.hpp"

using namespace hsplab;
using hsplab::testing::closure;
using hsplab::testing::coords_of;
using hsplab::testing::elements_of;
using hsplab::testing::iterate_order;
using hsplab::testing::slow_pow;

namespace {

SolverParams with_seed(std::uint64_t seed) {
  SolverParams p;
  p.seed = seed;
  return p;
}

std::set<std::vector<std::int64_t>> span(const std::vector<std::uint64_t>& moduli,
                                         std::vector<std::vector<std::int64_t>> gens) {
  return closure(moduli, gens);
}

}  // namespace

TEST(FindOrder, OneHasOrderOne) {
  const auto inst = make_order_instance(15, 1);
  EXPECT_EQ(find_order(inst.oracle, with_seed(3)).r, 1u);
}

TEST(FindOrder, TwoModFifteenWithEightBits) {
  const auto inst = make_order_instance(15, 2);
  auto p = with_seed(1);
  p.control_bits = 8;
  const auto res = find_order(inst.oracle, p);
  EXPECT_EQ(res.r, 4u);
  EXPECT_TRUE(res.verified);
}

TEST(FindOrder, TwoModTwentyOne) {
  const auto inst = make_order_instance(21, 2);
  EXPECT_EQ(find_order(inst.oracle, with_seed(5)).r, 6u);
}

TEST(FindOrder, MatchesIterationProperty) {
  for (std::uint64_t n : {9, 14, 15, 21, 22, 25, 26, 33}) {
    for (std::uint64_t a = 2; a < n; ++a) {
      if (std::gcd(a, n) != 1) continue;
      const auto inst = make_order_instance(n, a);
      const auto res = find_order(inst.oracle, with_seed(n * 100 + a));
      EXPECT_EQ(res.r, iterate_order(a, n)) << a << " mod " << n;
      EXPECT_EQ(slow_pow(a, res.r, n), 1u);
    }
  }
}

TEST(FindOrder, RejectsNonUnit) {
  EXPECT_THROW(make_order_instance(15, 5), InvalidArgument);
}

TEST(Factor, SmallSemiprimes) {
  for (std::uint64_t n : {15, 21, 33, 35}) {
    const auto res = factor_via_order(n, with_seed(n));
    EXPECT_GT(res.factor, 1u);
    EXPECT_LT(res.factor, n);
    EXPECT_EQ(n % res.factor, 0u) << n;
  }
}

TEST(Factor, OrderPathRecordsWitness) {
  const auto res = factor_via_order(15, with_seed(2));
  if (!res.classical_shortcut) {
    EXPECT_EQ(slow_pow(res.witness, res.order, 15), 1u);
    EXPECT_EQ(res.order % 2, 0u);
  }
}

TEST(FindPeriod, ConstantHasPeriodOne) {
  const auto inst = make_period_instance(1, 0);
  auto p = with_seed(1);
  p.period_bound = 8;
  EXPECT_EQ(find_period(inst.oracle, p).r, 1u);
}

TEST(FindPeriod, SixAndFive) {
  for (std::uint64_t r : {6, 5}) {
    const auto inst = make_period_instance(r, 9);
    auto p = with_seed(r);
    p.period_bound = 16;
    EXPECT_EQ(find_period(inst.oracle, p).r, r);
  }
}

TEST(FindPeriod, DoublingFindsWithoutABound) {
  const auto inst = make_period_instance(23, 4);
  auto p = with_seed(8);
  p.doubling = true;
  p.period_bound = 2;
  EXPECT_EQ(find_period(inst.oracle, p).r, 23u);
}

TEST(FindPeriod, FewOracleApplications) {
  for (std::uint64_t r = 2; r <= 40; r += 3) {
    const auto inst = make_period_instance(r, r);
    auto p = with_seed(r);
    p.period_bound = 64;
    const auto res = find_period(inst.oracle, p);
    EXPECT_EQ(res.r, r);
    EXPECT_LE(res.queries.quantum, 20u);
  }
}

TEST(FindPeriod, TinyBudgetExhausts) {
  const auto inst = make_period_instance(60, 1);
  auto p = with_seed(1);
  p.period_bound = 64;
  p.trial_budget = 1;
  p.spot_checks = 1;
  // One sample rarely pins 60 down; either way the answer must be sound.
  try {
    EXPECT_EQ(find_period(inst.oracle, p).r, 60u);
  } catch (const BudgetExhausted&) {
    SUCCEED();
  }
}

TEST(ReduceFinitelyGenerated, ZTimesZ2) {
  const auto inst = make_hidden_subgroup_instance(DomainSpec{{0, 2}}, {{6, 0}}, 3);
  auto p = with_seed(4);
  p.period_bound = 16;
  const auto k = reduce_finitely_generated(inst.oracle, p);
  ASSERT_EQ(k.size(), 2u);
  EXPECT_EQ(k[0], 6u);
  EXPECT_EQ(k[1], 2u);
  const auto q = finite_quotient(inst.oracle, k);
  EXPECT_TRUE(q.domain().is_finite());
  EXPECT_EQ(q.domain().moduli[0], 6u);
}

TEST(SolveHsp, SimonOneZeroOne) {
  const auto inst = make_simon_instance("101", false, 7);
  const auto res = solve_hsp(inst.oracle, with_seed(2));
  EXPECT_EQ(elements_of(res.k), span({2, 2, 2}, {{1, 0, 1}}));
  EXPECT_TRUE(res.verified);
}

TEST(SolveHsp, Z4TimesZ2) {
  const auto inst = make_hidden_subgroup_instance(DomainSpec{{2, 4}}, {{0, 2}, {1, 0}}, 5);
  const auto res = solve_hsp(inst.oracle, with_seed(6));
  EXPECT_EQ(elements_of(res.k), span({2, 4}, {{0, 2}, {1, 0}}));
}

TEST(SolveHspGeneral, CyclicSix) {
  for (const auto& gens : std::vector<std::vector<std::vector<std::int64_t>>>{{}, {{2}}}) {
    const auto inst = make_hidden_subgroup_instance(DomainSpec{{6}}, gens, 11);
    const auto res = solve_hsp_general(inst.oracle, with_seed(1));
    EXPECT_EQ(elements_of(res.k), span({6}, gens));
  }
}

TEST(SolveHspGeneral, CyclicTwelve) {
  const auto inst = make_hidden_subgroup_instance(DomainSpec{{12}}, {{3}}, 2);
  const auto res = solve_hsp_general(inst.oracle, with_seed(9));
  EXPECT_EQ(elements_of(res.k), span({12}, {{3}}));
}

TEST(SolveHspGeneral, RandomSubgroupsProperty) {
  hsplab::testing::Gen g(31);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::uint64_t> moduli;
    const std::size_t rank = 1 + g.below(2);
    for (std::size_t j = 0; j < rank; ++j) moduli.push_back(2 + g.below(9));
    std::vector<std::vector<std::int64_t>> gens;
    const std::size_t count = g.below(3);
    for (std::size_t i = 0; i < count; ++i) gens.push_back(g.element(moduli));
    const auto inst = make_hidden_subgroup_instance(DomainSpec{moduli}, gens, g.raw() | 1);
    const auto res = solve_hsp_general(inst.oracle, with_seed(g.raw()));
    EXPECT_EQ(elements_of(res.k), span(moduli, gens));
  }
}

TEST(SolveHsp, CoordinatesOfResultAreInK) {
  // Soundness: whatever is returned, every generator fixes f.
  const auto inst = make_hidden_subgroup_instance(DomainSpec{{8, 8}}, {{2, 4}}, 13);
  const auto res = solve_hsp(inst.oracle, with_seed(3));
  for (const auto& k : coords_of(res.k)) {
    for (const auto& x : hsplab::testing::all_elements({8, 8})) {
      std::vector<std::int64_t> y = {(x[0] + k[0]) % 8, (x[1] + k[1]) % 8};
      EXPECT_EQ(inst.oracle.evaluate_in_superposition(x),
                inst.oracle.evaluate_in_superposition(y));
    }
  }
}

TEST(SolveDlog, BEqualsOneGivesZero) {
  const auto inst = make_dlog_instance(6, {DlogGroup::Kind::kMultiplicative, 7}, 3, 1);
  const auto res = solve_dlog(inst.oracle, 6, with_seed(1));
  EXPECT_EQ(res.m, 0u);
}

TEST(SolveDlog, ThreeToTheMEqualsFourModSeven) {
  const auto inst = make_dlog_instance(6, {DlogGroup::Kind::kMultiplicative, 7}, 3, 4);
  const auto res = solve_dlog(inst.oracle, 6, with_seed(2));
  EXPECT_EQ(res.m, 4u);
  EXPECT_TRUE(res.verified);
  EXPECT_TRUE(res.target_reused);
  EXPECT_EQ(res.live_control_registers, 1u);
}

TEST(SolveDlog, BEqualsAGivesOne) {
  const auto inst = make_dlog_instance(10, {DlogGroup::Kind::kMultiplicative, 11}, 2, 2);
  EXPECT_EQ(solve_dlog(inst.oracle, 10, with_seed(3)).m, 1u);
}

TEST(SolveDlog, HiddenSubgroupMatchesRelation) {
  // K = {(x, y) : x + m y = 0 mod ord(a)}.
  const auto inst = make_dlog_instance(6, {DlogGroup::Kind::kMultiplicative, 7}, 3, 4);
  EXPECT_EQ(closure({6, 6}, inst.truth.planted), span({6, 6}, {{2, 1}}));
  const auto one = make_dlog_instance(6, {DlogGroup::Kind::kMultiplicative, 7}, 3, 1);
  EXPECT_EQ(closure({6, 6}, one.truth.planted), span({6, 6}, {{0, 1}}));
  const auto same = make_dlog_instance(6, {DlogGroup::Kind::kMultiplicative, 7}, 3, 3);
  EXPECT_EQ(closure({6, 6}, same.truth.planted), span({6, 6}, {{1, -1}}));
}

TEST(SolveDlog, AdditiveGroup) {
  // In Z_12 written additively, 5 m = 3 has m = 3.
  const auto inst = make_dlog_instance(12, {DlogGroup::Kind::kAdditive, 12}, 5, 3);
  EXPECT_EQ(solve_dlog(inst.oracle, 12, with_seed(4)).m * 5 % 12, 3u);
}

TEST(SolveDlog, StageOneIsUniformOverMultiples) {
  // Stage one estimates k / ord(a) with k uniform; ord(3 mod 7) = 6, so the
  // rounded estimate is uniform over [0, 6).
  std::map<std::uint64_t, double> counts;
  std::size_t total = 0;
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    const auto inst = make_dlog_instance(6, {DlogGroup::Kind::kMultiplicative, 7}, 3, 5);
    const auto res = solve_dlog(inst.oracle, 6, with_seed(seed));
    ASSERT_FALSE(res.stage_one.empty());
    const std::uint64_t x = res.stage_one.front().observed;
    const std::uint64_t n = res.control_size;
    counts[(2 * x * 6 + n) / (2 * n) % 6] += 1.0;
    ++total;
  }
  double chi2 = 0.0;
  const double expected = static_cast<double>(total) / 6.0;
  for (std::uint64_t k = 0; k < 6; ++k) {
    chi2 += std::pow(counts[k] - expected, 2) / expected;
  }
  // 5 degrees of freedom; 20.5 is the 0.999 quantile.
  EXPECT_LT(chi2, 20.5);
}

TEST(RobustPeriod, SixTwoToOne) {
  const auto inner = make_period_instance(6, 0);
  const auto inst = wrap_many_to_one(inner, {0, 0, 1, 1, 2, 2}, 2);
  auto p = with_seed(3);
  p.multiplicity = 2;
  p.period_bound = 8;
  EXPECT_EQ(robust_period(inst.oracle, p).r, 6u);
}

TEST(RobustPeriod, TwelveThreeToOneTailBounded) {
  const auto inner = make_period_instance(12, 0);
  const auto inst = wrap_many_to_one(inner, {0, 1, 2, 3, 0, 1, 2, 3, 4, 5, 4, 5}, 3);
  auto p = with_seed(7);
  p.multiplicity = 3;
  p.period_bound = 16;
  const auto res = robust_period(inst.oracle, p);
  EXPECT_EQ(res.r, 12u);
  EXPECT_LE(res.tail_scan_evaluations, 9u);
}

TEST(RobustPeriod, NeverAcceptsAWrongCandidate) {
  hsplab::testing::Gen g(41);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint64_t r = 4 + g.below(20);
    const std::uint64_t m = 2 + g.below(2);
    const auto inner = make_period_instance(r, 0);
    std::vector<std::uint64_t> merge(r);
    for (std::uint64_t i = 0; i < r; ++i) merge[i] = i / m;
    std::shuffle(merge.begin(), merge.end(), g.engine());
    const auto inst = wrap_many_to_one(inner, merge, m);
    const std::uint64_t truth = *inst.truth.effective_period;
    auto p = with_seed(g.raw());
    p.multiplicity = m;
    p.period_bound = 32;
    const auto res = robust_period(inst.oracle, p);
    EXPECT_EQ(res.r, truth);
    for (auto c : res.accepted_candidates) EXPECT_EQ(c % truth, 0u) << c;
  }
}

TEST(RobustHsp, SimonFullyMergedGivesWholeGroup) {
  const auto inner = make_simon_instance("11", false, 0);
  const auto inst = wrap_many_to_one(inner, {0, 0}, 2);
  auto p = with_seed(5);
  p.multiplicity = 2;
  const auto res = robust_hsp(inst.oracle, p);
  EXPECT_EQ(elements_of(res.k).size(), 4u);
}

TEST(RobustHsp, Z8WithTwoToOneMerge) {
  const auto inner = make_hidden_subgroup_instance(DomainSpec{{8}}, {{4}}, 0);
  const auto inst = wrap_many_to_one(inner, {0, 1, 0, 2}, 2);
  auto p = with_seed(2);
  p.multiplicity = 2;
  const auto res = robust_hsp(inst.oracle, p);
  EXPECT_EQ(elements_of(res.k), closure({8}, inst.truth.effective));
  EXPECT_EQ(elements_of(res.k), span({8}, {{4}}));
}

TEST(SolverParams, Validation) {
  SolverParams p;
  p.spot_checks = 0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}
