#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hsplab/amplitudes.hpp"
#include "hsplab/errors.hpp"
#include "hsplab/qft.hpp"
#include "test_support.hpp"

using namespace hsplab;
using hsplab::testing::Gen;

namespace {

QuantumState ket(std::vector<std::size_t> dims, std::vector<std::size_t> values) {
  return QuantumState::basis(RegisterLayout(std::move(dims)), values);
}

QuantumState from(std::vector<std::size_t> dims, std::vector<Complex> amps) {
  return QuantumState::from_amplitudes(RegisterLayout(std::move(dims)), std::move(amps));
}

}  // namespace

TEST(Layout, StridesAndDigits) {
  RegisterLayout l({3, 4, 2});
  EXPECT_EQ(l.total_dimension(), 24u);
  EXPECT_EQ(l.stride(0), 8u);
  EXPECT_EQ(l.stride(2), 1u);
  const std::size_t digits[3] = {2, 1, 1};
  const auto i = l.joint_index(digits);
  EXPECT_EQ(i, 2u * 8 + 1 * 2 + 1);
  EXPECT_EQ(l.digit(i, 0), 2u);
  EXPECT_EQ(l.digit(i, 1), 1u);
}

TEST(Layout, RejectsBadDimensions) {
  EXPECT_THROW(RegisterLayout(std::vector<std::size_t>{}), InvalidArgument);
  EXPECT_THROW(RegisterLayout({2, 0}), InvalidArgument);
  EXPECT_THROW(RegisterLayout({1024, 1024}, {}, 1000), DimensionCapExceeded);
}

TEST(Layout, CapCanBeLowered) {
  const auto saved = dimension_cap();
  set_dimension_cap(16);
  EXPECT_THROW(RegisterLayout({4, 8}), DimensionCapExceeded);
  EXPECT_NO_THROW(RegisterLayout({4, 4}));
  set_dimension_cap(saved);
}

TEST(Tensor, ZeroTimesZero) {
  const auto s = tensor(ket({2}, {0}), ket({2}, {0}));
  EXPECT_EQ(s.dimension(), 4u);
  EXPECT_NEAR(std::abs(s.amplitude(0) - Complex(1.0)), 0.0, 1e-15);
}

TEST(Tensor, UniformTimesUniform) {
  const auto s = tensor(QuantumState::uniform(RegisterLayout({2})),
                        QuantumState::uniform(RegisterLayout({2})));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s.amplitude(i).real(), 0.5, 1e-15);
}

TEST(Tensor, PlusTimesOneOfThree) {
  const auto plus = from({2}, {1.0, 1.0});
  const auto s = tensor(plus, ket({3}, {1}));
  const double h = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < 6; ++i) {
    const double expected = (i == 1 || i == 4) ? h : 0.0;
    EXPECT_NEAR(std::abs(s.amplitude(i)), expected, 1e-15) << i;
  }
}

TEST(Tensor, AssociativeProperty) {
  Gen g(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t da = 1 + g.below(4), db = 1 + g.below(4), dc = 1 + g.below(4);
    const auto a = from({da}, g.amplitudes(da));
    const auto b = from({db}, g.amplitudes(db));
    const auto c = from({dc}, g.amplitudes(dc));
    const auto left = tensor(tensor(a, b), c);
    const auto right = tensor(a, tensor(b, c));
    EXPECT_LT(l2_distance(left, right), 1e-12);
  }
}

TEST(ApplyOnRegister, IdentityLeavesStateAlone) {
  Gen g(3);
  const auto s = from({3, 2}, g.amplitudes(6));
  const auto t = apply_on_register(s, 0, Permutation::identity(3));
  EXPECT_LT(l2_distance(s, t), 1e-15);
}

TEST(ApplyOnRegister, IncrementModThree) {
  const auto s = apply_on_register(ket({3}, {0}), 0, Permutation::from_map({1, 2, 0}));
  EXPECT_NEAR(std::abs(s.amplitude(1)), 1.0, 1e-15);
}

TEST(ApplyOnRegister, HadamardOnZero) {
  const auto s = apply_on_register(ket({2}, {0}), 0, fourier(2));
  EXPECT_NEAR(s.amplitude(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.amplitude(1).real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(ApplyOnRegister, ActsOnTheChosenFactorOnly) {
  // X on the second qubit of |0>|0> gives |0>|1>.
  const auto s = apply_on_register(ket({2, 2}, {0, 0}), 1, Permutation::from_map({1, 0}));
  EXPECT_NEAR(std::abs(s.amplitude(1)), 1.0, 1e-15);
}

TEST(ApplyOnRegister, RejectsNonUnitaryAndWrongSize) {
  EXPECT_THROW(DenseUnitary::from_matrix(2, {1.0, 1.0, 0.0, 1.0}), NotUnitary);
  EXPECT_THROW(Permutation::from_map({0, 0}), InvalidArgument);
  EXPECT_THROW(apply_on_register(ket({3}, {0}), 0, fourier(2)), DimensionMismatch);
}

TEST(ApplyOnRegister, NormPreservedProperty) {
  Gen g(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::size_t> dims;
    const std::size_t regs = 1 + g.below(3);
    std::size_t total = 1;
    for (std::size_t r = 0; r < regs; ++r) {
      dims.push_back(1 + g.below(5));
      total *= dims.back();
    }
    auto s = from(dims, g.amplitudes(total));
    for (int step = 0; step < 20; ++step) {
      const std::size_t reg = g.below(regs);
      const std::size_t d = dims[reg];
      if (g.below(2) == 0) {
        s = apply_on_register(std::move(s), reg, fourier(d));
      } else {
        std::vector<std::size_t> map(d);
        for (std::size_t i = 0; i < d; ++i) map[i] = i;
        std::shuffle(map.begin(), map.end(), g.engine());
        s = apply_on_register(std::move(s), reg, Permutation::from_map(map));
      }
    }
    EXPECT_LT(std::fabs(s.norm() - 1.0), 1e-9);
  }
}

TEST(Measure, BasisStateIsCertain) {
  const auto [rec, post] = measure_register(ket({8}, {5}), 0, 1);
  EXPECT_EQ(rec.outcome, 5u);
  EXPECT_DOUBLE_EQ(rec.probability, 1.0);
  EXPECT_NEAR(std::abs(post.amplitude(5)), 1.0, 1e-15);
}

TEST(Measure, UniformFourHasQuarterProbability) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [rec, post] = measure_register(QuantumState::uniform(RegisterLayout({4})), 0, seed);
    EXPECT_NEAR(rec.probability, 0.25, 1e-12);
    EXPECT_EQ(rec.seed, seed);
  }
}

TEST(Measure, ProbabilityMatchesPreCollapseMass) {
  Gen g(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = from({3, 4}, g.amplitudes(12));
    const std::size_t reg = g.below(2);
    const auto [rec, post] = measure_register(s, reg, g.raw());
    double mass = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
      if (s.layout().digit(i, reg) == rec.outcome) mass += std::norm(s.amplitude(i));
    }
    EXPECT_NEAR(rec.probability, mass, 1e-12);
    EXPECT_NEAR(post.norm(), 1.0, 1e-12);
    for (std::size_t i = 0; i < 12; ++i) {
      if (post.layout().digit(i, reg) != rec.outcome) {
        EXPECT_EQ(post.amplitude(i), Complex(0.0));
      }
    }
  }
}

TEST(Measure, EmpiricalFrequenciesMatchMarginal) {
  Gen g(23);
  const auto s = from({2, 5}, g.amplitudes(10));
  const auto law = marginal_distribution(s, 1);
  std::vector<double> freq(5, 0.0);
  const int shots = 100000;
  for (int i = 0; i < shots; ++i) {
    freq[measure_register(s, 1, static_cast<std::uint64_t>(i)).first.outcome] += 1.0 / shots;
  }
  EXPECT_LT(hsplab::testing::total_variation(law, freq), 0.02);
}

TEST(Measure, SameSeedSameOutcome) {
  const auto s = QuantumState::uniform(RegisterLayout({16}));
  EXPECT_EQ(measure_register(s, 0, 42).first.outcome, measure_register(s, 0, 42).first.outcome);
}

TEST(RemoveRegister, DropsMeasuredRegister) {
  const auto s = tensor(from({2}, {1.0, 1.0}), ket({3}, {2}));
  const auto r = remove_register(s, 1);
  EXPECT_EQ(r.dimension(), 2u);
  EXPECT_THROW(remove_register(s, 0), InvalidArgument);
}

TEST(Distance, Examples) {
  const auto zero = ket({2}, {0});
  const auto one = ket({2}, {1});
  const auto plus = QuantumState::uniform(RegisterLayout({2}));
  EXPECT_NEAR(l2_distance(plus, plus), 0.0, 1e-15);
  EXPECT_NEAR(l2_distance(zero, one), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(l2_distance(plus, zero), std::sqrt(2.0 - std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(l2_distance(plus, zero), 0.7654, 1e-4);
  EXPECT_NEAR(fidelity(plus, zero), 0.5, 1e-15);
}

TEST(Amplitudes, ZeroVectorRejected) {
  EXPECT_THROW(from({2}, {0.0, 0.0}), InvalidArgument);
  EXPECT_THROW(QuantumState::from_normalized(RegisterLayout({2}), {1.0, 1.0}), NotUnitary);
}

TEST(BasisPermutation, MustBeBijective) {
  const auto s = ket({4}, {1});
  const std::size_t good[4] = {3, 2, 1, 0};
  EXPECT_NEAR(std::abs(apply_basis_permutation(s, good).amplitude(2)), 1.0, 1e-15);
  const std::size_t bad[4] = {0, 0, 1, 2};
  EXPECT_THROW(apply_basis_permutation(s, bad), InvalidArgument);
}

TEST(MixSeed, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(mix_seed(7, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(mix_seed(7, 3), mix_seed(7, 3));
}
