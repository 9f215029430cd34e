#include "hsplab/estimation.hpp"

#include <cmath>
#include <numbers>

#include "hsplab/errors.hpp"
#include "hsplab/groups.hpp"
#include "hsplab/numtheory.hpp"
#include "hsplab/qft.hpp"

namespace hsplab {

namespace {

Fraction reduced(std::int64_t num, std::int64_t den) {
  const auto g = static_cast<std::int64_t>(gcd_u64(
      static_cast<std::uint64_t>(num < 0 ? -num : num),
      static_cast<std::uint64_t>(den)));
  return g == 0 ? Fraction{0, 1} : Fraction{num / g, den / g};
}

double as_double(const Fraction& f) {
  return static_cast<double>(f.num) / static_cast<double>(f.den);
}

Complex unit_phase(double turns) {
  const double a = 2.0 * std::numbers::pi * turns;
  return {std::cos(a), std::sin(a)};
}

QuantumState starting_target(const OracleInstance& instance,
                             const std::optional<QuantumState>& initial,
                             bool use_image_of_zero) {
  const std::uint64_t x = instance.codomain_size();
  if (initial) {
    if (initial->layout().num_registers() != 1 ||
        initial->layout().dim(0) != x) {
      throw DimensionMismatch("initial target must be one register of size |X|");
    }
    return *initial;
  }
  if (use_image_of_zero) return image_of_zero(instance);
  const std::size_t zero[1] = {0};
  return QuantumState::basis(RegisterLayout({static_cast<std::size_t>(x)}), zero);
}

// Control register of size n in |0>, tensored with the target, after F_N and
// the controlled map, followed by F_N^{-1}.
QuantumState estimation_state(const OracleInstance& instance,
                              std::size_t generator, std::uint64_t n,
                              const std::optional<QuantumState>& initial,
                              std::int64_t control_stride) {
  if (n == 0) throw InvalidArgument("control register size must be >= 1");
  if (generator >= instance.domain().rank()) {
    throw InvalidArgument("generator out of range");
  }
  const bool shift = instance.shift_available();
  if (!shift && control_stride != 1) {
    throw ShiftUnavailable("strided control needs shift maps");
  }
  QuantumState target = starting_target(instance, initial, shift);
  const std::size_t zero[1] = {0};
  const std::size_t total = static_cast<std::size_t>(n) * target.dimension();
  if (n > dimension_cap() || total / n != target.dimension() ||
      total > dimension_cap()) {
    throw DimensionCapExceeded("estimation state exceeds dimension cap");
  }
  QuantumState s = tensor(
      QuantumState::basis(RegisterLayout({static_cast<std::size_t>(n)}), zero),
      target);
  s = apply_fourier(std::move(s), 0);
  if (shift) {
    s = apply_shift(std::move(s), 0, 1, instance, generator, control_stride);
  } else {
    s = apply_oracle_along(std::move(s), 0, 1, instance, generator);
  }
  return apply_fourier(std::move(s), 0, true);
}

}  // namespace

PhaseSample make_phase_sample(std::uint64_t observed, std::uint64_t n,
                              std::uint64_t seed) {
  if (n == 0 || observed >= n) throw InvalidArgument("sample must satisfy 0 <= x < N");
  return PhaseSample{observed, n,
                     reduced(static_cast<std::int64_t>(observed),
                             static_cast<std::int64_t>(n)),
                     seed};
}

EigenbasisDecomposition eigenbasis_decompose(const OracleInstance& instance,
                                             const GroundTruth& truth) {
  const std::uint64_t codomain = instance.codomain_size();
  EigenbasisDecomposition out{codomain, {}};
  const auto& domain = truth.domain;

  if (domain.rank() == 1 && domain.moduli[0] == 0) {
    if (!truth.period) throw InvalidArgument("period instance without a period");
    const std::uint64_t r = *truth.period;
    std::vector<std::uint64_t> values(r);
    for (std::uint64_t t = 0; t < r; ++t) {
      const std::int64_t p[1] = {static_cast<std::int64_t>(t)};
      values[t] = instance.evaluate_in_superposition(p);
    }
    const auto ri = static_cast<std::int64_t>(r);
    for (std::int64_t k = 0; k < ri; ++k) {
      Eigenvector v{{k}, std::vector<Complex>(codomain), {reduced(k, ri)}};
      for (std::int64_t t = 0; t < ri; ++t) {
        v.amplitudes[values[t]] +=
            unit_phase(-static_cast<double>((k * t) % ri) / static_cast<double>(ri)) /
            static_cast<double>(r);
      }
      out.vectors.push_back(std::move(v));
    }
    return out;
  }

  if (!domain.is_finite()) {
    throw InvalidArgument("eigenbasis needs a finite domain or the domain Z");
  }
  const GroupSpec spec = domain.finite_spec();
  const HermiteLattice lattice(domain.moduli, truth.planted);
  const std::uint64_t n = lattice.index();
  std::vector<std::vector<std::int64_t>> reps(n);
  std::vector<std::uint64_t> values(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    reps[i] = lattice.coset_representative(i);
    values[i] = instance.evaluate_in_superposition(reps[i]);
  }
  for (const auto& t : character_group(truth.planted_subgroup())) {
    Eigenvector v{t, std::vector<Complex>(codomain), {}};
    for (std::size_t j = 0; j < spec.rank(); ++j) {
      v.phases.push_back(reduced(t[j], static_cast<std::int64_t>(spec.moduli[j])));
    }
    for (std::uint64_t i = 0; i < n; ++i) {
      double turns = 0.0;
      for (std::size_t j = 0; j < spec.rank(); ++j) {
        const auto d = static_cast<std::int64_t>(spec.moduli[j]);
        turns += static_cast<double>(mod_floor(reps[i][j] * t[j], d)) /
                 static_cast<double>(d);
      }
      v.amplitudes[values[i]] += unit_phase(-turns) / static_cast<double>(n);
    }
    out.vectors.push_back(std::move(v));
  }
  return out;
}

double verify_main_equality(const OracleInstance& instance,
                            const GroundTruth& truth,
                            const std::vector<std::size_t>& control_sizes) {
  const std::size_t rank = instance.domain().rank();
  if (control_sizes.size() != rank) {
    throw DimensionMismatch("one control size per generator is required");
  }
  const auto codomain = static_cast<std::size_t>(instance.codomain_size());
  std::vector<std::size_t> dims = control_sizes;
  dims.push_back(codomain);
  RegisterLayout layout(dims);

  std::vector<std::size_t> zeros(dims.size(), 0);
  QuantumState lhs = QuantumState::basis(layout, zeros);
  std::vector<std::size_t> controls(rank);
  for (std::size_t j = 0; j < rank; ++j) {
    controls[j] = j;
    lhs = apply_fourier(std::move(lhs), j);
  }
  lhs = apply_oracle(std::move(lhs), controls, rank, instance);

  const auto decomp = eigenbasis_decompose(instance, truth);
  std::size_t num_controls = 1;
  for (auto d : control_sizes) num_controls *= d;
  const double norm = 1.0 / std::sqrt(static_cast<double>(num_controls));
  std::vector<Complex> rhs(layout.total_dimension());
  std::vector<double> phase(rank);
  for (const auto& v : decomp.vectors) {
    for (std::size_t j = 0; j < rank; ++j) phase[j] = as_double(v.phases[j]);
    for (std::size_t c = 0; c < num_controls; ++c) {
      double turns = 0.0;
      for (std::size_t j = 0; j < rank; ++j) {
        const std::size_t xj = layout.digit(c * codomain, j);
        turns += static_cast<double>(xj) * phase[j];
      }
      turns -= std::floor(turns);
      const Complex w = unit_phase(turns) * norm;
      for (std::size_t y = 0; y < codomain; ++y) {
        if (v.amplitudes[y] != Complex(0.0)) rhs[c * codomain + y] += w * v.amplitudes[y];
      }
    }
  }
  double acc = 0.0;
  const auto amps = lhs.amplitudes();
  for (std::size_t i = 0; i < rhs.size(); ++i) acc += std::norm(amps[i] - rhs[i]);
  return std::sqrt(acc);
}

RegisterRun run_register_estimation(const OracleInstance& instance,
                                    std::size_t generator, std::uint64_t n,
                                    std::uint64_t seed,
                                    const std::optional<QuantumState>& initial_target,
                                    std::int64_t control_stride) {
  QuantumState s =
      estimation_state(instance, generator, n, initial_target, control_stride);
  auto [record, collapsed] = measure_register(s, 0, seed);
  return RegisterRun{make_phase_sample(record.outcome, n, seed),
                     remove_register(collapsed, 0)};
}

PhaseSample phase_estimate_register(const OracleInstance& instance,
                                    std::size_t generator, std::uint64_t n,
                                    std::uint64_t seed) {
  return run_register_estimation(instance, generator, n, seed).sample;
}

std::vector<std::size_t> sample_control_registers(
    const OracleInstance& instance, const std::vector<std::size_t>& sizes,
    std::uint64_t seed) {
  const std::size_t rank = instance.domain().rank();
  if (sizes.size() != rank) {
    throw DimensionMismatch("one control register per generator is required");
  }
  const auto codomain = static_cast<std::size_t>(instance.codomain_size());
  std::vector<std::size_t> dims = sizes;
  dims.push_back(codomain);
  RegisterLayout layout(dims);
  std::vector<std::size_t> controls(rank);
  for (std::size_t j = 0; j < rank; ++j) controls[j] = j;

  // F|0> on every control is the uniform superposition.
  const std::size_t zero[1] = {0};
  QuantumState s = tensor(QuantumState::uniform(RegisterLayout(sizes)),
                          QuantumState::basis(RegisterLayout({codomain}), zero));
  s = apply_oracle(std::move(s), controls, rank, instance);
  auto [target_record, collapsed] = measure_register(s, rank, mix_seed(seed, 0));
  s = remove_register(collapsed, rank);
  for (std::size_t j = 0; j < rank; ++j) s = apply_fourier(std::move(s), j, true);
  std::vector<std::size_t> out(rank);
  for (std::size_t j = 0; j < rank; ++j) {
    auto [record, next] = measure_register(s, j, mix_seed(seed, j + 1));
    out[j] = record.outcome;
    s = std::move(next);
  }
  return out;
}

std::vector<double> register_outcome_distribution(
    const OracleInstance& instance, std::size_t generator, std::uint64_t n,
    const std::optional<QuantumState>& initial_target) {
  return marginal_distribution(
      estimation_state(instance, generator, n, initial_target, 1), 0);
}

std::vector<double> eigenphase_mixture(const EigenbasisDecomposition& decomp,
                                       std::size_t generator, std::uint64_t n) {
  std::vector<double> out(n, 0.0);
  for (const auto& v : decomp.vectors) {
    double w = 0.0;
    for (const auto& a : v.amplitudes) w += std::norm(a);
    if (w == 0.0) continue;
    const auto& ph = v.phases.at(generator);
    const auto dist = estimator_distribution(as_double(ph), n);
    for (std::uint64_t x = 0; x < n; ++x) out[x] += w * dist.probs[x];
  }
  return out;
}

namespace {

double correction_angle(const std::vector<int>& bits) {
  // -2 pi * 0.y_{j-1} ... y_0 in binary, i.e. the phase contributed by the
  // already measured low bits at step j.
  const std::size_t j = bits.size();
  double turns = 0.0;
  for (std::size_t i = 0; i < j; ++i) {
    if (bits[i]) turns += std::ldexp(1.0, static_cast<int>(i) - static_cast<int>(j) - 1);
  }
  return -2.0 * std::numbers::pi * turns;
}

}  // namespace

SemiclassicalTranscript phase_estimate_semiclassical(
    const OracleInstance& instance, std::size_t generator, unsigned n_bits,
    std::uint64_t seed, const std::optional<QuantumState>& initial_target) {
  if (!instance.shift_available()) {
    throw ShiftUnavailable("semi-classical estimation needs shift maps");
  }
  if (n_bits == 0 || n_bits > 62) throw InvalidArgument("n_bits must be in [1, 62]");
  QuantumState target = starting_target(instance, initial_target, true);
  SemiclassicalTranscript out;
  out.seed = seed;
  std::vector<int> bits;
  const std::size_t zero[1] = {0};
  for (unsigned j = 0; j < n_bits; ++j) {
    const unsigned power = n_bits - 1 - j;
    QuantumState control = apply_fourier(
        QuantumState::basis(RegisterLayout({2}), zero), 0);
    QuantumState s = tensor(control, target);
    out.peak_dimension = std::max(out.peak_dimension, s.dimension());
    s = apply_shift(std::move(s), 0, 1, instance, generator,
                    std::int64_t{1} << power);
    const double angle = correction_angle(bits);
    const Complex rot(std::cos(angle), std::sin(angle));
    s = transform_register(std::move(s), 0,
                           [&](std::span<Complex> f) { f[1] *= rot; });
    s = apply_fourier(std::move(s), 0);
    auto [record, collapsed] = measure_register(s, 0, mix_seed(seed, j));
    const int bit = static_cast<int>(record.outcome);
    out.steps.push_back(SemiclassicalStep{power, angle, bit});
    bits.push_back(bit);
    if (bit) out.x |= std::uint64_t{1} << j;
    target = remove_register(collapsed, 0);
  }
  return out;
}

std::vector<double> semiclassical_outcome_distribution(
    const OracleInstance& instance, std::size_t generator, unsigned n_bits,
    const std::optional<QuantumState>& initial_target) {
  if (!instance.shift_available()) {
    throw ShiftUnavailable("semi-classical estimation needs shift maps");
  }
  if (n_bits == 0 || n_bits > 24) throw InvalidArgument("n_bits must be in [1, 24]");
  const QuantumState target = starting_target(instance, initial_target, true);
  const std::size_t dim = target.dimension();
  const std::uint64_t codomain = instance.codomain_size();
  // perm[power][y]: label reached from y under U_{f(2^power e_j)}
  std::vector<std::vector<std::size_t>> perm(n_bits, std::vector<std::size_t>(dim));
  for (unsigned p = 0; p < n_bits; ++p) {
    for (std::size_t y = 0; y < dim; ++y) {
      perm[p][y] = y < codomain
                       ? static_cast<std::size_t>(instance.shift(
                             generator, std::int64_t{1} << p, y))
                       : y;
    }
  }
  std::vector<double> out(std::size_t{1} << n_bits, 0.0);
  std::vector<int> bits;
  // Unnormalised branch vectors: after step j with bit b the target becomes
  // (v + (-1)^b e^{i theta} U v) / 2 and its squared norm is the probability.
  auto recurse = [&](auto&& self, const std::vector<Complex>& v,
                     std::uint64_t x) -> void {
    const std::size_t j = bits.size();
    if (j == n_bits) {
      double w = 0.0;
      for (const auto& a : v) w += std::norm(a);
      out[x] += w;
      return;
    }
    const unsigned power = n_bits - 1 - static_cast<unsigned>(j);
    std::vector<Complex> uv(dim);
    for (std::size_t y = 0; y < dim; ++y) uv[perm[power][y]] += v[y];
    const double angle = correction_angle(bits);
    const Complex rot(std::cos(angle), std::sin(angle));
    for (int b = 0; b < 2; ++b) {
      std::vector<Complex> next(dim);
      double w = 0.0;
      for (std::size_t y = 0; y < dim; ++y) {
        next[y] = 0.5 * (v[y] + (b ? -1.0 : 1.0) * rot * uv[y]);
        w += std::norm(next[y]);
      }
      if (w < 1e-30) continue;
      bits.push_back(b);
      self(self, next, b ? x | (std::uint64_t{1} << j) : x);
      bits.pop_back();
    }
  };
  const auto amps = target.amplitudes();
  recurse(recurse, std::vector<Complex>(amps.begin(), amps.end()), 0);
  return out;
}

QuantumState image_of_zero(const OracleInstance& instance) {
  const std::vector<std::int64_t> origin(instance.domain().rank(), 0);
  const std::size_t label[1] = {static_cast<std::size_t>(instance.evaluate(origin))};
  return QuantumState::basis(
      RegisterLayout({static_cast<std::size_t>(instance.codomain_size())}), label);
}

QuantumState target_from_amplitudes(std::uint64_t codomain,
                                     std::vector<Complex> amplitudes) {
  if (amplitudes.size() != codomain) {
    throw DimensionMismatch("target amplitudes must cover the codomain");
  }
  return QuantumState::from_amplitudes(
      RegisterLayout({static_cast<std::size_t>(codomain)}), std::move(amplitudes));
}

QuantumState keep_target_after_measurement(const RegisterRun& run) {
  return run.target;
}

double eigenstate_fidelity(const QuantumState& target, const Eigenvector& psi) {
  if (target.dimension() != psi.amplitudes.size()) {
    throw DimensionMismatch("eigenvector and target sizes differ");
  }
  const auto unit = normalized(psi.amplitudes);
  Complex acc = 0.0;
  const auto amps = target.amplitudes();
  for (std::size_t i = 0; i < unit.size(); ++i) acc += std::conj(unit[i]) * amps[i];
  return std::norm(acc);
}

}  // namespace hsplab
