#pragma once

// Phase estimation with a control register or with a single recycled control
// qubit, and the eigenvector tools used to check both.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hsplab/amplitudes.hpp"
#include "hsplab/oracles.hpp"
#include "hsplab/postprocess.hpp"

namespace hsplab {

struct PhaseSample {
  std::uint64_t observed = 0;
  std::uint64_t n = 1;
  Fraction estimate;  // observed / n in lowest terms
  std::uint64_t seed = 0;
};

PhaseSample make_phase_sample(std::uint64_t observed, std::uint64_t n,
                              std::uint64_t seed);

// One eigenvector of every shift map U_{f(x e_j)}, given over the target basis
// [0, |X|). `label` is k for period instances and the character t otherwise;
// U_{f(x e_j)} Psi = exp(2 pi i x phases[j]) Psi.
struct Eigenvector {
  std::vector<std::int64_t> label;
  std::vector<Complex> amplitudes;
  std::vector<Fraction> phases;
};

// Vectors are scaled so that they sum to |f(0)>; with a one-to-one f they are
// orthogonal and |Psi|^2 is the probability of that eigenvalue.
struct EigenbasisDecomposition {
  std::uint64_t codomain = 1;
  std::vector<Eigenvector> vectors;
};

// Test-side tool; reads the planted subgroup. Supports finite domains and the
// rank-one domain Z with a known period.
EigenbasisDecomposition eigenbasis_decompose(const OracleInstance& instance,
                                             const GroundTruth& truth);

// L2 distance between sum_x |x>|f(x)> built with apply_oracle and the same
// state assembled from the eigenvectors. `control_sizes` has one entry per
// domain generator.
double verify_main_equality(const OracleInstance& instance,
                            const GroundTruth& truth,
                            const std::vector<std::size_t>& control_sizes);

struct RegisterRun {
  PhaseSample sample;
  QuantumState target;  // collapsed target after the control was measured
};

// Uses the controlled shift on |f(0)> when the instance exposes it, otherwise
// the oracle map on |0>. `initial_target` (a single register of dimension
// |X|) replaces the default starting target. The shift path may stride the
// control, applying U_{f(stride * x e_j)}.
RegisterRun run_register_estimation(
    const OracleInstance& instance, std::size_t generator, std::uint64_t n,
    std::uint64_t seed,
    const std::optional<QuantumState>& initial_target = std::nullopt,
    std::int64_t control_stride = 1);

PhaseSample phase_estimate_register(const OracleInstance& instance,
                                    std::size_t generator, std::uint64_t n,
                                    std::uint64_t seed);

// One run of F on each control, U_f, F^{-1} on each control, then measurement
// of the controls. The target is measured straight after U_f; it is never
// acted on again, so the control statistics are unchanged while F^{-1} runs on
// the much smaller control-only state. Returns the control outcomes.
std::vector<std::size_t> sample_control_registers(
    const OracleInstance& instance, const std::vector<std::size_t>& sizes,
    std::uint64_t seed);

// Exact distribution of the measured control value, read off the simulated
// state before measurement.
std::vector<double> register_outcome_distribution(
    const OracleInstance& instance, std::size_t generator, std::uint64_t n,
    const std::optional<QuantumState>& initial_target = std::nullopt);

// sum_k weight_k * estimator_distribution(phase_k, n).
std::vector<double> eigenphase_mixture(const EigenbasisDecomposition& decomp,
                                       std::size_t generator, std::uint64_t n);

struct SemiclassicalStep {
  unsigned power = 0;  // the control qubit drives U^{2^power}
  double angle = 0.0;  // rotation applied to |1> before the Hadamard
  int bit = 0;
};

// Steps run from the highest power down. The first measured bit is the least
// significant bit of x, so x = sum_j steps[j].bit * 2^j.
struct SemiclassicalTranscript {
  std::vector<SemiclassicalStep> steps;
  std::uint64_t x = 0;
  std::size_t peak_dimension = 0;
  std::uint64_t seed = 0;
};

SemiclassicalTranscript phase_estimate_semiclassical(
    const OracleInstance& instance, std::size_t generator, unsigned n_bits,
    std::uint64_t seed,
    const std::optional<QuantumState>& initial_target = std::nullopt);

// Exact distribution of x from the branch tree of measurement outcomes.
std::vector<double> semiclassical_outcome_distribution(
    const OracleInstance& instance, std::size_t generator, unsigned n_bits,
    const std::optional<QuantumState>& initial_target = std::nullopt);

// |f(0)> as a one-register state of dimension |X|; costs one classical query.
QuantumState image_of_zero(const OracleInstance& instance);

QuantumState target_from_amplitudes(std::uint64_t codomain,
                                     std::vector<Complex> amplitudes);

QuantumState keep_target_after_measurement(const RegisterRun& run);

// |<Psi/|Psi|, target>|^2.
double eigenstate_fidelity(const QuantumState& target, const Eigenvector& psi);

}  // namespace hsplab
