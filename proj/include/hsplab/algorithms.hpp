#pragma once

// End-to-end solvers: order and period finding, factoring, the Abelian hidden
// subgroup problem, discrete logarithms, and the many-to-one variants.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hsplab/estimation.hpp"
#include "hsplab/groups.hpp"
#include "hsplab/oracles.hpp"

namespace hsplab {

struct SolverParams {
  // Control qubits for period estimation; 0 derives them from period_bound.
  unsigned control_bits = 0;
  // Known upper bound B on the period. 0 derives it from control_bits as the
  // largest B with B^2 < 2^l.
  std::uint64_t period_bound = 0;
  // Guess a small bound and double it after every failed budget.
  bool doubling = false;
  std::size_t trial_budget = 20;
  double epsilon = 0.25;
  std::uint64_t seed = 1;
  // Many-to-one bound m for the robust solvers.
  std::uint64_t multiplicity = 1;
  std::size_t zero_run_threshold = 5;
  std::size_t spot_checks = 10;
  // Character samples per HSP round; 0 means 4 l + 10 for rank l.
  std::size_t hsp_samples = 0;

  void validate() const;
};

struct OrderResult {
  std::uint64_t r = 0;
  std::size_t trials = 0;
  std::vector<PhaseSample> samples;
  bool verified = false;
  QueryCounts queries;
  // Robust mode only.
  std::uint64_t tail_scan_evaluations = 0;
  std::vector<std::uint64_t> accepted_candidates;
  std::vector<std::uint64_t> rejected_candidates;
  std::vector<std::uint64_t> factors;
};

struct HspResult {
  SubgroupGenerators k;
  std::size_t trials = 0;
  std::vector<CharacterSample> samples;
  bool verified = false;
  QueryCounts queries;
  std::uint64_t tail_scan_evaluations = 0;
};

struct DlogResult {
  std::uint64_t m = 0;
  std::uint64_t r = 0;
  std::size_t trials = 0;
  std::size_t zero_retries = 0;
  std::vector<PhaseSample> stage_one;
  std::vector<PhaseSample> stage_two;
  bool verified = false;
  bool target_reused = false;
  std::size_t live_control_registers = 0;
  std::uint64_t control_size = 0;
  QueryCounts queries;
};

struct FactorResult {
  std::uint64_t n = 0;
  std::uint64_t factor = 0;
  std::uint64_t witness = 0;  // the base a that produced the factor
  std::uint64_t order = 0;    // 0 when a classical shortcut found the factor
  std::size_t attempts = 0;
  bool classical_shortcut = false;
};

// Order of a from an instance built by make_order_instance, using the
// controlled multiplication maps.
OrderResult find_order(const OracleInstance& instance, const SolverParams& params);

// Same procedure using only U_f; works for instances that hide their shifts.
OrderResult find_period(const OracleInstance& instance, const SolverParams& params);

FactorResult factor_via_order(std::uint64_t n, const SolverParams& params);

// Period k_j of f along each generator e_j, so that e_j can be treated as
// having order k_j.
std::vector<std::uint64_t> reduce_finitely_generated(const OracleInstance& instance,
                                                     const SolverParams& params);

// f on Z_{k_1} x ... x Z_{k_l} from the periods above.
OracleInstance finite_quotient(const OracleInstance& instance,
                               const std::vector<std::uint64_t>& orders);

// Hidden subgroup of an instance over a prime-power group.
HspResult solve_hsp(const OracleInstance& instance, const SolverParams& params);

// Any finite Abelian domain: split into prime components, solve each, and
// recombine with the Chinese remainder theorem.
HspResult solve_hsp_general(const OracleInstance& instance,
                            const SolverParams& params);

// m with a^m = b for an instance built by make_dlog_instance over Z_r x Z_r.
DlogResult solve_dlog(const OracleInstance& instance, std::uint64_t r,
                      const SolverParams& params);

// Period of an at-most-m-to-one periodic function (params.multiplicity = m).
OrderResult robust_period(const OracleInstance& instance,
                          const SolverParams& params);

// Hidden subgroup of an at-most-m-to-one instance over a prime-power group.
HspResult robust_hsp(const OracleInstance& instance, const SolverParams& params);

}  // namespace hsplab
