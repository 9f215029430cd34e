#include "hsplab/amplitudes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "hsplab/errors.hpp"

namespace hsplab {

namespace {

std::size_t initial_cap() {
  if (const char* env = std::getenv("HSPLAB_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDimensionCap;
}

std::atomic<std::size_t>& cap_storage() {
  static std::atomic<std::size_t> cap{initial_cap()};
  return cap;
}

double squared_norm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& a : v) acc += std::norm(a);
  return acc;
}

void check_register(const RegisterLayout& layout, std::size_t reg) {
  if (reg >= layout.num_registers()) {
    throw InvalidArgument("register index " + std::to_string(reg) +
                          " out of range");
  }
}

}  // namespace

std::size_t dimension_cap() { return cap_storage().load(); }

void set_dimension_cap(std::size_t cap) {
  if (cap == 0) throw InvalidArgument("dimension cap must be positive");
  cap_storage().store(cap);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser over the combined input
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RegisterLayout::RegisterLayout(std::vector<std::size_t> dims,
                               std::vector<std::string> labels,
                               std::size_t cap)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  if (dims_.empty()) throw InvalidArgument("layout needs at least one register");
  if (labels_.empty()) {
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      labels_.push_back("r" + std::to_string(i));
    }
  }
  if (labels_.size() != dims_.size()) {
    throw InvalidArgument("one label per register required");
  }
  total_ = 1;
  for (const auto d : dims_) {
    if (d == 0) throw InvalidArgument("register dimension must be >= 1");
    if (total_ > cap / d) {
      throw DimensionCapExceeded("joint dimension exceeds cap of " +
                                 std::to_string(cap));
    }
    total_ *= d;
  }
  strides_.assign(dims_.size(), 1);
  for (std::size_t i = dims_.size() - 1; i > 0; --i) {
    strides_[i - 1] = strides_[i] * dims_[i];
  }
}

std::size_t RegisterLayout::joint_index(
    std::span<const std::size_t> digits) const {
  if (digits.size() != dims_.size()) {
    throw DimensionMismatch("digit count does not match register count");
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (digits[i] >= dims_[i]) {
      throw InvalidArgument("basis value out of range for register " +
                            labels_[i]);
    }
    idx += digits[i] * strides_[i];
  }
  return idx;
}

RegisterLayout RegisterLayout::concat(const RegisterLayout& other,
                                      std::size_t cap) const {
  auto dims = dims_;
  dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
  auto labels = labels_;
  labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
  return RegisterLayout(std::move(dims), std::move(labels), cap);
}

QuantumState QuantumState::basis(RegisterLayout layout,
                                 std::span<const std::size_t> values) {
  const std::size_t idx = layout.joint_index(values);
  std::vector<Complex> amps(layout.total_dimension());
  amps[idx] = 1.0;
  return QuantumState(std::move(layout), std::move(amps));
}

QuantumState QuantumState::uniform(RegisterLayout layout) {
  const auto n = layout.total_dimension();
  std::vector<Complex> amps(n, Complex(1.0 / std::sqrt(static_cast<double>(n))));
  return QuantumState(std::move(layout), std::move(amps));
}

QuantumState QuantumState::from_amplitudes(RegisterLayout layout,
                                           std::vector<Complex> amps) {
  if (amps.size() != layout.total_dimension()) {
    throw DimensionMismatch("amplitude count does not match layout");
  }
  return QuantumState(std::move(layout), normalized(std::move(amps)));
}

QuantumState QuantumState::from_normalized(RegisterLayout layout,
                                           std::vector<Complex> amps,
                                           double tolerance) {
  if (amps.size() != layout.total_dimension()) {
    throw DimensionMismatch("amplitude count does not match layout");
  }
  const double n = std::sqrt(squared_norm(amps));
  if (std::abs(n - 1.0) > tolerance) {
    throw NotUnitary("state norm drifted to " + std::to_string(n));
  }
  return QuantumState(std::move(layout), std::move(amps));
}

double QuantumState::norm() const { return std::sqrt(squared_norm(amps_)); }

std::vector<Complex> normalized(std::vector<Complex> v) {
  const double n = std::sqrt(squared_norm(v));
  if (n == 0.0) throw InvalidArgument("cannot normalise the zero vector");
  for (auto& a : v) a /= n;
  return v;
}

DenseUnitary DenseUnitary::from_matrix(std::size_t n,
                                       std::vector<Complex> row_major,
                                       double tolerance) {
  if (n == 0 || row_major.size() != n * n) {
    throw DimensionMismatch("dense unitary needs n*n entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += std::conj(row_major[k * n + i]) * row_major[k * n + j];
      }
      const Complex expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(acc - expected) > tolerance) {
        throw NotUnitary("u^dagger u differs from identity at (" +
                         std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  return DenseUnitary(n, std::move(row_major));
}

Permutation Permutation::from_map(std::vector<std::size_t> map) {
  std::vector<bool> seen(map.size(), false);
  for (const auto v : map) {
    if (v >= map.size() || seen[v]) {
      throw InvalidArgument("index map is not a bijection");
    }
    seen[v] = true;
  }
  return Permutation(std::move(map));
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> map(n);
  for (std::size_t i = 0; i < n; ++i) map[i] = i;
  return Permutation(std::move(map));
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  auto layout = a.layout().concat(b.layout());
  std::vector<Complex> amps(layout.total_dimension());
  const auto nb = b.dimension();
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    const Complex ai = a.amplitude(i);
    if (ai == Complex(0.0)) continue;
    for (std::size_t j = 0; j < nb; ++j) {
      amps[i * nb + j] = ai * b.amplitude(j);
    }
  }
  return QuantumState::from_normalized(std::move(layout), std::move(amps));
}

QuantumState transform_register(
    QuantumState s, std::size_t reg,
    const std::function<void(std::span<Complex>)>& op, double tolerance) {
  check_register(s.layout(), reg);
  const auto& layout = s.layout();
  const std::size_t d = layout.dim(reg);
  const std::size_t stride = layout.stride(reg);
  const std::size_t block = stride * d;
  std::vector<Complex> amps(s.amplitudes().begin(), s.amplitudes().end());
  std::vector<Complex> fiber(d);
  for (std::size_t outer = 0; outer < amps.size(); outer += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t base = outer + inner;
      bool nonzero = false;
      for (std::size_t k = 0; k < d; ++k) {
        fiber[k] = amps[base + k * stride];
        nonzero = nonzero || fiber[k] != Complex(0.0);
      }
      if (!nonzero) continue;
      op(fiber);
      for (std::size_t k = 0; k < d; ++k) amps[base + k * stride] = fiber[k];
    }
  }
  return QuantumState::from_normalized(layout, std::move(amps), tolerance);
}

QuantumState apply_on_register(QuantumState s, std::size_t reg,
                               const DenseUnitary& u) {
  check_register(s.layout(), reg);
  if (u.size() != s.layout().dim(reg)) {
    throw DimensionMismatch("unitary size does not match register dimension");
  }
  const std::size_t d = u.size();
  std::vector<Complex> out(d);
  return transform_register(std::move(s), reg, [&](std::span<Complex> f) {
    for (std::size_t r = 0; r < d; ++r) {
      Complex acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) acc += u(r, c) * f[c];
      out[r] = acc;
    }
    std::copy(out.begin(), out.end(), f.begin());
  });
}

QuantumState apply_on_register(QuantumState s, std::size_t reg,
                               const Permutation& p) {
  check_register(s.layout(), reg);
  if (p.size() != s.layout().dim(reg)) {
    throw DimensionMismatch("permutation size does not match register dimension");
  }
  std::vector<Complex> out(p.size());
  return transform_register(std::move(s), reg, [&](std::span<Complex> f) {
    for (std::size_t i = 0; i < f.size(); ++i) out[p(i)] = f[i];
    std::copy(out.begin(), out.end(), f.begin());
  });
}

QuantumState apply_basis_permutation(QuantumState s,
                                     std::span<const std::size_t> joint_map) {
  const std::size_t n = s.dimension();
  if (joint_map.size() != n) {
    throw DimensionMismatch("joint map size does not match state dimension");
  }
  std::vector<Complex> out(n);
  std::vector<bool> hit(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = joint_map[i];
    if (j >= n || hit[j]) throw InvalidArgument("joint map is not a bijection");
    hit[j] = true;
    out[j] = s.amplitude(i);
  }
  return QuantumState::from_normalized(s.layout(), std::move(out));
}

std::vector<double> marginal_distribution(const QuantumState& s,
                                          std::size_t reg) {
  check_register(s.layout(), reg);
  const auto& layout = s.layout();
  std::vector<double> probs(layout.dim(reg), 0.0);
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    probs[layout.digit(i, reg)] += std::norm(s.amplitude(i));
  }
  return probs;
}

std::pair<MeasurementRecord, QuantumState> measure_register(
    const QuantumState& s, std::size_t reg, std::uint64_t seed) {
  const auto probs = marginal_distribution(s, reg);
  double total = 0.0;
  for (const double p : probs) total += p;
  if (total <= 0.0) throw Error("measurement on a zero-norm marginal");

  std::mt19937_64 rng(seed);
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  std::size_t outcome = probs.size() - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc && probs[k] > 0.0) {
      outcome = k;
      break;
    }
  }
  while (probs[outcome] == 0.0 && outcome > 0) --outcome;

  const auto& layout = s.layout();
  const double scale = 1.0 / std::sqrt(probs[outcome]);
  std::vector<Complex> amps(s.dimension());
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    if (layout.digit(i, reg) == outcome) amps[i] = s.amplitude(i) * scale;
  }
  MeasurementRecord record{reg, outcome, probs[outcome] / total, seed};
  return {record, QuantumState::from_normalized(layout, std::move(amps))};
}

QuantumState remove_register(const QuantumState& s, std::size_t reg,
                             double tolerance) {
  check_register(s.layout(), reg);
  const auto& layout = s.layout();
  if (layout.num_registers() < 2) {
    throw InvalidArgument("cannot remove the only register");
  }
  const auto probs = marginal_distribution(s, reg);
  const auto it = std::max_element(probs.begin(), probs.end());
  if (*it < 1.0 - tolerance) {
    throw InvalidArgument("register is not in a computational basis state");
  }
  const std::size_t value = static_cast<std::size_t>(it - probs.begin());

  std::vector<std::size_t> dims;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < layout.num_registers(); ++i) {
    if (i == reg) continue;
    dims.push_back(layout.dim(i));
    labels.push_back(layout.label(i));
  }
  RegisterLayout reduced(std::move(dims), std::move(labels));
  std::vector<Complex> amps;
  amps.reserve(reduced.total_dimension());
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    if (layout.digit(i, reg) == value) amps.push_back(s.amplitude(i));
  }
  return QuantumState::from_amplitudes(std::move(reduced), std::move(amps));
}

Complex inner_product(const QuantumState& a, const QuantumState& b) {
  if (!(a.layout() == b.layout())) {
    throw DimensionMismatch("inner product of states with different layouts");
  }
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    acc += std::conj(a.amplitude(i)) * b.amplitude(i);
  }
  return acc;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  return std::norm(inner_product(a, b));
}

double l2_distance(const QuantumState& a, const QuantumState& b) {
  if (!(a.layout() == b.layout())) {
    throw DimensionMismatch("l2 distance of states with different layouts");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    acc += std::norm(a.amplitude(i) - b.amplitude(i));
  }
  return std::sqrt(acc);
}

}  // namespace hsplab
