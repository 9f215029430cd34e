#pragma once

// Dense state vectors over a tensor product of registers of arbitrary
// dimension. Register 0 is the leftmost (most significant) tensor factor.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hsplab {

using Complex = std::complex<double>;

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 22;

// Current cap on joint state dimension. Starts at kDefaultDimensionCap, or at
// the value of the HSPLAB_CAP environment variable when that is set.
std::size_t dimension_cap();
void set_dimension_cap(std::size_t cap);

class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<std::size_t> dims,
                          std::vector<std::string> labels = {},
                          std::size_t cap = dimension_cap());

  std::size_t num_registers() const { return dims_.size(); }
  std::size_t dim(std::size_t reg) const { return dims_.at(reg); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::string& label(std::size_t reg) const { return labels_.at(reg); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t total_dimension() const { return total_; }
  std::size_t stride(std::size_t reg) const { return strides_.at(reg); }

  std::size_t digit(std::size_t joint_index, std::size_t reg) const {
    return (joint_index / strides_[reg]) % dims_[reg];
  }
  std::size_t joint_index(std::span<const std::size_t> digits) const;

  RegisterLayout concat(const RegisterLayout& other,
                        std::size_t cap = dimension_cap()) const;

  bool operator==(const RegisterLayout& other) const {
    return dims_ == other.dims_;
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

// Normalised pure state. Every public operation returns a state whose L2 norm
// is within kDefaultTolerance of 1.
class QuantumState {
 public:
  static QuantumState basis(RegisterLayout layout,
                            std::span<const std::size_t> values);
  static QuantumState uniform(RegisterLayout layout);
  // Normalises the given amplitudes; throws InvalidArgument on a zero vector.
  static QuantumState from_amplitudes(RegisterLayout layout,
                                      std::vector<Complex> amps);
  // Takes amplitudes that are already normalised; throws NotUnitary if the
  // norm is off by more than `tolerance`.
  static QuantumState from_normalized(RegisterLayout layout,
                                      std::vector<Complex> amps,
                                      double tolerance = kDefaultTolerance);

  const RegisterLayout& layout() const { return layout_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  const Complex& amplitude(std::size_t joint_index) const {
    return amps_.at(joint_index);
  }
  std::size_t dimension() const { return amps_.size(); }
  double norm() const;

 private:
  QuantumState(RegisterLayout layout, std::vector<Complex> amps)
      : layout_(std::move(layout)), amps_(std::move(amps)) {}

  RegisterLayout layout_;
  std::vector<Complex> amps_;
};

// Square unitary stored densely in row-major order. Construction verifies
// u^dagger u = I to the given tolerance.
class DenseUnitary {
 public:
  static DenseUnitary from_matrix(std::size_t n, std::vector<Complex> row_major,
                                  double tolerance = kDefaultTolerance);

  std::size_t size() const { return n_; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return m_[row * n_ + col];
  }
  std::span<const Complex> data() const { return m_; }

 private:
  DenseUnitary(std::size_t n, std::vector<Complex> m)
      : n_(n), m_(std::move(m)) {}
  std::size_t n_;
  std::vector<Complex> m_;
};

// Basis permutation |i> -> |map[i]>. Stored as an index map, never densely.
class Permutation {
 public:
  static Permutation from_map(std::vector<std::size_t> map);
  static Permutation identity(std::size_t n);

  std::size_t size() const { return map_.size(); }
  std::size_t operator()(std::size_t i) const { return map_[i]; }
  std::span<const std::size_t> map() const { return map_; }

 private:
  explicit Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {}
  std::vector<std::size_t> map_;
};

struct MeasurementRecord {
  std::size_t register_index = 0;
  std::size_t outcome = 0;
  double probability = 0.0;
  std::uint64_t seed = 0;
};

QuantumState tensor(const QuantumState& a, const QuantumState& b);

QuantumState apply_on_register(QuantumState s, std::size_t reg,
                               const DenseUnitary& u);
QuantumState apply_on_register(QuantumState s, std::size_t reg,
                               const Permutation& p);

// Runs `op` in place on every one-register fiber (the amplitudes obtained by
// fixing all other registers). The caller promises `op` is unitary; the norm
// is re-checked against `tolerance` on return.
QuantumState transform_register(QuantumState s, std::size_t reg,
                                const std::function<void(std::span<Complex>)>& op,
                                double tolerance = kDefaultTolerance);

// Permutes joint basis states: amplitude at i moves to joint_map[i]. Throws
// InvalidArgument if joint_map is not a bijection.
QuantumState apply_basis_permutation(QuantumState s,
                                     std::span<const std::size_t> joint_map);

std::vector<double> marginal_distribution(const QuantumState& s,
                                          std::size_t reg);

std::pair<MeasurementRecord, QuantumState> measure_register(
    const QuantumState& s, std::size_t reg, std::uint64_t seed);

// Drops a register that is in a computational basis state, e.g. after it was
// measured. Throws InvalidArgument if the register is still in superposition.
QuantumState remove_register(const QuantumState& s, std::size_t reg,
                             double tolerance = kDefaultTolerance);

Complex inner_product(const QuantumState& a, const QuantumState& b);
double fidelity(const QuantumState& a, const QuantumState& b);
double l2_distance(const QuantumState& a, const QuantumState& b);

// Normalised amplitudes of an unnormalised vector; used at pipeline boundaries.
std::vector<Complex> normalized(std::vector<Complex> v);

// 64-bit mixing used to derive independent sub-seeds from one master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace hsplab
