#pragma once

// Fourier transform over Z_N for arbitrary N, the estimator distribution of
// a phase, and control-register sizing.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hsplab/amplitudes.hpp"

namespace hsplab {

// F_N |a> = N^{-1/2} sum_x exp(2 pi i a x / N) |x>, as a dense matrix. The N*N
// entries count against the dimension cap.
DenseUnitary fourier(std::size_t n);
DenseUnitary inverse_fourier(std::size_t n);

// Applies F_N (or its inverse) to one register without forming the matrix:
// radix-2 FFT when N is a power of two, a twiddle-table O(N^2) sum otherwise.
QuantumState apply_fourier(QuantumState s, std::size_t reg, bool inverse = false);

// Distribution of x after F_N^{-1} acting on N^{-1/2} sum_y exp(2 pi i phi y)|y>.
struct EstimatorDistribution {
  std::uint64_t n = 1;
  double phi = 0.0;
  std::vector<double> probs;

  // Outcome minimising the circular distance |x/N - phi|; ties go to the
  // smaller x.
  std::uint64_t closest_outcome() const;
  // Probability that x/N lies within k/N of phi on the unit circle.
  double mass_within(unsigned k) const;
};

EstimatorDistribution estimator_distribution(double phi, std::uint64_t n);

// Distance from x/N to phi on the unit circle.
double circular_distance(std::uint64_t x, std::uint64_t n, double phi);

// Smallest N satisfying N >= M (1/epsilon + 1) / 2, optionally rounded up to a
// power of two.
std::uint64_t choose_register_size(std::uint64_t m, double epsilon,
                                   bool power_of_two = false);
bool register_size_admissible(std::uint64_t n, std::uint64_t m, double epsilon);

}  // namespace hsplab
