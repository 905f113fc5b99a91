// Copyright 2026 The fqsvt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Truncated Fock-space model of coupled anharmonic modes (gmon layout):
// H = H0 + H1 with H0 = (eta/2) sum n_j (n_j - 1) and H1 the static
// controls. Frequencies are angular, in rad/us (2 pi x MHz).

#include <cstdint>
#include <string>
#include <vector>

#include "fqsvt/bands.hpp"
#include "fqsvt/numkernel.hpp"

namespace fqsvt {

/// Largest allowed |g|, |delta|, |f|: 2 pi x 20 MHz.
inline constexpr double kControlLimit = 2.0 * kPi * 20.0;
/// Standard deviation of injected control noise: 2 pi x 1 MHz.
inline constexpr double kControlNoise = 2.0 * kPi * 1.0;

struct GmonEdge {
  std::size_t l = 0;
  std::size_t j = 1;
  double g = 0.0;
};

struct GmonModel {
  std::size_t modes = 2;
  int nmax = 3;  // Fock truncation per mode
  double eta = 2.0 * kPi * 200.0;
  std::vector<GmonEdge> edges;
  std::vector<double> delta;
  std::vector<double> f;
  std::vector<double> phi;
  bool check_ranges = true;

  std::size_t levels() const { return static_cast<std::size_t>(nmax) + 1; }
  std::size_t dim() const;

  /// Throws InvalidInput on inconsistent sizes, bad edges, or (when
  /// check_ranges is set) a control outside [-kControlLimit, kControlLimit].
  void validate() const;

  /// Two modes, n_max = 3, eta = 2 pi 200, every control at 2 pi 10.
  static GmonModel desk_scale();
};

/// Occupations (n_0, ..., n_{modes-1}) of a Fock index; mode 0 is the most
/// significant digit in base n_max + 1.
std::vector<int> fock_occupations(const GmonModel& model, std::size_t index);
std::size_t fock_index(const GmonModel& model, const std::vector<int>& occupations);

ComplexMatrix build_h0(const GmonModel& model);

/// sum_edges g (a_l^dag a_j + a_j^dag a_l) + sum_j delta_j n_j
///   + i f_j (a_j e^{-i phi_j} - a_j^dag e^{i phi_j}).
ComplexMatrix build_h1(const GmonModel& model);

/// Copy with independent Gaussian noise of width `sigma` on every g, delta
/// and f. The nominal model is validated; the noisy copy has range checks
/// disabled since noise may carry a control past the limit.
GmonModel perturbed(const GmonModel& model, std::uint64_t seed, double sigma = kControlNoise);

struct BandLabeling {
  std::vector<std::size_t> label;  // per Fock index: sum_j n_j (n_j - 1) / 2
  double eta = 0.0;

  double energy(std::size_t k) const { return static_cast<double>(k) * eta; }
  /// Distinct labels in ascending order.
  std::vector<std::size_t> distinct() const;
  /// Fock indices carrying label k, ascending.
  std::vector<std::size_t> members(std::size_t k) const;
};

BandLabeling band_labels(const GmonModel& model);

/// Weight of each eigenvector (columns of spec.vectors) on its dominant H0
/// band, and that band's label.
struct BandOverlap {
  std::vector<std::size_t> label;
  std::vector<double> weight;
};
BandOverlap dominant_bands(const BandLabeling& labels, const HermitianSpectrum& spec);

/// Empty when each detected band holds eigenvectors of exactly one H0
/// label, no label spans two bands, and band sizes equal label
/// multiplicities; otherwise a description of the first mismatch.
std::string grouping_mismatch(const BandLabeling& labels, const BandOverlap& dominant,
                              const BandStructure& bands);

/// x = (E - offset) / scale
struct AffineMap {
  double offset = 0.0;
  double scale = 1.0;

  double forward(double e) const { return (e - offset) / scale; }
  double inverse(double x) const { return x * scale + offset; }
};

struct NormalizedHamiltonian {
  ComplexMatrix h;
  AffineMap map;
};

/// H' = (H - (E_min - m) I) / (E_max - E_min + 2 m), m = margin (E_max - E_min),
/// so spec(H') lies in [margin / (1 + 2 margin), 1 - margin / (1 + 2 margin)].
/// margin must lie in (0, 1/2); a degenerate spectrum is rejected.
NormalizedHamiltonian normalize_for_qsvt(const ComplexMatrix& h, double margin);

/// Restriction of an operator to the qubit subspace (every n_j <= 1), in the
/// qubit basis with mode 0 most significant.
ComplexMatrix qubit_projection(const GmonModel& model, const ComplexMatrix& op);

/// The same restriction of H1 written with Paulis (Z|0> = |0>):
/// sum_edges (g/2)(X_l X_j + Y_l Y_j)
///   + sum_j [ (delta_j/2)(I - Z_j) + f_j (sin phi_j X_j - cos phi_j Y_j) ].
ComplexMatrix pauli_form(const GmonModel& model);

}  // namespace fqsvt
