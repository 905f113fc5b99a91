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

// Energy bands of a spectrum in [0, 1]: thresholds, projectors and the
// exact dephasing channel rho -> sum_j P_j rho P_j.

#include <vector>

#include "fqsvt/numkernel.hpp"

namespace fqsvt {

struct BandStructure {
  std::size_t count = 1;         // L
  std::vector<double> centers;   // mu_0 < ... < mu_{L-2}
  double delta = 0.0;            // minimal gap width
  std::vector<std::vector<std::size_t>> bands;  // eigenvalue indices per band

  /// Band of a single energy by the threshold rules
  /// B_0 = {E < mu_0}, B_j = {mu_{j-1} <= E < mu_j}, B_{L-1} = {E >= mu_{L-2}}.
  std::size_t band_of(double energy) const;
};

/// Bands from given centers and gap width, assigning each value by the
/// threshold rules. Throws InvalidInput if the centers are not ascending in
/// (0, 1) or delta <= 0; the gap assumption is checked separately.
BandStructure bands_from_centers(const std::vector<double>& values,
                                 const std::vector<double>& centers, double delta);

/// Throws InvalidInput naming the first eigenvalue inside an open window
/// (mu_j - delta/2, mu_j + delta/2).
void check_band_assumption(const std::vector<double>& values, const BandStructure& bands);

/// Gaps between consecutive values of width >= min_gap become thresholds at
/// their midpoints; delta is the narrowest selected gap. No qualifying gap
/// gives a single band.
BandStructure detect_bands(const std::vector<double>& values, double min_gap);

/// The L - 1 widest gaps (ties resolved toward lower energy).
BandStructure detect_bands_count(const std::vector<double>& values, std::size_t count);

/// `levels` eigenvalues split as evenly as possible over `count` bands with
/// thresholds b / count and gap width `gap`: band b occupies
/// [b / count + gap / 2, (b + 1) / count - gap / 2] and its levels sit at
/// the midpoints of equal slices of that interval. Requires
/// 0 < gap < 1 / count and levels >= count.
struct SyntheticBands {
  std::vector<double> values;
  BandStructure bands;
};
SyntheticBands synthetic_bands(std::size_t levels, std::size_t count, double gap);

/// P_j = sum_{i in B_j} |v_i><v_i|.
std::vector<ComplexMatrix> exact_projectors(const HermitianSpectrum& spec,
                                            const BandStructure& bands);

/// Validates rho as a density matrix: Hermitian, trace 1 to 1e-10 and
/// eigenvalues >= -1e-10.
void require_density_matrix(const ComplexMatrix& rho);

ComplexMatrix exact_channel(const ComplexMatrix& rho, const std::vector<ComplexMatrix>& projectors);

/// |psi><psi|
ComplexMatrix density(const StateVector& psi);
ComplexMatrix density(std::span<const cplx> psi);

}  // namespace fqsvt
