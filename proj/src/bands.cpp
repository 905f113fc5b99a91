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

#include "fqsvt/bands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fqsvt {

std::size_t BandStructure::band_of(double energy) const {
  return static_cast<std::size_t>(std::upper_bound(centers.begin(), centers.end(), energy) -
                                  centers.begin());
}

namespace {

void require_ascending(const std::vector<double>& values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[i - 1]) throw InvalidInput("bands: values must be ascending");
  }
}

void assign(BandStructure& b, const std::vector<double>& values) {
  b.count = b.centers.size() + 1;
  b.bands.assign(b.count, {});
  for (std::size_t i = 0; i < values.size(); ++i) b.bands[b.band_of(values[i])].push_back(i);
}

BandStructure from_gaps(const std::vector<double>& values, std::vector<std::size_t> gaps) {
  std::sort(gaps.begin(), gaps.end());
  BandStructure b;
  b.delta = 0.0;
  for (std::size_t g : gaps) {
    const double w = values[g + 1] - values[g];
    b.centers.push_back(0.5 * (values[g] + values[g + 1]));
    b.delta = b.centers.size() == 1 ? w : std::min(b.delta, w);
  }
  assign(b, values);
  return b;
}

}  // namespace

BandStructure bands_from_centers(const std::vector<double>& values,
                                 const std::vector<double>& centers, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("bands: delta must be positive");
  for (std::size_t j = 0; j < centers.size(); ++j) {
    if (!(centers[j] > 0.0 && centers[j] < 1.0)) throw InvalidInput("bands: centers must lie in (0, 1)");
    if (j > 0 && !(centers[j] > centers[j - 1])) throw InvalidInput("bands: centers must be ascending");
  }
  BandStructure b;
  b.centers = centers;
  b.delta = delta;
  assign(b, values);
  return b;
}

void check_band_assumption(const std::vector<double>& values, const BandStructure& bands) {
  for (std::size_t j = 0; j < bands.centers.size(); ++j) {
    const double mu = bands.centers[j];
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (std::abs(values[i] - mu) < bands.delta / 2 - 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "band assumption violated: eigenvalue " << i << " = " << values[i]
           << " lies inside the gap (" << mu - bands.delta / 2 << ", " << mu + bands.delta / 2
           << ") around center " << j << " = " << mu;
        throw InvalidInput(os.str());
      }
    }
  }
}

BandStructure detect_bands(const std::vector<double>& values, double min_gap) {
  require_ascending(values);
  if (!(min_gap > 0.0)) throw InvalidInput("detect_bands: min_gap must be positive");
  std::vector<std::size_t> gaps;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (values[i + 1] - values[i] >= min_gap) gaps.push_back(i);
  }
  return from_gaps(values, gaps);
}

BandStructure detect_bands_count(const std::vector<double>& values, std::size_t count) {
  require_ascending(values);
  if (count == 0 || count > values.size()) {
    throw InvalidInput("detect_bands_count: need 1 <= L <= number of values");
  }
  std::vector<std::size_t> idx(values.size() > 0 ? values.size() - 1 : 0);
  std::iota(idx.begin(), idx.end(), 0);
  // Widths are compared on a 1e-12 lattice so that rounding cannot break ties.
  auto key = [&](std::size_t i) { return std::llround((values[i + 1] - values[i]) * 1e12); };
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) > key(b); });
  idx.resize(count - 1);
  return from_gaps(values, idx);
}

SyntheticBands synthetic_bands(std::size_t levels, std::size_t count, double gap) {
  if (count < 1 || levels < count) throw InvalidInput("synthetic_bands: need levels >= count >= 1");
  const double pitch = 1.0 / static_cast<double>(count);
  if (!(gap > 0.0 && gap < pitch)) {
    throw InvalidInput("synthetic_bands: gap must lie in (0, 1 / count)");
  }
  SyntheticBands out;
  std::vector<std::size_t> per(count, 0);
  for (std::size_t i = 0; i < levels; ++i) ++per[i * count / levels];
  const double width = pitch - gap;
  for (std::size_t b = 0; b < count; ++b) {
    const double lo = static_cast<double>(b) * pitch + gap / 2;
    for (std::size_t r = 0; r < per[b]; ++r) {
      out.values.push_back(lo + width * (static_cast<double>(r) + 0.5) / static_cast<double>(per[b]));
    }
  }
  std::vector<double> centers;
  for (std::size_t b = 1; b < count; ++b) centers.push_back(static_cast<double>(b) * pitch);
  out.bands = bands_from_centers(out.values, centers, gap);
  return out;
}

std::vector<ComplexMatrix> exact_projectors(const HermitianSpectrum& spec,
                                            const BandStructure& bands) {
  const std::size_t n = spec.dim();
  std::vector<ComplexMatrix> out;
  for (const auto& members : bands.bands) {
    ComplexMatrix p(n, n);
    for (std::size_t i : members) {
      if (i >= n) throw InvalidInput("exact_projectors: band index out of range");
      for (std::size_t r = 0; r < n; ++r) {
        const cplx vr = spec.vectors(r, i);
        for (std::size_t c = 0; c < n; ++c) p(r, c) += vr * std::conj(spec.vectors(c, i));
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

void require_density_matrix(const ComplexMatrix& rho) {
  require_hermitian(rho, 1e-10);
  const cplx tr = rho.trace();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw InvalidInput("density matrix: trace " + std::to_string(tr.real()) + " != 1");
  }
  const auto spec = eigh(rho);
  if (spec.values.front() < -1e-10) {
    throw InvalidInput("density matrix: negative eigenvalue " + std::to_string(spec.values.front()));
  }
}

ComplexMatrix exact_channel(const ComplexMatrix& rho, const std::vector<ComplexMatrix>& projectors) {
  require_density_matrix(rho);
  ComplexMatrix out(rho.rows(), rho.cols());
  for (const auto& p : projectors) {
    if (p.rows() != rho.rows()) throw InvalidInput("exact_channel: dimension mismatch");
    out += p * rho * p;
  }
  return out;
}

ComplexMatrix density(std::span<const cplx> psi) {
  const std::size_t n = psi.size();
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) r(i, j) = psi[i] * std::conj(psi[j]);
  }
  return r;
}

ComplexMatrix density(const StateVector& psi) { return density(psi.amplitudes()); }

}  // namespace fqsvt
