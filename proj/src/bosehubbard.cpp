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

#include "fqsvt/bosehubbard.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace fqsvt {

namespace {

constexpr cplx kI(0.0, 1.0);

void check_range(const char* what, double v, std::size_t idx) {
  if (std::abs(v) > kControlLimit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "gmon: " << what << "[" << idx << "] = " << v
       << " rad/us is outside the control range [-2pi*20, 2pi*20] rad/us";
    throw InvalidInput(os.str());
  }
}

// Single-mode operator embedded at `mode`.
ComplexMatrix embed(const GmonModel& m, std::size_t mode, const ComplexMatrix& op) {
  ComplexMatrix out = ComplexMatrix::identity(1);
  for (std::size_t k = 0; k < m.modes; ++k) {
    out = kron(out, k == mode ? op : ComplexMatrix::identity(m.levels()));
  }
  return out;
}

ComplexMatrix lowering(std::size_t levels) {
  ComplexMatrix a(levels, levels);
  for (std::size_t k = 1; k < levels; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

}  // namespace

std::size_t GmonModel::dim() const {
  std::size_t d = 1;
  for (std::size_t k = 0; k < modes; ++k) d *= levels();
  return d;
}

void GmonModel::validate() const {
  if (modes < 1) throw InvalidInput("gmon: need at least one mode");
  if (nmax < 1) throw InvalidInput("gmon: nmax must be >= 1");
  if (!(eta > 0.0)) throw InvalidInput("gmon: eta must be positive");
  if (dim() > 4096) throw InvalidInput("gmon: Fock space too large for dense simulation");
  if (delta.size() != modes || f.size() != modes || phi.size() != modes) {
    throw InvalidInput("gmon: delta, f and phi need one entry per mode");
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].l >= modes || edges[e].j >= modes || edges[e].l == edges[e].j) {
      throw InvalidInput("gmon: edge " + std::to_string(e) + " does not join two distinct modes");
    }
  }
  for (double v : delta) {
    if (!std::isfinite(v)) throw InvalidInput("gmon: non-finite detuning");
  }
  if (!check_ranges) return;
  for (std::size_t e = 0; e < edges.size(); ++e) check_range("g", edges[e].g, e);
  for (std::size_t k = 0; k < modes; ++k) {
    check_range("delta", delta[k], k);
    check_range("f", f[k], k);
    if (phi[k] < 0.0 || phi[k] > 2.0 * kPi) {
      throw InvalidInput("gmon: phi[" + std::to_string(k) + "] outside [0, 2pi]");
    }
  }
}

GmonModel GmonModel::desk_scale() {
  GmonModel m;
  const double c = 2.0 * kPi * 10.0;
  m.edges = {{0, 1, c}};
  m.delta = {c, c};
  m.f = {c, c};
  m.phi = {0.0, 0.0};
  return m;
}

std::vector<int> fock_occupations(const GmonModel& model, std::size_t index) {
  if (index >= model.dim()) throw InvalidInput("fock_occupations: index out of range");
  std::vector<int> occ(model.modes);
  for (std::size_t k = model.modes; k-- > 0;) {
    occ[k] = static_cast<int>(index % model.levels());
    index /= model.levels();
  }
  return occ;
}

std::size_t fock_index(const GmonModel& model, const std::vector<int>& occupations) {
  if (occupations.size() != model.modes) throw InvalidInput("fock_index: wrong number of modes");
  std::size_t idx = 0;
  for (int n : occupations) {
    if (n < 0 || n > model.nmax) throw InvalidInput("fock_index: occupation outside truncation");
    idx = idx * model.levels() + static_cast<std::size_t>(n);
  }
  return idx;
}

ComplexMatrix build_h0(const GmonModel& model) {
  model.validate();
  std::vector<double> diag(model.dim());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double e = 0.0;
    for (int n : fock_occupations(model, i)) e += 0.5 * model.eta * n * (n - 1);
    diag[i] = e;
  }
  return ComplexMatrix::diagonal(diag);
}

ComplexMatrix build_h1(const GmonModel& model) {
  model.validate();
  const ComplexMatrix a = lowering(model.levels());
  const ComplexMatrix ad = a.adjoint();
  ComplexMatrix number(model.levels(), model.levels());
  for (std::size_t k = 0; k < model.levels(); ++k) number(k, k) = static_cast<double>(k);

  ComplexMatrix h(model.dim(), model.dim());
  for (const GmonEdge& e : model.edges) {
    const ComplexMatrix al = embed(model, e.l, a);
    const ComplexMatrix aj = embed(model, e.j, a);
    h += cplx(e.g) * (al.adjoint() * aj + aj.adjoint() * al);
  }
  for (std::size_t k = 0; k < model.modes; ++k) {
    h += cplx(model.delta[k]) * embed(model, k, number);
    const cplx em = std::polar(1.0, -model.phi[k]);
    ComplexMatrix drive = em * a - std::conj(em) * ad;
    h += (kI * model.f[k]) * embed(model, k, drive);
  }
  require_hermitian(h, 1e-12 * std::max(1.0, h.max_abs()));
  return h;
}

GmonModel perturbed(const GmonModel& model, std::uint64_t seed, double sigma) {
  model.validate();
  if (!(sigma >= 0.0)) throw InvalidInput("perturbed: sigma must be non-negative");
  GmonModel out = model;
  out.check_ranges = false;
  CounterRng rng(seed);
  for (GmonEdge& e : out.edges) e.g += sigma * rng.normal();
  for (double& d : out.delta) d += sigma * rng.normal();
  for (double& x : out.f) x += sigma * rng.normal();
  return out;
}

std::vector<std::size_t> BandLabeling::distinct() const {
  std::set<std::size_t> s(label.begin(), label.end());
  return {s.begin(), s.end()};
}

std::vector<std::size_t> BandLabeling::members(std::size_t k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] == k) out.push_back(i);
  }
  return out;
}

BandLabeling band_labels(const GmonModel& model) {
  BandLabeling b;
  b.eta = model.eta;
  b.label.resize(model.dim());
  for (std::size_t i = 0; i < model.dim(); ++i) {
    std::size_t k = 0;
    for (int n : fock_occupations(model, i)) k += static_cast<std::size_t>(n * (n - 1) / 2);
    b.label[i] = k;
  }
  return b;
}

BandOverlap dominant_bands(const BandLabeling& labels, const HermitianSpectrum& spec) {
  if (spec.dim() != labels.label.size()) throw InvalidInput("dominant_bands: dimension mismatch");
  const auto ks = labels.distinct();
  BandOverlap out;
  for (std::size_t c = 0; c < spec.dim(); ++c) {
    std::vector<double> w(ks.size(), 0.0);
    for (std::size_t r = 0; r < spec.dim(); ++r) {
      const auto pos = std::lower_bound(ks.begin(), ks.end(), labels.label[r]) - ks.begin();
      w[static_cast<std::size_t>(pos)] += std::norm(spec.vectors(r, c));
    }
    const auto best = std::max_element(w.begin(), w.end()) - w.begin();
    out.label.push_back(ks[static_cast<std::size_t>(best)]);
    out.weight.push_back(w[static_cast<std::size_t>(best)]);
  }
  return out;
}

std::string grouping_mismatch(const BandLabeling& labels, const BandOverlap& dominant,
                              const BandStructure& bands) {
  const auto ks = labels.distinct();
  std::ostringstream os;
  if (bands.count != ks.size()) {
    os << "detected " << bands.count << " bands, H0 has " << ks.size() << " labels";
    return os.str();
  }
  std::set<std::size_t> seen;
  for (std::size_t b = 0; b < bands.count; ++b) {
    std::set<std::size_t> in_band;
    for (std::size_t i : bands.bands[b]) in_band.insert(dominant.label.at(i));
    if (in_band.size() != 1) {
      os << "band " << b << " mixes " << in_band.size() << " H0 labels";
      return os.str();
    }
    const std::size_t k = *in_band.begin();
    if (!seen.insert(k).second) {
      os << "label " << k << " spans more than one band";
      return os.str();
    }
    if (bands.bands[b].size() != labels.members(k).size()) {
      os << "band " << b << " has " << bands.bands[b].size() << " levels, label " << k << " has "
         << labels.members(k).size();
      return os.str();
    }
  }
  return {};
}

NormalizedHamiltonian normalize_for_qsvt(const ComplexMatrix& h, double margin) {
  if (!(margin > 0.0 && margin < 0.5)) throw InvalidInput("normalize_for_qsvt: margin must lie in (0, 1/2)");
  const auto spec = eigh(h);
  const double lo = spec.values.front();
  const double hi = spec.values.back();
  const double span = hi - lo;
  if (!(span > 1e-12 * std::max(1.0, std::abs(hi)))) {
    throw InvalidInput("normalize_for_qsvt: spectrum is degenerate (E_max = E_min)");
  }
  const double m = margin * span;
  NormalizedHamiltonian out;
  out.map = AffineMap{lo - m, span + 2 * m};
  out.h = h;
  for (std::size_t i = 0; i < h.rows(); ++i) out.h(i, i) -= out.map.offset;
  out.h *= cplx(1.0 / out.map.scale);
  return out;
}

ComplexMatrix qubit_projection(const GmonModel& model, const ComplexMatrix& op) {
  if (op.rows() != model.dim() || op.cols() != model.dim()) {
    throw InvalidInput("qubit_projection: operator does not match the Fock space");
  }
  const std::size_t q = std::size_t{1} << model.modes;
  std::vector<std::size_t> idx(q);
  for (std::size_t b = 0; b < q; ++b) {
    std::vector<int> occ(model.modes);
    for (std::size_t k = 0; k < model.modes; ++k) occ[k] = static_cast<int>((b >> (model.modes - 1 - k)) & 1U);
    idx[b] = fock_index(model, occ);
  }
  ComplexMatrix out(q, q);
  for (std::size_t r = 0; r < q; ++r) {
    for (std::size_t c = 0; c < q; ++c) out(r, c) = op(idx[r], idx[c]);
  }
  return out;
}

ComplexMatrix pauli_form(const GmonModel& model) {
  model.validate();
  const ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}};
  const ComplexMatrix y{{0.0, -kI}, {kI, 0.0}};
  const ComplexMatrix z{{1.0, 0.0}, {0.0, -1.0}};
  const ComplexMatrix id = ComplexMatrix::identity(2);
  auto on = [&](std::size_t mode, const ComplexMatrix& p) {
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (std::size_t k = 0; k < model.modes; ++k) out = kron(out, k == mode ? p : id);
    return out;
  };
  const std::size_t q = std::size_t{1} << model.modes;
  ComplexMatrix h(q, q);
  for (const GmonEdge& e : model.edges) {
    h += cplx(e.g / 2) * (on(e.l, x) * on(e.j, x) + on(e.l, y) * on(e.j, y));
  }
  for (std::size_t k = 0; k < model.modes; ++k) {
    h += cplx(model.delta[k] / 2) * (ComplexMatrix::identity(q) - on(k, z));
    h += cplx(model.f[k] * std::sin(model.phi[k])) * on(k, x);
    h -= cplx(model.f[k] * std::cos(model.phi[k])) * on(k, y);
  }
  return h;
}

}  // namespace fqsvt
