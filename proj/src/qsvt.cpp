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

#include "fqsvt/qsvt.hpp"

#include <algorithm>
#include <cmath>

namespace fqsvt {

namespace {

constexpr cplx kI(0.0, 1.0);

// M <- M R(phi): scales the first N columns by e^{i phi}, the rest by e^{-i phi}.
void scale_columns(ComplexMatrix& m, std::size_t n, double phi) {
  const cplx a = std::polar(1.0, phi);
  const cplx b = std::conj(a);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] *= (c < n ? a : b);
  }
}

ComplexMatrix scaled_diag(const std::vector<double>& d, cplx s) {
  std::vector<cplx> v(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) v[i] = s * d[i];
  return ComplexMatrix::diagonal(v);
}

}  // namespace

ComplexMatrix assemble_interleaved(const BlockEncoding& enc, const PhaseFactorSet& phi,
                                   Orientation orientation) {
  if (phi.convention() != Convention::kCircuit) {
    throw InvalidInput("assemble_interleaved: phases must use the circuit convention");
  }
  const std::size_t n = enc.encoded_dim();
  ComplexMatrix u = enc.unitary();
  if (orientation == Orientation::kReflectedAdjoint) {
    // Z_a U Z_a: negate the rows and columns outside the encoded block.
    for (std::size_t r = 0; r < u.rows(); ++r) {
      for (std::size_t c = 0; c < u.cols(); ++c) {
        if ((r < n) != (c < n)) u(r, c) = -u(r, c);
      }
    }
  }
  const ComplexMatrix ud = u.adjoint();
  const bool forward = orientation == Orientation::kForward;
  const ComplexMatrix& fwd = forward ? u : ud;
  const ComplexMatrix& inv = forward ? ud : u;
  const int d = phi.degree();

  ComplexMatrix m = ComplexMatrix::identity(enc.dim());
  scale_columns(m, n, phi[0]);
  for (int k = 1; k <= d; ++k) {
    m = m * (((d - k) % 2 == 0) ? fwd : inv);
    scale_columns(m, n, phi[static_cast<std::size_t>(k)]);
  }
  return m;
}

ComplexMatrix assemble_full(const BlockEncoding& enc, const PhaseFactorSet& phi,
                            Orientation orientation) {
  const ComplexMatrix up = assemble_interleaved(enc, phi, orientation);
  const ComplexMatrix um = assemble_interleaved(enc, phi.negated(), orientation);
  const std::size_t dim = enc.dim();
  ComplexMatrix a = up + um;
  a *= 0.5;
  ComplexMatrix b = up - um;
  b *= 0.5;
  ComplexMatrix q(2 * dim, 2 * dim);
  q.set_block(0, 0, a);
  q.set_block(0, dim, b);
  q.set_block(dim, 0, b);
  q.set_block(dim, dim, a);
  return q;
}

QsvtCircuit::QsvtCircuit(BlockEncoding enc, PhaseFactorSet phi, Orientation orientation)
    : enc_(std::move(enc)),
      phi_(std::move(phi)),
      orientation_(orientation),
      matrix_(assemble_full(enc_, phi_, orientation_)) {}

ComplexMatrix BlockTable::full() const {
  const std::size_t n = f_h.rows();
  ComplexMatrix a(2 * n, 2 * n);
  a.set_block(0, 0, f_h);
  a.set_block(0, n, sum_top_right);
  a.set_block(n, 0, sum_bottom_left);
  a.set_block(n, n, sum_bottom_right);
  ComplexMatrix b(2 * n, 2 * n);
  b.set_block(0, 0, i_p_im_h);
  b.set_block(0, n, diff_top_right);
  b.set_block(n, 0, diff_bottom_left);
  b.set_block(n, n, diff_bottom_right);
  ComplexMatrix q(4 * n, 4 * n);
  q.set_block(0, 0, a);
  q.set_block(0, 2 * n, b);
  q.set_block(2 * n, 0, b);
  q.set_block(2 * n, 2 * n, a);
  return q;
}

BlockTable predicted_blocks(const ComplexMatrix& h, const PhaseFactorSet& phi, T2Choice t2) {
  const BlockEncoding enc = dilate_hermitian(h);
  const CsdFactors cs = csd_factors(enc, h);
  const QspPolynomialPair pq = extract_pq(to_su2(phi));
  const int d = phi.degree();

  const ChebyshevSeries p_re = pq.p_re();
  const ChebyshevSeries p_im = pq.p_im();
  const ChebyshevSeries q_re = pq.q_re();
  const ChebyshevSeries q_im = pq.q_im();

  HermitianSpectrum spec;
  spec.values = cs.sigma;
  spec.vectors = cs.v;
  auto sine = [](double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); };
  const ComplexMatrix s_q_im = matfun(spec, [&](double x) { return sine(x) * q_im(x); });
  const ComplexMatrix s_q_re = matfun(spec, [&](double x) { return sine(x) * q_re(x); });

  std::vector<double> f_sigma(cs.dim()), pim_sigma(cs.dim());
  for (std::size_t i = 0; i < cs.dim(); ++i) {
    f_sigma[i] = p_re(cs.sigma[i]);
    pim_sigma[i] = p_im(cs.sigma[i]);
  }

  const bool use_w2 = t2 == T2Choice::kW2 || (t2 == T2Choice::kByParity && d % 2 == 1);
  const ComplexMatrix& t = use_w2 ? cs.w2 : cs.v2;
  const ComplexMatrix vv2 = cs.v * cs.v2.adjoint();
  const ComplexMatrix tv = t * cs.v.adjoint();
  const ComplexMatrix v2d = cs.v2.adjoint();

  BlockTable bt;
  bt.f_h = matfun(spec, [&](double x) { return p_re(x); });
  bt.i_p_im_h = kI * matfun(spec, [&](double x) { return p_im(x); });
  bt.sum_top_right = -1.0 * (s_q_im * vv2);
  bt.sum_bottom_left = tv * s_q_im;
  bt.sum_bottom_right = t * scaled_diag(f_sigma, 1.0) * v2d;
  bt.diff_top_right = kI * (s_q_re * vv2);
  bt.diff_bottom_left = kI * (tv * s_q_re);
  bt.diff_bottom_right = t * scaled_diag(pim_sigma, -kI) * v2d;
  return bt;
}

StateVector embed_system_state(const StateVector& phi, std::size_t ancilla_dim) {
  std::vector<cplx> a(2 * ancilla_dim * phi.dim(), 0.0);
  for (std::size_t i = 0; i < phi.dim(); ++i) a[i] = phi[i];
  return StateVector(std::move(a));
}

StateVector strip_flagged_sector(const StateVector& full, std::size_t system_dim) {
  std::vector<cplx> a(full.amplitudes().begin(), full.amplitudes().end());
  for (std::size_t i = 0; i < system_dim; ++i) a[i] = 0.0;
  return StateVector(std::move(a));
}

StateVector garbage_state(const ComplexMatrix& h, const PhaseFactorSet& phi,
                          const StateVector& input) {
  if (!to_su2(phi).is_symmetric()) {
    throw InvalidInput("garbage_state: phases must be symmetric in the su2 convention "
                       "(use predicted_blocks otherwise)");
  }
  const std::size_t n = h.rows();
  if (input.dim() != n) throw InvalidInput("garbage_state: input has the wrong dimension");
  const BlockTable bt = predicted_blocks(h, phi);
  const auto top = apply(bt.i_p_im_h, input.amplitudes());
  const auto bottom = apply(bt.diff_bottom_left, input.amplitudes());
  std::vector<cplx> a(4 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[2 * n + i] = top[i];
    a[3 * n + i] = bottom[i];
  }
  return StateVector(std::move(a));
}

}  // namespace fqsvt
