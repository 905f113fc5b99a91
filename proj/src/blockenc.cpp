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

#include "fqsvt/blockenc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fqsvt {

BlockEncoding::BlockEncoding(ComplexMatrix unitary, unsigned m, double alpha, std::size_t n)
    : unitary_(std::move(unitary)), m_(m), alpha_(alpha), n_(n) {
  if (m_ > 16) throw InvalidInput("BlockEncoding: too many ancilla qubits");
  if (!(alpha_ > 0.0)) throw InvalidInput("BlockEncoding: alpha must be positive");
  if (n_ == 0 || !unitary_.is_square() || unitary_.rows() != n_ * ancilla_dim()) {
    std::ostringstream os;
    os << "BlockEncoding: unitary is " << unitary_.rows() << "x" << unitary_.cols()
       << ", expected " << n_ * ancilla_dim() << " square (N=" << n_ << ", m=" << m_ << ")";
    throw InvalidInput(os.str());
  }
  if (!unitary_.all_finite()) throw InvalidInput("BlockEncoding: non-finite entry");
  const double r = unitarity_residual(unitary_);
  if (r > 1e-10) {
    throw InvalidInput("BlockEncoding: unitarity residual " + std::to_string(r) + " > 1e-10");
  }
}

namespace {

HermitianSpectrum checked_psd_spectrum(const ComplexMatrix& h) {
  HermitianSpectrum spec = eigh(h);
  for (double e : spec.values) {
    if (e < -1e-12 || e > 1.0 + 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "dilate_hermitian: eigenvalue " << e << " lies outside [0, 1]";
      throw InvalidInput(os.str());
    }
  }
  return spec;
}

double unit_sine(double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); }

}  // namespace

BlockEncoding dilate_hermitian(const ComplexMatrix& h) {
  const HermitianSpectrum spec = checked_psd_spectrum(h);
  const ComplexMatrix s = matfun(spec, unit_sine);
  const std::size_t n = h.rows();
  ComplexMatrix u(2 * n, 2 * n);
  u.set_block(0, 0, h);
  u.set_block(0, n, s);
  u.set_block(n, 0, s);
  u.set_block(n, n, -1.0 * h);
  return BlockEncoding(std::move(u), 1, 1.0, n);
}

ComplexMatrix encoded_block(const BlockEncoding& enc) {
  const std::size_t n = enc.encoded_dim();
  return enc.unitary().block(0, 0, n, n) * cplx(enc.alpha());
}

double encoding_residual(const BlockEncoding& enc, const ComplexMatrix& h) {
  return max_abs_diff(encoded_block(enc), h);
}

CsdFactors csd_factors(const BlockEncoding& enc, const ComplexMatrix& h) {
  if (enc.m() != 1) throw InvalidInput("csd_factors: only m = 1 encodings are supported");
  const std::size_t n = enc.encoded_dim();
  if (h.rows() != n || !h.is_square()) throw InvalidInput("csd_factors: H has the wrong size");
  const double block_err = encoding_residual(enc, h);
  if (block_err > 1e-10) {
    throw InvalidInput("csd_factors: encoding does not encode H (residual " +
                       std::to_string(block_err) + ")");
  }
  const HermitianSpectrum spec = checked_psd_spectrum(h);
  CsdFactors f;
  f.v = spec.vectors;
  f.sigma = spec.values;
  f.s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    f.sigma[i] = std::clamp(f.sigma[i], 0.0, 1.0);
    f.s[i] = unit_sine(f.sigma[i]);
  }

  double smin = 1.0;
  for (double v : f.s) smin = std::min(smin, v);
  // Eigenvalues within 1e-6 of 1 give s below ~1.4e-3.
  if (smin < std::sqrt(2e-6)) {
    f.canonical = false;
    f.v2 = f.v;
    f.w2 = -1.0 * f.v;
    return f;
  }
  const ComplexMatrix& u = enc.unitary();
  const ComplexMatrix b = u.block(0, n, n, n);
  const ComplexMatrix c = u.block(n, 0, n, n);
  std::vector<double> sinv(n);
  for (std::size_t i = 0; i < n; ++i) sinv[i] = 1.0 / f.s[i];
  const ComplexMatrix d = ComplexMatrix::diagonal(sinv);
  f.v2 = (d * f.v.adjoint() * b).adjoint();
  f.w2 = -1.0 * (c * f.v * d);
  return f;
}

ComplexMatrix csd_middle(const CsdFactors& f) {
  const std::size_t n = f.dim();
  ComplexMatrix m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = f.sigma[i];
    m(n + i, n + i) = f.sigma[i];
    m(i, n + i) = f.s[i];
    m(n + i, i) = -f.s[i];
  }
  return m;
}

ComplexMatrix csd_reassemble(const CsdFactors& f) {
  const std::size_t n = f.dim();
  ComplexMatrix left(2 * n, 2 * n);
  left.set_block(0, 0, f.v);
  left.set_block(n, n, f.w2);
  ComplexMatrix right(2 * n, 2 * n);
  right.set_block(0, 0, f.v.adjoint());
  right.set_block(n, n, f.v2.adjoint());
  return left * csd_middle(f) * right;
}

}  // namespace fqsvt
