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

// Unitary block encodings of Hermitian matrices and the cosine-sine factors
// of the symmetric dilation.

#include <vector>

#include "fqsvt/numkernel.hpp"

namespace fqsvt {

class BlockEncoding {
 public:
  /// Validates size N * 2^m and unitarity to 1e-10.
  BlockEncoding(ComplexMatrix unitary, unsigned m, double alpha, std::size_t n);

  const ComplexMatrix& unitary() const { return unitary_; }
  unsigned m() const { return m_; }
  std::size_t ancilla_dim() const { return std::size_t{1} << m_; }
  double alpha() const { return alpha_; }
  std::size_t encoded_dim() const { return n_; }
  std::size_t dim() const { return unitary_.rows(); }

 private:
  ComplexMatrix unitary_;
  unsigned m_;
  double alpha_;
  std::size_t n_;
};

/// [[H, sqrt(I - H^2)], [sqrt(I - H^2), -H]] with m = 1, alpha = 1.
/// Requires 0 <= H <= I (eigenvalues checked with slack 1e-12).
BlockEncoding dilate_hermitian(const ComplexMatrix& h);

/// alpha times the top-left N x N block.
ComplexMatrix encoded_block(const BlockEncoding& enc);

/// max |encoded_block(enc) - H|.
double encoding_residual(const BlockEncoding& enc, const ComplexMatrix& h);

/// U = diag(V, W2) [[Sigma, S], [-S, Sigma]] diag(V^dagger, V2^dagger), with
/// W1 = V1 = V for PSD H.
struct CsdFactors {
  ComplexMatrix v;
  std::vector<double> sigma;  // ascending eigenvalues of H
  std::vector<double> s;      // sqrt(1 - sigma^2)
  ComplexMatrix w2;
  ComplexMatrix v2;
  /// False when S is too close to singular for V2 and W2 to be determined;
  /// the symmetric-dilation completion is used and only reassembly holds.
  bool canonical = true;

  std::size_t dim() const { return sigma.size(); }
};

/// Derives V2 and W2 from the off-diagonal blocks of an m = 1 encoding:
/// V2^dagger = S^{-1} V^dagger B and W2 = -C V S^{-1}.
CsdFactors csd_factors(const BlockEncoding& enc, const ComplexMatrix& h);

/// The 2N x 2N middle factor [[Sigma, S], [-S, Sigma]].
ComplexMatrix csd_middle(const CsdFactors& f);

/// diag(V, W2) * middle * diag(V^dagger, V2^dagger).
ComplexMatrix csd_reassemble(const CsdFactors& f);

}  // namespace fqsvt
