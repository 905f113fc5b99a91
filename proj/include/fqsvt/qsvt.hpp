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

// Dense assembly of the QSVT circuit and its closed-form block structure.
//
// Basis ordering of the full register is (monitor, encoding ancilla, system)
// with the system index fastest: index = monitor * N M + ancilla * N + system.

#include "fqsvt/blockenc.hpp"
#include "fqsvt/qsp.hpp"

namespace fqsvt {

/// Which unitary plays the role of the block encoding inside the
/// interleaved product: U_H, U_H^dagger, or Z_a U_H^dagger Z_a where Z_a
/// negates the sector outside the encoded block (ancilla not all zero).
enum class Orientation { kForward, kAdjoint, kReflectedAdjoint };

/// R(phi_0) U^{e_1} R(phi_1) ... U^{e_d} R(phi_d) with e_k = (-1)^{d-k},
/// U^{-1} = U^dagger and R(phi) = diag(e^{i phi} I_N, e^{-i phi} I_{N(M-1)}).
ComplexMatrix assemble_interleaved(const BlockEncoding& enc, const PhaseFactorSet& phi,
                                   Orientation orientation = Orientation::kForward);

/// 1/2 [[I, I], [I, -I]] diag(U(Phi), U(-Phi)) [[I, I], [I, -I]], which is
/// [[A, B], [B, A]] with A = (U(Phi) + U(-Phi)) / 2, B = (U(Phi) - U(-Phi)) / 2.
ComplexMatrix assemble_full(const BlockEncoding& enc, const PhaseFactorSet& phi,
                            Orientation orientation = Orientation::kForward);

class QsvtCircuit {
 public:
  QsvtCircuit(BlockEncoding enc, PhaseFactorSet phi, Orientation orientation);

  const BlockEncoding& encoding() const { return enc_; }
  const PhaseFactorSet& phases() const { return phi_; }
  Orientation orientation() const { return orientation_; }
  int degree() const { return phi_.degree(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return matrix_.rows(); }

 private:
  BlockEncoding enc_;
  PhaseFactorSet phi_;
  Orientation orientation_;
  ComplexMatrix matrix_;
};

enum class T2Choice { kByParity, kV2, kW2 };

/// Closed-form blocks for the m = 1 dilation of a PSD H, written in terms of
/// (P, Q) = extract_pq(to_su2(Phi)) and the cosine-sine factors.
/// T2 is W2 for odd d and V2 for even d unless overridden.
struct BlockTable {
  ComplexMatrix f_h;            // f(H) = P_Re(H)
  ComplexMatrix i_p_im_h;       // i P_Im(H)
  ComplexMatrix sum_top_right;  // -sqrt(I-H^2) Q_Im(H) V V2^dagger
  ComplexMatrix sum_bottom_left;   // T2 V^dagger sqrt(I-H^2) Q_Im(H)
  ComplexMatrix sum_bottom_right;  // T2 f(Sigma) V2^dagger
  ComplexMatrix diff_top_right;    // i sqrt(I-H^2) Q_Re(H) V V2^dagger
  ComplexMatrix diff_bottom_left;  // i T2 V^dagger sqrt(I-H^2) Q_Re(H)
  ComplexMatrix diff_bottom_right; // -i T2 P_Im(Sigma) V2^dagger

  /// [[A, B], [B, A]] from the blocks above.
  ComplexMatrix full() const;
};

BlockTable predicted_blocks(const ComplexMatrix& h, const PhaseFactorSet& phi,
                            T2Choice t2 = T2Choice::kByParity);

/// Predicted component of Q |0>|0>|phi> outside the all-zero ancilla sector:
/// |1>|0> i P_Im(H) phi + |1>|1> i T2 V^dagger sqrt(I-H^2) Q_Re(H) phi.
/// Requires to_su2(Phi) to be symmetric.
StateVector garbage_state(const ComplexMatrix& h, const PhaseFactorSet& phi,
                          const StateVector& input);

/// (I - |0^{m+1}><0^{m+1}| (x) I) applied to a full-register state.
StateVector strip_flagged_sector(const StateVector& full, std::size_t system_dim);

/// |0^{m+1}> (x) phi on a register of the given ancilla dimension.
StateVector embed_system_state(const StateVector& phi, std::size_t ancilla_dim);

}  // namespace fqsvt
