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

// Quantum signal processing: phase sequences, their SU(2) products, the
// polynomial pair (P, Q), convention changes and symmetric synthesis.

#include <array>
#include <string>
#include <vector>

#include "fqsvt/numkernel.hpp"
#include "fqsvt/polyapprox.hpp"

namespace fqsvt {

enum class Convention { kSu2, kCircuit };

std::string to_string(Convention c);
Convention convention_from_string(const std::string& s);

class PhaseFactorSet {
 public:
  PhaseFactorSet(std::vector<double> values, Convention convention);

  const std::vector<double>& values() const { return values_; }
  Convention convention() const { return convention_; }
  int degree() const { return static_cast<int>(values_.size()) - 1; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// values[j] == values[d - j] to 1e-12 (computed once at construction).
  bool is_symmetric() const { return symmetric_; }

  PhaseFactorSet negated() const;

 private:
  std::vector<double> values_;
  Convention convention_;
  bool symmetric_ = false;
};

using Mat2 = std::array<cplx, 4>;  // row-major 2x2

/// e^{i psi_0 Z} prod_{j=1..d} e^{i arccos(x) X} e^{i psi_j Z}.
Mat2 qsp_unitary(double x, const PhaseFactorSet& psi);

/// Complex polynomials in the Chebyshev T basis.
struct QspPolynomialPair {
  std::vector<cplx> p;  // degree <= d
  std::vector<cplx> q;  // degree <= d - 1 (single zero entry when d = 0)
  int degree = 0;

  cplx eval_p(double x) const;
  cplx eval_q(double x) const;

  ChebyshevSeries p_re() const;  // this is f
  ChebyshevSeries p_im() const;
  ChebyshevSeries q_re() const;
  ChebyshevSeries q_im() const;

  /// max over `points` uniform points of | |P|^2 + (1 - x^2)|Q|^2 - 1 |.
  double normalization_residual(int points = 401) const;
  /// Largest |Im| over the coefficients of Q.
  double q_imag_max() const;
};

/// Interpolates P at d+1 and Q at d Chebyshev nodes. Throws NumericalError
/// if the interpolants miss qsp_unitary by more than 1e-9 on an independent
/// uniform grid.
QspPolynomialPair extract_pq(const PhaseFactorSet& psi);

PhaseFactorSet to_su2(const PhaseFactorSet& phi);
PhaseFactorSet to_circuit(const PhaseFactorSet& psi);

struct ConjugationReport {
  double max_deviation = 0.0;
  bool passed = false;
};

/// Checks U(x, to_su2(-Phi)) == conj(U(x, to_su2(Phi))) on `grid`.
ConjugationReport conjugation_identity_check(const PhaseFactorSet& phi,
                                             const std::vector<double>& grid);

struct SynthesisOptions {
  double tol = 1e-12;
  double min_margin = 1e-8;
  int max_iterations = 300;
};

struct SynthesisReport {
  int iterations = 0;
  double residual = 0.0;                 // max abs residual at the nodes
  std::vector<double> residual_history;  // one entry per accepted iterate
};

class SynthesisError : public NumericalError {
 public:
  SynthesisError(const std::string& what, std::vector<double> history)
      : NumericalError(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// Symmetric su2 phases with Re P = f at the positive Chebyshev nodes of
/// order 2d, to `opts.tol`.
///
/// Only the first ceil((d+1)/2) phases are free; the rest mirror them. The
/// least-squares objective is minimized by a structured quasi-Newton method:
/// the curvature model is J^T J plus a symmetric-rank-one correction, and a
/// Levenberg-Marquardt shift is added whenever a step fails to decrease the
/// objective. Starts from (pi/4, 0, ..., 0, pi/4).
///
/// f must have definite parity matching its degree and max |f| <= 1 - margin
/// on [-1, 1] with margin >= opts.min_margin; otherwise InvalidInput. Two
/// degenerate targets are solved in closed form instead: degree 0, and
/// f = +-T_d (which sits on the boundary |f| = 1).
PhaseFactorSet synthesize_symmetric(const ChebyshevSeries& f, const SynthesisOptions& opts = {},
                                    SynthesisReport* report = nullptr);

/// Objective residuals r_j = Re P(x_j) - f(x_j) and their Jacobian with
/// respect to the reduced phases (row-major, nodes x reduced). Exposed for
/// the gradient test.
struct ResidualJacobian {
  std::vector<double> residual;
  std::vector<double> jacobian;
  std::size_t rows = 0;
  std::size_t cols = 0;
};
ResidualJacobian symmetric_residual_jacobian(const std::vector<double>& reduced, int degree,
                                             const std::vector<double>& nodes,
                                             const std::vector<double>& target);

/// Full symmetric sequence from its first ceil((d+1)/2) entries.
std::vector<double> expand_symmetric(const std::vector<double>& reduced, int degree);

/// cos((2j - 1) pi / (4d)), j = 1..d.
std::vector<double> positive_chebyshev_nodes(int degree);

}  // namespace fqsvt
