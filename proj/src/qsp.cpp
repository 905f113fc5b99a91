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

#include "fqsvt/qsp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fqsvt {

namespace {

constexpr cplx kI(0.0, 1.0);

double clamp_unit(double x) {
  if (std::abs(x) > 1.0 + 1e-14) {
    throw InvalidInput("qsp: |x| > 1 (x = " + std::to_string(x) + ")");
  }
  return std::clamp(x, -1.0, 1.0);
}

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 zrot(double psi) { return {std::polar(1.0, psi), 0.0, 0.0, std::polar(1.0, -psi)}; }

Mat2 xrot(double x) {
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  return {x, kI * s, kI * s, x};
}

// Chebyshev coefficients of the degree n-1 interpolant through values at
// x_j = cos((j + 1/2) pi / n).
std::vector<cplx> interpolate(const std::vector<cplx>& values) {
  const std::size_t n = values.size();
  std::vector<cplx> c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += values[j] * std::cos(kPi * static_cast<double>(k) * (j + 0.5) / n);
    }
    c[k] = acc * (2.0 / n);
  }
  if (n > 0) c[0] *= 0.5;
  return c;
}

cplx clenshaw(const std::vector<cplx>& c, double x) {
  cplx b1 = 0.0;
  cplx b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const cplx b0 = c[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c.empty() ? cplx(0.0) : c[0] + x * b1 - b2;
}

ChebyshevSeries part(const std::vector<cplx>& c, bool imag) {
  std::vector<double> r(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) r[k] = imag ? c[k].imag() : c[k].real();
  // Round-off in the wrong-parity slots is cleared so the parity tag holds.
  auto s = ChebyshevSeries::from_coeffs(r);
  if (s.parity() == Parity::kNone) return s;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const bool wrong = (s.parity() == Parity::kEven) == (k % 2 == 1);
    if (wrong) r[k] = 0.0;
  }
  return ChebyshevSeries(std::move(r), s.parity());
}

// Offsets applied by to_su2: psi_k = phi_k + offset(k, d).
double su2_offset(int k, int d) {
  if (k == 0) return (d % 2 == 0 ? 1.0 : -1.0) * kPi / 4;
  if (k == d) return kPi / 4;
  return ((d - k) % 2 == 0 ? 1.0 : -1.0) * kPi / 2;
}

}  // namespace

std::string to_string(Convention c) { return c == Convention::kSu2 ? "su2" : "circuit"; }

Convention convention_from_string(const std::string& s) {
  if (s == "su2") return Convention::kSu2;
  if (s == "circuit") return Convention::kCircuit;
  throw InvalidInput("unknown phase convention '" + s + "'");
}

PhaseFactorSet::PhaseFactorSet(std::vector<double> values, Convention convention)
    : values_(std::move(values)), convention_(convention) {
  if (values_.empty()) throw InvalidInput("PhaseFactorSet: need at least one phase");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("PhaseFactorSet: non-finite phase");
  }
  symmetric_ = true;
  const std::size_t d = values_.size() - 1;
  for (std::size_t j = 0; j <= d / 2; ++j) {
    if (std::abs(values_[j] - values_[d - j]) > 1e-12) {
      symmetric_ = false;
      break;
    }
  }
}

PhaseFactorSet PhaseFactorSet::negated() const {
  std::vector<double> v = values_;
  for (auto& x : v) x = -x;
  return PhaseFactorSet(std::move(v), convention_);
}

Mat2 qsp_unitary(double x, const PhaseFactorSet& psi) {
  if (psi.convention() != Convention::kSu2) {
    throw InvalidInput("qsp_unitary: phases must use the su2 convention");
  }
  x = clamp_unit(x);
  const Mat2 w = xrot(x);
  Mat2 u = zrot(psi[0]);
  for (int j = 1; j <= psi.degree(); ++j) u = mul(mul(u, w), zrot(psi[j]));
  return u;
}

cplx QspPolynomialPair::eval_p(double x) const { return clenshaw(p, clamp_unit(x)); }
cplx QspPolynomialPair::eval_q(double x) const { return clenshaw(q, clamp_unit(x)); }

ChebyshevSeries QspPolynomialPair::p_re() const { return part(p, false); }
ChebyshevSeries QspPolynomialPair::p_im() const { return part(p, true); }
ChebyshevSeries QspPolynomialPair::q_re() const { return part(q, false); }
ChebyshevSeries QspPolynomialPair::q_im() const { return part(q, true); }

double QspPolynomialPair::normalization_residual(int points) const {
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = points == 1 ? 0.0 : -1.0 + 2.0 * i / (points - 1);
    const double v = std::norm(eval_p(x)) + (1.0 - x * x) * std::norm(eval_q(x));
    worst = std::max(worst, std::abs(v - 1.0));
  }
  return worst;
}

double QspPolynomialPair::q_imag_max() const {
  double m = 0.0;
  for (const auto& c : q) m = std::max(m, std::abs(c.imag()));
  return m;
}

QspPolynomialPair extract_pq(const PhaseFactorSet& psi) {
  if (psi.convention() != Convention::kSu2) {
    throw InvalidInput("extract_pq: phases must use the su2 convention");
  }
  const int d = psi.degree();
  QspPolynomialPair out;
  out.degree = d;

  std::vector<cplx> pv(static_cast<std::size_t>(d) + 1);
  for (int j = 0; j <= d; ++j) {
    const double x = std::cos(kPi * (j + 0.5) / (d + 1));
    pv[static_cast<std::size_t>(j)] = qsp_unitary(x, psi)[0];
  }
  out.p = interpolate(pv);

  if (d == 0) {
    out.q = {0.0};
  } else {
    std::vector<cplx> qv(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      const double x = std::cos(kPi * (j + 0.5) / d);
      qv[static_cast<std::size_t>(j)] = qsp_unitary(x, psi)[1] / (kI * std::sqrt(1.0 - x * x));
    }
    out.q = interpolate(qv);
  }

  // Independent check against the product itself.
  const int grid = 257;
  double worst = 0.0;
  double worst_x = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x = -1.0 + 2.0 * i / (grid - 1) + (i % 2 == 0 ? 0.0 : 1e-3 / grid);
    const Mat2 u = qsp_unitary(std::min(x, 1.0), psi);
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    const double e = std::max(std::abs(u[0] - out.eval_p(std::min(x, 1.0))),
                              std::abs(u[1] - kI * s * out.eval_q(std::min(x, 1.0))));
    if (e > worst) {
      worst = e;
      worst_x = x;
    }
  }
  if (worst > 1e-9) {
    std::ostringstream os;
    os << "extract_pq: interpolation residual " << worst << " at x=" << worst_x
       << " exceeds 1e-9 (degree " << d << ")";
    throw NumericalError(os.str());
  }
  return out;
}

PhaseFactorSet to_su2(const PhaseFactorSet& phi) {
  if (phi.convention() != Convention::kCircuit) {
    throw InvalidInput("to_su2: phases must use the circuit convention");
  }
  const int d = phi.degree();
  std::vector<double> v = phi.values();
  for (int k = 0; k <= d; ++k) v[static_cast<std::size_t>(k)] += su2_offset(k, d);
  return PhaseFactorSet(std::move(v), Convention::kSu2);
}

PhaseFactorSet to_circuit(const PhaseFactorSet& psi) {
  if (psi.convention() != Convention::kSu2) {
    throw InvalidInput("to_circuit: phases must use the su2 convention");
  }
  const int d = psi.degree();
  std::vector<double> v = psi.values();
  for (int k = 0; k <= d; ++k) v[static_cast<std::size_t>(k)] -= su2_offset(k, d);
  return PhaseFactorSet(std::move(v), Convention::kCircuit);
}

ConjugationReport conjugation_identity_check(const PhaseFactorSet& phi,
                                             const std::vector<double>& grid) {
  const PhaseFactorSet a = to_su2(phi);
  const PhaseFactorSet b = to_su2(phi.negated());
  ConjugationReport r;
  for (double x : grid) {
    const Mat2 ua = qsp_unitary(x, a);
    const Mat2 ub = qsp_unitary(x, b);
    for (int k = 0; k < 4; ++k) r.max_deviation = std::max(r.max_deviation, std::abs(ub[k] - std::conj(ua[k])));
  }
  r.passed = r.max_deviation <= 1e-10;
  return r;
}

std::vector<double> positive_chebyshev_nodes(int degree) {
  std::vector<double> x(static_cast<std::size_t>(std::max(degree, 0)));
  for (int j = 1; j <= degree; ++j) {
    x[static_cast<std::size_t>(j - 1)] = std::cos((2.0 * j - 1.0) * kPi / (4.0 * degree));
  }
  return x;
}

std::vector<double> expand_symmetric(const std::vector<double>& reduced, int degree) {
  const std::size_t expected = static_cast<std::size_t>((degree + 2) / 2);
  if (degree < 0 || reduced.size() != expected) {
    throw InvalidInput("expand_symmetric: expected " + std::to_string(expected) + " phases");
  }
  std::vector<double> full(static_cast<std::size_t>(degree) + 1);
  for (int j = 0; j <= degree; ++j) {
    full[static_cast<std::size_t>(j)] = reduced[static_cast<std::size_t>(std::min(j, degree - j))];
  }
  return full;
}

ResidualJacobian symmetric_residual_jacobian(const std::vector<double>& reduced, int degree,
                                             const std::vector<double>& nodes,
                                             const std::vector<double>& target) {
  const std::vector<double> psi = expand_symmetric(reduced, degree);
  const std::size_t n = nodes.size();
  const std::size_t d = static_cast<std::size_t>(degree);
  ResidualJacobian out;
  out.rows = n;
  out.cols = reduced.size();
  out.residual.assign(n, 0.0);
  out.jacobian.assign(n * out.cols, 0.0);

  std::vector<cplx> ea(d + 1);
  for (std::size_t k = 0; k <= d; ++k) ea[k] = std::polar(1.0, psi[k]);

  // First rows (a_k, b_k) of the prefix products through factor k, first
  // columns (c_k, e_k) of the suffix products after factor k.
  std::vector<cplx> a(d + 1), b(d + 1), c(d + 1), e(d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    const cplx is = kI * s;

    a[0] = ea[0];
    b[0] = 0.0;
    for (std::size_t k = 1; k <= d; ++k) {
      // (a, b) W diag(e^{i psi}, e^{-i psi})
      const cplx na = a[k - 1] * x + b[k - 1] * is;
      const cplx nb = a[k - 1] * is + b[k - 1] * x;
      a[k] = na * ea[k];
      b[k] = nb * std::conj(ea[k]);
    }
    c[d] = 1.0;
    e[d] = 0.0;
    for (std::size_t k = d; k >= 1; --k) {
      // W diag(e^{i psi_k}, e^{-i psi_k}) (c, e)^T
      const cplx zc = ea[k] * c[k];
      const cplx ze = std::conj(ea[k]) * e[k];
      c[k - 1] = x * zc + is * ze;
      e[k - 1] = is * zc + x * ze;
    }
    out.residual[i] = a[d].real() - target[i];
    double* row = out.jacobian.data() + i * out.cols;
    for (std::size_t k = 0; k <= d; ++k) {
      const cplx g = a[k] * c[k] - b[k] * e[k];
      row[std::min(k, d - k)] += -g.imag();
    }
  }
  return out;
}

namespace {

// Solves (B + shift * D) s = -g by Cholesky; false if not positive definite.
bool cholesky_solve(std::vector<double> m, std::size_t n, const std::vector<double>& rhs,
                    std::vector<double>& out) {
  for (std::size_t j = 0; j < n; ++j) {
    double diag = m[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= m[j * n + k] * m[j * n + k];
    if (!(diag > 0.0) || !std::isfinite(diag)) return false;
    const double l = std::sqrt(diag);
    m[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = m[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= m[i * n + k] * m[j * n + k];
      m[i * n + j] = v / l;
    }
  }
  out = rhs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) out[i] -= m[i * n + k] * out[k];
    out[i] /= m[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) out[i] -= m[k * n + i] * out[k];
    out[i] /= m[i * n + i];
  }
  return true;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double sumsq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// J^T J (cols x cols) and J^T r.
void normal_equations(const ResidualJacobian& rj, std::vector<double>& jtj,
                      std::vector<double>& jtr) {
  const std::size_t n = rj.cols;
  jtj.assign(n * n, 0.0);
  jtr.assign(n, 0.0);
  for (std::size_t i = 0; i < rj.rows; ++i) {
    const double* row = rj.jacobian.data() + i * n;
    for (std::size_t p = 0; p < n; ++p) {
      jtr[p] += row[p] * rj.residual[i];
      const double rp = row[p];
      if (rp == 0.0) continue;
      for (std::size_t q = p; q < n; ++q) jtj[p * n + q] += rp * row[q];
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < p; ++q) jtj[p * n + q] = jtj[q * n + p];
  }
}

std::vector<double> matvec(const std::vector<double>& m, std::size_t n, const std::vector<double>& v) {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i] += m[i * n + j] * v[j];
  }
  return out;
}

// max |f| sampled uniformly in the angle, which resolves the oscillation
// near the endpoints.
double sup_abs(const ChebyshevSeries& f) {
  const int n = 8 * (f.degree() + 1) + 2001;
  double m = 0.0;
  for (int i = 0; i <= n; ++i) m = std::max(m, std::abs(f(std::cos(kPi * i / n))));
  return m;
}

}  // namespace

PhaseFactorSet synthesize_symmetric(const ChebyshevSeries& f, const SynthesisOptions& opts,
                                    SynthesisReport* report) {
  if (!(opts.tol > 0.0)) throw InvalidInput("synthesize_symmetric: tol must be positive");
  const int d = f.degree();
  const Parity want = d % 2 == 0 ? Parity::kEven : Parity::kOdd;
  if (f.parity() != want) {
    throw InvalidInput("synthesize_symmetric: target of degree " + std::to_string(d) +
                       " must have " + to_string(want) + " parity (got " +
                       to_string(f.parity()) + ")");
  }
  SynthesisReport local;
  SynthesisReport& rep = report ? *report : local;
  rep = SynthesisReport{};

  const auto& cf = f.coeffs();
  if (d == 0) {
    if (std::abs(cf[0]) > 1.0) throw InvalidInput("synthesize_symmetric: |f| > 1");
    return PhaseFactorSet({std::acos(cf[0])}, Convention::kSu2);
  }
  bool pure_top = std::abs(std::abs(cf[static_cast<std::size_t>(d)]) - 1.0) <= 1e-14;
  for (int k = 0; k < d && pure_top; ++k) pure_top = std::abs(cf[static_cast<std::size_t>(k)]) <= 1e-14;
  if (pure_top) {
    // +T_d: all zero phases. -T_d: pi/2 at both ends (iZ conjugation).
    std::vector<double> v(static_cast<std::size_t>(d) + 1, 0.0);
    if (cf[static_cast<std::size_t>(d)] < 0.0) v.front() = v.back() = kPi / 2;
    return PhaseFactorSet(std::move(v), Convention::kSu2);
  }

  const double peak = sup_abs(f);
  if (peak > 1.0 - opts.min_margin) {
    std::ostringstream os;
    os << "synthesize_symmetric: max |f| = " << peak << " leaves margin " << 1.0 - peak
       << " < " << opts.min_margin << "; rescale the target first";
    throw InvalidInput(os.str());
  }

  const std::vector<double> nodes = positive_chebyshev_nodes(d);
  std::vector<double> target(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) target[i] = f(nodes[i]);

  const std::size_t n = static_cast<std::size_t>((d + 2) / 2);
  std::vector<double> x(n, 0.0);
  x[0] = kPi / 4;

  ResidualJacobian rj = symmetric_residual_jacobian(x, d, nodes, target);
  double cost = 0.5 * sumsq(rj.residual);
  std::vector<double> jtj, g;
  normal_equations(rj, jtj, g);
  std::vector<double> corr(n * n, 0.0);  // SR1 model of the residual curvature
  double lambda = 0.0;
  rep.residual = max_abs(rj.residual);
  rep.residual_history.push_back(rep.residual);

  std::vector<double> step;
  while (rep.residual > opts.tol) {
    if (rep.iterations >= opts.max_iterations) {
      std::ostringstream os;
      os << "synthesize_symmetric: no convergence in " << opts.max_iterations
         << " iterations (degree " << d << ", residual " << rep.residual << ", tol " << opts.tol
         << ")";
      throw SynthesisError(os.str(), rep.residual_history);
    }
    ++rep.iterations;

    double diag_scale = 0.0;
    for (std::size_t p = 0; p < n; ++p) diag_scale = std::max(diag_scale, jtj[p * n + p]);
    // Attempt order: plain Gauss-Newton, then with the SR1 correction, then
    // Levenberg-Marquardt shifts of the corrected model.
    bool accepted = false;
    int attempt = 0;
    while (!accepted) {
      const bool use_corr = attempt++ > 0;
      std::vector<double> b(n * n);
      for (std::size_t p = 0; p < n * n; ++p) b[p] = jtj[p] + (use_corr ? corr[p] : 0.0);
      if (use_corr) {
        for (std::size_t p = 0; p < n; ++p) b[p * n + p] += lambda * (jtj[p * n + p] + 1e-12 * diag_scale);
      }
      std::vector<double> rhs(n);
      for (std::size_t p = 0; p < n; ++p) rhs[p] = -g[p];
      if (!cholesky_solve(std::move(b), n, rhs, step)) {
        if (use_corr) lambda = std::max(10.0 * lambda, 1e-8);
        continue;
      }
      std::vector<double> xn = x;
      for (std::size_t p = 0; p < n; ++p) xn[p] += step[p];
      ResidualJacobian rn = symmetric_residual_jacobian(xn, d, nodes, target);
      const double cn = 0.5 * sumsq(rn.residual);
      if (cn < cost) {
        std::vector<double> jtj_n, g_n;
        normal_equations(rn, jtj_n, g_n);
        // Structured secant: y# = grad_new - grad_old - J_new^T J_new s.
        std::vector<double> js = matvec(jtj_n, n, step);
        std::vector<double> as = matvec(corr, n, step);
        std::vector<double> v(n);
        double vs = 0.0, vv = 0.0, ss = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
          v[p] = g_n[p] - g[p] - js[p] - as[p];
          vs += v[p] * step[p];
          vv += v[p] * v[p];
          ss += step[p] * step[p];
        }
        if (std::abs(vs) > 1e-8 * std::sqrt(vv * ss) && vv > 0.0) {
          for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = 0; q < n; ++q) corr[p * n + q] += v[p] * v[q] / vs;
          }
        }
        x = std::move(xn);
        rj = std::move(rn);
        cost = cn;
        jtj = std::move(jtj_n);
        g = std::move(g_n);
        lambda = lambda < 1e-12 ? 0.0 : lambda / 10.0;
        accepted = true;
      } else if (use_corr) {
        lambda = std::max(10.0 * lambda, 1e-8);
        // A curvature model that keeps producing bad steps is discarded.
        if (lambda > 1e-2) std::fill(corr.begin(), corr.end(), 0.0);
        if (lambda > 1e12) {
          std::ostringstream os;
          os << "synthesize_symmetric: stagnated at residual " << rep.residual << " (degree "
             << d << ", tol " << opts.tol << ")";
          throw SynthesisError(os.str(), rep.residual_history);
        }
      }
    }
    rep.residual = max_abs(rj.residual);
    rep.residual_history.push_back(rep.residual);
  }
  return PhaseFactorSet(expand_symmetric(x, d), Convention::kSu2);
}

}  // namespace fqsvt
