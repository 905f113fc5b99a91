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

// Real polynomials in the Chebyshev basis and the even smoothed-step filter
// used to split a spectrum at a threshold.

#include <string>
#include <vector>

#include "fqsvt/numkernel.hpp"

namespace fqsvt {

enum class Parity { kEven, kOdd, kNone };

std::string to_string(Parity p);
Parity parity_from_string(const std::string& s);

/// sum_k c_k T_k(x). A parity tag is checked against the coefficients
/// (wrong-parity entries must be below 1e-12).
class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;
  ChebyshevSeries(std::vector<double> coeffs, Parity parity);

  /// Parity inferred from the coefficients (kNone if mixed).
  static ChebyshevSeries from_coeffs(std::vector<double> coeffs);
  /// c T_d.
  static ChebyshevSeries monomial(int degree, double scale = 1.0);

  const std::vector<double>& coeffs() const { return coeffs_; }
  Parity parity() const { return parity_; }
  /// Index of the last nonzero coefficient (0 for the zero series).
  int degree() const;
  std::size_t size() const { return coeffs_.size(); }

  /// Clenshaw recurrence; requires |x| <= 1.
  double operator()(double x) const;

  /// sum |c_k|, an upper bound for |f| on [-1, 1].
  double l1_norm() const;

  ChebyshevSeries scaled(double s) const;

 private:
  std::vector<double> coeffs_;
  Parity parity_ = Parity::kNone;
};

double cheb_eval(const ChebyshevSeries& f, double x);

/// Threshold mu, transition width delta, error budget eps.
struct FilterSpec {
  double mu = 0.5;
  double delta = 0.1;
  double eps = 1e-3;

  /// Throws InvalidInput unless 0 < mu - delta/2, mu + delta/2 < 1,
  /// delta > 0 and 0 < eps < 1.
  void validate() const;
};

/// Signed margins: positive means the condition holds with that much room.
struct FilterCertificate {
  double stopband_margin = 0.0;  // eps/2 - max |f|       on [mu + delta/2, 1]
  double passband_margin = 0.0;  // eps/2 - max |1 - f|   on [0, mu - delta/2]
  double bound_margin = 0.0;     // (1 - 1e-6) - max |f|  on [-1, 1]
  double stopband_worst_x = 0.0;
  double passband_worst_x = 0.0;
  double bound_worst_x = 0.0;

  bool stopband_ok() const { return stopband_margin > 0.0; }
  bool passband_ok() const { return passband_margin > 0.0; }
  bool bound_ok() const { return bound_margin >= 0.0; }
  bool passed() const { return stopband_ok() && passband_ok() && bound_ok(); }
};

inline constexpr double kFilterBoundMargin = 1e-6;
inline constexpr int kFilterDegreeCap = 2000;

/// Evaluates the three filter conditions on `gridsize` uniform points per
/// region (endpoints included) and again on the half-step shifted grid.
FilterCertificate certify_filter(const ChebyshevSeries& f, const FilterSpec& spec,
                                 int gridsize = 2001);

struct FilterOptions {
  /// Final multiplicative scale; the peak of the filter sits just below it.
  double scale = 1.0 - kFilterBoundMargin;
  int gridsize = 2001;
  int degree_cap = kFilterDegreeCap;
  /// Degrees below this are not considered (used to give several filters a
  /// common degree).
  int min_degree = 0;
};

/// Inverse of the complementary error function on (0, 2).
double erfc_inverse(double y);

/// k such that 1/2 erfc(k delta / 2) = eps / 8: the smoothed step is within
/// eps / 8 of its limits at the edges of the transition window.
double filter_steepness(const FilterSpec& spec);

/// Even polynomial approximating the indicator of |x| < mu.
///
/// The smooth profile 1/2 [erf(k (x + mu)) - erf(k (x - mu))] with
/// k = filter_steepness(spec) is expanded by cosine quadrature. The degree is
/// the smallest even one whose truncation certifies, searched below the
/// degree at which the coefficient tail drops under eps / (8 d). Truncation
/// overshoot above 1 is divided out before the final scale is applied.
/// Throws NumericalError (with the worst violating point) if no degree up to
/// the cap certifies.
ChebyshevSeries heaviside_filter(const FilterSpec& spec, const FilterOptions& opts = {});

/// Chebyshev coefficients c_0..c_n of a function sampled by cosine
/// quadrature at `nodes` points.
template <class F>
std::vector<double> chebyshev_coefficients(F&& g, int n, int nodes) {
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < nodes; ++i) {
    const double theta = kPi * (i + 0.5) / nodes;
    const double gx = g(std::cos(theta));
    // cos(j theta) by the three-term recurrence.
    const double two_cos = 2.0 * std::cos(theta);
    double prev = 1.0;
    double cur = std::cos(theta);
    c[0] += gx;
    if (n >= 1) c[1] += gx * cur;
    for (int j = 2; j <= n; ++j) {
      const double next = two_cos * cur - prev;
      prev = cur;
      cur = next;
      c[static_cast<std::size_t>(j)] += gx * cur;
    }
  }
  for (auto& v : c) v *= 2.0 / nodes;
  c[0] *= 0.5;
  return c;
}

}  // namespace fqsvt
