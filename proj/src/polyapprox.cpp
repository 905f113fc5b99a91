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

#include "fqsvt/polyapprox.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fqsvt {

std::string to_string(Parity p) {
  switch (p) {
    case Parity::kEven:
      return "even";
    case Parity::kOdd:
      return "odd";
    case Parity::kNone:
      return "none";
  }
  return "none";
}

Parity parity_from_string(const std::string& s) {
  if (s == "even") return Parity::kEven;
  if (s == "odd") return Parity::kOdd;
  if (s == "none") return Parity::kNone;
  throw InvalidInput("unknown parity '" + s + "'");
}

ChebyshevSeries::ChebyshevSeries(std::vector<double> coeffs, Parity parity)
    : coeffs_(std::move(coeffs)), parity_(parity) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (!std::isfinite(coeffs_[k])) throw InvalidInput("ChebyshevSeries: non-finite coefficient");
    const bool wrong = (parity_ == Parity::kEven && k % 2 == 1) ||
                       (parity_ == Parity::kOdd && k % 2 == 0);
    if (wrong && std::abs(coeffs_[k]) > 1e-12) {
      throw InvalidInput("ChebyshevSeries: coefficient " + std::to_string(k) + " = " +
                         std::to_string(coeffs_[k]) + " contradicts " + to_string(parity_) +
                         " parity");
    }
  }
}

ChebyshevSeries ChebyshevSeries::from_coeffs(std::vector<double> coeffs) {
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    (k % 2 == 0 ? even : odd) = std::max(k % 2 == 0 ? even : odd, std::abs(coeffs[k]));
  }
  Parity p = Parity::kNone;
  if (odd <= 1e-12) {
    p = Parity::kEven;
  } else if (even <= 1e-12) {
    p = Parity::kOdd;
  }
  return ChebyshevSeries(std::move(coeffs), p);
}

ChebyshevSeries ChebyshevSeries::monomial(int degree, double scale) {
  if (degree < 0) throw InvalidInput("monomial: negative degree");
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = scale;
  return ChebyshevSeries(std::move(c), degree % 2 == 0 ? Parity::kEven : Parity::kOdd);
}

int ChebyshevSeries::degree() const {
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    if (coeffs_[k] != 0.0) return static_cast<int>(k);
  }
  return 0;
}

double ChebyshevSeries::operator()(double x) const {
  if (std::abs(x) > 1.0 + 1e-14) {
    throw InvalidInput("cheb_eval: |x| > 1 (x = " + std::to_string(x) + ")");
  }
  x = std::clamp(x, -1.0, 1.0);
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;) {
    const double b0 = coeffs_[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs_[0] + x * b1 - b2;
}

double ChebyshevSeries::l1_norm() const {
  double s = 0.0;
  for (double c : coeffs_) s += std::abs(c);
  return s;
}

ChebyshevSeries ChebyshevSeries::scaled(double s) const {
  std::vector<double> c = coeffs_;
  for (auto& v : c) v *= s;
  return ChebyshevSeries(std::move(c), parity_);
}

double cheb_eval(const ChebyshevSeries& f, double x) { return f(x); }

void FilterSpec::validate() const {
  std::ostringstream os;
  if (!(delta > 0.0)) {
    os << "filter: delta must be positive (got " << delta << ")";
  } else if (!(mu - delta / 2 > 0.0)) {
    os << "filter: mu - delta/2 = " << mu - delta / 2 << " must be > 0";
  } else if (!(mu + delta / 2 < 1.0)) {
    os << "filter: mu + delta/2 = " << mu + delta / 2 << " must be < 1";
  } else if (!(eps > 0.0 && eps < 1.0)) {
    os << "filter: eps must lie in (0, 1) (got " << eps << ")";
  } else {
    return;
  }
  throw InvalidInput(os.str());
}

namespace {

struct Worst {
  double value = -1.0;
  double x = 0.0;
};

// Uniform grid of n points on [a, b] plus the n - 1 midpoints.
template <class F>
Worst scan(double a, double b, int n, F&& measure) {
  Worst w;
  auto visit = [&](double x) {
    const double v = measure(x);
    if (v > w.value) {
      w.value = v;
      w.x = x;
    }
  };
  if (n < 2 || b <= a) {
    visit(a);
    visit(b);
    return w;
  }
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) visit(i == n - 1 ? b : a + h * i);
  for (int i = 0; i + 1 < n; ++i) visit(a + h * (i + 0.5));
  return w;
}

}  // namespace

FilterCertificate certify_filter(const ChebyshevSeries& f, const FilterSpec& spec,
                                 int gridsize) {
  spec.validate();
  if (gridsize < 101) throw InvalidInput("certify_filter: gridsize must be >= 101");
  FilterCertificate cert;
  const Worst stop = scan(spec.mu + spec.delta / 2, 1.0, gridsize,
                          [&](double x) { return std::abs(f(x)); });
  const Worst pass = scan(0.0, spec.mu - spec.delta / 2, gridsize,
                          [&](double x) { return std::abs(1.0 - f(x)); });
  const Worst bound = scan(-1.0, 1.0, gridsize, [&](double x) { return std::abs(f(x)); });
  cert.stopband_margin = spec.eps / 2 - stop.value;
  cert.stopband_worst_x = stop.x;
  cert.passband_margin = spec.eps / 2 - pass.value;
  cert.passband_worst_x = pass.x;
  cert.bound_margin = (1.0 - kFilterBoundMargin) - bound.value;
  cert.bound_worst_x = bound.x;
  return cert;
}

double erfc_inverse(double y) {
  if (!(y > 0.0 && y < 2.0)) throw InvalidInput("erfc_inverse: argument must lie in (0, 2)");
  // erfc is strictly decreasing; bisect on a bracket wide enough for doubles.
  double lo = -6.0;
  double hi = 6.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(mid) > y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double filter_steepness(const FilterSpec& spec) {
  spec.validate();
  return (2.0 / spec.delta) * erfc_inverse(spec.eps / 4.0);
}

ChebyshevSeries heaviside_filter(const FilterSpec& spec, const FilterOptions& opts) {
  spec.validate();
  if (!(opts.scale > 0.0 && opts.scale <= 1.0 - kFilterBoundMargin)) {
    throw InvalidInput("heaviside_filter: scale must lie in (0, 1 - 1e-6]");
  }
  const double k = filter_steepness(spec);
  const double mu = spec.mu;
  auto profile = [k, mu](double x) {
    return 0.5 * (std::erf(k * (x + mu)) - std::erf(k * (x - mu)));
  };

  // Resolve the coefficient tail: find the smallest even d whose tail
  // coefficients all fall below eps / (8 d), with the quadrature resolving
  // at least twice that degree.
  std::vector<double> coeffs;
  int rule_degree = -1;
  for (int trial = 64; trial <= 2 * opts.degree_cap + 64; trial *= 2) {
    coeffs = chebyshev_coefficients(profile, trial, 4 * trial);
    for (int d = 0; d <= trial / 2; d += 2) {
      const double cut = spec.eps / (8.0 * std::max(d, 1));
      bool tail_ok = true;
      for (int j = d + 1; j <= trial; ++j) {
        if (std::abs(coeffs[static_cast<std::size_t>(j)]) >= cut) {
          tail_ok = false;
          break;
        }
      }
      if (tail_ok) {
        rule_degree = d;
        break;
      }
    }
    if (rule_degree >= 0) break;
  }
  if (rule_degree < 0) rule_degree = opts.degree_cap;

  // Quadrature resolving at least twice the requested degree.
  auto ensure = [&](int d) {
    if (static_cast<int>(coeffs.size()) <= 2 * d) {
      coeffs = chebyshev_coefficients(profile, 2 * d, 8 * d);
    }
  };
  // Truncation ripple can lift the peak above 1; fold it into the scale.
  auto truncated = [&](int d) {
    ensure(d);
    std::vector<double> c(static_cast<std::size_t>(d) + 1, 0.0);
    for (int j = 0; j <= d; j += 2) c[static_cast<std::size_t>(j)] = coeffs[static_cast<std::size_t>(j)];
    ChebyshevSeries raw(std::move(c), Parity::kEven);
    const double peak =
        scan(0.0, 1.0, 2 * opts.gridsize, [&](double x) { return std::abs(raw(x)); }).value;
    return raw.scaled(opts.scale / std::max(1.0, peak * (1.0 + 1e-8)));
  };
  // A degree is accepted only if it also survives a nested 4x refinement.
  auto passes = [&](int d) {
    const ChebyshevSeries f = truncated(d);
    return certify_filter(f, spec, opts.gridsize).passed() &&
           certify_filter(f, spec, 4 * (opts.gridsize - 1) + 1).passed();
  };

  const int floor_degree = opts.min_degree + (opts.min_degree % 2);
  if (floor_degree > opts.degree_cap) throw InvalidInput("heaviside_filter: min_degree above cap");
  int d = std::min(std::max(rule_degree, floor_degree), opts.degree_cap);
  if (passes(d)) {
    // Smallest certifying even degree in [floor_degree, d] by bisection.
    if (passes(floor_degree)) return truncated(floor_degree);
    int lo = floor_degree;  // fails
    int hi = d;             // passes
    while (hi - lo > 2) {
      int mid = (lo + hi) / 2;
      mid -= mid % 2;
      if (mid <= lo) mid = lo + 2;
      (passes(mid) ? hi : lo) = mid;
    }
    return truncated(hi);
  }
  for (d += 2; d <= opts.degree_cap; d += 2) {
    if (passes(d)) return truncated(d);
  }
  const FilterCertificate cert = certify_filter(truncated(opts.degree_cap), spec, opts.gridsize);
  std::ostringstream os;
  os << "heaviside_filter: no even degree <= " << opts.degree_cap
     << " certifies (mu=" << spec.mu << ", delta=" << spec.delta << ", eps=" << spec.eps
     << "); worst violations: stopband " << cert.stopband_margin << " at x="
     << cert.stopband_worst_x << ", passband " << cert.passband_margin << " at x="
     << cert.passband_worst_x << ", bound " << cert.bound_margin << " at x="
     << cert.bound_worst_x;
  throw NumericalError(os.str());
}

}  // namespace fqsvt
