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

#include "fqsvt/baselines.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fqsvt {

double prob_projection_depth(const std::vector<double>& q, DepthStrategy strategy) {
  double total = 0.0;
  for (double x : q) {
    if (!(x >= 0.0)) throw InvalidInput("prob_projection_depth: negative probability");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw InvalidInput("prob_projection_depth: probabilities sum to " + std::to_string(total));
  }
  double depth = 0.0;
  for (double x : q) {
    if (x == 0.0) continue;
    depth += strategy == DepthStrategy::kRepeat ? 1.0 : std::sqrt(x);
  }
  return depth;
}

RandomWalkEstimate random_walk_success(const BandStructure& bands, const HermitianSpectrum& spec,
                                       long trials, std::uint64_t seed) {
  if (trials < 1000) throw InvalidInput("random_walk_success: need at least 1000 trials");
  const std::size_t n = spec.dim();
  const std::size_t nb = bands.bands.size();
  if (nb != bands.count) throw InvalidInput("random_walk_success: band lists do not match L");
  std::vector<std::size_t> band_of(n, nb);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t i : bands.bands[b]) {
      if (i >= n) throw InvalidInput("random_walk_success: band index outside the spectrum");
      band_of[i] = b;
    }
  }

  long wins = 0;
  long queries = 0;
  std::vector<double> w(nb);
  for (long t = 0; t < trials; ++t) {
    CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    // Projectors are diagonal in the eigenbasis, so only band weights of the
    // Haar-random coefficient vector matter.
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      w[band_of[i]] += re * re + im * im;
    }
    std::size_t lo = 0;
    std::size_t hi = nb;
    std::size_t proj_lo = 0;
    std::size_t proj_hi = nb;
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      // The query is {P_S, P_S-perp} with S = bands [lo, mid); weight outside
      // the believed range lands on the complement.
      double p_low = 0.0;
      double all = 0.0;
      for (std::size_t b = 0; b < nb; ++b) {
        all += w[b];
        if (b >= lo && b < mid) p_low += w[b];
      }
      const bool low = rng.uniform() * all < p_low;
      for (std::size_t b = 0; b < nb; ++b) {
        const bool in_low = b >= lo && b < mid;
        if (in_low != low) w[b] = 0.0;
      }
      ++queries;
      proj_lo = lo;
      proj_hi = hi;
      if (rng.uniform() < 0.5) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    double all = 0.0;
    double best = 0.0;
    std::size_t best_band = 0;
    for (std::size_t b = 0; b < nb; ++b) {
      all += w[b];
      if (w[b] > best) {
        best = w[b];
        best_band = b;
      }
    }
    if (nb == 1 || (best >= (1.0 - 1e-9) * all && best_band >= proj_lo && best_band < proj_hi)) {
      ++wins;
    }
  }
  RandomWalkEstimate e;
  e.trials = trials;
  e.success = static_cast<double>(wins) / static_cast<double>(trials);
  e.stderr_ = std::sqrt(e.success * (1.0 - e.success) / static_cast<double>(trials));
  e.queries_per_trial = static_cast<double>(queries) / static_cast<double>(trials);
  e.queries_to_success = wins > 0 ? e.queries_per_trial / e.success
                                  : std::numeric_limits<double>::infinity();
  return e;
}

void AdiabaticSchedule::validate() const {
  if (!gamma) throw InvalidInput("schedule: gamma is empty");
  if (steps < 1) throw InvalidInput("schedule: steps must be >= 1");
  if (!std::isfinite(total_time)) throw InvalidInput("schedule: total time must be finite");
  if (gamma(0.0) != 0.0 || gamma(1.0) != 1.0) {
    throw InvalidInput("schedule: gamma(0) must be 0 and gamma(1) must be 1");
  }
  double prev = 0.0;
  for (int k = 1; k <= steps; ++k) {
    const double g = gamma(static_cast<double>(k) / steps);
    if (g < prev) {
      throw InvalidInput("schedule: gamma decreases at s = " +
                         std::to_string(static_cast<double>(k) / steps));
    }
    prev = g;
  }
}

StateVector adiabatic_evolve(const ComplexMatrix& h0, const ComplexMatrix& h,
                             const AdiabaticSchedule& sched, const StateVector& initial) {
  sched.validate();
  require_hermitian(h0);
  require_hermitian(h);
  if (h0.rows() != h.rows() || h.rows() != initial.dim()) {
    throw InvalidInput("adiabatic_evolve: dimensions do not match");
  }
  if (sched.total_time == 0.0) return initial;
  const double dt = sched.total_time / sched.steps;
  std::vector<cplx> psi(initial.amplitudes().begin(), initial.amplitudes().end());
  for (int k = 0; k < sched.steps; ++k) {
    const double g = sched.gamma((k + 0.5) / sched.steps);
    const ComplexMatrix hs = cplx(1.0 - g) * h0 + cplx(g) * h;
    const ComplexMatrix u = matfun(hs, [dt](double e) { return std::polar(1.0, -dt * e); });
    psi = fqsvt::apply(u, psi);
  }
  return StateVector(std::move(psi));
}

double adiabatic_step_error(const ComplexMatrix& h0, const ComplexMatrix& h,
                            const AdiabaticSchedule& sched, const StateVector& initial) {
  AdiabaticSchedule fine = sched;
  fine.steps = 2 * sched.steps;
  const StateVector a = adiabatic_evolve(h0, h, sched, initial);
  const StateVector b = adiabatic_evolve(h0, h, fine, initial);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

StateVector adiabatic_evolve_converged(const ComplexMatrix& h0, const ComplexMatrix& h,
                                       const AdiabaticSchedule& sched, const StateVector& initial,
                                       double tol, int max_steps, int* steps_used) {
  AdiabaticSchedule cur = sched;
  StateVector prev = adiabatic_evolve(h0, h, cur, initial);
  while (true) {
    if (cur.steps > max_steps / 2) {
      throw NumericalError("adiabatic_evolve: not converged to " + std::to_string(tol) +
                           " between " + std::to_string(cur.steps / 2) + " and " +
                           std::to_string(cur.steps) + " steps");
    }
    cur.steps *= 2;
    StateVector next = adiabatic_evolve(h0, h, cur, initial);
    double s = 0.0;
    for (std::size_t i = 0; i < next.dim(); ++i) s += std::norm(next[i] - prev[i]);
    if (std::sqrt(s) < tol) {
      if (steps_used) *steps_used = cur.steps;
      return next;
    }
    prev = std::move(next);
  }
}

LeakageFit adiabatic_leakage_scaling(const ComplexMatrix& h0, const ComplexMatrix& h,
                                     const BandStructure& bands, std::size_t band,
                                     const std::vector<double>& times,
                                     const AdiabaticSchedule& shape, const StateVector& initial) {
  if (band >= bands.count) throw InvalidInput("adiabatic_leakage_scaling: band out of range");
  if (times.empty()) throw InvalidInput("adiabatic_leakage_scaling: no times given");
  const auto spec = eigh(h);
  const ComplexMatrix proj = exact_projectors(spec, bands).at(band);

  LeakageFit fit;
  for (double t : times) {
    if (!(t > 0.0)) throw InvalidInput("adiabatic_leakage_scaling: times must be positive");
    AdiabaticSchedule s = shape;
    s.total_time = t;
    // Enough steps to resolve the slowest phase rotation before refinement.
    s.steps = std::max(shape.steps, static_cast<int>(std::ceil(4.0 * t)));
    int used = 0;
    const StateVector psi = adiabatic_evolve_converged(h0, h, s, initial, 1e-8, 1 << 22, &used);
    const auto pp = fqsvt::apply(proj, psi.amplitudes());
    double leak = 0.0;
    for (std::size_t i = 0; i < pp.size(); ++i) leak += std::norm(pp[i] - psi[i]);
    fit.points.push_back({t, std::sqrt(leak), used});
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (const LeakagePoint& p : fit.points) {
    if (p.leakage >= 1e-9) {
      xs.push_back(std::log(p.time));
      ys.push_back(std::log(p.leakage));
    }
  }
  if (xs.size() < 2) {
    fit.degenerate = true;
    return fit;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  fit.constant = std::exp(intercept);
  double r = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + fit.slope * xs[i]);
    r += e * e / n;
  }
  fit.residual = std::sqrt(r);
  return fit;
}

double adiabatic_time_estimate(double paths, double min_gap, double eps) {
  if (!(paths > 0.0) || !(min_gap > 0.0) || !(eps > 0.0)) {
    throw InvalidInput("adiabatic_time_estimate: arguments must be positive");
  }
  return std::pow(paths, 1.5) / (eps * min_gap * min_gap * min_gap);
}

}  // namespace fqsvt
