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

// Comparators without feedforward: probabilistic projection, a memoryless
// random walk down the bisection tree, and adiabatic band following.

#include <cstdint>
#include <functional>
#include <vector>

#include "fqsvt/bands.hpp"

namespace fqsvt {

enum class DepthStrategy { kRepeat, kAmplify };

/// Expected query depth sum_j q_j / q_j (repeat) or sum_j sqrt(q_j)
/// (amplify) over nonzero q_j. q must be nonnegative and sum to 1 to 1e-10.
double prob_projection_depth(const std::vector<double>& q, DepthStrategy strategy);

struct RandomWalkEstimate {
  double success = 0.0;
  double stderr_ = 0.0;  // binomial standard error
  long trials = 0;
  double queries_per_trial = 0.0;  // one query per tree level visited
  /// queries_per_trial / success; infinite when no trial succeeded.
  double queries_to_success = 0.0;
};

/// Monte Carlo over Haar-random inputs. Every level applies the bisection
/// projector of the range the runner believes it is in; the runner never
/// sees the outcome and picks one half uniformly. The walk stops once the
/// picked half is a single band. A trial succeeds if the final state has
/// weight >= 1 - 1e-9 on one band inside the last projected range. Requires
/// trials >= 1000.
RandomWalkEstimate random_walk_success(const BandStructure& bands, const HermitianSpectrum& spec,
                                       long trials, std::uint64_t seed);

struct AdiabaticSchedule {
  std::function<double(double)> gamma = [](double s) { return s; };
  double total_time = 1.0;  // negative values run the evolution backwards
  int steps = 1000;

  /// gamma(0) = 0, gamma(1) = 1 exactly and nondecreasing on the step grid.
  void validate() const;
};

/// psi <- exp(-i dt H~(s_mid)) psi per step, H~(s) = (1 - gamma) H0 + gamma H.
StateVector adiabatic_evolve(const ComplexMatrix& h0, const ComplexMatrix& h,
                             const AdiabaticSchedule& sched, const StateVector& initial);

/// || psi(steps) - psi(2 steps) ||
double adiabatic_step_error(const ComplexMatrix& h0, const ComplexMatrix& h,
                            const AdiabaticSchedule& sched, const StateVector& initial);

/// Doubles the step count until halving the step moves the result by less
/// than `tol`, starting from sched.steps. Throws NumericalError naming both
/// resolutions if `max_steps` is reached first.
StateVector adiabatic_evolve_converged(const ComplexMatrix& h0, const ComplexMatrix& h,
                                       const AdiabaticSchedule& sched, const StateVector& initial,
                                       double tol = 1e-8, int max_steps = 1 << 22,
                                       int* steps_used = nullptr);

struct LeakagePoint {
  double time = 0.0;
  double leakage = 0.0;
  int steps = 0;
};

struct LeakageFit {
  std::vector<LeakagePoint> points;
  double slope = 0.0;      // d log leakage / d log T
  double constant = 0.0;   // exp(intercept)
  double residual = 0.0;   // rms of the log-log fit
  bool degenerate = false; // every leakage below 1e-9
};

/// Leakage || P_j psi(T) - psi(T) || out of band j of H for each T, and a
/// least-squares line through (log T, log leakage). `shape` provides gamma;
/// its time and steps are replaced per T.
LeakageFit adiabatic_leakage_scaling(const ComplexMatrix& h0, const ComplexMatrix& h,
                                     const BandStructure& bands, std::size_t band,
                                     const std::vector<double>& times,
                                     const AdiabaticSchedule& shape, const StateVector& initial);

/// M^{3/2} / (eps minGap^3), an order estimate without constants.
double adiabatic_time_estimate(double paths, double min_gap, double eps);

}  // namespace fqsvt
