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

#include <gtest/gtest.h>

#include <cmath>

#include "fqsvt/baselines.hpp"

namespace {

using namespace fqsvt;

TEST(ProbProjection, UniformAmplifyIsSqrtL) {
  for (int l : {4, 16, 64}) {
    std::vector<double> q(static_cast<std::size_t>(l), 1.0 / l);
    EXPECT_DOUBLE_EQ(prob_projection_depth(q, DepthStrategy::kAmplify), std::sqrt(double(l)));
    EXPECT_DOUBLE_EQ(prob_projection_depth(q, DepthStrategy::kRepeat), double(l));
  }
}

TEST(ProbProjection, SmallCases) {
  EXPECT_EQ(prob_projection_depth({1.0}, DepthStrategy::kAmplify), 1.0);
  EXPECT_EQ(prob_projection_depth({1.0}, DepthStrategy::kRepeat), 1.0);
  EXPECT_NEAR(prob_projection_depth({0.25, 0.75}, DepthStrategy::kAmplify), 0.5 + std::sqrt(0.75),
              1e-15);
  EXPECT_EQ(prob_projection_depth({0.5, 0.0, 0.5}, DepthStrategy::kRepeat), 2.0);
  EXPECT_THROW(prob_projection_depth({0.5, 0.6}, DepthStrategy::kRepeat), InvalidInput);
  EXPECT_THROW(prob_projection_depth({1.5, -0.5}, DepthStrategy::kRepeat), InvalidInput);
}

// N = 16 levels spread evenly over L bands.
struct Synthetic {
  HermitianSpectrum spec;
  BandStructure bands;
};

Synthetic synthetic(std::size_t l) {
  const std::size_t n = 16;
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = i * l / n;
    ev[i] = (b + 0.3 + 0.4 * double(i % (n / l)) / double(n / l)) / double(l);
  }
  std::vector<double> centers;
  for (std::size_t b = 1; b < l; ++b) centers.push_back(double(b) / double(l));
  Synthetic s;
  s.spec = eigh(ComplexMatrix::diagonal(ev));
  s.bands = bands_from_centers(s.spec.values, centers, 0.25 / double(l));
  check_band_assumption(s.spec.values, s.bands);
  return s;
}

TEST(RandomWalk, TwoBandsAlwaysSucceed) {
  const auto s = synthetic(2);
  const auto e = random_walk_success(s.bands, s.spec, 2000, 1);
  EXPECT_EQ(e.success, 1.0);
  EXPECT_EQ(e.queries_per_trial, 1.0);
}

TEST(RandomWalk, BoundTwoOverL) {
  double prev = 1.0;
  for (std::size_t l : {4u, 8u, 16u}) {
    const auto s = synthetic(l);
    const auto e = random_walk_success(s.bands, s.spec, 10000, 100 + l);
    EXPECT_LE(e.success, 2.0 / double(l) + 3 * e.stderr_) << "L=" << l;
    EXPECT_LT(e.success, prev);
    EXPECT_DOUBLE_EQ(e.queries_per_trial, std::log2(double(l)));
    EXPECT_NEAR(e.queries_to_success, e.queries_per_trial / e.success, 1e-12);
    prev = e.success;
  }
}

TEST(RandomWalk, RejectsFewTrials) {
  const auto s = synthetic(2);
  EXPECT_THROW(random_walk_success(s.bands, s.spec, 999, 1), InvalidInput);
}

TEST(RandomWalk, Deterministic) {
  const auto s = synthetic(8);
  EXPECT_EQ(random_walk_success(s.bands, s.spec, 1000, 7).success,
            random_walk_success(s.bands, s.spec, 1000, 7).success);
}

// -------------------------------------------------------------------------

ComplexMatrix rotated(const std::vector<double>& ev, double theta, std::uint64_t seed) {
  const auto g = random_hermitian(ev.size(), seed);
  const auto u = matfun(g, [&](double e) { return std::polar(1.0, -theta * e); });
  return u * ComplexMatrix::diagonal(ev) * u.adjoint();
}

StateVector eigvec_state(const HermitianSpectrum& s) { return StateVector(s.vectors.column(0)); }

double dist(const StateVector& a, const StateVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

TEST(Adiabatic, ConstantHamiltonian) {
  const auto h = random_hermitian(4, 3);
  const auto psi = haar_state(2, 4);
  AdiabaticSchedule s;
  s.total_time = 2.5;
  s.steps = 7;
  const auto out = adiabatic_evolve(h, h, s, psi);
  const auto want = matfun(h, [](double e) { return std::polar(1.0, -2.5 * e); }) * psi;
  EXPECT_LE(dist(out, want), 1e-12);
}

TEST(Adiabatic, ZeroTimeIsIdentity) {
  AdiabaticSchedule s;
  s.total_time = 0.0;
  const auto psi = haar_state(2, 5);
  EXPECT_EQ(dist(adiabatic_evolve(random_hermitian(4, 1), random_hermitian(4, 2), s, psi), psi),
            0.0);
}

TEST(Adiabatic, NormAndReversibility) {
  const auto h0 = random_hermitian(4, 6);
  const auto h = random_hermitian(4, 7);
  const auto psi = haar_state(2, 8);
  AdiabaticSchedule fwd;
  fwd.gamma = [](double s) { return s * s; };
  fwd.total_time = 30.0;
  fwd.steps = 3000;
  const auto out = adiabatic_evolve(h0, h, fwd, psi);
  EXPECT_NEAR(out.norm(), 1.0, 1e-10);
  // H~_rev(s) = H~(1 - s): swap the endpoints and use 1 - gamma(1 - s).
  AdiabaticSchedule rev = fwd;
  rev.gamma = [](double s) { return 1.0 - (1.0 - s) * (1.0 - s); };
  rev.total_time = -30.0;
  EXPECT_LE(dist(adiabatic_evolve(h, h0, rev, out), psi), 1e-8);
}

TEST(Adiabatic, ScheduleValidation) {
  AdiabaticSchedule s;
  s.gamma = [](double x) { return 0.5 * x; };
  EXPECT_THROW(s.validate(), InvalidInput);
  s.gamma = [](double x) { return x < 0.5 ? 2 * x : (x == 1.0 ? 1.0 : 0.5); };
  EXPECT_THROW(s.validate(), InvalidInput);
  s.gamma = [](double x) { return x; };
  s.steps = 0;
  EXPECT_THROW(s.validate(), InvalidInput);
}

TEST(Adiabatic, ConvergenceFailureNamesResolutions) {
  const auto h0 = random_hermitian(4, 6);
  const auto h = random_hermitian(4, 7);
  AdiabaticSchedule s;
  s.total_time = 50.0;
  s.steps = 4;
  try {
    adiabatic_evolve_converged(h0, h, s, haar_state(2, 1), 1e-8, 64);
    FAIL() << "expected failure";
  } catch (const NumericalError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("32"), std::string::npos) << what;
    EXPECT_NE(what.find("64"), std::string::npos) << what;
  }
  int used = 0;
  adiabatic_evolve_converged(h0, h, s, haar_state(2, 1), 1e-8, 1 << 22, &used);
  EXPECT_LE(adiabatic_step_error(h0, h, AdiabaticSchedule{s.gamma, s.total_time, used}, haar_state(2, 1)),
            1e-8);
}

TEST(Adiabatic, AvoidedCrossingLeakageFalls) {
  const ComplexMatrix h0{{0.2, 0.0}, {0.0, 0.8}};
  const ComplexMatrix h{{0.8, 0.1}, {0.1, 0.2}};
  const auto spec = eigh(h);
  const auto bands = bands_from_centers(spec.values, {0.5}, 0.3);
  AdiabaticSchedule shape;
  shape.steps = 64;
  const auto fit =
      adiabatic_leakage_scaling(h0, h, bands, 0, {10, 40, 160}, shape, StateVector::basis(1, 0));
  for (std::size_t i = 1; i < fit.points.size(); ++i) {
    EXPECT_LT(fit.points[i].leakage, fit.points[i - 1].leakage);
  }
}

TEST(Adiabatic, LeakageScalesAsInverseTime) {
  const auto h0 = ComplexMatrix::diagonal(std::vector<double>{0.1, 0.15, 0.8, 0.85});
  AdiabaticSchedule shape;
  shape.gamma = [](double s) { return s * s; };
  shape.steps = 64;
  double c_wide = 0.0;
  for (double gap : {0.5, 0.3}) {
    const auto h = rotated({0.15, 0.2, 0.2 + gap, 0.25 + gap}, 0.3, 11);
    const auto bands = bands_from_centers(eigh(h).values, {0.2 + gap / 2}, 0.99 * gap);
    const auto fit = adiabatic_leakage_scaling(h0, h, bands, 0, {50, 100, 200, 400}, shape,
                                               StateVector::basis(2, 0));
    ASSERT_FALSE(fit.degenerate);
    EXPECT_NEAR(fit.slope, -1.0, 0.2) << "gap " << gap;
    if (c_wide > 0.0) {
      EXPECT_GT(fit.constant, c_wide);
    }
    c_wide = fit.constant;
  }
}

TEST(Adiabatic, GappedTrivialInstanceHasNoLeakage) {
  const auto h = rotated({0.1, 0.2, 0.7, 0.8}, 0.5, 3);
  const auto spec = eigh(h);
  const auto bands = bands_from_centers(spec.values, {0.45}, 0.4);
  AdiabaticSchedule shape;
  shape.steps = 16;
  const auto fit = adiabatic_leakage_scaling(h, h, bands, 0, {5, 10}, shape, eigvec_state(spec));
  EXPECT_TRUE(fit.degenerate);
  for (const auto& p : fit.points) EXPECT_LE(p.leakage, 1e-9);
}

TEST(Adiabatic, TimeEstimate) {
  EXPECT_EQ(adiabatic_time_estimate(1, 1, 1), 1.0);
  EXPECT_NEAR(adiabatic_time_estimate(2, 0.3, 0.1) / adiabatic_time_estimate(1, 0.3, 0.1),
              std::pow(2.0, 1.5), 1e-12);
  EXPECT_NEAR(adiabatic_time_estimate(4, 0.1, 0.01), 8e5, 1e-6);
  EXPECT_THROW(adiabatic_time_estimate(0, 1, 1), InvalidInput);
}

}  // namespace
