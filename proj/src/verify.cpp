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

// `fqsvt verify`: the check battery behind the acceptance criteria, run
// against the library's own closed forms and spectral oracles.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fqsvt/baselines.hpp"
#include "fqsvt/blockenc.hpp"
#include "fqsvt/cli.hpp"
#include "fqsvt/polyapprox.hpp"
#include "fqsvt/qsvt.hpp"

namespace fqsvt::cli {

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Battery {
  bool quick = false;
  std::uint64_t seed = 0;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

ComplexMatrix psd(const std::vector<double>& ev, std::uint64_t seed) {
  const auto u = haar_unitary(ev.size(), seed);
  return u * ComplexMatrix::diagonal(std::span<const double>(ev)) * u.adjoint();
}

std::vector<double> uniform_values(std::size_t n, CounterRng& rng) {
  std::vector<double> ev(n);
  for (auto& e : ev) e = rng.uniform();
  return ev;
}

PhaseFactorSet symmetric_su2(int d, CounterRng& rng) {
  std::vector<double> v(static_cast<std::size_t>(d) + 1);
  for (auto& x : v) x = (2.0 * rng.uniform() - 1.0) * kPi;
  for (int j = 0; j <= d; ++j) v[static_cast<std::size_t>(d - j)] = v[static_cast<std::size_t>(j)];
  return PhaseFactorSet(v, Convention::kSu2);
}

double vec_dist(std::span<const cplx> a, std::span<const cplx> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

const BranchNode* leaf(const BranchTree& t, std::vector<int> record) {
  for (const BranchNode* n : t.leaves()) {
    if (n->record == record) return n;
  }
  throw NumericalError("verify: missing leaf " + record_string(record));
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome qsp_round_trip(const Battery& b) {
  CounterRng rng(derive_seed(b.seed, 101));
  double norm_res = 0.0, imag = 0.0;
  const int count = b.quick ? 40 : 200;
  for (int i = 0; i < count; ++i) {
    const auto psi = symmetric_su2(1 + static_cast<int>(rng.below(30)), rng);
    const auto pq = extract_pq(psi);
    norm_res = std::max(norm_res, pq.normalization_residual(401));
    imag = std::max(imag, pq.q_imag_max());
  }
  return {norm_res <= 1e-10 && imag <= 1e-10,
          "normalization " + fmt(norm_res) + "; Im Q " + fmt(imag) + "; " + std::to_string(count) + " sets"};
}

Outcome comprehensive_qsvt(const Battery& b) {
  CounterRng rng(derive_seed(b.seed, 102));
  double worst = 0.0;
  const int count = b.quick ? 12 : 50;
  for (int i = 0; i < count; ++i) {
    const std::size_t n = std::size_t{2} << (i % 3);
    const int d = 1 + i % 12;
    const auto h = psd(uniform_values(n, rng), rng.next_u64());
    const auto phi = to_circuit(symmetric_su2(d, rng));
    const auto full = assemble_full(dilate_hermitian(h), phi);
    worst = std::max(worst, max_abs_diff(full, predicted_blocks(h, phi).full()));
  }
  return {worst <= 1e-9, "max block error " + fmt(worst)};
}

Outcome bot_state(const Battery& b) {
  CounterRng rng(derive_seed(b.seed, 103));
  double garbage = 0.0, identity = 0.0;
  const int count = b.quick ? 10 : 40;
  for (int i = 0; i < count; ++i) {
    const std::size_t n = std::size_t{2} << (i % 3);
    const int d = 1 + i % 12;
    const auto h = psd(uniform_values(n, rng), rng.next_u64());
    const auto su2 = symmetric_su2(d, rng);
    const auto phi = to_circuit(su2);
    const auto enc = dilate_hermitian(h);
    const auto input = haar_state(static_cast<unsigned>(std::countr_zero(n)), rng.next_u64());
    const auto full = assemble_full(enc, phi);
    const auto out = full * embed_system_state(input, enc.ancilla_dim());
    const auto g = strip_flagged_sector(out, n);
    garbage = std::max(garbage, vec_dist(g.amplitudes(), garbage_state(h, phi, input).amplitudes()));
    const auto pq = extract_pq(su2);
    const auto spec = eigh(h);
    const auto top = matfun(spec, [&](double x) { return pq.p_re()(x); }) * input;
    const auto im = matfun(spec, [&](double x) { return pq.p_im()(x); }) * input;
    const auto qre = matfun(spec, [&](double x) { return std::sqrt(1 - x * x) * pq.q_re()(x); }) * input;
    identity = std::max(identity, std::abs(top.norm_squared() + im.norm_squared() + qre.norm_squared() - 1.0));
  }
  return {garbage <= 1e-9 && identity <= 1e-10,
          "garbage error " + fmt(garbage) + "; norm identity " + fmt(identity)};
}

Outcome one_fqsvt_exact(const Battery& b) {
  CounterRng rng(derive_seed(b.seed, 104));
  double worst = 0.0;
  const int count = b.quick ? 40 : 200;
  for (int i = 0; i < count; ++i) {
    const std::size_t n = std::size_t{2} << (i % 3);
    const int d = 1 + static_cast<int>(rng.below(30));
    const auto h = psd(uniform_values(n, rng), rng.next_u64());
    const auto su2 = symmetric_su2(d, rng);
    const auto input = haar_state(static_cast<unsigned>(std::countr_zero(n)), rng.next_u64());
    const auto tree = run_1fqsvt(dilate_hermitian(h), to_circuit(su2), input);
    const auto f = extract_pq(su2).p_re();
    const auto spec = eigh(h);
    const auto a = matfun(spec, [&](double x) { return f(x) * f(x); }) * input;
    const auto c = matfun(spec, [&](double x) { return -(1 - f(x) * f(x)); }) * input;
    worst = std::max(worst, vec_dist(system_part(leaf(tree, {0, 0})->state, n).amplitudes(), a.amplitudes()));
    worst = std::max(worst, vec_dist(system_part(leaf(tree, {1, 0})->state, n).amplitudes(), c.amplitudes()));
  }
  // f(x) = x at E = 0.6.
  const auto h = psd({0.6, 0.2}, derive_seed(b.seed, 105));
  const auto spec = eigh(h);
  const PhaseFactorSet phi({kPi / 4, -kPi / 4}, Convention::kCircuit);
  const auto tree = run_1fqsvt(dilate_hermitian(h), phi, StateVector(spec.vectors.column(1)));
  const double p00 = leaf(tree, {0, 0})->probability;
  const double p10 = leaf(tree, {1, 0})->probability;
  const double pf = leaf(tree, {0, 1})->probability + leaf(tree, {1, 1})->probability;
  const double ex = std::max({std::abs(p00 - 0.1296), std::abs(p10 - 0.4096), std::abs(pf - 0.4608)});
  return {worst <= 1e-9 && ex <= 1e-9, "branch error " + fmt(worst) + "; E=0.6 example error " + fmt(ex)};
}

Outcome failure_bound(const Battery& b) {
  const double eps = 1e-3;
  const FilterSpec fs{0.5, 0.2, eps};
  FilterOptions fo;
  fo.scale = 1.0 - eps / 4;
  const auto phi = to_circuit(synthesize_symmetric(heaviside_filter(fs, fo)));
  CounterRng rng(derive_seed(b.seed, 106));
  double worst = 0.0;
  for (int i = 0; i < (b.quick ? 5 : 20); ++i) {
    std::vector<double> ev(8);
    for (auto& e : ev) e = rng.uniform() < 0.5 ? 0.4 * rng.uniform() : 0.6 + 0.4 * rng.uniform();
    const auto tree = run_1fqsvt(dilate_hermitian(psd(ev, rng.next_u64())), phi, haar_state(3, rng.next_u64()));
    worst = std::max(worst, leaf(tree, {0, 1})->probability + leaf(tree, {1, 1})->probability);
  }
  const double bound = 2 * std::sqrt(2.0) * eps;
  return {worst <= bound, "max P(s2=1) " + fmt(worst) + " vs " + fmt(bound)};
}

Outcome projection_bounds(const Battery& b) {
  const double eps = 1e-2;
  std::ostringstream detail;
  bool pass = true;
  for (std::size_t l : {std::size_t{2}, std::size_t{4}, std::size_t{8}}) {
    if (b.quick && l == 8) continue;
    const auto syn = synthetic_bands(16, l, 0.5 / static_cast<double>(l));
    const auto u = haar_unitary(16, derive_seed(b.seed, 107 + l));
    const auto h = u * ComplexMatrix::diagonal(std::span<const double>(syn.values)) * u.adjoint();
    const auto spec = eigh(h);
    const auto bands = bands_from_centers(spec.values, syn.bands.centers, syn.bands.delta);
    const double re = round_epsilon(eps, l);
    const MultibandProjector proj(dilate_hermitian(h), bands, re);
    const auto ops = proj.kraus();
    const double dist = channel_distance(operators_of(ops), exact_projectors(spec, bands), spec.vectors, 16,
                                         derive_seed(b.seed, 108));
    const double bound = 4.0 * l * band_rounds(l) * re;
    const long want = 2L * band_rounds(l) * proj.degree();
    bool exact = proj.query_budget() == want;
    for (const auto& k : ops) exact = exact && k.queries == want;
    pass = pass && dist <= bound && exact;
    detail << "L" << l << " proxy " << fmt(dist) << "/" << fmt(bound) << (exact ? " q=" : " q!=") << want << "; ";
  }
  std::vector<double> lx, ly;
  for (double delta : {0.4, 0.2, 0.1, 0.05}) {
    lx.push_back(std::log(delta));
    ly.push_back(std::log(heaviside_filter(FilterSpec{0.5, delta, 1e-3}).degree()));
  }
  const double s_delta = fit_slope(lx, ly);
  lx.clear();
  ly.clear();
  for (double e : {1e-2, 1e-3, 1e-4}) {
    lx.push_back(std::log(std::log(1.0 / e)));
    ly.push_back(std::log(heaviside_filter(FilterSpec{0.5, 0.1, e}).degree()));
  }
  const double s_eps = fit_slope(lx, ly);
  pass = pass && std::abs(s_delta + 1.0) <= 0.15 && s_eps <= 1.2;
  detail << "slope vs delta " << std::setprecision(3) << s_delta << "; slope vs log(1/eps) " << s_eps;
  return {pass, detail.str()};
}

Outcome random_walk(const Battery& b) {
  std::ostringstream detail;
  bool pass = true;
  for (std::size_t l : {std::size_t{2}, std::size_t{4}, std::size_t{8}, std::size_t{16}}) {
    const auto syn = synthetic_bands(16, l, 0.5 / static_cast<double>(l));
    const auto spec = eigh(ComplexMatrix::diagonal(std::span<const double>(syn.values)));
    const auto est = random_walk_success(syn.bands, spec, b.quick ? 1000 : 10000, derive_seed(b.seed, 109 + l));
    const bool ok = est.success <= 2.0 / static_cast<double>(l) + 3 * est.stderr_;
    pass = pass && ok;
    detail << "L" << l << " " << std::setprecision(4) << est.success << (ok ? " " : "! ");
  }
  return {pass, detail.str()};
}

Outcome amplify_depth(const Battery&) {
  double worst = 0.0;
  for (std::size_t l : {std::size_t{4}, std::size_t{16}, std::size_t{64}}) {
    const std::vector<double> q(l, 1.0 / static_cast<double>(l));
    worst = std::max(worst, std::abs(prob_projection_depth(q, DepthStrategy::kAmplify) -
                                     std::sqrt(static_cast<double>(l))));
  }
  return {worst <= 1e-12, "max |depth - sqrt L| " + fmt(worst)};
}

// Fixed instance, independent of the run seed.
Outcome adiabatic(const Battery&) {
  const auto h0 = ComplexMatrix::diagonal(std::vector<double>{0.1, 0.15, 0.8, 0.85});
  const auto g = random_hermitian(4, 11);
  const auto u = matfun(g, [](double e) { return std::polar(1.0, -0.3 * e); });
  const auto h = u * ComplexMatrix::diagonal(std::vector<double>{0.15, 0.2, 0.7, 0.75}) * u.adjoint();
  const auto bands = bands_from_centers(eigh(h).values, {0.45}, 0.49);
  AdiabaticSchedule shape;
  shape.gamma = [](double s) { return s * s; };
  shape.steps = 64;
  const auto fit = adiabatic_leakage_scaling(h0, h, bands, 0, {50, 100, 200, 400}, shape, StateVector::basis(2, 0));
  std::ostringstream d;
  d << "slope " << std::setprecision(4) << fit.slope << "; rms " << fmt(fit.residual);
  return {!fit.degenerate && std::abs(fit.slope + 1.0) <= 0.2, d.str()};
}

Outcome gmon(const Battery& b) {
  const GmonModel m = GmonModel::desk_scale();
  const auto labels = band_labels(m);
  // The four listed groups.
  auto idx = [&](int a, int c) { return fock_index(m, {a, c}); };
  bool listing = true;
  const std::vector<std::vector<std::pair<int, int>>> groups = {
      {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {{0, 2}, {2, 0}, {2, 1}, {1, 2}}, {{2, 2}}, {{0, 3}, {3, 0}, {3, 1}, {1, 3}}};
  for (std::size_t k = 0; k < groups.size(); ++k) {
    std::vector<std::size_t> want;
    for (auto [a, c] : groups[k]) want.push_back(idx(a, c));
    std::sort(want.begin(), want.end());
    listing = listing && labels.members(k) == want;
  }
  int agree = 0;
  const int draws = b.quick ? 5 : 20;
  for (int s = 0; s < draws; ++s) {
    const GmonModel p = perturbed(m, derive_seed(b.seed, 111 + static_cast<std::uint64_t>(s)));
    const auto n = normalize_for_qsvt(build_h0(p) + build_h1(p), 0.05);
    const auto spec = eigh(n.h);
    const auto bands = detect_bands(spec.values, 0.5 * p.eta / n.map.scale);
    agree += grouping_mismatch(band_labels(p), dominant_bands(band_labels(p), spec), bands).empty() ? 1 : 0;
  }
  // Sampled claimed bands against exact weights.
  const auto h = normalize_for_qsvt(build_h0(m) + build_h1(m), 0.05).h;
  const auto spec = eigh(h);
  const auto bands = detect_bands_count(spec.values, labels.distinct().size());
  const MultibandProjector proj(dilate_hermitian(h), bands, round_epsilon(1e-2, bands.count));
  const auto input = haar_state(4, derive_seed(b.seed, 112));
  std::vector<double> q(bands.count, 0.0);
  for (std::size_t j = 0; j < bands.count; ++j) {
    for (std::size_t i : bands.bands[j]) q[j] += std::norm(inner(spec.vectors.column(i), input.amplitudes()));
  }
  const int trials = b.quick ? 200 : 1000;
  std::vector<int> hist(bands.count, 0);
  for (int t = 0; t < trials; ++t) {
    ++hist[std::min(claimed_band(proj.sample(input, derive_seed(b.seed ^ 0x5a5a, static_cast<std::uint64_t>(t))).record),
                    bands.count - 1)];
  }
  double max_z = 0.0;
  for (std::size_t j = 0; j < bands.count; ++j) {
    const double sigma = std::sqrt(q[j] * (1 - q[j]) / trials);
    const double emp = static_cast<double>(hist[j]) / trials;
    max_z = std::max(max_z, sigma > 0 ? std::abs(emp - q[j]) / sigma : (hist[j] == 0 ? 0.0 : INFINITY));
  }
  std::ostringstream d;
  d << "listing " << (listing ? "ok" : "MISMATCH") << "; detect agrees " << agree << "/" << draws
    << "; max |z| " << std::setprecision(3) << max_z;
  return {listing && agree == draws && max_z <= 3.0, d.str()};
}

}  // namespace

int cmd_verify(const json& config, const Context& ctx) {
  ConfigObject o(config, "verify");
  Battery b;
  b.quick = o.boolean("quick", false);
  b.seed = ctx.seed;
  std::vector<int> only;
  if (o.has("criteria")) {
    for (double c : o.numbers("criteria")) {
      if (c < 1 || c > 10 || c != std::floor(c)) throw ConfigError("config: verify.criteria entries must be 1..10");
      only.push_back(static_cast<int>(c));
    }
  }
  o.finish();
  begin_output(ctx, "verify", config);

  const std::vector<std::pair<std::string, std::function<Outcome(const Battery&)>>> checks = {
      {"QSP round-trip", qsp_round_trip},
      {"comprehensive QSVT blocks", comprehensive_qsvt},
      {"garbage state", bot_state},
      {"1-FQSVT exactness", one_fqsvt_exact},
      {"1-FQSVT failure bound", failure_bound},
      {"multi-band projection", projection_bounds},
      {"random-walk success", random_walk},
      {"amplified depth", amplify_depth},
      {"adiabatic leakage", adiabatic},
      {"gmon bands", gmon}};
  std::ostringstream sink;
  std::ostream& out = ctx.report ? *ctx.report : sink;
  CsvWriter csv(ctx.out / "verify.csv",
                {"criterion [id]", "name [label]", "passed [bool]", "seconds [s]", "detail [text]"});
  bool all = true;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = checks[i].second(b);
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && r.pass;
    std::string detail = r.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    out << (r.pass ? "[PASS] " : "[FAIL] ") << std::setw(2) << id << "  " << std::left << std::setw(28)
        << checks[i].first << std::right << detail << "\n";
    csv.cell(id).cell(checks[i].first).cell(std::string(r.pass ? "true" : "false")).cell(secs).cell(detail).end_row();
  }
  return all ? kExitOk : kExitNumerical;
}

}  // namespace fqsvt::cli
