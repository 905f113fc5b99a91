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

#include "fqsvt/cli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fqsvt/baselines.hpp"
#include "fqsvt/blockenc.hpp"
#include "fqsvt/polyapprox.hpp"

namespace fqsvt::cli {

namespace {

std::ostream& logger(const Context& ctx) {
  static std::ostringstream sink;
  if (ctx.log) return *ctx.log;
  sink.str("");
  return sink;
}

}  // namespace

void begin_output(const Context& ctx, const std::string& command, const json& config) {
  std::filesystem::create_directories(ctx.out);
  write_json(ctx.out / "manifest.json",
             json{{"command", command}, {"seed", ctx.seed}, {"config", config}});
}

namespace {

// Re-labels a precondition failure raised while interpreting the config.
template <class F>
auto as_config(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError("config: " + where + ": " + e.what());
  }
}

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

SynthesisOptions parse_synthesis(ConfigObject& parent) {
  SynthesisOptions so;
  if (!parent.has("synthesis")) return so;
  ConfigObject o = parent.object("synthesis");
  so.tol = o.number("tol", so.tol);
  so.min_margin = o.number("min_margin", so.min_margin);
  so.max_iterations = static_cast<int>(o.integer("max_iterations", so.max_iterations));
  o.finish();
  if (!(so.tol > 0.0) || !(so.min_margin > 0.0) || so.max_iterations < 1) {
    throw ConfigError("config: " + o.where() + " values must be positive");
  }
  return so;
}

void write_history(const std::filesystem::path& path, const std::vector<double>& history) {
  CsvWriter csv(path, {"iteration [count]", "residual [max abs at nodes]"});
  for (std::size_t i = 0; i < history.size(); ++i) csv.cell(i).cell(history[i]).end_row();
}

// ---------------------------------------------------------------------------
// project: model, bands and input resolution

struct Model {
  std::string kind;
  ComplexMatrix h;  // spectrum inside [0, 1]
  std::optional<BandStructure> native_bands;
  std::optional<GmonModel> gmon;
  std::optional<AffineMap> map;
};

Model parse_model(ConfigObject o, std::uint64_t seed) {
  Model m;
  m.kind = o.string("type");
  if (m.kind == "synthetic") {
    const long count = o.integer("L");
    const long levels = o.integer("levels", 16);
    if (count < 1 || levels < count || levels > 256 || !power_of_two(static_cast<std::size_t>(levels))) {
      throw ConfigError("config: " + o.where() + " needs 1 <= L <= levels, levels a power of two <= 256");
    }
    const double gap = o.number("gap", 0.5 / static_cast<double>(count));
    const std::string basis = o.string("basis", "haar");
    o.finish();
    if (basis != "haar" && basis != "diagonal") {
      throw ConfigError("config: " + o.where() + ".basis must be \"haar\" or \"diagonal\"");
    }
    const auto syn = as_config(o.where(), [&] {
      return synthetic_bands(static_cast<std::size_t>(levels), static_cast<std::size_t>(count), gap);
    });
    m.h = ComplexMatrix::diagonal(std::span<const double>(syn.values));
    if (basis == "haar") {
      const auto u = haar_unitary(syn.values.size(), derive_seed(seed, 1));
      m.h = u * m.h * u.adjoint();
    }
    m.native_bands = syn.bands;
  } else if (m.kind == "matrix") {
    m.h = matrix_from_json(o.raw("matrix"), o.where() + ".matrix");
    const bool normalize = o.has("normalize_margin");
    const double margin = o.number("normalize_margin", 0.0);
    o.finish();
    if (!m.h.is_square() || !power_of_two(m.h.rows())) {
      throw ConfigError("config: " + o.where() + ".matrix must be square with power-of-two size");
    }
    as_config(o.where(), [&] { require_hermitian(m.h, 1e-12 * std::max(1.0, m.h.max_abs())); });
    if (normalize) {
      const auto n = as_config(o.where(), [&] { return normalize_for_qsvt(m.h, margin); });
      m.h = n.h;
      m.map = n.map;
    } else {
      const auto spec = eigh(m.h);
      if (spec.values.front() < 0.0 || spec.values.back() > 1.0) {
        throw ConfigError("config: " + o.where() +
                          " spectrum leaves [0, 1]; set normalize_margin to rescale");
      }
    }
  } else if (m.kind == "gmon") {
    GmonModel g = o.has("gmon") ? gmon_from_json(o.raw("gmon"), o.where() + ".gmon")
                                : GmonModel::desk_scale();
    const double margin = o.number("margin", 0.05);
    const bool noise = o.boolean("noise", false);
    o.finish();
    if (noise) g = perturbed(g, derive_seed(seed, 5));
    if (!power_of_two(g.dim())) {
      throw ConfigError("config: " + o.where() + ": Fock dimension " + std::to_string(g.dim()) +
                        " is not a power of two");
    }
    const auto n = as_config(o.where(), [&] { return normalize_for_qsvt(build_h0(g) + build_h1(g), margin); });
    m.h = n.h;
    m.map = n.map;
    m.gmon = g;
  } else {
    throw ConfigError("config: " + o.where() + ".type must be synthetic, matrix or gmon");
  }
  return m;
}

BandStructure parse_bands(ConfigObject* o, const Model& m, const std::vector<double>& values) {
  if (o == nullptr) {
    if (m.native_bands) return *m.native_bands;
    if (m.gmon) return detect_bands_count(values, band_labels(*m.gmon).distinct().size());
    throw ConfigError("config: project.bands is required for a matrix model");
  }
  const std::string method = o->string("method");
  BandStructure b;
  if (method == "detect") {
    const double gap = o->number("min_gap");
    o->finish();
    b = as_config(o->where(), [&] { return detect_bands(values, gap); });
  } else if (method == "count") {
    const long count = o->integer("count");
    o->finish();
    if (count < 1 || static_cast<std::size_t>(count) > values.size()) {
      throw ConfigError("config: " + o->where() + ".count must lie in [1, N]");
    }
    b = as_config(o->where(), [&] { return detect_bands_count(values, static_cast<std::size_t>(count)); });
  } else if (method == "centers") {
    const auto centers = o->numbers("centers");
    const double delta = o->number("delta");
    o->finish();
    b = as_config(o->where(), [&] { return bands_from_centers(values, centers, delta); });
  } else {
    throw ConfigError("config: " + o->where() + ".method must be detect, count or centers");
  }
  return b;
}

StateVector parse_input(ConfigObject* o, const Model& m, const HermitianSpectrum& spec,
                        std::uint64_t seed) {
  const std::size_t n = spec.dim();
  const auto qubits = static_cast<unsigned>(std::countr_zero(n));
  const std::string type = o ? o->string("type") : std::string("haar");
  std::vector<cplx> a(n);
  if (type == "haar") {
    if (o) o->finish();
    return haar_state(qubits, derive_seed(seed, 2));
  } else if (type == "basis") {
    const long index = o->integer("index");
    o->finish();
    if (index < 0 || static_cast<std::size_t>(index) >= n) {
      throw ConfigError("config: " + o->where() + ".index out of range");
    }
    return StateVector::basis(qubits, static_cast<std::size_t>(index));
  } else if (type == "fock") {
    const auto occ = o->numbers("occupations");
    o->finish();
    if (!m.gmon) throw ConfigError("config: " + o->where() + ": fock input needs a gmon model");
    std::vector<int> nocc;
    for (double x : occ) nocc.push_back(static_cast<int>(x));
    const std::size_t idx = as_config(o->where(), [&] { return fock_index(*m.gmon, nocc); });
    return StateVector::basis(qubits, idx);
  } else if (type == "eigen_uniform") {
    o->finish();
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t r = 0; r < n; ++r) a[r] += spec.vectors(r, c) / std::sqrt(double(n));
    }
  } else if (type == "amplitudes") {
    const json& data = o->raw("data");
    o->finish();
    if (!data.is_array() || data.size() != n) {
      throw ConfigError("config: " + o->where() + ".data needs N entries");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const json& e = data[i];
      if (e.is_number()) {
        a[i] = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        a[i] = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ConfigError("config: " + o->where() + ".data entries must be numbers or [re, im]");
      }
    }
  } else {
    throw ConfigError("config: input.type must be haar, basis, fock, eigen_uniform or amplitudes");
  }
  StateVector s(std::move(a));
  if (!(s.norm() > 1e-12)) throw ConfigError("config: input state has zero norm");
  return s.normalized();
}

std::vector<double> band_weights(const HermitianSpectrum& spec, const BandStructure& bands,
                                 const StateVector& psi) {
  std::vector<double> q(bands.count, 0.0);
  for (std::size_t b = 0; b < bands.count; ++b) {
    for (std::size_t i : bands.bands[b]) {
      const auto v = spec.vectors.column(i);
      q[b] += std::norm(inner(v, psi.amplitudes()));
    }
  }
  return q;
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_phases(const json& config, const Context& ctx) {
  ConfigObject o(config, "phases");
  FilterSpec spec{o.number("mu"), o.number("delta"), o.number("eps")};
  FilterOptions fo;
  fo.gridsize = static_cast<int>(o.integer("gridsize", fo.gridsize));
  fo.degree_cap = static_cast<int>(o.integer("degree_cap", fo.degree_cap));
  fo.min_degree = static_cast<int>(o.integer("min_degree", 0));
  fo.scale = o.number("scale", fo.scale);
  const SynthesisOptions so = parse_synthesis(o);
  o.finish();
  as_config("phases", [&] { spec.validate(); });
  if (fo.gridsize < 11) throw ConfigError("config: phases.gridsize must be >= 11");
  if (fo.degree_cap < 2 || fo.degree_cap > kFilterDegreeCap) {
    throw ConfigError("config: phases.degree_cap must lie in [2, " + std::to_string(kFilterDegreeCap) + "]");
  }
  if (fo.min_degree < 0) throw ConfigError("config: phases.min_degree must be >= 0");
  if (!(fo.scale > 0.0 && fo.scale <= 1.0)) throw ConfigError("config: phases.scale must lie in (0, 1]");
  begin_output(ctx, "phases", config);

  const ChebyshevSeries f = heaviside_filter(spec, fo);
  const FilterCertificate cert = certify_filter(f, spec, fo.gridsize);
  {
    CsvWriter csv(ctx.out / "certification.csv",
                  {"condition [label]", "margin [dimensionless]", "worst_x [dimensionless]", "passed [bool]"});
    csv.cell(std::string("stopband")).cell(cert.stopband_margin).cell(cert.stopband_worst_x)
        .cell(std::string(cert.stopband_ok() ? "true" : "false")).end_row();
    csv.cell(std::string("passband")).cell(cert.passband_margin).cell(cert.passband_worst_x)
        .cell(std::string(cert.passband_ok() ? "true" : "false")).end_row();
    csv.cell(std::string("bound")).cell(cert.bound_margin).cell(cert.bound_worst_x)
        .cell(std::string(cert.bound_ok() ? "true" : "false")).end_row();
  }

  SynthesisReport rep;
  std::optional<PhaseFactorSet> psi;
  try {
    psi = synthesize_symmetric(f, so, &rep);
  } catch (const SynthesisError& e) {
    write_history(ctx.out / "synthesis_history.csv", e.history());
    logger(ctx) << "phases: synthesis failed: " << e.what() << " (history in synthesis_history.csv)\n";
    return kExitNumerical;
  }
  write_history(ctx.out / "synthesis_history.csv", rep.residual_history);

  const QspPolynomialPair pq = extract_pq(*psi);
  double fit = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = -1.0 + i / 200.0;
    fit = std::max(fit, std::abs(pq.eval_p(x).real() - f(x)));
  }
  write_json(ctx.out / "phases.json",
             json{{"filter", {{"mu", spec.mu}, {"delta", spec.delta}, {"eps", spec.eps},
                              {"steepness", filter_steepness(spec)}, {"scale", fo.scale}}},
                  {"degree", f.degree()},
                  {"chebyshev", f.coeffs()},
                  {"su2", to_json(*psi)},
                  {"circuit", to_json(to_circuit(*psi))},
                  {"synthesis", {{"iterations", rep.iterations},
                                 {"residual", rep.residual},
                                 {"fit_max_error_401", fit},
                                 {"normalization_residual_401", pq.normalization_residual(401)}}},
                  {"certified", cert.passed()}});
  logger(ctx) << "phases: degree " << f.degree() << ", certification "
              << (cert.passed() ? "passed" : "FAILED") << "\n";
  return cert.passed() ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------------------

int cmd_project(const json& config, const Context& ctx) {
  ConfigObject o(config, "project");
  Model model = parse_model(o.object("model"), ctx.seed);
  const double eps = o.number("eps");
  const std::string mode = o.string("mode", "enumerate");
  const long trials = o.integer("trials", 1000);
  const long samples = o.integer("distance_samples", 32);
  MultibandOptions mo;
  mo.gridsize = static_cast<int>(o.integer("gridsize", mo.gridsize));
  mo.degree_cap = static_cast<int>(o.integer("degree_cap", mo.degree_cap));
  mo.synthesis = parse_synthesis(o);
  std::optional<ConfigObject> bands_cfg;
  if (o.has("bands")) bands_cfg.emplace(o.object("bands"));
  std::optional<ConfigObject> input_cfg;
  if (o.has("input")) input_cfg.emplace(o.object("input"));
  o.finish();
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("config: project.eps must lie in (0, 1)");
  if (mode != "enumerate" && mode != "sample") {
    throw ConfigError("config: project.mode must be \"enumerate\" or \"sample\"");
  }
  if (trials < 1 || samples < 0) throw ConfigError("config: project.trials must be >= 1, distance_samples >= 0");
  if (mo.gridsize < 11 || mo.degree_cap < 2 || mo.degree_cap > kFilterDegreeCap) {
    throw ConfigError("config: project.gridsize or degree_cap out of range");
  }

  const HermitianSpectrum spec = eigh(model.h);
  BandStructure bands = parse_bands(bands_cfg ? &*bands_cfg : nullptr, model, spec.values);
  const StateVector input = parse_input(input_cfg ? &*input_cfg : nullptr, model, spec, ctx.seed);
  // Offending eigenvalue and gap are named in the message; exit 2.
  check_band_assumption(spec.values, bands);
  begin_output(ctx, "project", config);

  const std::size_t count = bands.count;
  const double round_eps = round_epsilon(eps, count);
  const MultibandProjector proj(dilate_hermitian(model.h), bands, round_eps, mo);
  const std::vector<double> q = band_weights(spec, bands, input);
  const int ell = band_rounds(count);
  const double budget = 4.0 * static_cast<double>(count) * ell * round_eps;

  json summary{{"mode", mode},
               {"model", model.kind},
               {"N", spec.dim()},
               {"L", count},
               {"rounds", ell},
               {"degree", proj.degree()},
               {"eps", eps},
               {"round_eps", round_eps},
               {"query_budget", proj.query_budget()},
               {"bands", to_json(bands)},
               {"exact_band_weights", q}};
  if (model.map) summary["affine_map"] = {{"offset", model.map->offset}, {"scale", model.map->scale}};
  if (model.gmon) summary["gmon"] = to_json(*model.gmon);

  int code = kExitOk;
  if (mode == "enumerate") {
    const BranchTree tree = proj.enumerate(input);
    json tj = to_json(tree);
    write_json(ctx.out / "tree.json", tj);
    const auto ops = proj.kraus();
    json kj = json::array();
    for (const auto& k : ops) {
      kj.push_back(json{{"record", k.record},
                        {"claimed_band", claimed_band(k.record)},
                        {"failed", failed(k.record)},
                        {"queries", k.queries},
                        {"operator", to_json(k.op)}});
    }
    write_json(ctx.out / "kraus.json",
               json{{"completeness_residual", completeness_residual(ops)}, {"operators", kj}});
    const double dist = channel_distance(operators_of(ops), exact_projectors(spec, bands), spec.vectors,
                                         static_cast<int>(samples), derive_seed(ctx.seed, 4));
    long max_queries = 0;
    for (const BranchNode* n : tree.leaves()) max_queries = std::max(max_queries, n->queries);
    CsvWriter csv(ctx.out / "distance.csv",
                  {"L [bands]", "eps_global [trace norm]", "eps_round [sup norm]", "degree [1]",
                   "queries [block-encoding calls]", "channel_distance_proxy [trace norm]",
                   "bound [trace norm]"});
    csv.cell(count).cell(eps).cell(round_eps).cell(proj.degree()).cell(max_queries).cell(dist)
        .cell(budget).end_row();
    summary["channel_distance_proxy"] = dist;
    summary["distance_bound"] = budget;
    summary["max_leaf_queries"] = max_queries;
    summary["leaves"] = tree.leaves().size();
    if (dist > budget + 1e-12) {  // round-off allowance for L = 1
      logger(ctx) << "project: channel-distance proxy " << format_double(dist) << " exceeds bound "
                  << format_double(budget) << "\n";
      code = kExitNumerical;
    }
  } else {
    std::vector<long> hist(count, 0);
    long fails = 0;
    CsvWriter csv(ctx.out / "trajectories.csv",
                  {"trial [index]", "record [bits]", "claimed_band [band index]", "failed [bool]",
                   "queries [block-encoding calls]", "path_probability [probability]"});
    const std::uint64_t base = derive_seed(ctx.seed, 3);
    for (long t = 0; t < trials; ++t) {
      const Trajectory tr = proj.sample(input, derive_seed(base, static_cast<std::uint64_t>(t)));
      const std::size_t b = claimed_band(tr.record);
      const bool f = failed(tr.record);
      ++hist[std::min(b, count - 1)];
      fails += f ? 1 : 0;
      csv.cell(t).cell(record_string(tr.record)).cell(b).cell(std::string(f ? "true" : "false"))
          .cell(tr.queries).cell(tr.probability).end_row();
    }
    CsvWriter h(ctx.out / "histogram.csv",
                {"band [band index]", "count [trajectories]", "empirical [probability]",
                 "exact_weight [probability]", "sigma [probability]", "z [sigma]"});
    double max_z = 0.0;
    for (std::size_t b = 0; b < count; ++b) {
      const double emp = static_cast<double>(hist[b]) / static_cast<double>(trials);
      const double sigma = std::sqrt(q[b] * (1.0 - q[b]) / static_cast<double>(trials));
      const double z = sigma > 0.0 ? (emp - q[b]) / sigma
                                   : (std::abs(emp - q[b]) < 1e-12 ? 0.0 : INFINITY);
      max_z = std::max(max_z, std::abs(z));
      h.cell(b).cell(hist[b]).cell(emp).cell(q[b]).cell(sigma).cell(z).end_row();
    }
    summary["trials"] = trials;
    summary["failed_trajectories"] = fails;
    summary["histogram"] = hist;
    summary["max_abs_z"] = max_z;
  }
  write_json(ctx.out / "summary.json", summary);
  logger(ctx) << "project: L " << count << ", degree " << proj.degree() << ", mode " << mode << "\n";
  return code;
}

// ---------------------------------------------------------------------------

int cmd_baselines(const json& config, const Context& ctx) {
  ConfigObject o(config, "baselines");
  const auto ls = o.numbers("L");
  const long levels = o.integer("levels", 16);
  const double gap = o.number("gap", 0.05);
  const double eps = o.number("eps", 1e-3);
  const long trials = o.integer("trials", 10000);
  const std::string strategy = o.string("depth_strategy", "repeat");
  o.finish();
  if (ls.empty()) throw ConfigError("config: baselines.L must be a non-empty list");
  std::vector<std::size_t> counts;
  for (double l : ls) {
    if (!(l >= 1.0) || l != std::floor(l) || l > static_cast<double>(levels)) {
      throw ConfigError("config: baselines.L entries must be integers in [1, levels]");
    }
    counts.push_back(static_cast<std::size_t>(l));
  }
  if (levels < 1) throw ConfigError("config: baselines.levels must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("config: baselines.eps must lie in (0, 1)");
  if (trials < 1000) throw ConfigError("config: baselines.trials must be >= 1000");
  if (strategy != "repeat" && strategy != "amplify") {
    throw ConfigError("config: baselines.depth_strategy must be \"repeat\" or \"amplify\"");
  }
  const std::size_t lmax = *std::max_element(counts.begin(), counts.end());
  if (!(gap > 0.0 && gap * static_cast<double>(lmax) < 1.0)) {
    throw ConfigError("config: baselines.gap must lie in (0, 1 / max L)");
  }
  begin_output(ctx, "baselines", config);

  CsvWriter csv(ctx.out / "baselines.csv",
                {"L [bands]", "feedforward_queries [block-encoding calls]",
                 "random_walk_success [probability]", "prob_projection_depth [expected queries]",
                 "adiabatic_time_estimate [1/energy]", "random_walk_stderr [probability]",
                 "filter_degree [1]", "random_walk_queries_to_success [queries]",
                 "feedforward_binary_queries [projector queries]"});
  for (std::size_t l : counts) {
    const auto syn = synthetic_bands(static_cast<std::size_t>(levels), l, gap);
    long queries = 0;
    int degree = 0;
    if (l > 1) {
      const auto filters = multiband_filters(syn.bands, round_epsilon(eps, l));
      degree = filters.front().degree();
      queries = feedforward_query_count(l, degree);
    }
    const auto spec = eigh(ComplexMatrix::diagonal(std::span<const double>(syn.values)));
    const auto walk = random_walk_success(syn.bands, spec, trials, derive_seed(ctx.seed, l));
    const std::vector<double> q(l, 1.0 / static_cast<double>(l));
    const double depth = prob_projection_depth(
        q, strategy == "repeat" ? DepthStrategy::kRepeat : DepthStrategy::kAmplify);
    std::size_t paths = 0;
    for (const auto& b : syn.bands.bands) paths = std::max(paths, b.size());
    const double t_ad = adiabatic_time_estimate(static_cast<double>(paths), gap, eps);
    csv.cell(l).cell(queries).cell(walk.success).cell(depth).cell(t_ad).cell(walk.stderr_)
        .cell(degree).cell(walk.queries_to_success).cell(band_rounds(l)).end_row();
    logger(ctx) << "baselines: L " << l << " done\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_bosehubbard(const json& config, const Context& ctx) {
  ConfigObject o(config, "bosehubbard");
  GmonModel g = o.has("model") ? gmon_from_json(o.raw("model"), "bosehubbard.model")
                               : GmonModel::desk_scale();
  const double margin = o.number("margin", 0.05);
  const double min_gap_eta = o.number("min_gap_eta", 0.5);
  const bool noise = o.boolean("noise", false);
  o.finish();
  if (!(min_gap_eta > 0.0)) throw ConfigError("config: bosehubbard.min_gap_eta must be positive");
  if (noise) g = perturbed(g, derive_seed(ctx.seed, 5));
  const ComplexMatrix h = build_h0(g) + build_h1(g);
  const auto norm = as_config("bosehubbard", [&] { return normalize_for_qsvt(h, margin); });
  begin_output(ctx, "bosehubbard", config);

  const BandLabeling labels = band_labels(g);
  const HermitianSpectrum raw = eigh(h);
  const HermitianSpectrum spec = eigh(norm.h);
  const BandOverlap dom = dominant_bands(labels, spec);
  const BandStructure bands = detect_bands(spec.values, min_gap_eta * g.eta / norm.map.scale);
  const std::string mismatch = grouping_mismatch(labels, dom, bands);
  const double span = raw.values.back() - raw.values.front();
  const double min_weight = *std::min_element(dom.weight.begin(), dom.weight.end());

  {
    CsvWriter csv(ctx.out / "labels.csv", {"fock_index [1]", "occupations [quanta per mode]",
                                           "label [band index]", "h0_energy [rad/us]"});
    for (std::size_t i = 0; i < g.dim(); ++i) {
      csv.cell(i).cell(record_string(fock_occupations(g, i))).cell(labels.label[i])
          .cell(labels.energy(labels.label[i])).end_row();
    }
  }
  {
    CsvWriter csv(ctx.out / "spectrum.csv",
                  {"level [1]", "energy [rad/us]", "normalized [dimensionless]",
                   "dominant_label [band index]", "dominant_weight [probability]",
                   "detected_band [band index]"});
    for (std::size_t i = 0; i < spec.dim(); ++i) {
      csv.cell(i).cell(norm.map.inverse(spec.values[i])).cell(spec.values[i]).cell(dom.label[i])
          .cell(dom.weight[i]).cell(bands.band_of(spec.values[i])).end_row();
    }
  }
  json groups = json::object();
  for (std::size_t k : labels.distinct()) groups[std::to_string(k)] = labels.members(k);
  write_json(ctx.out / "bands.json",
             json{{"detected", to_json(bands)},
                  {"label_groups", groups},
                  {"min_gap", min_gap_eta * g.eta / norm.map.scale},
                  {"gap_floor_half_eta_over_span", 0.5 * g.eta / span},
                  {"grouping_matches", mismatch.empty()},
                  {"grouping_mismatch", mismatch},
                  {"min_dominant_weight", min_weight}});
  write_json(ctx.out / "hamiltonian.json",
             json{{"model", to_json(g)},
                  {"affine_map", {{"offset", norm.map.offset}, {"scale", norm.map.scale}}},
                  {"normalized", to_json(norm.h)}});
  if (!mismatch.empty() || min_weight < 0.9) {
    logger(ctx) << "bosehubbard: band integrity failed: "
                << (mismatch.empty() ? "dominant weight " + format_double(min_weight) + " < 0.9" : mismatch)
                << "\n";
    return kExitNumerical;
  }
  logger(ctx) << "bosehubbard: " << bands.count << " bands, grouping matches H0 labels\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

int dispatch(const std::string& command, const json& config, const Context& ctx) {
  try {
    if (command == "phases") return cmd_phases(config, ctx);
    if (command == "project") return cmd_project(config, ctx);
    if (command == "baselines") return cmd_baselines(config, ctx);
    if (command == "bosehubbard") return cmd_bosehubbard(config, ctx);
    if (command == "verify") return cmd_verify(config, ctx);
    logger(ctx) << "unknown command '" << command << "'\n";
    return kExitConfig;
  } catch (const InvalidInput& e) {
    logger(ctx) << command << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    logger(ctx) << command << ": " << e.what() << "\n";
    return kExitNumerical;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Feedforward QSVT simulator"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"phases", "synthesize and certify a filter's phase factors"},
      {"project", "multi-band projection (enumerate or sample)"},
      {"baselines", "query-count comparison against the baselines"},
      {"bosehubbard", "gmon band structure and normalization"},
      {"verify", "run the check battery and print a pass/fail table"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config")->required();
    sub->add_option("--seed", seed, "64-bit seed")->default_val(0);
    sub->add_option("--out", out, "output directory")->required();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  json config;
  try {
    config = read_json_file(config_path);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  Context ctx;
  ctx.seed = seed;
  ctx.out = out;
  ctx.log = &std::cerr;
  ctx.report = &std::cout;
  return dispatch(command, config, ctx);
}

}  // namespace fqsvt::cli
