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

#include "fqsvt/feedforward.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace fqsvt {

namespace {

constexpr double kLeakTol = 1e-9;

struct Path {
  std::vector<int> record;
  std::vector<BlockDescriptor> history;
  ComplexMatrix amps;  // (M N) x columns
  long queries = 0;
};

ComplexMatrix apply_block(const QsvtCircuit& c, int in, int out, const ComplexMatrix& amps) {
  const std::size_t h = c.dim() / 2;
  if (amps.rows() != h) {
    throw InvalidInput("feedforward: carried state has dimension " + std::to_string(amps.rows()) +
                       ", block expects " + std::to_string(h));
  }
  return c.matrix().block(static_cast<std::size_t>(out) * h, static_cast<std::size_t>(in) * h, h,
                          h) *
         amps;
}

void require_clean_ancilla(const ComplexMatrix& amps, std::size_t n, int round) {
  double leak = 0.0;
  for (std::size_t r = n; r < amps.rows(); ++r) {
    for (const cplx& z : amps.row(r)) leak += std::norm(z);
  }
  leak = std::sqrt(leak);
  if (leak > kLeakTol) {
    throw NumericalError("feedforward: round " + std::to_string(round) +
                         " left ancilla amplitude " + std::to_string(leak) + " on a success branch");
  }
}

double weight(const ComplexMatrix& m) {
  const double f = m.frobenius_norm();
  return f * f;
}

// Depth-first expansion; visit(path, parent, is_leaf) returns the node index.
template <class Visit>
void walk(const FeedforwardPolicy& policy, Path& path, int parent, Visit& visit) {
  const std::optional<BlockDescriptor> next = policy(path.record, path.history);
  if (!next) {
    visit(path, parent, true);
    return;
  }
  const int self = visit(path, parent, false);
  if (!next->circuit) {
    Path child{path.record, path.history, path.amps, path.queries};
    child.record.push_back(0);
    child.history.push_back(*next);
    walk(policy, child, self, visit);
    return;
  }
  const QsvtCircuit& c = *next->circuit;
  for (int s = 0; s < 2; ++s) {
    Path child{path.record, path.history, apply_block(c, next->init_flip ? 1 : 0, s, path.amps),
               path.queries + c.degree()};
    if (s == 0 && next->closes_round && !failed(path.record)) {
      require_clean_ancilla(child.amps, c.encoding().encoded_dim(), next->round);
    }
    child.record.push_back(s);
    child.history.push_back(*next);
    walk(policy, child, self, visit);
  }
}

ComplexMatrix column_of(const StateVector& v) {
  return ComplexMatrix(v.dim(), 1, std::vector<cplx>(v.amplitudes().begin(), v.amplitudes().end()));
}

StateVector state_of(const ComplexMatrix& m) {
  return StateVector(std::vector<cplx>(m.data().begin(), m.data().end()));
}

void require_unit(const StateVector& v, const char* who) {
  if (std::abs(v.norm() - 1.0) > 1e-10) {
    throw InvalidInput(std::string(who) + ": input state must have unit norm (got " +
                       std::to_string(v.norm()) + ")");
  }
}

// |0> (x) phi on the ancilla and system.
StateVector embed(const StateVector& phi, std::size_t ancilla_dim) {
  std::vector<cplx> amps(phi.dim() * ancilla_dim, cplx(0.0));
  std::copy(phi.amplitudes().begin(), phi.amplitudes().end(), amps.begin());
  return StateVector(std::move(amps));
}

// Threshold index t belongs to the round whose step 2^{l-j} is the lowest
// set bit of t + 1.
int round_of_threshold(std::size_t t, int rounds) {
  return rounds - std::countr_zero(t + 1);
}

}  // namespace

std::vector<MarBranch> mar_enumerate(const StateVector& full) {
  if (full.dim() < 2) throw InvalidInput("mar: register has no monitoring qubit");
  if (full.norm() == 0.0) throw InvalidInput("mar: zero-norm state");
  const std::size_t h = full.dim() / 2;
  std::vector<MarBranch> out;
  for (int s = 0; s < 2; ++s) {
    std::vector<cplx> amps(full.dim(), cplx(0.0));
    for (std::size_t i = 0; i < h; ++i) amps[i] = full[static_cast<std::size_t>(s) * h + i];
    MarBranch b{s, StateVector(std::move(amps)), 0.0};
    b.probability = b.state.norm_squared();
    out.push_back(std::move(b));
  }
  return out;
}

MarBranch mar_sample(const StateVector& full, CounterRng& rng) {
  std::vector<MarBranch> both = mar_enumerate(full);
  const double total = both[0].probability + both[1].probability;
  const int s = rng.uniform() * total < both[0].probability ? 0 : 1;
  MarBranch b = std::move(both[static_cast<std::size_t>(s)]);
  b.probability /= total;
  b.state = b.state.normalized();
  return b;
}

std::vector<const BranchNode*> BranchTree::leaves() const {
  std::vector<const BranchNode*> out;
  for (const BranchNode& n : nodes) {
    if (n.leaf) out.push_back(&n);
  }
  return out;
}

double BranchTree::conservation_residual() const {
  std::vector<double> child_sum(nodes.size(), 0.0);
  for (const BranchNode& n : nodes) {
    if (n.parent >= 0) child_sum[static_cast<std::size_t>(n.parent)] += n.probability;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].leaf) worst = std::max(worst, std::abs(nodes[i].probability - child_sum[i]));
  }
  return worst;
}

BranchTree execute_enumerate(const FeedforwardPolicy& policy, const StateVector& start) {
  BranchTree tree;
  auto visit = [&](const Path& p, int parent, bool leaf) {
    tree.nodes.push_back(BranchNode{p.record, state_of(p.amps), weight(p.amps), p.queries, parent, leaf});
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  Path root{{}, {}, column_of(start), 0};
  walk(policy, root, -1, visit);
  return tree;
}

std::vector<LeafOperator> execute_operators(const FeedforwardPolicy& policy,
                                            std::size_t system_dim, std::size_t ancilla_dim) {
  std::vector<LeafOperator> out;
  auto visit = [&](const Path& p, int, bool leaf) {
    if (leaf) out.push_back(LeafOperator{p.record, p.amps, p.queries});
    return 0;
  };
  ComplexMatrix start(system_dim * ancilla_dim, system_dim);
  for (std::size_t i = 0; i < system_dim; ++i) start(i, i) = 1.0;
  Path root{{}, {}, std::move(start), 0};
  walk(policy, root, -1, visit);
  return out;
}

Trajectory execute_sample(const FeedforwardPolicy& policy, const StateVector& start,
                          std::uint64_t seed) {
  CounterRng rng(seed);
  Trajectory t;
  ComplexMatrix amps = column_of(start.normalized());
  std::vector<BlockDescriptor> history;
  while (true) {
    const std::optional<BlockDescriptor> next = policy(t.record, history);
    if (!next) break;
    history.push_back(*next);
    if (!next->circuit) {
      t.record.push_back(0);
      continue;
    }
    const QsvtCircuit& c = *next->circuit;
    const int in = next->init_flip ? 1 : 0;
    ComplexMatrix b0 = apply_block(c, in, 0, amps);
    ComplexMatrix b1 = apply_block(c, in, 1, amps);
    const double p0 = weight(b0);
    const double total = p0 + weight(b1);
    if (!(total > 0.0)) throw NumericalError("feedforward: branch lost its norm");
    const int s = rng.uniform() * total < p0 ? 0 : 1;
    ComplexMatrix& kept = s == 0 ? b0 : b1;
    if (s == 0 && next->closes_round && !failed(t.record)) {
      require_clean_ancilla(kept, c.encoding().encoded_dim(), next->round);
    }
    const double p = weight(kept);
    t.probability *= p / total;
    kept *= cplx(1.0 / std::sqrt(p));
    amps = std::move(kept);
    t.queries += c.degree();
    t.record.push_back(s);
  }
  t.state = state_of(amps);
  return t;
}

StateVector system_part(const StateVector& carried, std::size_t system_dim) {
  if (system_dim > carried.dim()) throw InvalidInput("system_part: dimension too large");
  return StateVector(std::vector<cplx>(carried.amplitudes().begin(),
                                       carried.amplitudes().begin() +
                                           static_cast<std::ptrdiff_t>(system_dim)));
}

FeedforwardPolicy one_fqsvt_policy(const BlockEncoding& enc, const PhaseFactorSet& phi) {
  const PhaseFactorSet circ = phi.convention() == Convention::kCircuit ? phi : to_circuit(phi);
  if (!to_su2(circ).is_symmetric()) {
    throw InvalidInput("1-FQSVT: phases must be symmetric in the su2 convention");
  }
  if (circ.degree() < 1) {
    throw InvalidInput("1-FQSVT: degree must be >= 1 (a single phase has no conjugate pair)");
  }
  const Orientation second = circ.degree() % 2 == 1 ? Orientation::kReflectedAdjoint : Orientation::kForward;
  auto a = std::make_shared<const QsvtCircuit>(enc, circ, Orientation::kForward);
  auto b = std::make_shared<const QsvtCircuit>(enc, circ, second);
  return [a, b](std::span<const int> record,
                std::span<const BlockDescriptor> history) -> std::optional<BlockDescriptor> {
    if (history.empty()) return BlockDescriptor{a, false, false, 1};
    if (history.size() == 1) return BlockDescriptor{b, record[0] == 1, true, 1};
    return std::nullopt;
  };
}

BranchTree run_1fqsvt(const BlockEncoding& enc, const PhaseFactorSet& phi, const StateVector& input) {
  require_unit(input, "run_1fqsvt");
  return execute_enumerate(one_fqsvt_policy(enc, phi), embed(input, enc.ancilla_dim()));
}

Trajectory run_1fqsvt_sample(const BlockEncoding& enc, const PhaseFactorSet& phi,
                             const StateVector& input, std::uint64_t seed) {
  require_unit(input, "run_1fqsvt");
  return execute_sample(one_fqsvt_policy(enc, phi), embed(input, enc.ancilla_dim()), seed);
}

int band_rounds(std::size_t count) {
  if (count == 0) throw InvalidInput("band count must be >= 1");
  return static_cast<int>(std::bit_width(count - 1));
}

long feedforward_query_count(std::size_t count, long degree) {
  return 2L * band_rounds(count) * degree;
}

double round_epsilon(double global, std::size_t count, double c) {
  if (!(global > 0.0) || !(c > 0.0)) throw InvalidInput("round_epsilon: budget and c must be positive");
  const int l = band_rounds(count);
  if (l == 0) return global;
  return global / (c * static_cast<double>(count) * l);
}

std::size_t claimed_band(std::span<const int> record) {
  const std::size_t l = record.size() / 2;
  std::size_t i = 0;
  for (std::size_t j = 0; j < l; ++j) {
    if (record[2 * j] == 1) i += std::size_t{1} << (l - 1 - j);
  }
  return i;
}

bool failed(std::span<const int> record) {
  for (std::size_t j = 1; j < record.size(); j += 2) {
    if (record[j] == 1) return true;
  }
  return false;
}

std::vector<ChebyshevSeries> multiband_filters(const BandStructure& bands, double round_eps,
                                               const MultibandOptions& opts) {
  if (bands.count == 0 || bands.centers.size() + 1 != bands.count) {
    throw InvalidInput("multiband: band count does not match the number of centers");
  }
  const int rounds = band_rounds(bands.count);
  const std::size_t nthr = bands.centers.size();
  auto build = [&](std::size_t t, int min_degree) {
    FilterOptions fo;
    fo.scale = std::min(1.0 - round_eps / 4.0, 1.0 - kFilterBoundMargin);
    fo.gridsize = opts.gridsize;
    fo.degree_cap = opts.degree_cap;
    fo.min_degree = min_degree;
    try {
      return heaviside_filter(FilterSpec{bands.centers[t], bands.delta, round_eps}, fo);
    } catch (const InvalidInput& e) {
      throw InvalidInput("round " + std::to_string(round_of_threshold(t, rounds)) + ": " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("round " + std::to_string(round_of_threshold(t, rounds)) + ": " +
                           e.what());
    }
  };
  std::vector<ChebyshevSeries> filters;
  int degree = 0;
  for (std::size_t t = 0; t < nthr; ++t) {
    filters.push_back(build(t, 0));
    degree = std::max(degree, filters.back().degree());
  }
  // Raise every filter to the common degree; repeat if one had to escalate.
  for (int pass = 0; pass < 4; ++pass) {
    bool uniform = true;
    for (std::size_t t = 0; t < nthr; ++t) {
      if (filters[t].degree() != degree) filters[t] = build(t, degree);
      if (filters[t].degree() != degree) {
        degree = std::max(degree, filters[t].degree());
        uniform = false;
      }
    }
    if (uniform) break;
  }
  for (const auto& f : filters) {
    if (f.degree() != degree) throw NumericalError("multiband: filters did not settle on a common degree");
  }
  return filters;
}

MultibandProjector::MultibandProjector(BlockEncoding enc, BandStructure bands, double round_eps,
                                       const MultibandOptions& opts)
    : enc_(std::move(enc)), bands_(std::move(bands)), eps_(round_eps) {
  if (bands_.count == 0 || bands_.centers.size() + 1 != bands_.count) {
    throw InvalidInput("multiband: band count does not match the number of centers");
  }
  rounds_ = band_rounds(bands_.count);
  check_band_assumption(eigh(encoded_block(enc_)).values, bands_);
  filters_ = multiband_filters(bands_, eps_, opts);
  degree_ = filters_.empty() ? 0 : filters_.front().degree();

  for (std::size_t t = 0; t < filters_.size(); ++t) {
    PhaseFactorSet psi({0.0}, Convention::kSu2);
    try {
      psi = synthesize_symmetric(filters_[t], opts.synthesis);
    } catch (const SynthesisError& e) {
      throw SynthesisError("round " + std::to_string(round_of_threshold(t, rounds_)) + ": " +
                               e.what(),
                           e.history());
    }
    const PhaseFactorSet phi = to_circuit(psi);
    const Orientation second =
        phi.degree() % 2 == 1 ? Orientation::kReflectedAdjoint : Orientation::kForward;
    first_.push_back(std::make_shared<const QsvtCircuit>(enc_, phi, Orientation::kForward));
    second_.push_back(std::make_shared<const QsvtCircuit>(enc_, phi, second));
  }

  const std::size_t count = bands_.count;
  const int l = rounds_;
  auto first = first_;
  auto second = second_;
  policy_ = [count, l, first, second](
                std::span<const int> record,
                std::span<const BlockDescriptor> history) -> std::optional<BlockDescriptor> {
    const int done = static_cast<int>(history.size());
    const int j = done / 2 + 1;
    if (j > l) return std::nullopt;
    std::size_t i = 0;
    for (int r = 1; r < j; ++r) {
      const std::size_t k = i + (std::size_t{1} << (l - r));
      if (record[static_cast<std::size_t>(2 * (r - 1))] == 1) i = k;
    }
    if (i >= count) return std::nullopt;
    const std::size_t k = i + (std::size_t{1} << (l - j));
    if (k >= count) return BlockDescriptor{nullptr, false, done % 2 == 1, j};
    if (done % 2 == 0) return BlockDescriptor{first[k - 1], false, false, j};
    return BlockDescriptor{second[k - 1], record.back() == 1, true, j};
  };
}

BranchTree MultibandProjector::enumerate(const StateVector& input) const {
  require_unit(input, "multiband");
  return execute_enumerate(policy_, embed(input, enc_.ancilla_dim()));
}

Trajectory MultibandProjector::sample(const StateVector& input, std::uint64_t seed) const {
  require_unit(input, "multiband");
  return execute_sample(policy_, embed(input, enc_.ancilla_dim()), seed);
}

std::vector<LeafOperator> MultibandProjector::kraus() const {
  std::vector<LeafOperator> ops =
      execute_operators(policy_, enc_.encoded_dim(), enc_.ancilla_dim());
  const double res = completeness_residual(ops);
  if (res > 1e-6) {
    throw NumericalError("multiband: leaf operators miss completeness by " + std::to_string(res));
  }
  return ops;
}

double completeness_residual(const std::vector<LeafOperator>& ops) {
  if (ops.empty()) throw InvalidInput("completeness_residual: no operators");
  const std::size_t n = ops.front().op.cols();
  ComplexMatrix sum(n, n);
  for (const LeafOperator& k : ops) sum += k.op.adjoint() * k.op;
  return max_abs_diff(sum, ComplexMatrix::identity(n));
}

std::vector<ComplexMatrix> operators_of(const std::vector<LeafOperator>& leaves) {
  std::vector<ComplexMatrix> out;
  out.reserve(leaves.size());
  for (const LeafOperator& k : leaves) out.push_back(k.op);
  return out;
}

ComplexMatrix apply_kraus(const std::vector<ComplexMatrix>& ops, const ComplexMatrix& rho) {
  const std::size_t n = rho.rows();
  ComplexMatrix out(n, n);
  for (const ComplexMatrix& k : ops) {
    if (k.cols() != n || k.rows() % n != 0) {
      throw InvalidInput("apply_kraus: operator shape does not match the state");
    }
    for (std::size_t a = 0; a < k.rows() / n; ++a) {
      const ComplexMatrix ka = k.block(a * n, 0, n, n);
      out += ka * rho * ka.adjoint();
    }
  }
  return out;
}

double channel_distance(const std::vector<ComplexMatrix>& kraus,
                        const std::vector<ComplexMatrix>& projectors, const ComplexMatrix& basis,
                        int samples, std::uint64_t seed) {
  const std::size_t n = basis.rows();
  double worst = 0.0;
  auto probe = [&](std::span<const cplx> psi) {
    const ComplexMatrix rho = density(psi);
    worst = std::max(worst, trace_norm(apply_kraus(kraus, rho) - apply_kraus(projectors, rho)));
  };
  for (std::size_t c = 0; c < basis.cols(); ++c) probe(basis.column(c));
  if (samples > 0) {
    if (!std::has_single_bit(n)) throw InvalidInput("channel_distance: dimension must be a power of two");
    const unsigned q = static_cast<unsigned>(std::countr_zero(n));
    for (int s = 0; s < samples; ++s) {
      probe(haar_state(q, derive_seed(seed, static_cast<std::uint64_t>(s))).amplitudes());
    }
  }
  return worst;
}

}  // namespace fqsvt
