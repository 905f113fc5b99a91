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

// Mid-circuit measurement of the monitoring qubit and outcome-conditioned
// execution of QSVT blocks.
//
// Between blocks the monitor is reset, so the carried state lives on the
// encoding ancilla and the system (dimension M N, system index fastest).
// A block is applied to |b>|psi> with b the initialization bit, and the
// monitor is then measured.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fqsvt/bands.hpp"
#include "fqsvt/polyapprox.hpp"
#include "fqsvt/qsvt.hpp"

namespace fqsvt {

/// One branch of a single monitor measurement with the reset applied.
struct MarBranch {
  int outcome = 0;
  StateVector state;  // full register, monitor back in |0>
  double probability = 0.0;
};

/// Both branches, unnormalized. The monitor is the most significant qubit.
std::vector<MarBranch> mar_enumerate(const StateVector& full);

/// One branch drawn with its Born probability, renormalized.
MarBranch mar_sample(const StateVector& full, CounterRng& rng);

struct BlockDescriptor {
  /// Null marks a skipped block: outcome 0 is recorded without a query.
  std::shared_ptr<const QsvtCircuit> circuit;
  bool init_flip = false;     // X on the freshly reset monitor
  bool closes_round = false;  // assert a clean ancilla on outcome 0
  int round = 0;
};

/// Next block from the outcomes so far and the blocks already run; nullopt
/// ends the run.
using FeedforwardPolicy = std::function<std::optional<BlockDescriptor>(
    std::span<const int> record, std::span<const BlockDescriptor> history)>;

struct BranchNode {
  std::vector<int> record;
  StateVector state;  // ancilla (x) system, unnormalized
  double probability = 0.0;
  long queries = 0;   // uses of U_H or its adjoint along the path
  int parent = -1;
  bool leaf = false;
};

struct BranchTree {
  std::vector<BranchNode> nodes;  // nodes[0] is the root

  std::vector<const BranchNode*> leaves() const;
  /// Largest |p(parent) - sum p(children)| over internal nodes.
  double conservation_residual() const;
};

/// Leaf operator K of shape (M N) x N: leaf state = K phi for every input.
struct LeafOperator {
  std::vector<int> record;
  ComplexMatrix op;
  long queries = 0;
};

struct Trajectory {
  std::vector<int> record;
  StateVector state;  // normalized
  double probability = 1.0;  // product of the drawn outcome probabilities
  long queries = 0;
};

/// Runs `policy` from `start` (dimension M N). Throws NumericalError if a
/// round-closing outcome 0 leaves more than 1e-9 amplitude on the ancilla.
BranchTree execute_enumerate(const FeedforwardPolicy& policy, const StateVector& start);
Trajectory execute_sample(const FeedforwardPolicy& policy, const StateVector& start,
                          std::uint64_t seed);
/// Leaf operators from all computational basis inputs |0>|e_i>.
std::vector<LeafOperator> execute_operators(const FeedforwardPolicy& policy,
                                            std::size_t system_dim, std::size_t ancilla_dim);

/// First N amplitudes (ancilla |0>) of a carried state.
StateVector system_part(const StateVector& carried, std::size_t system_dim);

/// Two blocks with the same symmetric phases, the second initialized with
/// X^{s1}. For odd d the second block runs on Z_a U_H^dagger Z_a; the plain
/// adjoint leaves ancilla amplitude on the (1, 0) branch whenever P has an
/// imaginary part.
FeedforwardPolicy one_fqsvt_policy(const BlockEncoding& enc, const PhaseFactorSet& phi);

/// Enumerated 1-FQSVT on |0>|phi>. Rejects degree 0 and phases whose su2
/// form is not symmetric.
BranchTree run_1fqsvt(const BlockEncoding& enc, const PhaseFactorSet& phi, const StateVector& input);
Trajectory run_1fqsvt_sample(const BlockEncoding& enc, const PhaseFactorSet& phi,
                             const StateVector& input, std::uint64_t seed);

/// ceil(log2 L)
int band_rounds(std::size_t count);

/// 2 ceil(log2 L) d
long feedforward_query_count(std::size_t count, long degree);

/// global / (c L ceil(log2 L)); the global budget itself when L = 1.
double round_epsilon(double global, std::size_t count, double c = 4.0);

/// Band index i = sum_j b_j 2^{l-j} from a record of (band bit, success bit)
/// pairs, most significant first.
std::size_t claimed_band(std::span<const int> record);

/// True if any success bit is 1.
bool failed(std::span<const int> record);

struct MultibandOptions {
  SynthesisOptions synthesis{};
  int gridsize = 2001;
  int degree_cap = kFilterDegreeCap;
};

/// Heaviside filters for every threshold, all raised to one common even
/// degree, with scale min(1 - eps/4, 1 - 1e-6). Errors name the round.
std::vector<ChebyshevSeries> multiband_filters(const BandStructure& bands, double round_eps,
                                               const MultibandOptions& opts = {});

/// Binary search over band thresholds with one 1-FQSVT per round.
///
/// Round j (1-based) tests threshold index k - 1 with k = i + 2^{l-j} and
/// sets i = k on band bit 1. Thresholds past the last band (k >= L) are
/// skipped: the round records (0, 0) and makes no query. All filters share
/// one even degree.
class MultibandProjector {
 public:
  /// Filters are synthesized for every threshold with scale 1 - eps/4.
  /// Throws InvalidInput if the encoded spectrum violates the band
  /// assumption; synthesis failures name the round.
  MultibandProjector(BlockEncoding enc, BandStructure bands, double round_eps,
                     const MultibandOptions& opts = {});

  const BandStructure& bands() const { return bands_; }
  int rounds() const { return rounds_; }
  int degree() const { return degree_; }
  double round_eps() const { return eps_; }
  long query_budget() const { return feedforward_query_count(bands_.count, degree_); }
  const ChebyshevSeries& filter(std::size_t threshold) const { return filters_.at(threshold); }
  const FeedforwardPolicy& policy() const { return policy_; }

  BranchTree enumerate(const StateVector& input) const;
  Trajectory sample(const StateVector& input, std::uint64_t seed) const;
  /// Leaf operators; throws NumericalError if sum K^dagger K misses I by
  /// more than 1e-6.
  std::vector<LeafOperator> kraus() const;

 private:
  BlockEncoding enc_;
  BandStructure bands_;
  double eps_;
  int rounds_ = 0;
  int degree_ = 0;
  std::vector<ChebyshevSeries> filters_;
  std::vector<std::shared_ptr<const QsvtCircuit>> first_;
  std::vector<std::shared_ptr<const QsvtCircuit>> second_;
  FeedforwardPolicy policy_;
};

/// max |sum_k K_k^dagger K_k - I|
double completeness_residual(const std::vector<LeafOperator>& ops);

/// sum over operators and ancilla blocks of K_a rho K_a^dagger; each
/// operator has a multiple of N rows.
ComplexMatrix apply_kraus(const std::vector<ComplexMatrix>& ops, const ComplexMatrix& rho);
std::vector<ComplexMatrix> operators_of(const std::vector<LeafOperator>& leaves);

/// Lower bound on the trace-norm distance between the two channels: the
/// largest output difference over the columns of `basis` and `samples`
/// Haar-random pure states.
double channel_distance(const std::vector<ComplexMatrix>& kraus,
                        const std::vector<ComplexMatrix>& projectors, const ComplexMatrix& basis,
                        int samples, std::uint64_t seed);

}  // namespace fqsvt
