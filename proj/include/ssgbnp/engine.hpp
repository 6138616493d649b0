#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ssgbnp/master.hpp"
#include "ssgbnp/model.hpp"
#include "ssgbnp/pricing.hpp"
#include "ssgbnp/simplex.hpp"

namespace ssgbnp {

inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kObjectiveTol = 1e-7;
inline constexpr double kPricingTol = 1e-7;

struct Node {
  Fixings fixings;
  double parent_bound = kInf;
  int depth = 0;
  long id = 0;
  long parent = -1;
  // The fixing that created this node; k < 0 at the root.
  int fixed_k = -1;
  int fixed_j = -1;
  FixState fixed_value = FixState::Free;
};

struct BranchChoice {
  int k = -1;
  int j = -1;
};

/// Largest p^k among types with a fractional q (ties: lowest k), then the q
/// closest to 0.5 (ties: lowest j). nullopt when every q is integral.
std::optional<BranchChoice> select_branch(const Matrix& q, const std::vector<double>& p);

/// Returns (child fixing q = 1, child fixing q = 0). Throws std::logic_error
/// when no q is fractional.
std::pair<Node, Node> branch(const Node& node, const Matrix& q, const std::vector<double>& p);

/// Smoothing state for pricing. The pricing duals are
/// weight * pi_RMP + (1 - weight) * center, with weight = min(1, mispricings * delta).
struct StabilizerState {
  double delta = 1.0;
  std::optional<DualView> center;
  int misprice = 1;

  double effective_weight() const;
};

struct SolveOptions {
  int init_cols = -1;  // GRASP columns; -1 means n_targets
  int pricer_cols = 1;
  std::optional<double> delta;
  double time_limit_s = 3600.0;
  std::uint64_t seed = 0;
  bool rounding_heuristic = true;
  std::optional<std::vector<Column>> initial_columns;  // replaces initial_columns() when set
  std::ostream* node_log = nullptr;                     // line-delimited JSON, one record per node
  std::ostream* pivot_trace = nullptr;
};

class ColumnPool {
 public:
  bool contains(const Column& c) const { return index_.count(c) != 0; }
  bool add(const Column& c);
  std::size_t size() const { return columns_.size(); }
  const std::vector<Column>& columns() const { return columns_; }
  const Column& operator[](std::size_t i) const { return columns_[i]; }

 private:
  std::vector<Column> columns_;
  std::unordered_set<Column, ColumnHash> index_;
};

struct ColgenCounters {
  long pricing_iterations = 0;
  long columns_generated = 0;
  long farkas_calls = 0;
  long farkas_columns = 0;
  long mispricings = 0;
};

enum class NodeStatus { Optimal, Infeasible, TimedOut };

struct NodeLp {
  NodeStatus status = NodeStatus::Infeasible;
  LpOutcome outcome;
  MasterLayout layout;
  long columns_added = 0;
};

/// Column generation for one node: Farkas pricing while the master is
/// infeasible, then the greedy/exact cascade (optionally stabilized) until exact
/// pricing under the master duals proves no column has reduced cost > 1e-7.
///
/// One master LP is kept across calls. A node's fixings hold q variables at
/// zero (fixing q = 1 holds the other q of that type), and the solve resumes
/// from the basis left by the previous node.
class ColumnGeneration {
 public:
  using Clock = std::chrono::steady_clock;

  ColumnGeneration(const GameSSG& g, FormulationSpec spec, const SolveOptions& opts, ColumnPool& pool,
                   ColgenCounters& counters, Clock::time_point deadline);

  NodeLp run(const Fixings& fixings);

 private:
  std::vector<Column> price_round(const DualView& duals, StabilizerState* stab);
  std::vector<Column> cascade(const DualView& duals, bool strict);
  long sync_columns();
  void apply(const Fixings& fixings);

  const GameSSG& g_;
  FormulationSpec spec_;
  const SolveOptions& opts_;
  ColumnPool& pool_;
  ColgenCounters& counters_;
  Clock::time_point deadline_;
  std::unique_ptr<SimplexSolver> lp_;
  MasterLayout layout_;
};

struct SolveResult {
  MixedStrategy strategy;
  SolveReport report;
};

/// Branch-and-price for the budget security game.
SolveResult solve(const GameSSG& g, const FormulationSpec& spec, const SolveOptions& opts = {});

struct RootLpResult {
  NodeStatus status = NodeStatus::Infeasible;
  double value = 0.0;
  ColgenCounters counters;
  std::vector<Column> columns;
  LpOutcome outcome;
  MasterLayout layout;
};

/// Column generation at the root only.
RootLpResult solve_root_lp(const GameSSG& g, const FormulationSpec& spec, const SolveOptions& opts = {});

struct SgSolveResult {
  std::vector<double> x;
  std::vector<int> responses;
  SolveReport report;
};

/// Branch-and-bound on q for a generic game. The master holds every leader
/// strategy and no pricing happens.
SgSolveResult solve_sg(const GameSG& g, const FormulationSpec& spec, const SolveOptions& opts = {});

/// LP relaxation value of the full SG master (no branching).
double sg_root_lp_value(const GameSG& g, const FormulationSpec& spec);

}  // namespace ssgbnp
