#include "ssgbnp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "json.hpp"

namespace ssgbnp {

using Clock = std::chrono::steady_clock;

bool ColumnPool::add(const Column& c) {
  if (!index_.insert(c).second) return false;
  columns_.push_back(c);
  return true;
}

double StabilizerState::effective_weight() const {
  return std::min(1.0, misprice * delta);
}

std::optional<BranchChoice> select_branch(const Matrix& q, const std::vector<double>& p) {
  int best_k = -1;
  for (int k = 0; k < static_cast<int>(q.size()); ++k) {
    const bool fractional = std::any_of(q[k].begin(), q[k].end(), [](double v) {
      return std::abs(v - std::round(v)) > kIntegralityTol;
    });
    if (fractional && (best_k < 0 || p[k] > p[best_k])) best_k = k;
  }
  if (best_k < 0) return std::nullopt;
  int best_j = -1;
  double best_dist = kInf;
  for (int j = 0; j < static_cast<int>(q[best_k].size()); ++j) {
    const double v = q[best_k][j];
    if (std::abs(v - std::round(v)) <= kIntegralityTol) continue;
    const double dist = std::abs(v - 0.5);
    if (dist < best_dist) {
      best_dist = dist;
      best_j = j;
    }
  }
  return BranchChoice{best_k, best_j};
}

std::pair<Node, Node> branch(const Node& node, const Matrix& q, const std::vector<double>& p) {
  const auto choice = select_branch(q, p);
  if (!choice) throw std::logic_error("branch called with integral q");
  Node one = node;
  one.fixings.set(choice->k, choice->j, FixState::One);
  one.depth = node.depth + 1;
  one.parent = node.id;
  one.fixed_k = choice->k;
  one.fixed_j = choice->j;
  one.fixed_value = FixState::One;
  Node zero = one;
  zero.fixings.set(choice->k, choice->j, FixState::Zero);
  zero.fixed_value = FixState::Zero;
  return {std::move(one), std::move(zero)};
}

ColumnGeneration::ColumnGeneration(const GameSSG& g, FormulationSpec spec, const SolveOptions& opts,
                                   ColumnPool& pool, ColgenCounters& counters, Clock::time_point deadline)
    : g_(g), spec_(spec), opts_(opts), pool_(pool), counters_(counters), deadline_(deadline) {}

std::vector<Column> ColumnGeneration::cascade(const DualView& duals, bool strict) {
  std::vector<Column> out;
  for (auto& pc : price_greedy_multi(g_, duals, std::max(1, opts_.pricer_cols))) {
    if (pc.value > kPricingTol && !pool_.contains(pc.column)) out.push_back(std::move(pc.column));
  }
  if (!out.empty()) return out;
  auto exact = price_exact(g_, duals);
  if (exact.value <= kPricingTol) return out;
  if (pool_.contains(exact.column) && strict) {
    throw NumericalFailure("exact pricing returned column " + exact.column.to_string() +
                           " already in the master with reduced cost " + std::to_string(exact.value));
  }
  out.push_back(std::move(exact.column));
  return out;
}

std::vector<Column> ColumnGeneration::price_round(const DualView& duals, StabilizerState* stab) {
  if (stab == nullptr) return cascade(duals, true);
  if (!stab->center) stab->center = duals;
  stab->misprice = 1;
  while (true) {
    const double weight = stab->effective_weight();
    if (weight >= 1.0) {
      auto cols = cascade(duals, true);
      if (!cols.empty()) stab->center = duals;
      return cols;
    }
    const DualView smoothed = DualView::blend(duals, *stab->center, weight);
    std::vector<Column> improving;
    for (auto& c : cascade(smoothed, false)) {
      if (!pool_.contains(c) && reduced_cost(g_, c, duals) > kPricingTol) improving.push_back(std::move(c));
    }
    if (!improving.empty()) {
      stab->center = smoothed;
      return improving;
    }
    ++counters_.mispricings;
    ++stab->misprice;
  }
}

long ColumnGeneration::sync_columns() {
  long added = 0;
  for (std::size_t i = layout_.x_var.size(); i < pool_.size(); ++i) {
    layout_.x_var.push_back(lp_->add_column(0.0, master_column(g_, layout_, pool_[i])));
    ++added;
  }
  return added;
}

void ColumnGeneration::apply(const Fixings& fixings) {
  for (int k = 0; k < g_.n_attackers; ++k) {
    int one = -1;
    bool any_free = false;
    for (int j = 0; j < g_.n_targets; ++j) {
      if (fixings.at(k, j) == FixState::One) {
        if (one >= 0) throw InconsistentFixing("attacker " + std::to_string(k) + " has two targets fixed to 1");
        one = j;
      }
    }
    for (int j = 0; j < g_.n_targets; ++j) {
      const bool held = fixings.at(k, j) == FixState::Zero || (one >= 0 && j != one);
      any_free = any_free || !held;
      lp_->set_fixed_zero(layout_.q_var(k, j), held);
    }
    if (!any_free) throw InconsistentFixing("attacker " + std::to_string(k) + " has every target fixed to 0");
  }
}

NodeLp ColumnGeneration::run(const Fixings& fixings) {
  NodeLp result;
  if (!lp_) {
    Master master = build_master(g_, pool_.columns(), spec_);
    layout_ = master.layout;
    lp_ = std::make_unique<SimplexSolver>(master.lp);
    lp_->set_trace(opts_.pivot_trace);
  }
  result.columns_added += sync_columns();
  apply(fixings);
  std::optional<StabilizerState> stab;
  if (opts_.delta) stab = StabilizerState{*opts_.delta, std::nullopt, 1};

  while (true) {
    if (Clock::now() > deadline_) {
      result.status = NodeStatus::TimedOut;
      break;
    }
    auto out = lp_->solve();
    if (out.status == LpStatus::Unbounded) throw NumericalFailure("node master is unbounded");
    if (out.status == LpStatus::Infeasible) {
      ++counters_.farkas_calls;
      const auto col = farkas_price(g_, dual_view(layout_, out.farkas));
      if (!col) {
        result.status = NodeStatus::Infeasible;
        result.outcome = std::move(out);
        break;
      }
      if (!pool_.add(*col)) {
        throw NumericalFailure("Farkas pricing returned column " + col->to_string() + " already in the master");
      }
      ++counters_.columns_generated;
      ++counters_.farkas_columns;
      result.columns_added += sync_columns();
      continue;
    }
    ++counters_.pricing_iterations;
    const auto cols = price_round(dual_view(layout_, out.duals), stab ? &*stab : nullptr);
    if (cols.empty()) {
      result.status = NodeStatus::Optimal;
      result.outcome = std::move(out);
      break;
    }
    for (const auto& c : cols) {
      if (pool_.add(c)) ++counters_.columns_generated;
    }
    result.columns_added += sync_columns();
  }
  result.layout = layout_;
  return result;
}

namespace {

struct NodeEval {
  NodeStatus status = NodeStatus::Infeasible;
  double bound = 0.0;
  Matrix q;
  long columns_added = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.parent_bound != b.parent_bound) return a.parent_bound < b.parent_bound;
    return a.id > b.id;
  }
};

void log_node(std::ostream* sink, const Node& n, const NodeEval& e, const char* outcome) {
  if (sink == nullptr) return;
  nlohmann::ordered_json j;
  j["id"] = n.id;
  j["parent"] = n.parent;
  j["depth"] = n.depth;
  if (n.fixed_k >= 0) {
    j["fixing"] = {{"k", n.fixed_k}, {"j", n.fixed_j}, {"value", n.fixed_value == FixState::One ? 1 : 0}};
  } else {
    j["fixing"] = nullptr;
  }
  if (e.status == NodeStatus::Optimal) {
    j["lp_value"] = e.bound;
  } else {
    j["lp_value"] = nullptr;
  }
  j["columns_added"] = e.columns_added;
  j["outcome"] = outcome;
  j["pruned"] = std::string(outcome) == "pruned" || std::string(outcome) == "infeasible";
  *sink << j.dump() << '\n';
}

bool integral(const Matrix& q) {
  for (const auto& row : q) {
    for (double v : row) {
      if (std::abs(v - std::round(v)) > kIntegralityTol) return false;
    }
  }
  return true;
}

struct TreeOutcome {
  bool timed_out = false;
  bool has_incumbent = false;
  double incumbent = -kInf;
  double best_bound = -kInf;
  double root_lp = 0.0;
  long nodes = 0;
};

// Best-bound search that plunges into the q = 1 child after every branching.
template <class Problem>
TreeOutcome run_tree(Problem& problem, int K, int J, const std::vector<double>& p, const SolveOptions& opts,
                     Clock::time_point deadline) {
  TreeOutcome t;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::optional<Node> current = Node{Fixings(K, J), kInf, 0, 0, -1};
  long next_id = 1;

  while (true) {
    if (!current) {
      if (open.empty()) break;
      Node top = open.top();
      open.pop();
      if (t.has_incumbent && top.parent_bound <= t.incumbent + kObjectiveTol) continue;
      current = std::move(top);
    }
    if (Clock::now() > deadline) {
      t.timed_out = true;
      open.push(*current);
      break;
    }
    ++t.nodes;
    NodeEval e = problem.evaluate(*current);
    if (e.status == NodeStatus::TimedOut) {
      t.timed_out = true;
      open.push(*current);
      break;
    }
    if (e.status == NodeStatus::Infeasible) {
      log_node(opts.node_log, *current, e, "infeasible");
      current.reset();
      continue;
    }
    if (e.bound > current->parent_bound + 1e-6) {
      throw NumericalFailure("node bound " + std::to_string(e.bound) + " exceeds parent bound " +
                             std::to_string(current->parent_bound));
    }
    e.bound = std::min(e.bound, current->parent_bound);
    if (current->id == 0) t.root_lp = e.bound;

    if (opts.rounding_heuristic) {
      const double v = problem.round_responses();
      if (!t.has_incumbent || v > t.incumbent + 1e-9) {
        problem.keep_rounded();
        t.incumbent = v;
        t.has_incumbent = true;
      }
    }
    if (t.has_incumbent && e.bound <= t.incumbent + kObjectiveTol) {
      log_node(opts.node_log, *current, e, "pruned");
      current.reset();
      continue;
    }
    if (integral(e.q)) {
      problem.keep_integral();
      t.incumbent = e.bound;
      t.has_incumbent = true;
      log_node(opts.node_log, *current, e, "integral");
      current.reset();
      continue;
    }
    auto [one, zero] = branch(*current, e.q, p);
    one.parent_bound = zero.parent_bound = e.bound;
    one.id = next_id++;
    zero.id = next_id++;
    log_node(opts.node_log, *current, e, "branched");
    open.push(std::move(zero));
    current = std::move(one);
  }

  t.best_bound = t.incumbent;
  if (t.timed_out) {
    while (!open.empty()) {
      t.best_bound = std::max(t.best_bound, open.top().parent_bound);
      open.pop();
    }
  }
  return t;
}

MixedStrategy make_strategy(const GameSSG& g, const std::vector<Column>& cols, const std::vector<double>& x,
                            const std::vector<int>* targets) {
  MixedStrategy s;
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 1e-12) total += x[i];
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 1e-12) s.support.push_back({cols[i], x[i] / total});
  }
  const auto cov = s.coverage(g.n_targets);
  if (targets == nullptr) {
    s.responses = sse_responses(g, cov);
  } else {
    s.responses.resize(g.n_attackers);
    for (int k = 0; k < g.n_attackers; ++k) {
      const int j = (*targets)[k];
      s.responses[k] = {j, defender_utility(g, k, j, cov[j]), attacker_utility(g, k, j, cov[j])};
    }
  }
  return s;
}

class SsgProblem {
 public:
  SsgProblem(const GameSSG& g, ColumnGeneration& cg, const ColumnPool& pool) : g_(g), cg_(cg), pool_(pool) {}

  NodeEval evaluate(const Node& node) {
    last_ = cg_.run(node.fixings);
    NodeEval e;
    e.status = last_.status;
    e.columns_added = last_.columns_added;
    if (e.status != NodeStatus::Optimal) return e;
    e.bound = last_.outcome.objective;
    const auto& L = last_.layout;
    e.q.assign(g_.n_attackers, std::vector<double>(g_.n_targets, 0.0));
    for (int k = 0; k < g_.n_attackers; ++k) {
      for (int j = 0; j < g_.n_targets; ++j) e.q[k][j] = last_.outcome.primal[L.q_var(k, j)];
    }
    q_ = e.q;
    return e;
  }

  double round_responses() {
    rounded_ = make_strategy(g_, columns(), x(), nullptr);
    return expected_value(g_, rounded_.responses);
  }
  void keep_rounded() { best_ = rounded_; }

  void keep_integral() {
    std::vector<int> targets(g_.n_attackers);
    for (int k = 0; k < g_.n_attackers; ++k) {
      targets[k] = static_cast<int>(std::max_element(q_[k].begin(), q_[k].end()) - q_[k].begin());
    }
    best_ = make_strategy(g_, columns(), x(), &targets);
  }

  const MixedStrategy& best() const { return best_; }

 private:
  std::vector<Column> columns() const {
    return {pool_.columns().begin(), pool_.columns().begin() + static_cast<long>(last_.layout.x_var.size())};
  }
  std::vector<double> x() const {
    std::vector<double> v;
    for (int var : last_.layout.x_var) v.push_back(std::max(0.0, last_.outcome.primal[var]));
    return v;
  }

  const GameSSG& g_;
  ColumnGeneration& cg_;
  const ColumnPool& pool_;
  NodeLp last_;
  Matrix q_;
  MixedStrategy rounded_;
  MixedStrategy best_;
};

class SgProblem {
 public:
  SgProblem(const GameSG& g, const FormulationSpec& spec) : g_(g), spec_(spec) {}

  NodeEval evaluate(const Node& node) {
    master_ = build_master_sg(g_, spec_, node.fixings);
    out_ = solve_lp(master_.lp);
    NodeEval e;
    if (out_.status == LpStatus::Infeasible) return e;
    if (out_.status == LpStatus::Unbounded) throw NumericalFailure("SG master is unbounded");
    e.status = NodeStatus::Optimal;
    e.bound = out_.objective;
    e.q.assign(g_.n_attackers(), std::vector<double>(g_.n_follower(), 0.0));
    for (int k = 0; k < g_.n_attackers(); ++k) {
      for (int j = 0; j < g_.n_follower(); ++j) e.q[k][j] = out_.primal[master_.layout.q_var(k, j)];
    }
    q_ = e.q;
    return e;
  }

  double round_responses() {
    rounded_x_ = x();
    rounded_r_.assign(g_.n_attackers(), 0);
    double value = 0.0;
    for (int k = 0; k < g_.n_attackers(); ++k) {
      std::vector<double> cu(g_.n_follower(), 0.0), lu(g_.n_follower(), 0.0);
      for (int j = 0; j < g_.n_follower(); ++j) {
        for (int i = 0; i < g_.n_leader(); ++i) {
          cu[j] += g_.C[k][i][j] * rounded_x_[i];
          lu[j] += g_.R[k][i][j] * rounded_x_[i];
        }
      }
      const double best = *std::max_element(cu.begin(), cu.end());
      int pick = -1;
      for (int j = 0; j < g_.n_follower(); ++j) {
        if (cu[j] >= best - 1e-9 && (pick < 0 || lu[j] > lu[pick])) pick = j;
      }
      rounded_r_[k] = pick;
      value += g_.p[k] * lu[pick];
    }
    return value;
  }
  void keep_rounded() {
    best_x_ = rounded_x_;
    best_r_ = rounded_r_;
  }
  void keep_integral() {
    best_x_ = x();
    best_r_.assign(g_.n_attackers(), 0);
    for (int k = 0; k < g_.n_attackers(); ++k) {
      best_r_[k] = static_cast<int>(std::max_element(q_[k].begin(), q_[k].end()) - q_[k].begin());
    }
  }

  std::vector<double> best_x_;
  std::vector<int> best_r_;

 private:
  std::vector<double> x() const {
    std::vector<double> v;
    for (int var : master_.layout.x_var) v.push_back(std::max(0.0, out_.primal[var]));
    return v;
  }

  const GameSG& g_;
  FormulationSpec spec_;
  Master master_;
  LpOutcome out_;
  Matrix q_;
  std::vector<double> rounded_x_;
  std::vector<int> rounded_r_;
};

Clock::time_point deadline_after(double seconds) {
  const auto cap = std::chrono::hours(24 * 365);
  if (!(seconds < 3.0e7)) return Clock::now() + cap;
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
}

void seed_pool(const GameSSG& g, const SolveOptions& opts, ColumnPool& pool) {
  if (opts.initial_columns) {
    for (const auto& c : *opts.initial_columns) {
      if (!c.affordable(g)) throw std::invalid_argument("initial column " + c.to_string() + " is over budget");
      pool.add(c);
    }
    if (pool.size() == 0) throw std::invalid_argument("initial column set is empty");
    return;
  }
  const int count = opts.init_cols < 0 ? g.n_targets : opts.init_cols;
  for (const auto& c : initial_columns(g, count, opts.seed)) pool.add(c);
}

void check_options(const SolveOptions& opts) {
  if (opts.delta && !(*opts.delta > 0.0 && *opts.delta <= 1.0)) {
    throw std::invalid_argument("stabilization delta must lie in (0, 1]");
  }
  if (opts.pricer_cols < 1) throw std::invalid_argument("pricer_cols must be >= 1");
}

}  // namespace

SolveResult solve(const GameSSG& g, const FormulationSpec& spec, const SolveOptions& opts) {
  check_options(opts);
  const auto start = Clock::now();
  const auto deadline = deadline_after(opts.time_limit_s);

  ColumnPool pool;
  seed_pool(g, opts, pool);
  ColgenCounters counters;
  ColumnGeneration cg(g, spec, opts, pool, counters, deadline);
  SsgProblem problem(g, cg, pool);

  SolveResult result;
  auto& rep = result.report;
  rep.formulation = to_string(spec.base);
  rep.cuts = spec.base == Formulation::D2 ? "none" : to_string(spec.scope);
  rep.initial_columns = static_cast<long>(pool.size());

  const auto t = run_tree(problem, g.n_attackers, g.n_targets, g.p, opts, deadline);

  rep.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  rep.nodes = t.nodes;
  rep.columns_generated = counters.columns_generated;
  rep.pricing_iterations = counters.pricing_iterations;
  rep.farkas_calls = counters.farkas_calls;
  rep.mispricings = counters.mispricings;
  rep.root_lp_value = t.root_lp;
  if (!t.has_incumbent) {
    rep.status = t.timed_out ? SolveStatus::TimeLimit : SolveStatus::Infeasible;
    rep.objective = -kInf;
    rep.best_bound = t.timed_out ? t.best_bound : -kInf;
    return result;
  }
  rep.status = t.timed_out ? SolveStatus::TimeLimit : SolveStatus::Optimal;
  rep.objective = t.incumbent;
  rep.best_bound = t.best_bound;
  rep.root_gap_pct = root_gap_percent(t.root_lp, t.incumbent);
  result.strategy = problem.best();
  return result;
}

RootLpResult solve_root_lp(const GameSSG& g, const FormulationSpec& spec, const SolveOptions& opts) {
  check_options(opts);
  ColumnPool pool;
  seed_pool(g, opts, pool);
  RootLpResult r;
  ColumnGeneration cg(g, spec, opts, pool, r.counters, deadline_after(opts.time_limit_s));
  auto node = cg.run(Fixings(g.n_attackers, g.n_targets));
  r.status = node.status;
  r.value = node.outcome.objective;
  r.outcome = std::move(node.outcome);
  r.layout = std::move(node.layout);
  r.columns = pool.columns();
  return r;
}

SgSolveResult solve_sg(const GameSG& g, const FormulationSpec& spec, const SolveOptions& opts) {
  const auto start = Clock::now();
  SgProblem problem(g, spec);
  const auto t = run_tree(problem, g.n_attackers(), g.n_follower(), g.p, opts, deadline_after(opts.time_limit_s));
  SgSolveResult r;
  auto& rep = r.report;
  rep.formulation = to_string(spec.base);
  rep.cuts = spec.base == Formulation::D2 ? "none" : to_string(spec.scope);
  rep.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  rep.nodes = t.nodes;
  rep.root_lp_value = t.root_lp;
  rep.status = !t.has_incumbent ? (t.timed_out ? SolveStatus::TimeLimit : SolveStatus::Infeasible)
                                : (t.timed_out ? SolveStatus::TimeLimit : SolveStatus::Optimal);
  rep.objective = t.has_incumbent ? t.incumbent : -kInf;
  rep.best_bound = t.best_bound;
  if (t.has_incumbent) rep.root_gap_pct = root_gap_percent(t.root_lp, t.incumbent);
  r.x = problem.best_x_;
  r.responses = problem.best_r_;
  return r;
}

double sg_root_lp_value(const GameSG& g, const FormulationSpec& spec) {
  const auto out = solve_lp(build_master_sg(g, spec).lp);
  if (out.status != LpStatus::Optimal) throw NumericalFailure("SG root relaxation not optimal");
  return out.objective;
}

}  // namespace ssgbnp
