#include "ssgbnp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ssgbnp {

int Column::count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double Column::cost(const std::vector<double>& w) const {
  double total = 0.0;
  for (int j = 0; j < size(); ++j) {
    if (bits_[j]) total += w[j];
  }
  return total;
}

bool Column::affordable(const GameSSG& g) const {
  return size() == g.n_targets && cost(g.w) <= g.budget + 1e-9;
}

std::string Column::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int j = 0; j < size(); ++j) {
    if (!bits_[j]) continue;
    if (!first) s += ",";
    s += std::to_string(j + 1);
    first = false;
  }
  return s + "}";
}

std::size_t ColumnHash::operator()(const Column& c) const noexcept {
  // FNV-1a over the incidence bytes.
  std::size_t h = 1469598103934665603ull;
  for (auto b : c.bits()) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<double> MixedStrategy::coverage(int n_targets) const {
  std::vector<double> cov(n_targets, 0.0);
  for (const auto& e : support) {
    for (int j = 0; j < n_targets; ++j) {
      if (e.column.covers(j)) cov[j] += e.probability;
    }
  }
  return cov;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::TimeLimit: return "TimeLimit";
    case SolveStatus::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

double root_gap_percent(double root_lp, double integer_value) {
  return 100.0 * (root_lp - integer_value) / std::max(1.0, std::abs(integer_value));
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

void check_probabilities(std::vector<double>& p) {
  if (p.empty()) fail("p must be non-empty");
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!std::isfinite(p[k]) || p[k] < 0.0 || p[k] > 1.0) {
      std::ostringstream os;
      os << "probability p[" << k << "] = " << p[k] << " outside [0,1]";
      fail(os.str());
    }
  }
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  const double off = std::abs(sum - 1.0);
  if (off > 1e-6) {
    std::ostringstream os;
    os << "probabilities sum " << sum;
    fail(os.str());
  }
  if (off > 1e-9) {
    for (auto& v : p) v /= sum;
  }
}

void check_table(const Matrix& m, const char* name, int rows, int cols) {
  if (static_cast<int>(m.size()) != rows) {
    std::ostringstream os;
    os << name << " has " << m.size() << " rows, expected " << rows;
    fail(os.str());
  }
  for (int k = 0; k < rows; ++k) {
    if (static_cast<int>(m[k].size()) != cols) {
      std::ostringstream os;
      os << name << "[" << k << "] has " << m[k].size() << " entries, expected " << cols;
      fail(os.str());
    }
    for (int j = 0; j < cols; ++j) {
      if (!std::isfinite(m[k][j])) {
        std::ostringstream os;
        os << name << "[" << k << "][" << j << "] is not finite";
        fail(os.str());
      }
    }
  }
}

}  // namespace

void validate(GameSSG& g) {
  if (g.n_targets < 1) fail("n_targets must be positive");
  if (g.n_attackers < 1) fail("n_attackers must be positive");
  if (static_cast<int>(g.p.size()) != g.n_attackers) {
    fail("p has " + std::to_string(g.p.size()) + " entries, expected " +
         std::to_string(g.n_attackers));
  }
  check_probabilities(g.p);
  check_table(g.d_prot, "d_prot", g.n_attackers, g.n_targets);
  check_table(g.d_unprot, "d_unprot", g.n_attackers, g.n_targets);
  check_table(g.a_prot, "a_prot", g.n_attackers, g.n_targets);
  check_table(g.a_unprot, "a_unprot", g.n_attackers, g.n_targets);
  if (static_cast<int>(g.w.size()) != g.n_targets) {
    fail("w has " + std::to_string(g.w.size()) + " entries, expected " +
         std::to_string(g.n_targets));
  }
  for (int j = 0; j < g.n_targets; ++j) {
    if (!std::isfinite(g.w[j]) || g.w[j] <= 0.0) {
      fail("cost w[" + std::to_string(j) + "] must be positive");
    }
  }
  if (!std::isfinite(g.budget) || g.budget < 0.0) fail("budget must be finite and >= 0");
  for (int k = 0; k < g.n_attackers; ++k) {
    for (int j = 0; j < g.n_targets; ++j) {
      if (g.d_prot[k][j] < g.d_unprot[k][j]) {
        std::ostringstream os;
        os << "payoff ordering violated: d_prot[" << k << "][" << j << "] = " << g.d_prot[k][j]
           << " < d_unprot[" << k << "][" << j << "] = " << g.d_unprot[k][j];
        fail(os.str());
      }
      if (g.a_prot[k][j] > g.a_unprot[k][j]) {
        std::ostringstream os;
        os << "payoff ordering violated: a_prot[" << k << "][" << j << "] = " << g.a_prot[k][j]
           << " > a_unprot[" << k << "][" << j << "] = " << g.a_unprot[k][j];
        fail(os.str());
      }
    }
  }
}

void validate(GameSG& g) {
  const int K = static_cast<int>(g.p.size());
  if (K < 1) fail("p must be non-empty");
  if (static_cast<int>(g.R.size()) != K || static_cast<int>(g.C.size()) != K) {
    fail("R and C must have one matrix per attacker type");
  }
  const int I = g.n_leader();
  const int J = g.n_follower();
  if (I < 1 || J < 1) fail("R must have at least one leader and one follower strategy");
  for (int k = 0; k < K; ++k) {
    check_table(g.R[k], "R", I, J);
    check_table(g.C[k], "C", I, J);
  }
  check_probabilities(g.p);
}

void validate(Instance& inst) {
  std::visit([](auto& g) { validate(g); }, inst);
}

std::vector<AttackerResponse> sse_responses(const GameSSG& g,
                                            const std::vector<double>& coverage,
                                            double tol) {
  std::vector<AttackerResponse> out(g.n_attackers);
  for (int k = 0; k < g.n_attackers; ++k) {
    double best_att = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.n_targets; ++j) {
      best_att = std::max(best_att, attacker_utility(g, k, j, coverage[j]));
    }
    AttackerResponse r;
    double best_def = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.n_targets; ++j) {
      const double a = attacker_utility(g, k, j, coverage[j]);
      if (a < best_att - tol) continue;
      const double d = defender_utility(g, k, j, coverage[j]);
      if (d > best_def) {
        best_def = d;
        r = {j, d, a};
      }
    }
    out[k] = r;
  }
  return out;
}

double expected_value(const GameSSG& g, const std::vector<AttackerResponse>& r) {
  double v = 0.0;
  for (int k = 0; k < g.n_attackers; ++k) v += g.p[k] * r[k].defender_utility;
  return v;
}

std::string check_mixed_strategy(const GameSSG& g, const MixedStrategy& s, double tol) {
  double total = 0.0;
  for (const auto& e : s.support) {
    if (e.probability <= 0.0) return "non-positive support probability";
    if (!e.column.affordable(g)) return "support column " + e.column.to_string() + " over budget";
    total += e.probability;
  }
  if (std::abs(total - 1.0) > 1e-8) return "support probabilities sum " + std::to_string(total);
  if (static_cast<int>(s.responses.size()) != g.n_attackers) return "wrong number of responses";
  const auto cov = s.coverage(g.n_targets);
  for (int k = 0; k < g.n_attackers; ++k) {
    const auto& r = s.responses[k];
    if (r.target < 0 || r.target >= g.n_targets) return "response target out of range";
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.n_targets; ++j) best = std::max(best, attacker_utility(g, k, j, cov[j]));
    const double chosen_att = attacker_utility(g, k, r.target, cov[r.target]);
    if (chosen_att < best - tol) {
      return "attacker " + std::to_string(k) + " response is not attacker-optimal";
    }
    const double chosen_def = defender_utility(g, k, r.target, cov[r.target]);
    for (int j = 0; j < g.n_targets; ++j) {
      if (attacker_utility(g, k, j, cov[j]) >= best - 1e-9 &&
          defender_utility(g, k, j, cov[j]) > chosen_def + tol) {
        return "attacker " + std::to_string(k) + " tie not broken in the defender's favor";
      }
    }
  }
  return {};
}

}  // namespace ssgbnp
