#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ssgbnp {

using Matrix = std::vector<std::vector<double>>;
using Tensor3 = std::vector<Matrix>;

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Budget-constrained security game. Payoff tables are indexed [attacker][target].
struct GameSSG {
  int n_targets = 0;
  int n_attackers = 0;
  std::vector<double> p;
  Matrix d_prot;
  Matrix d_unprot;
  Matrix a_prot;
  Matrix a_unprot;
  std::vector<double> w;
  double budget = 0.0;
  std::int64_t seed = 0;

  bool operator==(const GameSSG&) const = default;
};

/// Generic Bayesian Stackelberg game with explicit leader strategies.
/// R[k][i][j] is the leader payoff, C[k][i][j] the follower payoff.
struct GameSG {
  Tensor3 R;
  Tensor3 C;
  std::vector<double> p;

  int n_attackers() const { return static_cast<int>(p.size()); }
  int n_leader() const { return R.empty() ? 0 : static_cast<int>(R[0].size()); }
  int n_follower() const {
    return (R.empty() || R[0].empty()) ? 0 : static_cast<int>(R[0][0].size());
  }

  bool operator==(const GameSG&) const = default;
};

using Instance = std::variant<GameSSG, GameSG>;

/// A defender pure strategy: the 0/1 incidence vector of protected targets.
class Column {
 public:
  Column() = default;
  explicit Column(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  static Column empty(int n) { return Column(std::vector<std::uint8_t>(n, 0)); }
  static Column singleton(int n, int j) {
    Column c = empty(n);
    c.bits_[j] = 1;
    return c;
  }

  int size() const { return static_cast<int>(bits_.size()); }
  bool covers(int j) const { return bits_[j] != 0; }
  void set(int j, bool on) { bits_[j] = on ? 1 : 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  int count() const;
  double cost(const std::vector<double>& w) const;
  bool affordable(const GameSSG& g) const;
  std::string to_string() const;

  bool operator==(const Column&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct ColumnHash {
  std::size_t operator()(const Column& c) const noexcept;
};

struct AttackerResponse {
  int target = -1;
  double defender_utility = 0.0;  // f^k
  double attacker_utility = 0.0;  // s^k
};

struct SupportEntry {
  Column column;
  double probability = 0.0;
};

struct MixedStrategy {
  std::vector<SupportEntry> support;
  std::vector<AttackerResponse> responses;

  std::vector<double> coverage(int n_targets) const;
};

enum class SolveStatus { Optimal, TimeLimit, Infeasible };

std::string to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  double best_bound = 0.0;
  double wall_time_s = 0.0;
  long nodes = 0;
  double root_lp_value = 0.0;
  double root_gap_pct = 0.0;
  long columns_generated = 0;
  long pricing_iterations = 0;
  long farkas_calls = 0;
  long mispricings = 0;
  long initial_columns = 0;
  std::string formulation;
  std::string cuts;
};

/// Root gap as a percentage of max(1, |integer optimum|).
double root_gap_percent(double root_lp, double integer_value);

/// Throws ValidationError naming the first violated invariant. Probabilities that
/// miss 1 by more than 1e-9 but at most 1e-6 are normalized in place.
void validate(GameSSG& g);
void validate(GameSG& g);
void validate(Instance& inst);

// Utilities at coverage c of target j for attacker type k.
inline double defender_utility(const GameSSG& g, int k, int j, double c) {
  return (g.d_prot[k][j] - g.d_unprot[k][j]) * c + g.d_unprot[k][j];
}
inline double attacker_utility(const GameSSG& g, int k, int j, double c) {
  return (g.a_prot[k][j] - g.a_unprot[k][j]) * c + g.a_unprot[k][j];
}

/// Strong Stackelberg best responses to a coverage vector: each attacker picks
/// an attacker-optimal target (ties within tol) that is best for the defender.
std::vector<AttackerResponse> sse_responses(const GameSSG& g,
                                            const std::vector<double>& coverage,
                                            double tol = 1e-9);

/// Expected defender value Σ_k p^k f^k of a set of responses.
double expected_value(const GameSSG& g, const std::vector<AttackerResponse>& r);

/// Checks the MixedStrategy invariants against g; returns an empty string when
/// all hold, otherwise a description of the first violation.
std::string check_mixed_strategy(const GameSSG& g, const MixedStrategy& s,
                                 double tol = 1e-6);

}  // namespace ssgbnp
