#pragma once

#include <string>
#include <vector>

#include "ssgbnp/model.hpp"
#include "ssgbnp/simplex.hpp"

namespace ssgbnp {

enum class Formulation { D2, D2Plus, D2PlusPrime };
enum class CutScope { Attacker, Defender, Both };
enum class GameMode { SSG, GenericSG };

struct FormulationSpec {
  Formulation base = Formulation::D2Plus;
  CutScope scope = CutScope::Both;
  GameMode mode = GameMode::SSG;

  bool defender_cuts() const {
    if (base == Formulation::D2) return false;
    if (base == Formulation::D2PlusPrime) return true;
    return scope != CutScope::Attacker;
  }
  bool attacker_cuts() const {
    if (base == Formulation::D2) return false;
    if (base == Formulation::D2PlusPrime) return true;
    return scope != CutScope::Defender;
  }
  bool defender_strengthening() const {
    return base == Formulation::D2PlusPrime && scope != CutScope::Attacker;
  }
  bool attacker_strengthening() const {
    return base == Formulation::D2PlusPrime && scope != CutScope::Defender;
  }
};

std::string to_string(Formulation f);
std::string to_string(CutScope s);
Formulation parse_formulation(const std::string& s);
CutScope parse_cut_scope(const std::string& s);

/// All seven variants: D2, then D2plus and D2plusPrime for each scope.
std::vector<FormulationSpec> all_variants();

struct BigM {
  Matrix leader;    // [k][j]
  Matrix follower;  // [k][j]
};

BigM big_m_ssg(const GameSSG& g);
BigM big_m_sg(const GameSG& g);

struct CutCoefficients {
  Tensor3 leader;    // [k][j][j'] = D^k(j'|p) - D^k(j|u)
  Tensor3 attacker;  // [k][j][j'] = A^k(j'|u) - A^k(j|p)
};

CutCoefficients cut_coefficients_ssg(const GameSSG& g);

enum class FixState : signed char { Free = -1, Zero = 0, One = 1 };

/// Branching fixings on q, indexed [k * n_targets + j].
struct Fixings {
  int n_attackers = 0;
  int n_targets = 0;
  std::vector<FixState> state;

  Fixings() = default;
  Fixings(int attackers, int targets)
      : n_attackers(attackers), n_targets(targets),
        state(static_cast<std::size_t>(attackers) * targets, FixState::Free) {}

  FixState at(int k, int j) const { return state.empty() ? FixState::Free : state[k * n_targets + j]; }
  void set(int k, int j, FixState s) { state[k * n_targets + j] = s; }
  int fixed_count() const;
};

class InconsistentFixing : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Variable and row positions of a built master. Rows follow the canonical
/// order: leader, attacker upper, attacker lower, convexity, sum-q, strengthening
/// (defender block then attacker block), fixings.
struct MasterLayout {
  int n_targets = 0;     // |J| (follower strategies in SG mode)
  int n_attackers = 0;
  std::vector<int> x_var;  // one per column / leader strategy
  int q_begin = 0;
  int f_begin = 0;
  int s_begin = 0;

  int leader_begin = 0;
  int upper_begin = 0;
  int lower_begin = 0;
  int convexity_row = 0;
  int sumq_begin = 0;
  int strengthening_begin = 0;
  int defender_strengthening_rows = 0;
  int attacker_strengthening_rows = 0;
  int fixing_begin = 0;
  int fixing_rows = 0;

  int q_var(int k, int j) const { return q_begin + k * n_targets + j; }
  int leader_row(int k, int j) const { return leader_begin + k * n_targets + j; }
  int upper_row(int k, int j) const { return upper_begin + k * n_targets + j; }
  int lower_row(int k, int j) const { return lower_begin + k * n_targets + j; }
};

struct Master {
  LinearProgram lp;
  MasterLayout layout;
  std::vector<std::string> var_names;
  std::vector<std::string> row_names;
};

/// Restricted master over the given columns. Throws InconsistentFixing when a
/// fixing pattern leaves an attacker without a target or picks two.
Master build_master(const GameSSG& g, const std::vector<Column>& cols, const FormulationSpec& spec,
                    const Fixings& fixings = {});

/// Entries of a new x column in the master's rows (coverage terms and the
/// convexity row; zero elsewhere).
std::vector<double> master_column(const GameSSG& g, const MasterLayout& layout, const Column& col);

/// Full master for a generic game with every leader strategy explicit.
Master build_master_sg(const GameSG& g, const FormulationSpec& spec, const Fixings& fixings = {});

}  // namespace ssgbnp
