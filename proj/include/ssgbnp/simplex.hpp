#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "ssgbnp/model.hpp"

namespace ssgbnp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEq, GreaterEq, Equal };

/// Maximization LP with dense rows. Lower bounds are 0 or -inf, upper bounds
/// +inf or 1.
struct LinearProgram {
  struct Row {
    std::vector<double> coefficients;
    Relation relation = Relation::LessEq;
    double rhs = 0.0;
  };

  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  /// Adds a variable; existing rows get a zero coefficient.
  int add_variable(double cost, double lo = 0.0, double up = kInf);
  int add_row(std::vector<double> coefficients, Relation rel, double rhs);

  /// Throws std::invalid_argument on shape or bound violations.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus s);

/// Dual and Farkas multipliers share one sign convention: >= 0 on <= rows,
/// <= 0 on >= rows, free on = rows. A Farkas ray satisfies rho^T A_j >= 0 for
/// every nonnegative variable, = 0 for free variables, and rho^T b < 0.
struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> primal;
  double objective = 0.0;
  std::vector<double> duals;
  std::vector<double> upper_duals;  // one per variable; nonzero only for upper = 1
  std::vector<double> farkas;
  std::vector<double> farkas_upper;
  long iterations = 0;

  /// The ray multiplied by -1 on >= rows, i.e. the multipliers of the system
  /// written entirely in <= form. Every entry of an inequality row is >= 0.
  std::vector<double> normalized_farkas(const LinearProgram& lp) const;
};

/// Dense two-phase primal simplex on an explicit basis inverse. Columns can be
/// appended between solves; the next solve resumes from the current basis with
/// the new columns nonbasic.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp);

  LpOutcome solve();

  /// Appends a variable with the given objective coefficient and one entry per
  /// original row. Returns its user-level index.
  int add_column(double cost, const std::vector<double>& entries, double lower = 0.0);

  int num_vars() const { return static_cast<int>(user_cols_.size()); }

  /// Holds a variable at zero (or releases it) for subsequent solves. A basic
  /// held variable is driven out through phase one; the next solve starts
  /// from the current basis.
  void set_fixed_zero(int var, bool fixed);

  void set_trace(std::ostream* sink) { trace_ = sink; }

 private:
  struct InternalColumn {
    std::vector<double> a;  // standardized entries, length m
    std::vector<int> nz;    // rows with a nonzero entry
    double cost = 0.0;
    int user = -1;          // user variable, or -1 for logical columns
    double sign = 1.0;      // +1 for x+, -1 for x- of a free variable
    bool artificial = false;
    bool held = false;      // fixed at zero by set_fixed_zero
    bool blocked() const { return artificial || held; }
  };

  int add_internal(InternalColumn col);
  bool run_phase(int phase);
  void refactor();
  void compute_duals(const std::vector<double>& cost, std::vector<double>& y) const;
  double reduced_cost(const std::vector<double>& y, const std::vector<double>& cost,
                      int col) const;
  void pivot(int row, int entering, const std::vector<double>& alpha);
  void drive_out_artificials();
  void column_image(int col, std::vector<double>& alpha) const;  // B^-1 a_col
  double infeasibility() const;
  std::vector<double> phase_costs(int phase) const;
  LpOutcome make_outcome(LpStatus status, const std::vector<double>& y) const;

  int m_ = 0;            // standardized rows (user rows + upper-bound rows)
  int user_rows_ = 0;
  std::vector<double> row_sign_;
  std::vector<double> b_;
  std::vector<InternalColumn> cols_;
  std::vector<std::vector<int>> user_cols_;  // internal columns per user variable
  std::vector<int> upper_row_of_;            // user var -> internal row, or -1
  std::vector<int> basis_;
  std::vector<char> is_basic_;
  std::vector<double> binv_;  // row-major m x m
  std::vector<double> xb_;
  long iterations_ = 0;
  int pivots_since_refactor_ = 0;
  std::ostream* trace_ = nullptr;
};

/// One-shot solve of a validated program.
LpOutcome solve_lp(const LinearProgram& lp, std::ostream* trace = nullptr);

/// Human-readable LP text (objective, named rows, bounds).
std::string render_lp_text(const LinearProgram& lp, const std::vector<std::string>& var_names = {},
                           const std::vector<std::string>& row_names = {});

}  // namespace ssgbnp
