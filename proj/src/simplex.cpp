#include "ssgbnp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ssgbnp {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kTieTol = 1e-12;
constexpr int kRefactorEvery = 100;
constexpr int kDegenerateBeforeBland = 50;

}  // namespace

int LinearProgram::add_variable(double cost, double lo, double up) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(up);
  for (auto& r : rows) r.coefficients.push_back(0.0);
  return num_vars() - 1;
}

int LinearProgram::add_row(std::vector<double> coefficients, Relation rel, double rhs) {
  if (static_cast<int>(coefficients.size()) != num_vars()) {
    throw std::invalid_argument("row has " + std::to_string(coefficients.size()) +
                                " coefficients, expected " + std::to_string(num_vars()));
  }
  rows.push_back({std::move(coefficients), rel, rhs});
  return num_rows() - 1;
}

void LinearProgram::validate() const {
  const auto n = objective.size();
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("bound vectors do not match variable count");
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!std::isfinite(objective[v])) throw std::invalid_argument("non-finite objective");
    if (!(lower[v] == 0.0 || lower[v] == -kInf)) {
      throw std::invalid_argument("lower bound must be 0 or -inf");
    }
    if (!(upper[v] == kInf || upper[v] == 1.0)) {
      throw std::invalid_argument("upper bound must be +inf or 1");
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.coefficients.size() != n) {
      throw std::invalid_argument("row " + std::to_string(i) + " coefficient count mismatch");
    }
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("row " + std::to_string(i) + " rhs");
    for (double a : r.coefficients) {
      if (!std::isfinite(a)) {
        throw std::invalid_argument("row " + std::to_string(i) + " has a non-finite entry");
      }
    }
  }
}

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

std::vector<double> LpOutcome::normalized_farkas(const LinearProgram& lp) const {
  std::vector<double> out = farkas;
  for (int i = 0; i < lp.num_rows() && i < static_cast<int>(out.size()); ++i) {
    if (lp.rows[i].relation == Relation::GreaterEq) out[i] = -out[i];
  }
  return out;
}

SimplexSolver::SimplexSolver(const LinearProgram& lp) {
  lp.validate();
  user_rows_ = lp.num_rows();
  const int n = lp.num_vars();
  upper_row_of_.assign(n, -1);
  int next_row = user_rows_;
  for (int v = 0; v < n; ++v) {
    if (lp.upper[v] == 1.0) upper_row_of_[v] = next_row++;
  }
  m_ = next_row;

  row_sign_.assign(m_, 1.0);
  b_.assign(m_, 0.0);
  std::vector<Relation> rel(m_, Relation::LessEq);
  for (int i = 0; i < user_rows_; ++i) {
    const auto& r = lp.rows[i];
    rel[i] = r.relation;
    if (r.rhs < 0.0) {
      row_sign_[i] = -1.0;
      if (rel[i] == Relation::LessEq) {
        rel[i] = Relation::GreaterEq;
      } else if (rel[i] == Relation::GreaterEq) {
        rel[i] = Relation::LessEq;
      }
    }
    b_[i] = std::abs(r.rhs);
  }
  for (int i = user_rows_; i < m_; ++i) b_[i] = 1.0;

  user_cols_.resize(n);
  for (int v = 0; v < n; ++v) {
    InternalColumn c;
    c.a.assign(m_, 0.0);
    for (int i = 0; i < user_rows_; ++i) c.a[i] = row_sign_[i] * lp.rows[i].coefficients[v];
    if (upper_row_of_[v] >= 0) c.a[upper_row_of_[v]] = 1.0;
    c.cost = lp.objective[v];
    c.user = v;
    user_cols_[v].push_back(add_internal(c));
    if (lp.lower[v] == -kInf) {
      for (auto& e : c.a) e = -e;
      c.cost = -c.cost;
      c.sign = -1.0;
      user_cols_[v].push_back(add_internal(c));
    }
  }

  basis_.assign(m_, -1);
  for (int i = 0; i < m_; ++i) {
    InternalColumn unit;
    unit.a.assign(m_, 0.0);
    if (rel[i] == Relation::LessEq) {
      unit.a[i] = 1.0;
      basis_[i] = add_internal(unit);
      continue;
    }
    if (rel[i] == Relation::GreaterEq) {
      InternalColumn surplus;
      surplus.a.assign(m_, 0.0);
      surplus.a[i] = -1.0;
      add_internal(surplus);
    }
    unit.a[i] = 1.0;
    unit.artificial = true;
    basis_[i] = add_internal(unit);
  }
  is_basic_.assign(cols_.size(), 0);
  for (int c : basis_) is_basic_[c] = 1;
  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = 1.0;
  xb_ = b_;
}

int SimplexSolver::add_internal(InternalColumn col) {
  col.nz.clear();
  for (int i = 0; i < m_; ++i) {
    if (col.a[i] != 0.0) col.nz.push_back(i);
  }
  cols_.push_back(std::move(col));
  is_basic_.push_back(0);
  return static_cast<int>(cols_.size()) - 1;
}

int SimplexSolver::add_column(double cost, const std::vector<double>& entries, double lower) {
  if (static_cast<int>(entries.size()) != user_rows_) {
    throw std::invalid_argument("column has " + std::to_string(entries.size()) +
                                " entries, expected " + std::to_string(user_rows_));
  }
  const int v = static_cast<int>(user_cols_.size());
  InternalColumn c;
  c.a.assign(m_, 0.0);
  for (int i = 0; i < user_rows_; ++i) c.a[i] = row_sign_[i] * entries[i];
  c.cost = cost;
  c.user = v;
  user_cols_.emplace_back();
  upper_row_of_.push_back(-1);
  user_cols_[v].push_back(add_internal(c));
  if (lower == -kInf) {
    for (auto& e : c.a) e = -e;
    c.cost = -c.cost;
    c.sign = -1.0;
    user_cols_[v].push_back(add_internal(c));
  }
  return v;
}

void SimplexSolver::set_fixed_zero(int var, bool fixed) {
  for (int c : user_cols_.at(var)) cols_[c].held = fixed;
}

std::vector<double> SimplexSolver::phase_costs(int phase) const {
  std::vector<double> c(cols_.size(), 0.0);
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    c[j] = phase == 1 ? (cols_[j].blocked() ? -1.0 : 0.0) : (cols_[j].blocked() ? 0.0 : cols_[j].cost);
  }
  return c;
}

void SimplexSolver::compute_duals(const std::vector<double>& cost, std::vector<double>& y) const {
  y.assign(m_, 0.0);
  for (int r = 0; r < m_; ++r) {
    const double cb = cost[basis_[r]];
    if (cb == 0.0) continue;
    const double* row = &binv_[static_cast<std::size_t>(r) * m_];
    for (int i = 0; i < m_; ++i) y[i] += cb * row[i];
  }
}

double SimplexSolver::reduced_cost(const std::vector<double>& y, const std::vector<double>& cost,
                                   int col) const {
  const auto& c = cols_[col];
  double d = cost[col];
  for (int i : c.nz) d -= y[i] * c.a[i];
  return d;
}

void SimplexSolver::refactor() {
  const std::size_t mm = static_cast<std::size_t>(m_);
  // Gauss-Jordan on [B | I] with partial pivoting.
  std::vector<double> bmat(mm * mm, 0.0);
  for (int r = 0; r < m_; ++r) {
    const auto& c = cols_[basis_[r]];
    for (int i : c.nz) bmat[i * mm + r] = c.a[i];
  }
  std::vector<double> inv(mm * mm, 0.0);
  for (std::size_t i = 0; i < mm; ++i) inv[i * mm + i] = 1.0;
  for (std::size_t c = 0; c < mm; ++c) {
    std::size_t piv = c;
    double best = std::abs(bmat[c * mm + c]);
    for (std::size_t r = c + 1; r < mm; ++r) {
      const double v = std::abs(bmat[r * mm + c]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < 1e-12) throw NumericalFailure("simplex basis is singular");
    if (piv != c) {
      for (std::size_t k = 0; k < mm; ++k) {
        std::swap(bmat[c * mm + k], bmat[piv * mm + k]);
        std::swap(inv[c * mm + k], inv[piv * mm + k]);
      }
    }
    const double d = bmat[c * mm + c];
    for (std::size_t k = c; k < mm; ++k) bmat[c * mm + k] /= d;
    for (std::size_t k = 0; k < mm; ++k) inv[c * mm + k] /= d;
    for (std::size_t r = 0; r < mm; ++r) {
      if (r == c) continue;
      const double f = bmat[r * mm + c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < mm; ++k) bmat[r * mm + k] -= f * bmat[c * mm + k];
      for (std::size_t k = 0; k < mm; ++k) inv[r * mm + k] -= f * inv[c * mm + k];
    }
  }
  binv_ = std::move(inv);
  for (int r = 0; r < m_; ++r) {
    double v = 0.0;
    const double* row = &binv_[static_cast<std::size_t>(r) * m_];
    for (int i = 0; i < m_; ++i) v += row[i] * b_[i];
    if (v < 0.0) {
      if (v < -1e-7 * (1.0 + std::abs(b_[r]))) throw NumericalFailure("simplex lost primal feasibility");
      v = 0.0;
    }
    xb_[r] = v;
  }
  pivots_since_refactor_ = 0;
}

void SimplexSolver::pivot(int row, int entering, const std::vector<double>& alpha) {
  const double ar = alpha[row];
  double theta = xb_[row] / ar;
  if (theta < 0.0) theta = 0.0;
  for (int i = 0; i < m_; ++i) {
    if (i == row) continue;
    xb_[i] -= theta * alpha[i];
    if (xb_[i] < 0.0 && xb_[i] > -1e-9) xb_[i] = 0.0;
  }
  xb_[row] = theta;
  double* prow = &binv_[static_cast<std::size_t>(row) * m_];
  for (int k = 0; k < m_; ++k) prow[k] /= ar;
  for (int i = 0; i < m_; ++i) {
    if (i == row || alpha[i] == 0.0) continue;
    double* irow = &binv_[static_cast<std::size_t>(i) * m_];
    const double f = alpha[i];
    for (int k = 0; k < m_; ++k) irow[k] -= f * prow[k];
  }
  is_basic_[basis_[row]] = 0;
  basis_[row] = entering;
  is_basic_[entering] = 1;
  ++iterations_;
  ++pivots_since_refactor_;
}

bool SimplexSolver::run_phase(int phase) {
  const auto cost = phase_costs(phase);
  const long limit = iterations_ + 200000 + 50L * (m_ + static_cast<long>(cols_.size()));
  bool bland = false;
  int degenerate_run = 0;
  std::vector<double> y;
  std::vector<double> alpha(m_);
  while (true) {
    if (pivots_since_refactor_ >= kRefactorEvery) refactor();
    compute_duals(cost, y);

    int entering = -1;
    double best_d = kReducedCostTol;
    for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
      if (is_basic_[j] || cols_[j].blocked()) continue;
      const double d = reduced_cost(y, cost, j);
      if (d > best_d) {
        best_d = d;
        entering = j;
        if (bland) break;
      }
    }
    if (entering < 0) return true;

    column_image(entering, alpha);

    int leave = -1;
    double best_ratio = kInf;
    for (int r = 0; r < m_; ++r) {
      double ratio;
      if (phase == 2 && cols_[basis_[r]].blocked() && std::abs(alpha[r]) > kPivotTol) {
        ratio = 0.0;
      } else if (alpha[r] > kPivotTol) {
        ratio = xb_[r] / alpha[r];
      } else {
        continue;
      }
      if (leave < 0 || ratio < best_ratio - kTieTol) {
        leave = r;
        best_ratio = ratio;
      } else if (bland && std::abs(ratio - best_ratio) <= kTieTol && basis_[r] < basis_[leave]) {
        leave = r;
      }
    }
    if (leave < 0) {
      if (phase == 1) throw NumericalFailure("phase one reported unbounded");
      return false;
    }
    if (cols_[basis_[leave]].blocked() && alpha[leave] < 0.0) xb_[leave] = 0.0;
    const int leaving = basis_[leave];
    pivot(leave, entering, alpha);

    if (best_ratio < kTieTol) {
      if (++degenerate_run > kDegenerateBeforeBland) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
    if (trace_) {
      double obj = 0.0;
      for (int r = 0; r < m_; ++r) obj += cost[basis_[r]] * xb_[r];
      *trace_ << "pivot " << iterations_ << " phase " << phase << " enter " << entering
              << " leave " << leaving << " obj " << std::setprecision(12) << obj << '\n';
    }
    if (iterations_ > limit) throw NumericalFailure("simplex iteration limit exceeded");
  }
}

void SimplexSolver::drive_out_artificials() {
  std::vector<double> alpha(m_);
  for (int r = 0; r < m_; ++r) {
    if (!cols_[basis_[r]].blocked()) continue;
    const double* row = &binv_[static_cast<std::size_t>(r) * m_];
    int best = -1;
    double best_v = 1e-7;
    for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
      if (is_basic_[j] || cols_[j].blocked()) continue;
      double v = 0.0;
      for (int i : cols_[j].nz) v += row[i] * cols_[j].a[i];
      if (std::abs(v) > best_v) {
        best_v = std::abs(v);
        best = j;
      }
    }
    if (best < 0) continue;  // redundant row; the blocked column stays basic at zero
    column_image(best, alpha);
    xb_[r] = 0.0;
    pivot(r, best, alpha);
  }
}

LpOutcome SimplexSolver::make_outcome(LpStatus status, const std::vector<double>& y) const {
  LpOutcome out;
  out.status = status;
  out.iterations = iterations_;
  const int n = static_cast<int>(user_cols_.size());
  if (status == LpStatus::Infeasible) {
    out.farkas.assign(user_rows_, 0.0);
    for (int i = 0; i < user_rows_; ++i) out.farkas[i] = row_sign_[i] * y[i];
    out.farkas_upper.assign(n, 0.0);
    for (int v = 0; v < n; ++v) {
      if (upper_row_of_[v] >= 0) out.farkas_upper[v] = y[upper_row_of_[v]];
    }
    return out;
  }
  out.primal.assign(n, 0.0);
  for (int r = 0; r < m_; ++r) {
    const auto& c = cols_[basis_[r]];
    if (c.user >= 0) out.primal[c.user] += c.sign * xb_[r];
  }
  double obj = 0.0;
  for (int v = 0; v < n; ++v) {
    const auto& c = cols_[user_cols_[v][0]];
    obj += c.cost * out.primal[v];
  }
  out.objective = obj;
  if (status == LpStatus::Optimal) {
    out.duals.assign(user_rows_, 0.0);
    for (int i = 0; i < user_rows_; ++i) out.duals[i] = row_sign_[i] * y[i];
    out.upper_duals.assign(n, 0.0);
    for (int v = 0; v < n; ++v) {
      if (upper_row_of_[v] >= 0) out.upper_duals[v] = y[upper_row_of_[v]];
    }
  }
  return out;
}

void SimplexSolver::column_image(int col, std::vector<double>& alpha) const {
  std::fill(alpha.begin(), alpha.end(), 0.0);
  const auto& c = cols_[col];
  for (int r = 0; r < m_; ++r) {
    const double* row = &binv_[static_cast<std::size_t>(r) * m_];
    double v = 0.0;
    for (int i : c.nz) v += row[i] * c.a[i];
    alpha[r] = v;
  }
}

double SimplexSolver::infeasibility() const {
  double s = 0.0;
  for (int r = 0; r < m_; ++r) {
    if (cols_[basis_[r]].blocked()) s += xb_[r];
  }
  return s;
}

LpOutcome SimplexSolver::solve() {
  std::vector<double> y;
  double bmax = 0.0;
  for (double v : b_) bmax = std::max(bmax, v);
  const double tol = 1e-9 * (1.0 + bmax);
  if (infeasibility() > tol) {
    run_phase(1);
    if (infeasibility() > tol) {
      compute_duals(phase_costs(1), y);
      return make_outcome(LpStatus::Infeasible, y);
    }
  }
  drive_out_artificials();
  if (!run_phase(2)) return make_outcome(LpStatus::Unbounded, y);
  compute_duals(phase_costs(2), y);
  return make_outcome(LpStatus::Optimal, y);
}

LpOutcome solve_lp(const LinearProgram& lp, std::ostream* trace) {
  SimplexSolver solver(lp);
  solver.set_trace(trace);
  return solver.solve();
}

std::string render_lp_text(const LinearProgram& lp, const std::vector<std::string>& var_names,
                           const std::vector<std::string>& row_names) {
  auto var = [&](int v) {
    return v < static_cast<int>(var_names.size()) ? var_names[v] : "v" + std::to_string(v);
  };
  auto term_list = [&](const std::vector<double>& coeffs) {
    std::ostringstream os;
    os << std::setprecision(12);
    bool first = true;
    for (int v = 0; v < static_cast<int>(coeffs.size()); ++v) {
      const double a = coeffs[v];
      if (a == 0.0) continue;
      if (first) {
        if (a < 0) os << "- ";
      } else {
        os << (a < 0 ? " - " : " + ");
      }
      os << std::abs(a) << ' ' << var(v);
      first = false;
    }
    if (first) os << "0";
    return os.str();
  };
  std::ostringstream os;
  os << std::setprecision(12);
  os << "Maximize\n obj: " << term_list(lp.objective) << "\nSubject To\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& r = lp.rows[i];
    const std::string name = i < static_cast<int>(row_names.size()) ? row_names[i] : "r" + std::to_string(i);
    const char* rel = r.relation == Relation::LessEq ? "<=" : (r.relation == Relation::GreaterEq ? ">=" : "=");
    os << ' ' << name << ": " << term_list(r.coefficients) << ' ' << rel << ' ' << r.rhs << '\n';
  }
  os << "Bounds\n";
  for (int v = 0; v < lp.num_vars(); ++v) {
    if (lp.lower[v] == -kInf) {
      os << ' ' << var(v) << (lp.upper[v] == 1.0 ? " <= 1" : " free") << '\n';
    } else if (lp.upper[v] == 1.0) {
      os << " 0 <= " << var(v) << " <= 1\n";
    }
  }
  os << "End\n";
  return os.str();
}

}  // namespace ssgbnp
