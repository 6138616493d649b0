#include "ssgbnp/master.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ssgbnp {

std::string to_string(Formulation f) {
  switch (f) {
    case Formulation::D2: return "d2";
    case Formulation::D2Plus: return "d2plus";
    case Formulation::D2PlusPrime: return "d2plusprime";
  }
  return "?";
}

std::string to_string(CutScope s) {
  switch (s) {
    case CutScope::Attacker: return "attacker";
    case CutScope::Defender: return "defender";
    case CutScope::Both: return "both";
  }
  return "?";
}

Formulation parse_formulation(const std::string& s) {
  if (s == "d2") return Formulation::D2;
  if (s == "d2plus") return Formulation::D2Plus;
  if (s == "d2plusprime") return Formulation::D2PlusPrime;
  throw std::invalid_argument("unknown formulation '" + s + "' (expected d2|d2plus|d2plusprime)");
}

CutScope parse_cut_scope(const std::string& s) {
  if (s == "attacker") return CutScope::Attacker;
  if (s == "defender") return CutScope::Defender;
  if (s == "both") return CutScope::Both;
  throw std::invalid_argument("unknown cut scope '" + s + "' (expected attacker|defender|both)");
}

std::vector<FormulationSpec> all_variants() {
  std::vector<FormulationSpec> out{{Formulation::D2, CutScope::Both, GameMode::SSG}};
  for (auto base : {Formulation::D2Plus, Formulation::D2PlusPrime}) {
    for (auto scope : {CutScope::Attacker, CutScope::Defender, CutScope::Both}) {
      out.push_back({base, scope, GameMode::SSG});
    }
  }
  return out;
}

int Fixings::fixed_count() const {
  return static_cast<int>(std::count_if(state.begin(), state.end(),
                                        [](FixState s) { return s != FixState::Free; }));
}

BigM big_m_ssg(const GameSSG& g) {
  BigM m;
  m.leader.assign(g.n_attackers, std::vector<double>(g.n_targets, 0.0));
  m.follower = m.leader;
  for (int k = 0; k < g.n_attackers; ++k) {
    double dmax = -std::numeric_limits<double>::infinity();
    double amax = dmax;
    for (int l = 0; l < g.n_targets; ++l) {
      dmax = std::max({dmax, g.d_prot[k][l], g.d_unprot[k][l]});
      amax = std::max({amax, g.a_prot[k][l], g.a_unprot[k][l]});
    }
    for (int j = 0; j < g.n_targets; ++j) {
      m.leader[k][j] = dmax - std::min(g.d_prot[k][j], g.d_unprot[k][j]);
      m.follower[k][j] = amax - std::min(g.a_prot[k][j], g.a_unprot[k][j]);
    }
  }
  return m;
}

BigM big_m_sg(const GameSG& g) {
  const int K = g.n_attackers(), I = g.n_leader(), J = g.n_follower();
  BigM m;
  m.leader.assign(K, std::vector<double>(J, -std::numeric_limits<double>::infinity()));
  m.follower = m.leader;
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < I; ++i) {
      const double rmax = *std::max_element(g.R[k][i].begin(), g.R[k][i].end());
      const double cmax = *std::max_element(g.C[k][i].begin(), g.C[k][i].end());
      for (int j = 0; j < J; ++j) {
        m.leader[k][j] = std::max(m.leader[k][j], rmax - g.R[k][i][j]);
        m.follower[k][j] = std::max(m.follower[k][j], cmax - g.C[k][i][j]);
      }
    }
  }
  return m;
}

CutCoefficients cut_coefficients_ssg(const GameSSG& g) {
  CutCoefficients c;
  c.leader.assign(g.n_attackers, Matrix(g.n_targets, std::vector<double>(g.n_targets, 0.0)));
  c.attacker = c.leader;
  for (int k = 0; k < g.n_attackers; ++k) {
    for (int j = 0; j < g.n_targets; ++j) {
      for (int jp = 0; jp < g.n_targets; ++jp) {
        if (jp == j) continue;
        c.leader[k][j][jp] = g.d_prot[k][jp] - g.d_unprot[k][j];
        c.attacker[k][j][jp] = g.a_unprot[k][jp] - g.a_prot[k][j];
      }
    }
  }
  return c;
}

namespace {

void check_fixings(const Fixings& fx, int K, int J) {
  if (fx.state.empty()) return;
  if (fx.n_attackers != K || fx.n_targets != J) {
    throw InconsistentFixing("fixings have the wrong dimensions");
  }
  for (int k = 0; k < K; ++k) {
    int ones = 0, zeros = 0;
    for (int j = 0; j < J; ++j) {
      ones += fx.at(k, j) == FixState::One;
      zeros += fx.at(k, j) == FixState::Zero;
    }
    if (zeros == J) {
      throw InconsistentFixing("attacker " + std::to_string(k) + " has every target fixed to 0");
    }
    if (ones > 1) {
      throw InconsistentFixing("attacker " + std::to_string(k) + " has two targets fixed to 1");
    }
  }
}

// Adds x, q, f, s variables in that order and records their positions.
void add_variables(Master& m, int n_x, int K, int J, const std::vector<double>& p) {
  auto& lp = m.lp;
  auto& L = m.layout;
  L.n_targets = J;
  L.n_attackers = K;
  for (int i = 0; i < n_x; ++i) {
    L.x_var.push_back(lp.add_variable(0.0));
    m.var_names.push_back("x" + std::to_string(i));
  }
  L.q_begin = lp.num_vars();
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < J; ++j) {
      lp.add_variable(0.0);
      m.var_names.push_back("q" + std::to_string(k) + "_" + std::to_string(j));
    }
  }
  L.f_begin = lp.num_vars();
  for (int k = 0; k < K; ++k) {
    lp.add_variable(p[k], -kInf);
    m.var_names.push_back("f" + std::to_string(k));
  }
  L.s_begin = lp.num_vars();
  for (int k = 0; k < K; ++k) {
    lp.add_variable(0.0, -kInf);
    m.var_names.push_back("s" + std::to_string(k));
  }
}

void add_row(Master& m, std::vector<double> coeffs, Relation rel, double rhs, std::string name) {
  m.lp.add_row(std::move(coeffs), rel, rhs);
  m.row_names.push_back(std::move(name));
}

std::string kj(int k, int j) { return std::to_string(k) + "_" + std::to_string(j); }

// Rows shared by both modes once the x-dependent parts are known: convexity,
// sum-q, and fixing rows. Strengthening rows are added by the caller between.
void add_convexity_and_sumq(Master& m) {
  auto& L = m.layout;
  const int nv = m.lp.num_vars();
  L.convexity_row = m.lp.num_rows();
  std::vector<double> conv(nv, 0.0);
  for (int v : L.x_var) conv[v] = 1.0;
  add_row(m, std::move(conv), Relation::Equal, 1.0, "conv");
  L.sumq_begin = m.lp.num_rows();
  for (int k = 0; k < L.n_attackers; ++k) {
    std::vector<double> r(nv, 0.0);
    for (int j = 0; j < L.n_targets; ++j) r[L.q_var(k, j)] = 1.0;
    add_row(m, std::move(r), Relation::Equal, 1.0, "sumq_" + std::to_string(k));
  }
}

void add_fixing_rows(Master& m, const Fixings& fx) {
  auto& L = m.layout;
  L.fixing_begin = m.lp.num_rows();
  if (fx.state.empty()) return;
  const int nv = m.lp.num_vars();
  for (int k = 0; k < L.n_attackers; ++k) {
    for (int j = 0; j < L.n_targets; ++j) {
      const auto s = fx.at(k, j);
      if (s == FixState::Free) continue;
      std::vector<double> r(nv, 0.0);
      r[L.q_var(k, j)] = 1.0;
      if (s == FixState::Zero) {
        add_row(m, std::move(r), Relation::LessEq, 0.0, "fix0_" + kj(k, j));
      } else {
        add_row(m, std::move(r), Relation::GreaterEq, 1.0, "fix1_" + kj(k, j));
      }
      ++L.fixing_rows;
    }
  }
}

}  // namespace

std::vector<double> master_column(const GameSSG& g, const MasterLayout& L, const Column& col) {
  std::vector<double> e(static_cast<std::size_t>(L.fixing_begin + L.fixing_rows), 0.0);
  for (int k = 0; k < g.n_attackers; ++k) {
    for (int j = 0; j < g.n_targets; ++j) {
      if (!col.covers(j)) continue;
      const double dd = g.d_prot[k][j] - g.d_unprot[k][j];
      const double da = g.a_prot[k][j] - g.a_unprot[k][j];
      e[L.leader_row(k, j)] = -dd;
      e[L.upper_row(k, j)] = -da;
      e[L.lower_row(k, j)] = da;
    }
  }
  e[L.convexity_row] = 1.0;
  return e;
}

Master build_master(const GameSSG& g, const std::vector<Column>& cols, const FormulationSpec& spec,
                    const Fixings& fixings) {
  if (cols.empty()) throw std::invalid_argument("build_master needs at least one column");
  const int K = g.n_attackers, J = g.n_targets;
  check_fixings(fixings, K, J);
  for (const auto& c : cols) {
    if (c.size() != J) throw std::invalid_argument("column size does not match n_targets");
  }

  Master m;
  add_variables(m, static_cast<int>(cols.size()), K, J, g.p);
  auto& L = m.layout;
  const int nv = m.lp.num_vars();
  const BigM M = big_m_ssg(g);
  const CutCoefficients cut = cut_coefficients_ssg(g);

  auto coverage_terms = [&](std::vector<double>& r, int j, double coeff) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i].covers(j)) r[L.x_var[i]] = coeff;
    }
  };

  L.leader_begin = m.lp.num_rows();
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < J; ++j) {
      std::vector<double> r(nv, 0.0);
      r[L.f_begin + k] = 1.0;
      coverage_terms(r, j, -(g.d_prot[k][j] - g.d_unprot[k][j]));
      double rhs = g.d_unprot[k][j];
      if (spec.defender_cuts()) {
        for (int jp = 0; jp < J; ++jp) {
          if (jp != j) r[L.q_var(k, jp)] = -cut.leader[k][j][jp];
        }
      } else {
        r[L.q_var(k, j)] = M.leader[k][j];
        rhs += M.leader[k][j];
      }
      add_row(m, std::move(r), Relation::LessEq, rhs, "lead_" + kj(k, j));
    }
  }

  L.upper_begin = m.lp.num_rows();
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < J; ++j) {
      std::vector<double> r(nv, 0.0);
      r[L.s_begin + k] = 1.0;
      coverage_terms(r, j, -(g.a_prot[k][j] - g.a_unprot[k][j]));
      double rhs = g.a_unprot[k][j];
      if (spec.attacker_cuts()) {
        for (int jp = 0; jp < J; ++jp) {
          if (jp != j) r[L.q_var(k, jp)] = -cut.attacker[k][j][jp];
        }
      } else {
        r[L.q_var(k, j)] = M.follower[k][j];
        rhs += M.follower[k][j];
      }
      add_row(m, std::move(r), Relation::LessEq, rhs, "aup_" + kj(k, j));
    }
  }

  L.lower_begin = m.lp.num_rows();
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < J; ++j) {
      std::vector<double> r(nv, 0.0);
      r[L.s_begin + k] = -1.0;
      coverage_terms(r, j, g.a_prot[k][j] - g.a_unprot[k][j]);
      add_row(m, std::move(r), Relation::LessEq, -g.a_unprot[k][j], "alow_" + kj(k, j));
    }
  }

  add_convexity_and_sumq(m);

  L.strengthening_begin = m.lp.num_rows();
  if (spec.defender_strengthening()) {
    for (int k = 0; k < K; ++k) {
      std::vector<double> r(nv, 0.0);
      r[L.f_begin + k] = 1.0;
      for (int j = 0; j < J; ++j) r[L.q_var(k, j)] = -g.d_prot[k][j];
      add_row(m, std::move(r), Relation::LessEq, 0.0, "strf_" + std::to_string(k));
      ++L.defender_strengthening_rows;
    }
  }
  if (spec.attacker_strengthening()) {
    for (int k = 0; k < K; ++k) {
      std::vector<double> r(nv, 0.0);
      r[L.s_begin + k] = 1.0;
      for (int j = 0; j < J; ++j) r[L.q_var(k, j)] = -g.a_unprot[k][j];
      add_row(m, std::move(r), Relation::LessEq, 0.0, "strs_" + std::to_string(k));
      ++L.attacker_strengthening_rows;
    }
  }

  add_fixing_rows(m, fixings);
  return m;
}

Master build_master_sg(const GameSG& g, const FormulationSpec& spec, const Fixings& fixings) {
  const int K = g.n_attackers(), I = g.n_leader(), J = g.n_follower();
  check_fixings(fixings, K, J);

  Master m;
  add_variables(m, I, K, J, g.p);
  auto& L = m.layout;
  const int nv = m.lp.num_vars();
  const BigM M = big_m_sg(g);

  // max_i (T_ij' - T_ij) for the column-side cut, max_j (T_i'j - T_ij) for strengthening.
  auto max_over_i = [&](const Matrix& T, int j, int jp) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < I; ++i) best = std::max(best, T[i][jp] - T[i][j]);
    return best;
  };
  auto max_over_j = [&](const Matrix& T, int i, int ip) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < J; ++j) best = std::max(best, T[ip][j] - T[i][j]);
    return best;
  };

  auto optimality_rows = [&](const Tensor3& T, const Matrix& bigm, bool cuts, int obj_begin,
                             const char* tag) {
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < J; ++j) {
        std::vector<double> r(nv, 0.0);
        r[obj_begin + k] = 1.0;
        for (int i = 0; i < I; ++i) r[L.x_var[i]] = -T[k][i][j];
        double rhs = 0.0;
        if (cuts) {
          for (int jp = 0; jp < J; ++jp) {
            if (jp != j) r[L.q_var(k, jp)] = -max_over_i(T[k], j, jp);
          }
        } else {
          r[L.q_var(k, j)] = bigm[k][j];
          rhs = bigm[k][j];
        }
        add_row(m, std::move(r), Relation::LessEq, rhs, std::string(tag) + kj(k, j));
      }
    }
  };

  L.leader_begin = m.lp.num_rows();
  optimality_rows(g.R, M.leader, spec.defender_cuts(), L.f_begin, "lead_");
  L.upper_begin = m.lp.num_rows();
  optimality_rows(g.C, M.follower, spec.attacker_cuts(), L.s_begin, "aup_");

  L.lower_begin = m.lp.num_rows();
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < J; ++j) {
      std::vector<double> r(nv, 0.0);
      r[L.s_begin + k] = -1.0;
      for (int i = 0; i < I; ++i) r[L.x_var[i]] = g.C[k][i][j];
      add_row(m, std::move(r), Relation::LessEq, 0.0, "alow_" + kj(k, j));
    }
  }

  add_convexity_and_sumq(m);

  L.strengthening_begin = m.lp.num_rows();
  auto strengthening = [&](const Tensor3& T, int obj_begin, const char* tag, int& counter) {
    for (int k = 0; k < K; ++k) {
      for (int i = 0; i < I; ++i) {
        std::vector<double> r(nv, 0.0);
        r[obj_begin + k] = 1.0;
        for (int j = 0; j < J; ++j) r[L.q_var(k, j)] = -T[k][i][j];
        for (int ip = 0; ip < I; ++ip) {
          if (ip != i) r[L.x_var[ip]] = -max_over_j(T[k], i, ip);
        }
        add_row(m, std::move(r), Relation::LessEq, 0.0, std::string(tag) + kj(k, i));
        ++counter;
      }
    }
  };
  if (spec.defender_strengthening()) strengthening(g.R, L.f_begin, "sibf_", L.defender_strengthening_rows);
  if (spec.attacker_strengthening()) strengthening(g.C, L.s_begin, "sibs_", L.attacker_strengthening_rows);

  add_fixing_rows(m, fixings);
  return m;
}

}  // namespace ssgbnp
