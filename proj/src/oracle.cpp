#include "ssgbnp/oracle.hpp"

#include <limits>
#include <string>

#include "ssgbnp/simplex.hpp"

namespace ssgbnp {

namespace {

constexpr double kTieSlack = 1e-9;

// Advances a mixed-radix counter; false once every profile was visited.
bool next_profile(std::vector<int>& profile, int radix) {
  for (std::size_t k = 0; k < profile.size(); ++k) {
    if (++profile[k] < radix) return true;
    profile[k] = 0;
  }
  return false;
}

}  // namespace

std::vector<Column> enumerate_P(const GameSSG& g) {
  if (g.n_targets > kEnumerateMaxTargets) {
    throw SizeGuard("enumerate_P: n_targets " + std::to_string(g.n_targets) + " exceeds " +
                    std::to_string(kEnumerateMaxTargets));
  }
  std::vector<Column> out;
  const std::uint32_t total = 1u << g.n_targets;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    Column c = Column::empty(g.n_targets);
    for (int j = 0; j < g.n_targets; ++j) {
      if (mask & (1u << j)) c.set(j, true);
    }
    if (c.affordable(g)) out.push_back(std::move(c));
  }
  return out;
}

OracleSolution solve_multiple_lps(const GameSSG& g) {
  if (g.n_targets > kOracleMaxTargets || g.n_attackers > kOracleMaxAttackers) {
    throw SizeGuard("solve_multiple_lps: instance exceeds n <= " + std::to_string(kOracleMaxTargets) +
                    ", k <= " + std::to_string(kOracleMaxAttackers));
  }
  return solve_multiple_lps(g, enumerate_P(g));
}

OracleSolution solve_multiple_lps(const GameSSG& g, const std::vector<Column>& columns) {
  const int K = g.n_attackers, J = g.n_targets;
  const int N = static_cast<int>(columns.size());
  OracleSolution best;
  best.value = -std::numeric_limits<double>::infinity();
  bool found = false;

  std::vector<int> profile(K, 0);
  do {
    LinearProgram lp;
    for (int i = 0; i < N; ++i) {
      double c = 0.0;
      for (int k = 0; k < K; ++k) {
        const int j = profile[k];
        if (columns[i].covers(j)) c += g.p[k] * (g.d_prot[k][j] - g.d_unprot[k][j]);
      }
      lp.add_variable(c);
    }
    // Attacker k prefers profile[k] to every other target: U_k(j_k) - U_k(j') >= -slack.
    for (int k = 0; k < K; ++k) {
      const int jk = profile[k];
      const double dk = g.a_prot[k][jk] - g.a_unprot[k][jk];
      for (int jp = 0; jp < J; ++jp) {
        if (jp == jk) continue;
        const double dp = g.a_prot[k][jp] - g.a_unprot[k][jp];
        std::vector<double> r(N, 0.0);
        for (int i = 0; i < N; ++i) {
          r[i] = (columns[i].covers(jk) ? dk : 0.0) - (columns[i].covers(jp) ? dp : 0.0);
        }
        lp.add_row(std::move(r), Relation::GreaterEq,
                   g.a_unprot[k][jp] - g.a_unprot[k][jk] - kTieSlack);
      }
    }
    lp.add_row(std::vector<double>(N, 1.0), Relation::Equal, 1.0);

    const auto out = solve_lp(lp);
    if (out.status != LpStatus::Optimal) continue;
    ++best.profiles_feasible;
    double value = out.objective;
    for (int k = 0; k < K; ++k) value += g.p[k] * g.d_unprot[k][profile[k]];
    if (!found || value > best.value + 1e-12) {
      found = true;
      best.value = value;
      best.strategy.support.clear();
      double total = 0.0;
      for (int i = 0; i < N; ++i) {
        if (out.primal[i] > 1e-12) total += out.primal[i];
      }
      for (int i = 0; i < N; ++i) {
        if (out.primal[i] > 1e-12) best.strategy.support.push_back({columns[i], out.primal[i] / total});
      }
      const auto cov = best.strategy.coverage(J);
      best.strategy.responses.assign(K, {});
      for (int k = 0; k < K; ++k) {
        const int j = profile[k];
        best.strategy.responses[k] = {j, defender_utility(g, k, j, cov[j]),
                                      attacker_utility(g, k, j, cov[j])};
      }
    }
  } while (next_profile(profile, J));

  if (!found) throw NumericalFailure("multiple-LPs oracle found no feasible response profile");
  return best;
}

SgOracleSolution solve_multiple_lps_sg(const GameSG& g) {
  const int K = g.n_attackers(), I = g.n_leader(), J = g.n_follower();
  double profiles = 1.0;
  for (int k = 0; k < K; ++k) profiles *= J;
  if (profiles > 1e6) throw SizeGuard("solve_multiple_lps_sg: too many response profiles");

  SgOracleSolution best;
  best.value = -std::numeric_limits<double>::infinity();
  bool found = false;
  std::vector<int> profile(K, 0);
  do {
    LinearProgram lp;
    for (int i = 0; i < I; ++i) {
      double c = 0.0;
      for (int k = 0; k < K; ++k) c += g.p[k] * g.R[k][i][profile[k]];
      lp.add_variable(c);
    }
    for (int k = 0; k < K; ++k) {
      for (int jp = 0; jp < J; ++jp) {
        if (jp == profile[k]) continue;
        std::vector<double> r(I);
        for (int i = 0; i < I; ++i) r[i] = g.C[k][i][profile[k]] - g.C[k][i][jp];
        lp.add_row(std::move(r), Relation::GreaterEq, -kTieSlack);
      }
    }
    lp.add_row(std::vector<double>(I, 1.0), Relation::Equal, 1.0);
    const auto out = solve_lp(lp);
    if (out.status != LpStatus::Optimal) continue;
    if (!found || out.objective > best.value + 1e-12) {
      found = true;
      best.value = out.objective;
      best.x = out.primal;
      best.responses = profile;
    }
  } while (next_profile(profile, J));
  if (!found) throw NumericalFailure("multiple-LPs oracle found no feasible response profile");
  return best;
}

}  // namespace ssgbnp
