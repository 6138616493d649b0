#include "ssgbnp/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

namespace ssgbnp {

DualView DualView::zeros(int n_attackers, int n_targets) {
  DualView d;
  d.w.assign(n_attackers, std::vector<double>(n_targets, 0.0));
  d.y = d.w;
  d.z = d.w;
  return d;
}

DualView DualView::blend(const DualView& a, const DualView& b, double weight) {
  DualView out = a;
  auto mix = [weight](Matrix& o, const Matrix& x, const Matrix& y) {
    for (std::size_t k = 0; k < o.size(); ++k) {
      for (std::size_t j = 0; j < o[k].size(); ++j) o[k][j] = weight * x[k][j] + (1.0 - weight) * y[k][j];
    }
  };
  mix(out.w, a.w, b.w);
  mix(out.y, a.y, b.y);
  mix(out.z, a.z, b.z);
  out.h = weight * a.h + (1.0 - weight) * b.h;
  return out;
}

DualView dual_view(const MasterLayout& L, const std::vector<double>& v) {
  DualView d = DualView::zeros(L.n_attackers, L.n_targets);
  for (int k = 0; k < L.n_attackers; ++k) {
    for (int j = 0; j < L.n_targets; ++j) {
      d.w[k][j] = v[L.leader_row(k, j)];
      d.y[k][j] = v[L.upper_row(k, j)];
      d.z[k][j] = v[L.lower_row(k, j)];
    }
  }
  d.h = v[L.convexity_row];
  return d;
}

std::vector<double> pricing_profits(const GameSSG& g, const DualView& d) {
  std::vector<double> pi(g.n_targets, 0.0);
  for (int j = 0; j < g.n_targets; ++j) {
    double s = 0.0;
    for (int k = 0; k < g.n_attackers; ++k) {
      const double dd = g.d_prot[k][j] - g.d_unprot[k][j];
      const double da = g.a_prot[k][j] - g.a_unprot[k][j];
      s += d.w[k][j] * dd + d.y[k][j] * da - d.z[k][j] * da;
    }
    pi[j] = s;
  }
  return pi;
}

double reduced_cost(const GameSSG& g, const Column& col, const DualView& d) {
  const auto pi = pricing_profits(g, d);
  double v = -d.h;
  for (int j = 0; j < g.n_targets; ++j) {
    if (col.covers(j)) v += pi[j];
  }
  return v;
}

namespace {

bool all_integral(const std::vector<double>& w) {
  return std::all_of(w.begin(), w.end(), [](double x) { return std::abs(x - std::round(x)) <= 1e-9; });
}

KnapsackSolution knapsack_dp(const std::vector<int>& idx, const std::vector<double>& values,
                             const std::vector<double>& weights, long cap) {
  const std::size_t n = idx.size();
  const std::size_t width = static_cast<std::size_t>(cap) + 1;
  std::vector<double> best(width, 0.0);
  std::vector<std::uint8_t> take(n * width, 0);
  for (std::size_t t = 0; t < n; ++t) {
    const long wt = std::lround(weights[idx[t]]);
    const double v = values[idx[t]];
    for (long c = cap; c >= wt; --c) {
      const double cand = best[c - wt] + v;
      if (cand > best[c]) {
        best[c] = cand;
        take[t * width + c] = 1;
      }
    }
  }
  KnapsackSolution out;
  long c = cap;
  for (std::size_t t = n; t-- > 0;) {
    if (take[t * width + c]) {
      out.items.push_back(idx[t]);
      c -= std::lround(weights[idx[t]]);
    }
  }
  std::sort(out.items.begin(), out.items.end());
  return out;
}

struct BranchAndBound {
  const std::vector<double>& values;
  const std::vector<double>& weights;
  std::vector<int> order;  // by ratio, descending
  double capacity;
  double best = 0.0;
  std::vector<int> best_items;
  std::vector<int> current;

  double bound(std::size_t pos, double room, double acc) const {
    for (; pos < order.size(); ++pos) {
      const int i = order[pos];
      if (weights[i] <= room) {
        room -= weights[i];
        acc += values[i];
      } else {
        return acc + values[i] * room / weights[i];
      }
    }
    return acc;
  }

  void search(std::size_t pos, double room, double acc) {
    if (acc > best) {
      best = acc;
      best_items = current;
    }
    if (pos == order.size() || bound(pos, room, acc) <= best + 1e-12) return;
    const int i = order[pos];
    if (weights[i] <= room + 1e-9) {
      current.push_back(i);
      search(pos + 1, room - weights[i], acc + values[i]);
      current.pop_back();
    }
    search(pos + 1, room, acc);
  }
};

std::vector<int> ratio_ranking(const std::vector<double>& values, const std::vector<double>& weights,
                               const std::vector<int>& candidates) {
  std::vector<int> order = candidates;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[a] / weights[a] > values[b] / weights[b];
  });
  return order;
}

double column_value(const std::vector<double>& pi, const Column& c, double h) {
  double v = -h;
  for (int j = 0; j < c.size(); ++j) {
    if (c.covers(j)) v += pi[j];
  }
  return v;
}

Column greedy_fill(const GameSSG& g, const std::vector<int>& ranked, int skip) {
  Column c = Column::empty(g.n_targets);
  double room = g.budget;
  for (int pos = 0; pos < static_cast<int>(ranked.size()); ++pos) {
    if (pos == skip) continue;
    const int j = ranked[pos];
    if (g.w[j] <= room + 1e-9) {
      c.set(j, true);
      room -= g.w[j];
    }
  }
  return c;
}

std::vector<int> profitable_targets(const GameSSG& g, const std::vector<double>& pi) {
  std::vector<int> out;
  for (int j = 0; j < g.n_targets; ++j) {
    if (pi[j] > 0.0 && g.w[j] <= g.budget + 1e-9) out.push_back(j);
  }
  return out;
}

}  // namespace

KnapsackSolution solve_knapsack(const std::vector<double>& values, const std::vector<double>& weights,
                                double capacity) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0 && weights[i] <= capacity + 1e-9) idx.push_back(static_cast<int>(i));
  }
  KnapsackSolution out;
  if (idx.empty()) return out;
  std::vector<double> w_sel;
  for (int i : idx) w_sel.push_back(weights[i]);
  if (all_integral(w_sel)) {
    out = knapsack_dp(idx, values, weights, static_cast<long>(std::floor(capacity + 1e-9)));
  } else {
    BranchAndBound bb{values, weights, ratio_ranking(values, weights, idx), capacity, 0.0, {}, {}};
    bb.search(0, capacity, 0.0);
    out.items = bb.best_items;
    std::sort(out.items.begin(), out.items.end());
  }
  for (int i : out.items) out.value += values[i];
  return out;
}

PricedColumn price_exact(const GameSSG& g, const DualView& d) {
  const auto pi = pricing_profits(g, d);
  const auto ks = solve_knapsack(pi, g.w, g.budget);
  Column c = Column::empty(g.n_targets);
  for (int j : ks.items) c.set(j, true);
  return {c, column_value(pi, c, d.h)};
}

PricedColumn price_greedy(const GameSSG& g, const DualView& d) {
  const auto pi = pricing_profits(g, d);
  const auto ranked = ratio_ranking(pi, g.w, profitable_targets(g, pi));
  Column c = greedy_fill(g, ranked, -1);
  return {c, column_value(pi, c, d.h)};
}

std::vector<PricedColumn> price_greedy_multi(const GameSSG& g, const DualView& d, int count) {
  const auto pi = pricing_profits(g, d);
  const auto ranked = ratio_ranking(pi, g.w, profitable_targets(g, pi));
  std::vector<PricedColumn> out;
  std::unordered_set<Column, ColumnHash> seen;
  for (int r = 0; r < count && r <= static_cast<int>(ranked.size()); ++r) {
    Column c = greedy_fill(g, ranked, r == 0 ? -1 : r - 1);
    if (!seen.insert(c).second) continue;
    out.push_back({c, column_value(pi, c, d.h)});
  }
  return out;
}

std::vector<Column> initial_columns(const GameSSG& g, int count, std::uint64_t seed) {
  std::vector<Column> out;
  std::unordered_set<Column, ColumnHash> seen;
  auto push = [&](Column c) {
    if (seen.insert(c).second) out.push_back(std::move(c));
  };
  push(Column::empty(g.n_targets));
  for (int j = 0; j < g.n_targets; ++j) {
    if (g.w[j] <= g.budget + 1e-9) push(Column::singleton(g.n_targets, j));
  }

  std::vector<double> benefit(g.n_targets, 0.0);
  for (int j = 0; j < g.n_targets; ++j) {
    for (int k = 0; k < g.n_attackers; ++k) benefit[j] += g.p[k] * (g.d_prot[k][j] - g.d_unprot[k][j]);
  }
  std::vector<int> all(g.n_targets);
  std::iota(all.begin(), all.end(), 0);
  const auto ranked = ratio_ranking(benefit, g.w, all);

  std::mt19937_64 rng(seed);
  int built = 0;
  const int max_attempts = 20 * std::max(count, 0);
  for (int attempt = 0; attempt < max_attempts && built < count; ++attempt) {
    Column c = Column::empty(g.n_targets);
    double room = g.budget;
    while (true) {
      std::vector<int> candidates;
      for (int j : ranked) {
        if (!c.covers(j) && g.w[j] <= room + 1e-9) candidates.push_back(j);
      }
      if (candidates.empty()) break;
      const auto rcl = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(kGraspAlpha * static_cast<double>(candidates.size()))));
      const int pick = candidates[rng() % rcl];
      c.set(pick, true);
      room -= g.w[pick];
    }
    if (seen.count(c) == 0) ++built;
    push(std::move(c));
  }
  return out;
}

double farkas_contribution(const GameSSG& g, const Column& col, const DualView& ray) {
  // a(P) holds -(Dp-Du), -(Ap-Au), (Ap-Au) on covered leader/upper/lower rows and 1 on convexity.
  return -reduced_cost(g, col, ray);
}

std::optional<Column> farkas_price(const GameSSG& g, const DualView& ray) {
  const auto best = price_exact(g, ray);
  if (best.value > 1e-9) return best.column;
  return std::nullopt;
}

}  // namespace ssgbnp
