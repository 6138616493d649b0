#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ssgbnp/master.hpp"
#include "ssgbnp/model.hpp"

namespace ssgbnp {

/// Master duals (or Farkas multipliers) grouped by role: w on leader rows, y on
/// attacker upper rows, z on attacker lower rows, h on the convexity row.
struct DualView {
  Matrix w;
  Matrix y;
  Matrix z;
  double h = 0.0;

  static DualView zeros(int n_attackers, int n_targets);
  /// weight * a + (1 - weight) * b
  static DualView blend(const DualView& a, const DualView& b, double weight);
};

/// Reads a DualView out of per-row values (LpOutcome::duals or ::farkas).
DualView dual_view(const MasterLayout& layout, const std::vector<double>& row_values);

/// pi_j = sum_k w(Dp - Du) + y(Ap - Au) - z(Ap - Au)
std::vector<double> pricing_profits(const GameSSG& g, const DualView& d);

/// -h + sum_j P_j pi_j
double reduced_cost(const GameSSG& g, const Column& col, const DualView& d);

struct PricedColumn {
  Column column;
  double value = 0.0;  // reduced cost of the column under the duals used
};

struct KnapsackSolution {
  std::vector<int> items;
  double value = 0.0;
};

/// Exact 0/1 knapsack. Integral weights use a DP over floor(capacity);
/// otherwise a depth-first branch-and-bound. Items with value <= 0 are skipped.
KnapsackSolution solve_knapsack(const std::vector<double>& values, const std::vector<double>& weights,
                                double capacity);

PricedColumn price_exact(const GameSSG& g, const DualView& d);

/// Ratio greedy over positive-profit targets (ties: lower index first).
PricedColumn price_greedy(const GameSSG& g, const DualView& d);

/// Up to `count` distinct greedy columns: the plain greedy one, then greedy runs
/// that skip the r-th ranked target for r = 1..count-1.
std::vector<PricedColumn> price_greedy_multi(const GameSSG& g, const DualView& d, int count);

inline constexpr double kGraspAlpha = 0.3;

/// Zero column, every affordable singleton, then up to `count` distinct GRASP
/// columns built from benefit sum_k p^k (Dp - Du) ranked by benefit / cost.
std::vector<Column> initial_columns(const GameSSG& g, int count, std::uint64_t seed);

/// Column destroying the given infeasibility certificate (rho^T a(P) < 0), or
/// nullopt when no column in the knapsack set can.
std::optional<Column> farkas_price(const GameSSG& g, const DualView& ray);

/// rho^T a(P) for a new x column, as read through a DualView of the ray.
double farkas_contribution(const GameSSG& g, const Column& col, const DualView& ray);

}  // namespace ssgbnp
