#pragma once

#include <stdexcept>
#include <vector>

#include "ssgbnp/model.hpp"

namespace ssgbnp {

class SizeGuard : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr int kEnumerateMaxTargets = 22;
inline constexpr int kOracleMaxTargets = 10;
inline constexpr int kOracleMaxAttackers = 3;

/// Every budget-feasible incidence vector, in increasing bitmask order.
std::vector<Column> enumerate_P(const GameSSG& g);

struct OracleSolution {
  MixedStrategy strategy;
  double value = 0.0;
  long profiles_feasible = 0;
};

/// Strong Stackelberg equilibrium by one LP per attacker response profile over
/// the fully enumerated strategy set.
OracleSolution solve_multiple_lps(const GameSSG& g);

/// Same method over an explicit column set (used for duplicate-column checks).
OracleSolution solve_multiple_lps(const GameSSG& g, const std::vector<Column>& columns);

struct SgOracleSolution {
  std::vector<double> x;          // leader mixed strategy
  std::vector<int> responses;     // follower strategy per type
  double value = 0.0;
};

/// Multiple-LPs equilibrium for a generic game with explicit leader strategies.
SgOracleSolution solve_multiple_lps_sg(const GameSG& g);

}  // namespace ssgbnp
