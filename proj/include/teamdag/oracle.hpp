#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "teamdag/game.hpp"

namespace teamdag {

struct OracleResult {
  double value = 0.0;
  std::vector<int> choice;  // action per infoset of the side, -1 where unreached
  std::int64_t strategies = 0;
};

// Number of reduced pure strategies of the side, or cap + 1 once it exceeds cap.
std::int64_t count_reduced_strategies(const Game& g, Side side, std::int64_t cap);

// Best reduced pure strategy of a side against a fixed opponent, by brute
// force over the game tree. opponent_realization holds the opponent's
// realization weight per node (read at terminals only); chance is applied
// here. Values are from the side's own point of view. Throws BudgetExceeded
// when the side has more than `budget` reduced pure strategies.
OracleResult enumeration_oracle(const Game& g, Side side, std::span<const double> opponent_realization,
                                std::int64_t budget = 10'000'000);

}  // namespace teamdag
