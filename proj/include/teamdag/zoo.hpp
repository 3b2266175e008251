#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teamdag/game.hpp"

namespace teamdag {

enum class Family {
  Kuhn,
  Leduc,
  LiarsDice,
  SignalingFig2,
  WorstCase,
  PublicCounterexampleFig8,
  InflationCounterexampleFig9,
};

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

struct ZooSpec {
  Family family = Family::Kuhn;
  int players = 2;   // kuhn, leduc, liars_dice
  int ranks = 3;     // kuhn, leduc
  int bets = 1;      // leduc: maximum bets per round
  int suits = 1;     // leduc
  int faces = 2;     // liars_dice
  int k = 1;         // worst_case
  int branching = 2; // worst_case
  int depth = 5;     // worst_case
  int c = 6;         // fig9
  int width = 3;     // fig8: children of each chance node
  // Player indices (1-based). Empty lists mean the family default:
  // player 1 against everybody else for the card games.
  std::vector<int> team_max;
  std::vector<int> team_min;
};

// Throws GameError on invalid parameters.
Game generate(const ZooSpec& spec);

struct Preset {
  std::string name;
  ZooSpec spec;
};

std::vector<Preset> list_presets();
std::optional<ZooSpec> find_preset(std::string_view name);

}  // namespace teamdag
