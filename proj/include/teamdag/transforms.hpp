#pragma once

#include "teamdag/analysis.hpp"
#include "teamdag/game.hpp"

namespace teamdag {

// Replaces every internal node by a binary tree over fixed-width action codes
// (actions sorted by label, code width ceil(log2 m) plus a trailing 0 bit),
// replicating each infoset once per partial code. Requires action recall for
// both sides; throws GameError otherwise.
Game binarize_actions(const Game& g);

// Splits the side's infosets into classes of nodes that some pure coordinator
// strategy reaches simultaneously, until nothing splits further.
Game inflate(const Game& g, Side side);

// Two same-depth nodes are co-playable when their coordinator paths agree on
// every infoset both paths visit.
bool co_playable(const Game& g, Side side, NodeId a, NodeId b);

}  // namespace teamdag
