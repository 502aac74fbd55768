#pragma once

#include "offfsp/game.hpp"

namespace offfsp {

GamePtr make_rps_game(bool asymmetric);
GamePtr make_kuhn_game();
// ante: initial pot per player; raise_window: betting plies in which Raise
// is legal.
GamePtr make_large_kuhn_game(int ante, int raise_window);
GamePtr make_leduc_game();
GamePtr make_oshi_zumo_game(int coins, int board, int horizon);

}  // namespace offfsp
