#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mnms/nonlocality.hpp"

namespace mnms {

/// An N-party XOR game instance together with a fixed grouping of the
/// players into two internally-correlated teams.
struct GameSpec {
  int parties = 2;
  std::uint32_t group_mask = 1;  // bit k set -> player k belongs to group 1

  static GameSpec with_groups(int parties, std::span<const int> group1_players);
  std::vector<int> group1() const;
  std::vector<int> group2() const;
};

/// Win criterion: the XOR of all answer bits must equal floor(T/2) mod 2,
/// where T counts the question bits set to 1. Throws std::invalid_argument
/// on a length mismatch.
bool win_predicate(std::span<const int> questions, std::span<const int> answers);

/// Deterministic joint strategy: per group, a response table mapping the
/// group's packed question bits to its packed answer bits.
struct StrategyHybrid {
  std::vector<std::uint8_t> group1;  // size 2^|group1|
  std::vector<std::uint8_t> group2;  // size 2^|group2|
};

enum class GameMode { Exact, MonteCarlo, Enumerated };

struct GameResult {
  double win_probability = 0.0;
  GameMode mode = GameMode::Exact;
  std::int64_t wins = 0;   // exact win count (Enumerated: questions won;
  std::int64_t total = 0;  //   MonteCarlo: rounds won)
  double std_error = 0.0;  // MonteCarlo only
  int bipartitions = 0;    // groupings scanned when maximizing over them
  std::optional<StrategyHybrid> strategy;
  std::optional<SettingsTable> settings;
};

/// Exact maximum winning probability over every deterministic hybrid
/// strategy for the given grouping. Exhaustive; N <= 4.
GameResult enumerate_classical(const GameSpec& spec);

/// Maximum of enumerate_classical over all bipartitions of the players
/// (for N = 2 this is the LHV bound; for N = 3 the Svetlichny bound).
GameResult classical_bound(int parties);

/// Win probability of one explicit strategy.
GameResult evaluate_strategy(const GameSpec& spec, const StrategyHybrid& strategy);

/// Born-rule winning probability of a quantum strategy: questions uniform,
/// answers from projective measurements of the settings on rho. Equals
/// (2 + <S_N>) / 4 by construction of the game.
GameResult quantum_win_exact(const DensityMatrix& rho, const SettingsTable& settings,
                             const GameSpec& spec);

/// Monte Carlo play with a counter-based generator: questions and answers
/// draw from separate streams, so the result is independent of sharding.
GameResult simulate_rounds(const DensityMatrix& rho, const SettingsTable& settings,
                           const GameSpec& spec, std::int64_t rounds, std::uint64_t seed);

}  // namespace mnms
