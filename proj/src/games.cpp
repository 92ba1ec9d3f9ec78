#include "mnms/games.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "mnms/rng.hpp"

namespace mnms {

namespace {

void check_spec(const GameSpec& spec) {
  if (spec.parties < 2) throw std::invalid_argument("game: need at least 2 parties");
  const std::uint32_t all = (1u << spec.parties) - 1u;
  if ((spec.group_mask & all) == 0 || (spec.group_mask & all) == all ||
      (spec.group_mask & ~all) != 0)
    throw std::invalid_argument("game: grouping must split the players into two non-empty groups");
}

// Packs the bits of `question` belonging to `players` (ascending order,
// first player = lowest output bit).
unsigned pack_bits(unsigned question, const std::vector<int>& players) {
  unsigned packed = 0;
  for (std::size_t k = 0; k < players.size(); ++k)
    packed |= ((question >> players[k]) & 1u) << k;
  return packed;
}

}  // namespace

GameSpec GameSpec::with_groups(int parties, std::span<const int> group1_players) {
  GameSpec spec;
  spec.parties = parties;
  spec.group_mask = 0;
  for (int p : group1_players) {
    if (p < 1 || p > parties)
      throw std::invalid_argument("game: player index out of range (players are 1-based)");
    spec.group_mask |= 1u << (p - 1);
  }
  check_spec(spec);
  return spec;
}

std::vector<int> GameSpec::group1() const {
  std::vector<int> out;
  for (int k = 0; k < parties; ++k)
    if (group_mask >> k & 1u) out.push_back(k);
  return out;
}

std::vector<int> GameSpec::group2() const {
  std::vector<int> out;
  for (int k = 0; k < parties; ++k)
    if (!(group_mask >> k & 1u)) out.push_back(k);
  return out;
}

bool win_predicate(std::span<const int> questions, std::span<const int> answers) {
  if (questions.size() != answers.size())
    throw std::invalid_argument("win_predicate: question/answer arity mismatch");
  int ones = 0, parity = 0;
  for (std::size_t k = 0; k < questions.size(); ++k) {
    ones += questions[k] & 1;
    parity ^= answers[k] & 1;
  }
  return parity == (game_sign(ones) < 0 ? 1 : 0);
}

namespace {

// Need-bit of a packed question: floor(T/2) mod 2 with T its popcount.
int criterion_bit(unsigned question) { return game_sign(std::popcount(question)) < 0 ? 1 : 0; }

struct GroupLayout {
  std::vector<int> players;
  unsigned questions;     // 2^|players|
  unsigned answer_bits;   // |players| bits per question
  std::uint64_t functions() const {
    return std::uint64_t{1} << (answer_bits * questions);
  }
};

// Parity table of a packed response function: bit q = XOR of the answer
// bits the group emits on its packed question q. Only this parity enters
// the win criterion.
unsigned parity_vector(std::uint64_t function_index, const GroupLayout& g) {
  unsigned pv = 0;
  for (unsigned q = 0; q < g.questions; ++q) {
    const auto field = static_cast<unsigned>(
        (function_index >> (q * g.answer_bits)) & ((1u << g.answer_bits) - 1u));
    pv |= static_cast<unsigned>(std::popcount(field) & 1) << q;
  }
  return pv;
}

// Win counts indexed by the two groups' parity vectors.
std::vector<std::vector<int>> win_table(const GameSpec& spec, const GroupLayout& g1,
                                        const GroupLayout& g2) {
  std::vector<std::vector<int>> w(std::size_t{1} << g1.questions,
                                  std::vector<int>(std::size_t{1} << g2.questions, 0));
  const unsigned total = 1u << spec.parties;
  for (unsigned q = 0; q < total; ++q) {
    const unsigned q1 = pack_bits(q, g1.players);
    const unsigned q2 = pack_bits(q, g2.players);
    const int need = criterion_bit(q);
    for (std::size_t p1 = 0; p1 < w.size(); ++p1)
      for (std::size_t p2 = 0; p2 < w[p1].size(); ++p2)
        if ((static_cast<int>(p1 >> q1 & 1) ^ static_cast<int>(p2 >> q2 & 1)) == need)
          ++w[p1][p2];
  }
  return w;
}

StrategyHybrid decode_strategy(std::uint64_t f1, std::uint64_t f2, const GroupLayout& g1,
                               const GroupLayout& g2) {
  StrategyHybrid s;
  for (unsigned q = 0; q < g1.questions; ++q)
    s.group1.push_back(
        static_cast<std::uint8_t>(f1 >> (q * g1.answer_bits) & ((1u << g1.answer_bits) - 1u)));
  for (unsigned q = 0; q < g2.questions; ++q)
    s.group2.push_back(
        static_cast<std::uint8_t>(f2 >> (q * g2.answer_bits) & ((1u << g2.answer_bits) - 1u)));
  return s;
}

GroupLayout layout_of(const std::vector<int>& players) {
  GroupLayout g;
  g.players = players;
  g.questions = 1u << players.size();
  g.answer_bits = static_cast<unsigned>(players.size());
  return g;
}

}  // namespace

GameResult enumerate_classical(const GameSpec& spec) {
  check_spec(spec);
  if (spec.parties > 4) throw std::length_error("enumerate_classical: enumeration capped at 4 parties");

  const GroupLayout g1 = layout_of(spec.group1());
  const GroupLayout g2 = layout_of(spec.group2());
  const std::vector<std::vector<int>> w = win_table(spec, g1, g2);

  // Precompute each function's parity vector lookup in 12-bit halves so the
  // big scans (up to 2^24 functions for a 3-player group) stay cheap.
  const auto make_lut = [](const GroupLayout& g) {
    const unsigned fn_bits = g.answer_bits * g.questions;
    const unsigned half = std::min(fn_bits, 12u);
    std::vector<unsigned> lut(std::size_t{1} << half);
    GroupLayout part = g;
    part.questions = half / g.answer_bits;
    for (std::uint64_t f = 0; f < lut.size(); ++f) lut[f] = parity_vector(f, part);
    return lut;
  };
  const std::vector<unsigned> lut2 = make_lut(g2);
  const unsigned lut2_bits = g2.answer_bits * g2.questions;
  const unsigned lut2_half = std::min(lut2_bits, 12u);
  const unsigned lut2_qs = lut2_half / g2.answer_bits;

  int best_wins = -1;
  std::uint64_t best_f1 = 0, best_f2 = 0;
  for (std::uint64_t f1 = 0; f1 < g1.functions(); ++f1) {
    const unsigned p1 = parity_vector(f1, g1);
    const std::vector<int>& row = w[p1];
    for (std::uint64_t f2 = 0; f2 < g2.functions(); ++f2) {
      unsigned p2 = lut2[f2 & ((1u << lut2_half) - 1u)];
      if (lut2_bits > lut2_half)
        p2 |= lut2[f2 >> lut2_half] << lut2_qs;
      if (row[p2] > best_wins) {
        best_wins = row[p2];
        best_f1 = f1;
        best_f2 = f2;
      }
    }
  }

  GameResult out;
  out.mode = GameMode::Enumerated;
  out.wins = best_wins;
  out.total = std::int64_t{1} << spec.parties;
  out.win_probability = static_cast<double>(out.wins) / static_cast<double>(out.total);
  out.bipartitions = 1;
  out.strategy = decode_strategy(best_f1, best_f2, g1, g2);
  return out;
}

GameResult classical_bound(int parties) {
  if (parties < 2 || parties > 4)
    throw std::length_error("classical_bound: supported for 2 to 4 parties");
  GameResult best;
  int count = 0;
  // Enumerate bipartitions once each: group 1 always contains player 1.
  const std::uint32_t all = (1u << parties) - 1u;
  for (std::uint32_t mask = 1; mask < all; mask += 2) {
    GameSpec spec;
    spec.parties = parties;
    spec.group_mask = mask;
    GameResult r = enumerate_classical(spec);
    ++count;
    if (r.wins > best.wins) best = std::move(r);
  }
  best.bipartitions = count;
  return best;
}

GameResult evaluate_strategy(const GameSpec& spec, const StrategyHybrid& strategy) {
  check_spec(spec);
  const GroupLayout g1 = layout_of(spec.group1());
  const GroupLayout g2 = layout_of(spec.group2());
  if (strategy.group1.size() != g1.questions || strategy.group2.size() != g2.questions)
    throw std::invalid_argument("evaluate_strategy: response table size mismatch");

  GameResult out;
  out.mode = GameMode::Enumerated;
  out.total = std::int64_t{1} << spec.parties;
  for (unsigned q = 0; q < (1u << spec.parties); ++q) {
    const int a1 = std::popcount(strategy.group1[pack_bits(q, g1.players)]) & 1;
    const int a2 = std::popcount(strategy.group2[pack_bits(q, g2.players)]) & 1;
    if ((a1 ^ a2) == criterion_bit(q)) ++out.wins;
  }
  out.win_probability = static_cast<double>(out.wins) / static_cast<double>(out.total);
  out.strategy = strategy;
  return out;
}

namespace {

// P(answers | question) for all packed answers, by the Born rule.
std::vector<double> born_distribution(const DensityMatrix& rho, const SettingsTable& settings,
                                      unsigned question) {
  const int n = settings.n_parties();
  const std::size_t dim = rho.dim();
  std::vector<double> p(dim);
  const ComplexMatrix eye = ComplexMatrix::identity(2);
  for (unsigned answers = 0; answers < dim; ++answers) {
    ComplexMatrix proj = ComplexMatrix::identity(1);
    for (int k = 0; k < n; ++k) {
      const int qk = static_cast<int>(question >> (n - 1 - k) & 1u);
      const int ak = static_cast<int>(answers >> (n - 1 - k) & 1u);
      ComplexMatrix local = settings.parties[k][qk].observable();
      local *= Complex(ak == 0 ? 0.5 : -0.5);
      local += Complex(0.5) * eye;
      proj = kron(proj, local);
    }
    Complex tr = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) tr += rho.mat(i, j) * proj(j, i);
    p[answers] = tr.real();
  }
  return p;
}

std::vector<int> unpack_bits(unsigned value, int n) {
  std::vector<int> bits(n);
  for (int k = 0; k < n; ++k) bits[k] = static_cast<int>(value >> (n - 1 - k) & 1u);
  return bits;
}

void check_quantum_inputs(const DensityMatrix& rho, const SettingsTable& settings,
                          const GameSpec& spec) {
  check_spec(spec);
  if (rho.qubits != spec.parties || settings.n_parties() != spec.parties)
    throw std::invalid_argument("game: state, settings and spec party counts must match");
  if (spec.parties != 2 && spec.parties != 3)
    throw std::invalid_argument("game: quantum play supported for 2 or 3 parties only");
}

}  // namespace

GameResult quantum_win_exact(const DensityMatrix& rho, const SettingsTable& settings,
                             const GameSpec& spec) {
  check_quantum_inputs(rho, settings, spec);
  const int n = spec.parties;
  const unsigned questions = 1u << n;
  double total = 0.0;
  for (unsigned q = 0; q < questions; ++q) {
    const std::vector<double> p = born_distribution(rho, settings, q);
    const std::vector<int> qbits = unpack_bits(q, n);
    for (unsigned a = 0; a < p.size(); ++a)
      if (win_predicate(qbits, unpack_bits(a, n))) total += p[a];
  }
  GameResult out;
  out.mode = GameMode::Exact;
  out.win_probability = total / static_cast<double>(questions);
  out.settings = settings;
  return out;
}

GameResult simulate_rounds(const DensityMatrix& rho, const SettingsTable& settings,
                           const GameSpec& spec, std::int64_t rounds, std::uint64_t seed) {
  check_quantum_inputs(rho, settings, spec);
  if (rounds < 1) throw std::domain_error("simulate_rounds: need at least one round");
  const int n = spec.parties;
  const unsigned questions = 1u << n;

  // Cumulative answer distributions per question, plus the win parity of
  // every (question, answer) cell.
  std::vector<std::vector<double>> cdf(questions);
  std::vector<std::vector<bool>> wins_cell(questions);
  for (unsigned q = 0; q < questions; ++q) {
    const std::vector<double> p = born_distribution(rho, settings, q);
    const std::vector<int> qbits = unpack_bits(q, n);
    double acc = 0.0;
    for (unsigned a = 0; a < p.size(); ++a) {
      acc += std::max(p[a], 0.0);
      cdf[q].push_back(acc);
      wins_cell[q].push_back(win_predicate(qbits, unpack_bits(a, n)));
    }
    cdf[q].back() = 1.0;
  }

  // Separate question/answer streams, random-accessed by round index.
  const CounterRng question_stream(seed, 0x51);
  const CounterRng answer_stream(seed, 0xA5);
  std::int64_t wins = 0;
  for (std::int64_t r = 0; r < rounds; ++r) {
    const unsigned q =
        static_cast<unsigned>(question_stream.value_at(static_cast<std::uint64_t>(r)) & (questions - 1));
    const double u = answer_stream.uniform_at(static_cast<std::uint64_t>(r));
    const auto it = std::upper_bound(cdf[q].begin(), cdf[q].end(), u);
    const auto a = static_cast<unsigned>(std::distance(cdf[q].begin(), it));
    if (wins_cell[q][std::min<unsigned>(a, questions - 1)]) ++wins;
  }

  GameResult out;
  out.mode = GameMode::MonteCarlo;
  out.wins = wins;
  out.total = rounds;
  out.win_probability = static_cast<double>(wins) / static_cast<double>(rounds);
  out.std_error = std::sqrt(out.win_probability * (1.0 - out.win_probability) /
                            static_cast<double>(rounds));
  out.settings = settings;
  return out;
}

}  // namespace mnms
