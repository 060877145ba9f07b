#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "decide/model.hpp"

namespace decide {

using Tally = std::map<ProposalId, std::int64_t>;

/// Score of a proposal in a tally; proposals no ballot mentions score 0.
inline std::int64_t score_of(const Tally& tally, ProposalId id) {
  auto it = tally.find(id);
  return it == tally.end() ? 0 : it->second;
}

/// Length of the longest ballot (the global N).
std::size_t max_preferences(std::span<const Ballot> ballots);

/// Rank r (1-based) of a ballot scores N - r + 1 with N = max_preferences; unranked scores 0.
Tally partial_borda(std::span<const Ballot> ballots);
/// Number of ballots that rank a proposal at all.
Tally approval_score(std::span<const Ballot> ballots);
/// First preferences only.
Tally single_vote(std::span<const Ballot> ballots);
/// Approval over every ballot truncated to its first k entries. Requires k >= 1.
Tally top_k_approval(std::span<const Ballot> ballots, std::size_t k);

struct ScoreRow {
  std::int64_t borda = 0;
  std::int64_t approval = 0;
  std::vector<std::int64_t> histogram;  // histogram[r - 1] = ballots ranking the proposal at r

  bool operator==(const ScoreRow&) const = default;
};

struct ScoreBoard {
  std::size_t n_max = 0;
  std::map<ProposalId, ScoreRow> rows;

  /// Column sums of the priority histogram.
  std::vector<std::int64_t> column_sums() const;
  bool operator==(const ScoreBoard&) const = default;
};

/// Borda, approval and priority histogram for every id in `universe` plus any id the ballots mention.
ScoreBoard build_scoreboard(std::span<const Ballot> ballots, std::span<const ProposalId> universe = {});

/// Removes ids that are tombstoned or unknown among `proposals`, compacting the remaining ranks.
std::vector<Ballot> strip_removed(std::span<const Ballot> ballots, const std::vector<Proposal>& proposals);

/// Restricts each ballot to what a participant could approve without breaking the budget:
/// walks preferences in order and keeps an entry iff the kept total plus its cost stays within budget,
/// otherwise skips it and keeps scanning. Kept entries retain their relative order.
/// Throws std::invalid_argument if a ranked proposal has no cost.
std::vector<Ballot> budget_filter_ballots(std::span<const Ballot> ballots, const std::map<ProposalId, Money>& costs,
                                          Money budget);

/// Exact non-negative rational, always normalized.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  /// Cross-multiplied comparison.
  std::strong_ordering operator<=>(const Rational& o) const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

enum class BordaVariant { n_to_1, zero_based, dowdall };

/// Classic Borda over complete rankings of one choice set. Throws std::invalid_argument if any
/// ranking is not a permutation of the first ranking's choices.
template <typename Choice>
std::map<Choice, Rational> classic_borda(std::span<const std::vector<Choice>> rankings, BordaVariant variant) {
  std::map<Choice, Rational> scores;
  if (rankings.empty()) return scores;
  const std::set<Choice> choices(rankings.front().begin(), rankings.front().end());
  const auto n = static_cast<std::int64_t>(rankings.front().size());
  if (static_cast<std::int64_t>(choices.size()) != n) {
    throw std::invalid_argument("ranking is not a full permutation: duplicate choice");
  }
  for (const auto& c : choices) scores[c] = Rational{};
  for (const auto& ranking : rankings) {
    if (static_cast<std::int64_t>(ranking.size()) != n ||
        std::set<Choice>(ranking.begin(), ranking.end()) != choices) {
      throw std::invalid_argument("ranking is not a full permutation of the choice set");
    }
    for (std::int64_t r = 1; r <= n; ++r) {
      Rational points;
      switch (variant) {
        case BordaVariant::n_to_1: points = Rational{n - r + 1}; break;
        case BordaVariant::zero_based: points = Rational{n - r}; break;
        case BordaVariant::dowdall: points = Rational{1, r}; break;
      }
      scores[ranking[static_cast<std::size_t>(r - 1)]] += points;
    }
  }
  return scores;
}

}  // namespace decide
