#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "decide/model.hpp"
#include "decide/scoring.hpp"

namespace decide {

struct RankedEntry {
  ProposalId id;
  std::int64_t borda = 0;
  std::int64_t approval = 0;
  std::int64_t ordinal = 0;

  bool operator==(const RankedEntry&) const = default;
};

/// Sorted by borda desc, approval desc, creation ordinal asc.
using RankedList = std::vector<RankedEntry>;

/// Strict precedence of the tiebreak chain. Cost never participates.
bool ranks_before(const RankedEntry& a, const RankedEntry& b);

struct WinnerSet {
  std::vector<ProposalId> winners;  // in rank order
  Money spent;
  Money leftover;

  bool operator==(const WinnerSet&) const = default;
};

/// Orders every scoreboard row. Throws std::invalid_argument for a row without a proposal
/// or for duplicate ordinals.
RankedList rank(const ScoreBoard& board, const std::vector<Proposal>& proposals);

/// Single greedy pass down the ranking: zero-approval entries are skipped, an entry is taken iff its
/// cost fits what is left. Skipped entries are never revisited.
WinnerSet select_winners(const RankedList& ranked, const std::map<ProposalId, Money>& costs, Money budget);

struct Decision {
  ScoreBoard board;
  RankedList ranked;
  WinnerSet winners;
};

/// Tombstoned proposals are stripped from the ballots first; removed proposals get no row.
Decision decide(std::span<const Ballot> ballots, const std::vector<Proposal>& proposals,
                const BudgetConfig& config);

std::map<ProposalId, Money> cost_map(const std::vector<Proposal>& proposals);

}  // namespace decide
