#include "decide/selection.hpp"

#include <algorithm>
#include <set>

namespace decide {

bool ranks_before(const RankedEntry& a, const RankedEntry& b) {
  if (a.borda != b.borda) return a.borda > b.borda;
  if (a.approval != b.approval) return a.approval > b.approval;
  return a.ordinal < b.ordinal;
}

RankedList rank(const ScoreBoard& board, const std::vector<Proposal>& proposals) {
  std::map<ProposalId, std::int64_t> ordinals;
  for (const auto& p : proposals) ordinals[p.id] = p.ordinal;

  RankedList out;
  out.reserve(board.rows.size());
  std::set<std::int64_t> seen_ordinals;
  for (const auto& [id, row] : board.rows) {
    auto it = ordinals.find(id);
    if (it == ordinals.end()) throw std::invalid_argument("unknown proposal " + std::to_string(id.value));
    if (!seen_ordinals.insert(it->second).second) {
      throw std::invalid_argument("duplicate ordinal " + std::to_string(it->second));
    }
    out.push_back({id, row.borda, row.approval, it->second});
  }
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

WinnerSet select_winners(const RankedList& ranked, const std::map<ProposalId, Money>& costs, Money budget) {
  WinnerSet result{{}, Money{}, budget};
  for (const auto& entry : ranked) {
    if (entry.approval == 0) continue;
    auto it = costs.find(entry.id);
    if (it == costs.end()) throw std::invalid_argument("no cost for proposal " + std::to_string(entry.id.value));
    if (it->second > result.leftover) continue;
    result.winners.push_back(entry.id);
    result.spent += it->second;
    result.leftover -= it->second;
  }
  return result;
}

std::map<ProposalId, Money> cost_map(const std::vector<Proposal>& proposals) {
  std::map<ProposalId, Money> costs;
  for (const auto& p : proposals) costs[p.id] = p.cost;
  return costs;
}

Decision decide(std::span<const Ballot> ballots, const std::vector<Proposal>& proposals,
                const BudgetConfig& config) {
  const auto live_ballots = strip_removed(ballots, proposals);
  std::vector<ProposalId> universe;
  for (const auto& p : proposals) {
    if (!p.removed) universe.push_back(p.id);
  }
  Decision d;
  d.board = build_scoreboard(live_ballots, universe);
  d.ranked = rank(d.board, proposals);
  d.winners = select_winners(d.ranked, cost_map(proposals), config.budget);
  return d;
}

}  // namespace decide
