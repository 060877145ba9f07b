#pragma once

// Reference implementations written directly from the rule definitions, kept apart from core.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "decide/arggraph.hpp"
#include "decide/model.hpp"

namespace oracle {

using decide::Ballot;
using decide::Money;
using decide::ProposalId;

struct Scores {
  std::map<std::int64_t, std::int64_t> borda, approval, single;
  std::map<std::int64_t, std::vector<std::int64_t>> histogram;
  std::size_t n = 0;
};

inline Scores score(const std::vector<std::vector<std::int64_t>>& ballots) {
  Scores s;
  for (const auto& b : ballots) s.n = std::max(s.n, b.size());
  for (const auto& b : ballots) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto points = static_cast<std::int64_t>(s.n - i);
      s.borda[b[i]] += points;
      s.approval[b[i]] += 1;
      if (i == 0) s.single[b[i]] += 1;
      auto& h = s.histogram[b[i]];
      h.resize(s.n, 0);
      h[i] += 1;
    }
  }
  return s;
}

inline std::vector<std::vector<std::int64_t>> raw(const std::vector<Ballot>& ballots) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& b : ballots) {
    std::vector<std::int64_t> r;
    for (auto id : b.preferences) r.push_back(id.value);
    out.push_back(r);
  }
  return out;
}

inline std::map<std::int64_t, std::int64_t> top_k(const std::vector<std::vector<std::int64_t>>& ballots,
                                                  std::size_t k) {
  std::map<std::int64_t, std::int64_t> out;
  for (const auto& b : ballots) {
    for (std::size_t i = 0; i < b.size() && i < k; ++i) out[b[i]] += 1;
  }
  return out;
}

struct Candidate {
  std::int64_t id;
  std::int64_t borda;
  std::int64_t approval;
  std::int64_t ordinal;
  std::int64_t cost;
};

/// Greedy winner set computed from scratch: sort by the tiebreak chain, take what fits.
inline std::vector<std::int64_t> greedy(std::vector<Candidate> c, std::int64_t budget, std::int64_t* spent = nullptr) {
  std::sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) {
    if (a.borda != b.borda) return a.borda > b.borda;
    if (a.approval != b.approval) return a.approval > b.approval;
    return a.ordinal < b.ordinal;
  });
  std::vector<std::int64_t> won;
  std::int64_t left = budget;
  for (const auto& x : c) {
    if (x.approval > 0 && x.cost <= left) {
      won.push_back(x.id);
      left -= x.cost;
    }
  }
  if (spent) *spent = budget - left;
  return won;
}

/// Maximum total Borda over every feasible subset (exhaustive, n <= 20).
inline std::int64_t best_subset_borda(const std::vector<Candidate>& c, std::int64_t budget) {
  std::int64_t best = 0;
  const std::size_t n = c.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::int64_t cost = 0, value = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        cost += c[i].cost;
        value += c[i].borda;
      }
    }
    if (cost <= budget) best = std::max(best, value);
  }
  return best;
}

/// Budget filter by definition: keep an entry iff it still fits on top of what was kept.
inline std::vector<std::vector<std::int64_t>> budget_filter(const std::vector<std::vector<std::int64_t>>& ballots,
                                                            const std::map<std::int64_t, std::int64_t>& costs,
                                                            std::int64_t budget) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& b : ballots) {
    std::vector<std::int64_t> kept;
    std::int64_t total = 0;
    for (auto id : b) {
      if (total + costs.at(id) <= budget) {
        kept.push_back(id);
        total += costs.at(id);
      }
    }
    out.push_back(kept);
  }
  return out;
}

/// Kahn's algorithm over premise -> argument -> conclusion edges; true iff a topological order exists.
inline bool has_topological_order(const decide::ArgumentGraph& g) {
  std::map<std::int64_t, std::set<std::int64_t>> out;
  std::map<std::int64_t, int> indeg;
  for (const auto& [id, s] : g.statements()) indeg[id.value];
  for (const auto& [id, a] : g.arguments()) {
    indeg[id.value];
    for (auto p : a.premises) {
      if (out[p.value].insert(id.value).second) ++indeg[id.value];
    }
    if (out[id.value].insert(a.conclusion.value).second) ++indeg[a.conclusion.value];
  }
  std::vector<std::int64_t> ready;
  for (const auto& [n, d] : indeg) {
    if (d == 0) ready.push_back(n);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const auto n = ready.back();
    ready.pop_back();
    ++seen;
    for (auto m : out[n]) {
      if (--indeg[m] == 0) ready.push_back(m);
    }
  }
  return seen == indeg.size();
}

/// Moderation outcome of a vote sequence (true = pro). Returns the index at which the case was decided.
struct ModerationOutcome {
  std::optional<std::size_t> decided_at;
  bool accepted = false;
};

inline ModerationOutcome moderate(const std::vector<bool>& votes) {
  int pro = 0, con = 0;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    (votes[i] ? pro : con) += 1;
    if (std::max(pro, con) >= 5 || pro - con >= 3 || con - pro >= 3) return {i, pro > con};
  }
  return {};
}

}  // namespace oracle
