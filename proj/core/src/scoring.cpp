#include "decide/scoring.hpp"

#include <algorithm>

namespace decide {

std::size_t max_preferences(std::span<const Ballot> ballots) {
  std::size_t n = 0;
  for (const auto& b : ballots) n = std::max(n, b.preferences.size());
  return n;
}

Tally partial_borda(std::span<const Ballot> ballots) {
  const auto n = static_cast<std::int64_t>(max_preferences(ballots));
  Tally out;
  for (const auto& b : ballots) {
    for (std::size_t i = 0; i < b.preferences.size(); ++i) {
      out[b.preferences[i]] += n - static_cast<std::int64_t>(i);
    }
  }
  return out;
}

Tally top_k_approval(std::span<const Ballot> ballots, std::size_t k) {
  if (k == 0) throw std::invalid_argument("top-k approval needs k >= 1");
  Tally out;
  for (const auto& b : ballots) {
    const std::size_t len = std::min(k, b.preferences.size());
    for (std::size_t i = 0; i < len; ++i) out[b.preferences[i]] += 1;
  }
  return out;
}

Tally approval_score(std::span<const Ballot> ballots) {
  return top_k_approval(ballots, std::max<std::size_t>(1, max_preferences(ballots)));
}

Tally single_vote(std::span<const Ballot> ballots) { return top_k_approval(ballots, 1); }

std::vector<std::int64_t> ScoreBoard::column_sums() const {
  std::vector<std::int64_t> sums(n_max, 0);
  for (const auto& [id, row] : rows) {
    for (std::size_t r = 0; r < n_max; ++r) sums[r] += row.histogram[r];
  }
  return sums;
}

ScoreBoard build_scoreboard(std::span<const Ballot> ballots, std::span<const ProposalId> universe) {
  ScoreBoard board;
  board.n_max = max_preferences(ballots);
  auto row_for = [&](ProposalId id) -> ScoreRow& {
    auto [it, inserted] = board.rows.try_emplace(id);
    if (inserted) it->second.histogram.assign(board.n_max, 0);
    return it->second;
  };
  for (const auto& id : universe) row_for(id);
  const auto n = static_cast<std::int64_t>(board.n_max);
  for (const auto& b : ballots) {
    for (std::size_t i = 0; i < b.preferences.size(); ++i) {
      ScoreRow& row = row_for(b.preferences[i]);
      row.histogram[i] += 1;
      row.approval += 1;
      row.borda += n - static_cast<std::int64_t>(i);
    }
  }
  return board;
}

std::vector<Ballot> strip_removed(std::span<const Ballot> ballots, const std::vector<Proposal>& proposals) {
  std::set<ProposalId> live;
  for (const auto& p : proposals) {
    if (!p.removed) live.insert(p.id);
  }
  std::vector<Ballot> out(ballots.begin(), ballots.end());
  for (auto& b : out) {
    std::erase_if(b.preferences, [&](ProposalId id) { return !live.count(id); });
  }
  return out;
}

std::vector<Ballot> budget_filter_ballots(std::span<const Ballot> ballots, const std::map<ProposalId, Money>& costs,
                                          Money budget) {
  std::vector<Ballot> out;
  out.reserve(ballots.size());
  for (const auto& b : ballots) {
    Ballot kept{b.participant, {}, b.sequence};
    Money running{};
    for (const auto& id : b.preferences) {
      auto it = costs.find(id);
      if (it == costs.end()) {
        throw std::invalid_argument("no cost for proposal " + std::to_string(id.value));
      }
      if (running + it->second <= budget) {
        running += it->second;
        kept.preferences.push_back(id);
      }
    }
    out.push_back(std::move(kept));
  }
  return out;
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

Rational Rational::operator+(const Rational& o) const {
  const std::int64_t g = std::gcd(den_, o.den_);
  return Rational{num_ * (o.den_ / g) + o.num_ * (den_ / g), den_ / g * o.den_};
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
  // 128-bit products keep the cross-multiplication exact.
  __extension__ using wide = __int128;
  const wide lhs = static_cast<wide>(num_) * o.den_;
  const wide rhs = static_cast<wide>(o.num_) * den_;
  return lhs < rhs ? std::strong_ordering::less : lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal;
}

}  // namespace decide
