#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace decide {

/// Amount of money in euro cents. Always exact integer arithmetic.
struct Money {
  std::int64_t cents = 0;

  static constexpr Money from_euros(std::int64_t euros) { return Money{euros * 100}; }
  static constexpr Money from_cents(std::int64_t c) { return Money{c}; }

  constexpr auto operator<=>(const Money&) const = default;
  constexpr Money operator+(Money o) const { return Money{cents + o.cents}; }
  constexpr Money operator-(Money o) const { return Money{cents - o.cents}; }
  constexpr Money& operator+=(Money o) {
    cents += o.cents;
    return *this;
  }
  constexpr Money& operator-=(Money o) {
    cents -= o.cents;
    return *this;
  }
};

/// "1000" for whole euros, "1000.50" otherwise.
std::string format_euros(Money m);
/// Parses "1000", "1000.5", "1000.50" and the comma variant "1000,50".
/// Throws std::invalid_argument on anything else, including negative amounts.
Money parse_euros(std::string_view text);

struct ProposalId {
  std::int64_t value = 0;
  constexpr auto operator<=>(const ProposalId&) const = default;
};

struct ParticipantId {
  std::string value;
  auto operator<=>(const ParticipantId&) const = default;
};

using Timestamp = std::chrono::sys_seconds;

/// RFC-3339 date-time, e.g. "2019-06-03T12:00:00Z" or "2019-06-03T14:00:00+02:00".
/// Fractional seconds are accepted and truncated.
Timestamp parse_rfc3339(std::string_view text);
std::string format_rfc3339(Timestamp t);

struct BudgetConfig {
  Money budget;
  Money cost_min{};
  Money cost_max;

  /// Builds a config with cost_max defaulting to the budget.
  static BudgetConfig with_budget(Money budget) { return {budget, Money{}, budget}; }
  bool valid() const;
  bool operator==(const BudgetConfig&) const = default;
};

struct PhaseSchedule {
  std::optional<Timestamp> proposals_close_at;
  std::optional<Timestamp> voting_opens_at;
  std::optional<Timestamp> voting_closes_at;
  bool results_always_visible = false;

  bool valid() const;
  bool operator==(const PhaseSchedule&) const = default;
};

struct Proposal {
  ProposalId id;
  std::string text;
  Money cost;
  std::int64_t ordinal = 0;
  ParticipantId author;
  bool removed = false;

  bool operator==(const Proposal&) const = default;
};

struct Ballot {
  ParticipantId participant;
  std::vector<ProposalId> preferences;  // first entry is the highest priority
  std::int64_t sequence = 0;

  bool operator==(const Ballot&) const = default;
};

struct Issue {
  std::string id;
  std::string title;
  BudgetConfig budget_config;
  PhaseSchedule schedule;
  std::vector<Proposal> proposals;

  const Proposal* find(ProposalId id) const;
  Proposal* find(ProposalId id);
  std::int64_t next_ordinal() const;
  bool operator==(const Issue&) const = default;
};

enum class ViolationKind { below_min, above_max, empty_text };

struct Violation {
  ViolationKind kind;
  Money bound;  // the violated bound; zero for empty_text

  bool operator==(const Violation&) const = default;
};

std::string_view to_string(ViolationKind kind);

/// Every violated bound, in the order below-min, above-max, empty-text.
std::vector<Violation> validate_proposal(const Proposal& proposal, const BudgetConfig& config);

enum class BallotProblemKind { duplicate, unknown, removed };

struct BallotProblem {
  BallotProblemKind kind;
  ProposalId proposal;

  bool operator==(const BallotProblem&) const = default;
};

std::string_view to_string(BallotProblemKind kind);

/// Referential checks of a ballot against the proposals of an issue.
std::vector<BallotProblem> validate_ballot(const Ballot& ballot, const std::vector<Proposal>& proposals);

}  // namespace decide
