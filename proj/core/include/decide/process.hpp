#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "decide/arggraph.hpp"
#include "decide/model.hpp"

namespace decide {

enum class Phase { proposing, review, voting, closed };

std::string_view to_string(Phase p);

/// Derived from the schedule and the clock only. With no timestamps set, proposing and voting are
/// open together and the phase reads as voting.
Phase phase_at(const PhaseSchedule& schedule, Timestamp now);
bool proposing_open(const PhaseSchedule& schedule, Timestamp now);
bool voting_open(const PhaseSchedule& schedule, Timestamp now);
bool results_visible(const PhaseSchedule& schedule, Timestamp now);

enum class RejectReason {
  phase_closed,
  phase_not_voting,
  cost_bounds,
  empty_text,
  invalid_ballot,
  cost_frozen,
  unknown_proposal,
  unknown_participant,
  graph_violation,
  review_decided,
};

std::string_view to_string(RejectReason r);

struct Rejection {
  RejectReason reason;
  std::string message;
  std::vector<Violation> violations;         // cost_bounds / empty_text
  std::vector<BallotProblem> ballot_problems;  // invalid_ballot
};

template <typename T>
using Verdict = std::variant<T, Rejection>;

template <typename T>
bool accepted(const Verdict<T>& v) {
  return std::holds_alternative<T>(v);
}

struct ReviewKey {
  NodeId target;
  ReviewKind kind;
  auto operator<=>(const ReviewKey&) const = default;
};

/// Everything the rules look at for one issue. Mutated only by applying store events.
struct IssueState {
  Issue issue;
  ArgumentGraph graph{true};
  std::map<ParticipantId, Ballot> ballots;  // live ballot per participant
  std::map<ReviewKey, ReviewCase> reviews;
  std::int64_t ballot_sequence = 0;         // highest sequence handed out

  std::vector<Ballot> live_ballots() const;
  bool operator==(const IssueState&) const = default;
};

struct ProposalDraft {
  std::string text;
  Money cost;
  ParticipantId author;
};

/// Pure decisions: each returns the record to append on acceptance, or why not.
Verdict<Proposal> submit_proposal(const IssueState& state, ProposalDraft draft, Timestamp now);
Verdict<Ballot> submit_ballot(const IssueState& state, ParticipantId participant,
                              std::vector<ProposalId> preferences, Timestamp now);
Verdict<Proposal> edit_proposal_cost(const IssueState& state, ProposalId id, Money new_cost, Timestamp now);
/// Tombstoning follows the same freeze rule as cost edits.
Verdict<Proposal> remove_proposal(const IssueState& state, ProposalId id, Timestamp now);

Verdict<Statement> add_statement(const IssueState& state, std::string text);
Verdict<Argument> add_argument(const IssueState& state, std::vector<NodeId> premises, NodeId conclusion,
                               Attitude attitude);
Verdict<ReviewCase> review_vote(const IssueState& state, NodeId target, ReviewKind kind, ReviewSide side);

}  // namespace decide
