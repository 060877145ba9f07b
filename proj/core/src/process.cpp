#include "decide/process.hpp"

#include <algorithm>

namespace decide {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::proposing: return "proposing";
    case Phase::review: return "review";
    case Phase::voting: return "voting";
    case Phase::closed: return "closed";
  }
  return "unknown";
}

namespace {

bool voting_closed(const PhaseSchedule& s, Timestamp now) { return s.voting_closes_at && now >= *s.voting_closes_at; }

Rejection reject(RejectReason reason, std::string message) { return Rejection{reason, std::move(message), {}, {}}; }

// Costs are frozen as soon as anyone could vote or has voted.
std::optional<Rejection> check_not_frozen(const IssueState& state, Timestamp now) {
  if (!state.ballots.empty()) return reject(RejectReason::cost_frozen, "ballots exist for this issue");
  const Phase phase = phase_at(state.issue.schedule, now);
  if (phase != Phase::proposing && phase != Phase::review) {
    return reject(RejectReason::cost_frozen, "proposals are frozen in phase " + std::string(to_string(phase)));
  }
  return std::nullopt;
}

}  // namespace

bool proposing_open(const PhaseSchedule& s, Timestamp now) {
  if (voting_closed(s, now)) return false;
  return !s.proposals_close_at || now < *s.proposals_close_at;
}

bool voting_open(const PhaseSchedule& s, Timestamp now) {
  if (voting_closed(s, now)) return false;
  return !s.voting_opens_at || now >= *s.voting_opens_at;
}

Phase phase_at(const PhaseSchedule& s, Timestamp now) {
  if (voting_closed(s, now)) return Phase::closed;
  if (voting_open(s, now)) return Phase::voting;
  if (proposing_open(s, now)) return Phase::proposing;
  return Phase::review;
}

bool results_visible(const PhaseSchedule& s, Timestamp now) { return s.results_always_visible || voting_closed(s, now); }

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::phase_closed: return "phase-closed";
    case RejectReason::phase_not_voting: return "phase-not-voting";
    case RejectReason::cost_bounds: return "cost-bounds";
    case RejectReason::empty_text: return "empty-text";
    case RejectReason::invalid_ballot: return "invalid-ballot";
    case RejectReason::cost_frozen: return "cost-frozen";
    case RejectReason::unknown_proposal: return "unknown-proposal";
    case RejectReason::unknown_participant: return "unknown-participant";
    case RejectReason::graph_violation: return "graph-violation";
    case RejectReason::review_decided: return "vote-on-decided-case";
  }
  return "unknown";
}

std::vector<Ballot> IssueState::live_ballots() const {
  std::vector<Ballot> out;
  out.reserve(ballots.size());
  for (const auto& [pid, b] : ballots) out.push_back(b);
  return out;
}

Verdict<Proposal> submit_proposal(const IssueState& state, ProposalDraft draft, Timestamp now) {
  if (!proposing_open(state.issue.schedule, now)) {
    return reject(RejectReason::phase_closed, "no new proposals are accepted in phase " +
                                                  std::string(to_string(phase_at(state.issue.schedule, now))));
  }
  Proposal p;
  // Proposals are positions in the argument graph and share its id space.
  std::int64_t next_id = state.graph.fresh_id().value;
  for (const auto& existing : state.issue.proposals) next_id = std::max(next_id, existing.id.value + 1);
  p.id = ProposalId{next_id};
  p.text = std::move(draft.text);
  p.cost = draft.cost;
  p.ordinal = state.issue.next_ordinal();
  p.author = std::move(draft.author);

  auto violations = validate_proposal(p, state.issue.budget_config);
  if (!violations.empty()) {
    const bool text_only = violations.size() == 1 && violations.front().kind == ViolationKind::empty_text;
    Rejection r = reject(text_only ? RejectReason::empty_text : RejectReason::cost_bounds,
                         std::string(to_string(violations.front().kind)));
    r.violations = std::move(violations);
    return r;
  }
  return p;
}

Verdict<Ballot> submit_ballot(const IssueState& state, ParticipantId participant,
                              std::vector<ProposalId> preferences, Timestamp now) {
  if (!voting_open(state.issue.schedule, now)) {
    return reject(RejectReason::phase_not_voting,
                  "voting is not open in phase " + std::string(to_string(phase_at(state.issue.schedule, now))));
  }
  if (participant.value.empty()) return reject(RejectReason::unknown_participant, "empty participant id");
  Ballot b{std::move(participant), std::move(preferences), state.ballot_sequence + 1};
  auto problems = validate_ballot(b, state.issue.proposals);
  if (!problems.empty()) {
    Rejection r = reject(RejectReason::invalid_ballot, std::string(to_string(problems.front().kind)) +
                                                           " proposal " +
                                                           std::to_string(problems.front().proposal.value));
    r.ballot_problems = std::move(problems);
    return r;
  }
  return b;
}

Verdict<Proposal> edit_proposal_cost(const IssueState& state, ProposalId id, Money new_cost, Timestamp now) {
  const Proposal* existing = state.issue.find(id);
  if (!existing || existing->removed) {
    return reject(RejectReason::unknown_proposal, "proposal " + std::to_string(id.value));
  }
  if (auto frozen = check_not_frozen(state, now)) return *frozen;
  Proposal p = *existing;
  p.cost = new_cost;
  auto violations = validate_proposal(p, state.issue.budget_config);
  if (!violations.empty()) {
    Rejection r = reject(RejectReason::cost_bounds, std::string(to_string(violations.front().kind)));
    r.violations = std::move(violations);
    return r;
  }
  return p;
}

Verdict<Proposal> remove_proposal(const IssueState& state, ProposalId id, Timestamp now) {
  const Proposal* existing = state.issue.find(id);
  if (!existing || existing->removed) {
    return reject(RejectReason::unknown_proposal, "proposal " + std::to_string(id.value));
  }
  if (auto frozen = check_not_frozen(state, now)) return *frozen;
  Proposal p = *existing;
  p.removed = true;
  return p;
}

Verdict<Statement> add_statement(const IssueState& state, std::string text) {
  Statement s{state.graph.fresh_id(), std::move(text), false, std::nullopt};
  for (const auto& p : state.issue.proposals) s.id.value = std::max(s.id.value, p.id.value + 1);
  try {
    state.graph.check_statement(s);
  } catch (const GraphError& e) {
    return reject(RejectReason::graph_violation, e.what());
  }
  return s;
}

Verdict<Argument> add_argument(const IssueState& state, std::vector<NodeId> premises, NodeId conclusion,
                               Attitude attitude) {
  Argument a{state.graph.fresh_id(), std::move(premises), conclusion, attitude};
  for (const auto& p : state.issue.proposals) a.id.value = std::max(a.id.value, p.id.value + 1);
  try {
    state.graph.check_argument(a);
  } catch (const GraphError& e) {
    return reject(RejectReason::graph_violation, e.what());
  }
  return a;
}

Verdict<ReviewCase> review_vote(const IssueState& state, NodeId target, ReviewKind kind, ReviewSide side) {
  if (!state.graph.contains(target)) {
    return reject(RejectReason::graph_violation, "unknown-node: " + std::to_string(target.value));
  }
  ReviewCase current{target, kind, 0, 0, ReviewState::pending};
  if (auto it = state.reviews.find({target, kind}); it != state.reviews.end()) current = it->second;
  if (current.state != ReviewState::pending) {
    return reject(RejectReason::review_decided, "review is " + std::string(to_string(current.state)));
  }
  return cast_review_vote(current, side);
}

}  // namespace decide
