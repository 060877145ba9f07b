#include <doctest.h>

#include "decide/model.hpp"

using namespace decide;

TEST_CASE("euro amounts format and parse") {
  CHECK(format_euros(Money::from_euros(1000)) == "1000");
  CHECK(format_euros(Money::from_cents(100050)) == "1000.50");
  CHECK(format_euros(Money::from_cents(7)) == "0.07");
  CHECK(parse_euros("1000") == Money::from_euros(1000));
  CHECK(parse_euros("1000.5") == Money::from_cents(100050));
  CHECK(parse_euros("1000,50") == Money::from_cents(100050));
  CHECK(parse_euros("0") == Money{});
  CHECK_THROWS_AS(parse_euros("-5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_euros(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_euros("12a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_euros("1.234"), std::invalid_argument);
  for (std::int64_t c : {0LL, 1LL, 99LL, 100LL, 123456LL}) CHECK(parse_euros(format_euros(Money{c})) == Money{c});
}

TEST_CASE("RFC-3339 timestamps") {
  const auto t = parse_rfc3339("2019-06-03T12:00:00Z");
  CHECK(format_rfc3339(t) == "2019-06-03T12:00:00Z");
  CHECK(parse_rfc3339("2019-06-03T14:00:00+02:00") == t);
  CHECK(parse_rfc3339("2019-06-03T12:00:00.750Z") == t);
  CHECK(parse_rfc3339("2019-06-03t12:00:00z") == t);
  CHECK_THROWS_AS(parse_rfc3339("2019-06-03"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rfc3339("2019-13-03T12:00:00Z"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rfc3339("2019-06-03T12:00:00"), std::invalid_argument);
}

TEST_CASE("budget and schedule validity") {
  CHECK(BudgetConfig::with_budget(Money::from_euros(100)).valid());
  CHECK_FALSE((BudgetConfig{Money::from_euros(100), Money::from_euros(50), Money::from_euros(40)}).valid());
  CHECK_FALSE((BudgetConfig{Money::from_euros(100), Money{}, Money::from_euros(140)}).valid());

  PhaseSchedule s;
  CHECK(s.valid());
  s.voting_closes_at = parse_rfc3339("2019-06-10T00:00:00Z");
  s.proposals_close_at = parse_rfc3339("2019-06-11T00:00:00Z");
  CHECK_FALSE(s.valid());
  s.proposals_close_at = parse_rfc3339("2019-06-01T00:00:00Z");
  s.voting_opens_at = parse_rfc3339("2019-06-05T00:00:00Z");
  CHECK(s.valid());
}

TEST_CASE("proposal cost bounds are inclusive") {
  const BudgetConfig cfg{Money::from_euros(20000), Money::from_euros(100), Money::from_euros(20000)};
  Proposal p{ProposalId{1}, "x", Money::from_euros(100), 1, {}, false};
  CHECK(validate_proposal(p, cfg).empty());
  p.cost = Money::from_euros(20000);
  CHECK(validate_proposal(p, cfg).empty());
  p.cost = Money::from_cents(9999);
  CHECK(validate_proposal(p, cfg) == std::vector<Violation>{{ViolationKind::below_min, Money::from_euros(100)}});
  p.cost = Money::from_cents(2000001);
  CHECK(validate_proposal(p, cfg) == std::vector<Violation>{{ViolationKind::above_max, Money::from_euros(20000)}});
  p.text = "";
  p.cost = Money::from_euros(50);
  const auto v = validate_proposal(p, cfg);
  REQUIRE(v.size() == 2);
  CHECK(v[0].kind == ViolationKind::below_min);
  CHECK(v[1].kind == ViolationKind::empty_text);
}

TEST_CASE("ballot reference checks") {
  std::vector<Proposal> ps = {{ProposalId{1}, "a", Money{}, 1, {}, false}, {ProposalId{2}, "b", Money{}, 2, {}, true}};
  Ballot b{ParticipantId{"x"}, {ProposalId{1}}, 1};
  CHECK(validate_ballot(b, ps).empty());
  b.preferences = {ProposalId{1}, ProposalId{1}};
  CHECK(validate_ballot(b, ps) == std::vector<BallotProblem>{{BallotProblemKind::duplicate, ProposalId{1}}});
  b.preferences = {ProposalId{3}};
  CHECK(validate_ballot(b, ps) == std::vector<BallotProblem>{{BallotProblemKind::unknown, ProposalId{3}}});
  b.preferences = {ProposalId{2}};
  CHECK(validate_ballot(b, ps) == std::vector<BallotProblem>{{BallotProblemKind::removed, ProposalId{2}}});
  b.preferences = {};
  CHECK(validate_ballot(b, ps).empty());
}

TEST_CASE("issue lookup and ordinals") {
  Issue issue;
  CHECK(issue.next_ordinal() == 1);
  issue.proposals.push_back({ProposalId{5}, "a", Money{}, 4, {}, false});
  CHECK(issue.next_ordinal() == 5);
  CHECK(issue.find(ProposalId{5}) != nullptr);
  CHECK(issue.find(ProposalId{6}) == nullptr);
}
