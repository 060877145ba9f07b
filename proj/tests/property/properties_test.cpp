#include <doctest.h>

#include "properties.hpp"

namespace {

void require_clean(const props::Failures& f) {
  CHECK_MESSAGE(f.empty(), f.size() << " counterexample(s), first: " << (f.empty() ? std::string() : f.front()));
}

}  // namespace

TEST_CASE("score totals are conserved and match the reference scorer") { require_clean(props::score_conservation(11, 400)); }

TEST_CASE("scorers ignore ballot order") { require_clean(props::permutation_invariance(12, 300)); }

TEST_CASE("top-1 approval equals single vote") { require_clean(props::top1_equals_single(13, 400)); }

TEST_CASE("ballots of length at most one make borda, approval and single agree") {
  require_clean(props::short_ballot_collapse(14, 400));
}

TEST_CASE("winner sets stay within budget on 1000 random instances") {
  require_clean(props::winner_feasibility(15, 1000));
}

TEST_CASE("the highest ranked affordable approved proposal always wins") { require_clean(props::top_feasible_wins(16, 1000)); }

TEST_CASE("a proposal nobody approved never wins") { require_clean(props::zero_approval_never_wins(17, 1000)); }

TEST_CASE("replaying the event log reproduces the state") { require_clean(props::replay_identity(18, 40)); }

TEST_CASE("only the newest ballot of each participant counts") { require_clean(props::last_write_wins(19, 300)); }

TEST_CASE("moderation over every vote sequence up to length 10") { require_clean(props::moderation_exhaustive(10)); }

TEST_CASE("phases only move forward") { require_clean(props::phase_monotone(20, 500)); }

TEST_CASE("costs freeze once voting starts or a ballot exists") { require_clean(props::cost_freeze(21, 500)); }

TEST_CASE("results stay hidden until voting closes") { require_clean(props::result_hiding(22, 200)); }
