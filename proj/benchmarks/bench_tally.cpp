#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "decide/scoring.hpp"
#include "decide/selection.hpp"

using namespace decide;

namespace {

struct Election {
  std::vector<Proposal> proposals;
  std::vector<Ballot> ballots;
};

// Random partial rankings over `n` proposals, ballot lengths uniform in [1, min(n, 8)].
Election make_election(std::int64_t n, std::int64_t voters) {
  std::mt19937_64 rng(42);
  Election e;
  for (std::int64_t i = 1; i <= n; ++i) {
    const auto euros = std::uniform_int_distribution<std::int64_t>(100, 20000)(rng);
    e.proposals.push_back(Proposal{ProposalId{i}, "p", Money::from_euros(euros), i, {}, false});
  }
  std::vector<std::int64_t> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 1);
  const auto longest = std::min<std::int64_t>(n, 8);
  for (std::int64_t v = 0; v < voters; ++v) {
    std::shuffle(ids.begin(), ids.end(), rng);
    const auto len = std::uniform_int_distribution<std::int64_t>(1, longest)(rng);
    Ballot b;
    b.participant = ParticipantId{"v" + std::to_string(v)};
    b.sequence = v + 1;
    for (std::int64_t k = 0; k < len; ++k) b.preferences.push_back(ProposalId{ids[static_cast<std::size_t>(k)]});
    e.ballots.push_back(std::move(b));
  }
  return e;
}

void BM_PartialBorda(benchmark::State& state) {
  const auto e = make_election(40, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(partial_borda(e.ballots));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PartialBorda)->Arg(142)->Arg(10000)->Arg(100000);

void BM_ScoreBoard(benchmark::State& state) {
  const auto e = make_election(40, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_scoreboard(e.ballots));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScoreBoard)->Arg(142)->Arg(10000)->Arg(100000);

void BM_BudgetFilter(benchmark::State& state) {
  const auto e = make_election(40, state.range(0));
  const auto costs = cost_map(e.proposals);
  for (auto _ : state) benchmark::DoNotOptimize(budget_filter_ballots(e.ballots, costs, Money::from_euros(20000)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BudgetFilter)->Arg(142)->Arg(10000);

void BM_GreedySelection(benchmark::State& state) {
  const auto e = make_election(state.range(0), 1000);
  const auto board = build_scoreboard(e.ballots);
  const auto ranked = rank(board, e.proposals);
  const auto costs = cost_map(e.proposals);
  for (auto _ : state) benchmark::DoNotOptimize(select_winners(ranked, costs, Money::from_euros(50000)));
}
BENCHMARK(BM_GreedySelection)->Arg(10)->Arg(100)->Arg(1000);

void BM_Decide(benchmark::State& state) {
  const auto e = make_election(40, state.range(0));
  const auto config = BudgetConfig::with_budget(Money::from_euros(50000));
  for (auto _ : state) benchmark::DoNotOptimize(decide::decide(e.ballots, e.proposals, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Decide)->Arg(142)->Arg(10000);

}  // namespace
