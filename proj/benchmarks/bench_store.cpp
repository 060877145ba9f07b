#include <benchmark/benchmark.h>

#include <cstdlib>
#include <filesystem>

#include "decide/store.hpp"

using namespace decide;

namespace {

const Timestamp kAt = parse_rfc3339("2019-06-05T10:00:00Z");

Issue issue() {
  Issue i;
  i.id = "bench";
  i.title = "bench";
  i.budget_config = BudgetConfig::with_budget(Money::from_euros(20000));
  return i;
}

Ballot ballot(std::int64_t v) {
  Ballot b;
  b.participant = ParticipantId{"v" + std::to_string(v)};
  for (std::int64_t k = 0; k < 5; ++k) b.preferences.push_back(ProposalId{(v + k) % 20 + 1});
  return b;
}

void fill(Store& store, std::int64_t ballots) {
  for (std::int64_t i = 1; i <= 20; ++i) {
    store.append(kAt, ProposalAdded{Proposal{ProposalId{i}, "p", Money::from_euros(100 * i), i, {}, false}});
  }
  for (std::int64_t v = 0; v < ballots; ++v) store.append(kAt, BallotSubmitted{ballot(v)});
}

void BM_AppendInMemory(benchmark::State& state) {
  auto store = Store::in_memory(issue());
  fill(*store, 0);
  std::int64_t v = 0;
  for (auto _ : state) store->append(kAt, BallotSubmitted{ballot(v++ % 500)});
}
BENCHMARK(BM_AppendInMemory);

// Replay cost of reopening a store, with and without a snapshot covering the log.
void BM_Reopen(benchmark::State& state) {
  char tmpl[] = "/tmp/decide-bench-XXXXXX";
  const std::filesystem::path dir = ::mkdtemp(tmpl);
  const bool snapshot = state.range(1) != 0;
  {
    auto store = Store::open(dir, issue(), StoreOptions{0});
    fill(*store, state.range(0));
    if (snapshot) store->write_snapshot();
  }
  for (auto _ : state) benchmark::DoNotOptimize(Store::open(dir, issue(), StoreOptions{0}));
  std::filesystem::remove_all(dir);
}
BENCHMARK(BM_Reopen)->Args({1000, 0})->Args({1000, 1})->Unit(benchmark::kMillisecond);

}  // namespace
