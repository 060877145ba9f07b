#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "decide/arggraph.hpp"
#include "oracles.hpp"

using namespace decide;

namespace {

ArgumentGraph fixture() {
  std::ifstream in(std::string(DECIDE_TEST_DATA_DIR) + "/four_relations.graph");
  return read_graph(in);
}

}  // namespace

TEST_CASE("the four relation classes") {
  const auto g = fixture();
  CHECK(g.classify_relation(NodeId{6}) == std::vector<Relation>{Relation::support});
  CHECK(g.classify_relation(NodeId{7}) == std::vector<Relation>{Relation::rebut});
  CHECK(g.classify_relation(NodeId{8}) == std::vector<Relation>{Relation::undermine});
  CHECK(g.classify_relation(NodeId{9}) == std::vector<Relation>{Relation::undercut});
}

TEST_CASE("statement and argument insertion rules") {
  ArgumentGraph g;
  const auto p = g.add_statement("position", true, Money::from_euros(10));
  const auto s = g.add_statement("s", false);
  CHECK_THROWS_AS(g.add_statement("", false), GraphError);
  CHECK_THROWS_AS(g.add_statement("no cost", true), GraphError);
  CHECK_THROWS_AS(g.add_statement("cost", false, Money::from_euros(1)), GraphError);

  const auto a = g.add_argument({s}, p, Attitude::positive);
  auto code = [&](auto&& f) {
    try {
      f();
    } catch (const GraphError& e) {
      return std::optional(e.code());
    }
    return std::optional<GraphErrc>{};
  };
  CHECK(code([&] { g.add_argument({s}, a, Attitude::positive); }) == GraphErrc::unsupported_relation);
  CHECK(code([&] { g.add_argument({s}, s, Attitude::negative); }) == GraphErrc::self_reference);
  CHECK(code([&] { g.add_argument({}, p, Attitude::negative); }) == GraphErrc::empty_premises);
  CHECK(code([&] { g.add_argument({a}, p, Attitude::negative); }) == GraphErrc::premise_not_statement);
  CHECK(code([&] { g.add_argument({NodeId{99}}, p, Attitude::negative); }) == GraphErrc::unknown_node);
  CHECK(code([&] { g.insert_statement(Statement{s, "dup", false, std::nullopt}); }) == GraphErrc::duplicate_id);

  const auto u = g.add_argument({p}, a, Attitude::negative);
  CHECK(g.classify_relation(u) == std::vector<Relation>{Relation::undercut});

  ArgumentGraph plain(false);
  CHECK_NOTHROW(plain.add_statement("position without cost", true));
}

TEST_CASE("rebut needs an opposing argument on the same conclusion") {
  ArgumentGraph g;
  const auto p = g.add_statement("p", true, Money::from_euros(1));
  const auto x = g.add_statement("x", false);
  const auto lone = g.add_argument({x}, p, Attitude::negative);
  CHECK(g.classify_relation(lone) == std::vector<Relation>{Relation::attack});
  const auto y = g.add_statement("y", false);
  g.add_argument({y}, p, Attitude::positive);
  CHECK(g.classify_relation(lone) == std::vector<Relation>{Relation::rebut});
}

TEST_CASE("one-layer pro and con lists") {
  ArgumentGraph g;
  const auto p = g.add_statement("p", true, Money::from_euros(1));
  std::set<std::int64_t> pros, cons;
  for (int i = 0; i < 7; ++i) {
    const auto s = g.add_statement("s" + std::to_string(i), false);
    const auto a = g.add_argument({s}, p, i % 2 ? Attitude::negative : Attitude::positive);
    (i % 2 ? cons : pros).insert(a.value);
  }
  // A deeper argument does not appear.
  const auto deep = g.add_statement("deep", false);
  g.add_argument({deep}, NodeId{*pros.begin()}, Attitude::negative);

  const auto all = g.position_arguments(p, std::nullopt, 1);
  CHECK(all.pro.size() == 4);
  CHECK(all.con.size() == 3);
  std::set<std::int64_t> got;
  for (auto id : all.pro) got.insert(id.value);
  CHECK(got == pros);

  const auto shown = g.position_arguments(p, 3, 42);
  CHECK(shown.pro.size() == 3);
  CHECK(shown.con.size() == 3);
  CHECK(shown.pro == g.position_arguments(p, 3, 42).pro);
  for (auto id : shown.pro) CHECK(pros.count(id.value));

  std::set<std::vector<NodeId>> orders;
  for (std::uint64_t seed = 0; seed < 20; ++seed) orders.insert(g.position_arguments(p, 3, seed).pro);
  CHECK(orders.size() > 1);
}

TEST_CASE("cycle enumeration agrees with a topological-order oracle") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    ArgumentGraph g(false);
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int i = 0; i < n; ++i) g.add_statement("s" + std::to_string(i), false);
    const int m = std::uniform_int_distribution<int>(0, 8)(rng);
    for (int j = 0; j < m; ++j) {
      const NodeId prem{std::uniform_int_distribution<int>(1, n)(rng)};
      NodeId concl{std::uniform_int_distribution<int>(1, n)(rng)};
      if (prem == concl) continue;
      g.add_argument({prem}, concl, std::bernoulli_distribution(0.5)(rng) ? Attitude::positive : Attitude::negative);
    }
    const auto cycles = g.validate_acyclic();
    CHECK(cycles.empty() == oracle::has_topological_order(g));
    for (const auto& c : cycles) {
      REQUIRE_FALSE(c.empty());
      CHECK(*std::min_element(c.begin(), c.end()) == c.front());
      CHECK(std::set<NodeId>(c.begin(), c.end()).size() == c.size());
    }
  }
}

TEST_CASE("two-cycle fixture lists its cycle") {
  std::ifstream in(std::string(DECIDE_TEST_DATA_DIR) + "/two_cycle.graph");
  const auto g = read_graph(in);
  const auto cycles = g.validate_acyclic();
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0] == std::vector<NodeId>{NodeId{2}, NodeId{4}, NodeId{3}, NodeId{5}});
}

TEST_CASE("graph text format round-trips") {
  const auto g = fixture();
  std::ostringstream out;
  write_graph(out, g);
  std::istringstream in(out.str());
  CHECK(read_graph(in) == g);

  std::istringstream forward("A\t3\t+\t1\t2\nS\t2\t0\t-\tpremise\nS\t1\t1\t12.50\tposition\n");
  const auto h = read_graph(forward);
  CHECK(h.statement(NodeId{1})->cost == Money::from_cents(1250));
  CHECK(h.argument(NodeId{3}) != nullptr);

  auto line_of = [](const std::string& text) {
    std::istringstream bad(text);
    try {
      read_graph(bad);
    } catch (const GraphParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("S\t1\t0\t-\tok\nS\t2\t2\t-\tbad flag\n") == 2);
  CHECK(line_of("# comment\n\nX\t1\n") == 3);
  CHECK(line_of("S\t1\t0\t-\tok\nA\t2\t+\t9\t1\n") == 2);
}

TEST_CASE("review cases") {
  ReviewCase c{NodeId{1}, ReviewKind::spelling};
  for (int i = 0; i < 3; ++i) c = cast_review_vote(c, ReviewSide::con);
  CHECK(c.state == ReviewState::rejected);
  CHECK_THROWS_AS(cast_review_vote(c, ReviewSide::pro), std::logic_error);

  ReviewCase d{NodeId{1}, ReviewKind::merge};
  for (auto side : {ReviewSide::pro, ReviewSide::con, ReviewSide::pro, ReviewSide::con, ReviewSide::pro,
                    ReviewSide::con, ReviewSide::pro, ReviewSide::con}) {
    d = cast_review_vote(d, side);
  }
  CHECK(d.state == ReviewState::pending);
  d = cast_review_vote(d, ReviewSide::pro);
  CHECK(d.state == ReviewState::accepted);
  CHECK(d.pro_votes == 5);

  CHECK(review_kind_from_string("edit-request") == ReviewKind::edit_request);
  CHECK(review_kind_from_string(to_string(ReviewKind::delete_statement)) == ReviewKind::delete_statement);
  CHECK_FALSE(review_kind_from_string("nonsense"));
}
