#include <doctest.h>

#include <sstream>

#include "decide/config.hpp"

using namespace decide;

namespace {

ServiceConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "/base");
}

std::string failing_key(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("full configuration") {
  const auto c = parse(
      "# issue\n"
      "budget = 20000\n"
      "cost_min = 100\n"
      "cost_max = 20000\n"
      "proposals_close_at = 2019-06-03T00:00:00Z\n"
      "voting_opens_at = 2019-06-05T00:00:00Z\n"
      "voting_closes_at = 2019-06-10T00:00:00+02:00\n"
      "results_always_visible = false\n"
      "issue_id = qvm\n"
      "title = Quality funds\n"
      "listen = 0.0.0.0:9000\n"
      "graph = seed.graph\n"
      "proposals = /abs/proposals.tsv\n"
      "anonymize_salt = pepper\n"
      "requests_per_minute = 60\n");
  CHECK(c.issue.budget_config.budget == Money::from_euros(20000));
  CHECK(c.issue.budget_config.cost_min == Money::from_euros(100));
  CHECK(c.issue.schedule.voting_closes_at == parse_rfc3339("2019-06-09T22:00:00Z"));
  CHECK_FALSE(c.issue.schedule.results_always_visible);
  CHECK(c.issue.id == "qvm");
  CHECK(c.issue.title == "Quality funds");
  CHECK(c.listen == "0.0.0.0:9000");
  CHECK(c.graph == std::filesystem::path("/base/seed.graph"));
  CHECK(c.proposals == std::filesystem::path("/abs/proposals.tsv"));
  CHECK(c.anonymize_salt == "pepper");
  CHECK(c.requests_per_minute == 60);
}

TEST_CASE("defaults") {
  const auto c = parse("budget = 500\n");
  CHECK(c.issue.budget_config.cost_min == Money{});
  CHECK(c.issue.budget_config.cost_max == Money::from_euros(500));
  CHECK_FALSE(c.issue.schedule.voting_closes_at);
  CHECK(c.listen == "127.0.0.1:8080");
  CHECK_FALSE(c.graph);
}

TEST_CASE("configuration errors name the key") {
  CHECK(failing_key("budget = 1\ncolour = red\n") == "colour");
  CHECK(failing_key("cost_min = 1\n") == "budget");
  CHECK(failing_key("budget = ten\n") == "budget");
  CHECK(failing_key("budget = 10\nbudget = 11\n") == "budget");
  CHECK(failing_key("budget = 10\ncost_max = 20\n") == "cost_max");
  CHECK(failing_key("budget = 10\nvoting_opens_at = tomorrow\n") == "voting_opens_at");
  CHECK(failing_key("budget = 10\nresults_always_visible = maybe\n") == "results_always_visible");
  CHECK(failing_key("budget = 10\nrequests_per_minute = 0\n") == "requests_per_minute");
  CHECK(failing_key("budget = 10\nvoting_closes_at = 2019-06-01T00:00:00Z\nvoting_opens_at = 2019-06-02T00:00:00Z\n") ==
        "voting_closes_at");
  CHECK_THROWS_AS(load_config("/nonexistent/issue.conf"), ConfigError);
}
