#include <doctest.h>

#include <fstream>
#include <sstream>

#include "decide/cli.hpp"
#include "decide/formats.hpp"
#include "tempdir.hpp"

using namespace decide;

namespace {

const std::string kData = DECIDE_TEST_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> qvm(std::vector<std::string> extra = {}) {
  std::vector<std::string> a = {"tabulate", "--proposals", kData + "/qvm_proposals.tsv", "--ballots",
                                kData + "/qvm_ballots.txt"};
  a.insert(a.end(), extra.begin(), extra.end());
  return a;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("tabulate the qvm election with winners") {
  const auto r = run(qvm({"--budget", "20000"}));
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("ID\tCost\t1st\t2nd\t3rd\t4th\t5th\t6th\t7th\t8th\tBorda\tApproval\tSingle\tTop 3\tWinner\n", 0) == 0);
  CHECK(r.out.find("755\t1500\t5\t3\t12\t9\t6\t2\t0\t2\t210\t39\t5\t20\t1\n") != std::string::npos);
  CHECK(r.out.find("Total\t\t142\t124\t94\t62\t32\t12\t10\t9") != std::string::npos);
  CHECK(r.err.find("winners 790 823 774 746 755") != std::string::npos);
  CHECK(r.err.find("leftover 1350") != std::string::npos);
}

TEST_CASE("tabulate is deterministic and --out writes the same bytes") {
  testing_support::TempDir dir;
  const auto out = (dir.path() / "t.tsv").string();
  const auto a = run(qvm({"--budget", "20000", "--out", out}));
  const auto b = run(qvm({"--budget", "20000"}));
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  std::ifstream in(out, std::ios::binary);
  CHECK(std::string(std::istreambuf_iterator<char>(in), {}) == a.out);
}

TEST_CASE("--budget-filter equals filtering the ballots first") {
  testing_support::TempDir dir;
  const auto filtered = budget_filter_ballots(import_ballots(kData + "/qvm_ballots.txt"),
                                              cost_map(import_proposals(kData + "/qvm_proposals.tsv")),
                                              Money::from_euros(20000));
  {
    std::ofstream f(dir.path() / "filtered.txt");
    write_ballots(f, filtered);
  }
  const auto via_flag = run(qvm({"--budget-filter", "20000"}));
  const auto via_file = run({"tabulate", "--proposals", kData + "/qvm_proposals.tsv", "--ballots",
                             (dir.path() / "filtered.txt").string()});
  REQUIRE(via_flag.code == 0);
  REQUIRE(via_file.code == 0);
  CHECK(via_flag.out == via_file.out);
  CHECK(via_flag.out.find("790\t1000\t40\t27\t7\t3\t1\t336\t78\t40\t74\t-\n") != std::string::npos);
}

TEST_CASE("other methods print one score column") {
  const auto top3 = run(qvm({"--method", "topk", "--k", "3"}));
  REQUIRE(top3.code == 0);
  CHECK(top3.out.rfind("ID\tCost\tTop 3\n790\t1000\t95\n", 0) == 0);
  CHECK(top3.out.find("755\t1500\t20\n851\t2000\t18\n") != std::string::npos);

  const auto top2 = run(qvm({"--method", "topk", "--k", "2"}));
  CHECK(top2.out.find("851\t2000\t11\n755\t1500\t8\n") != std::string::npos);

  const auto single = run(qvm({"--method", "single"}));
  CHECK(single.out.find("790\t1000\t40\n") != std::string::npos);
  const auto approval = run(qvm({"--method", "approval"}));
  CHECK(approval.out.find("790\t1000\t105\n821\t20000\t74\n") != std::string::npos);
}

TEST_CASE("tabulate exit codes") {
  testing_support::TempDir dir;
  write(dir.path() / "p.tsv", "1\ta\t10\n2\tb\t20\n");
  write(dir.path() / "b.txt", "1 2\n2 x\n");
  write(dir.path() / "u.txt", "1 3\n");
  const auto p = (dir.path() / "p.tsv").string();

  const auto parse = run({"tabulate", "--proposals", p, "--ballots", (dir.path() / "b.txt").string()});
  CHECK(parse.code == 2);
  CHECK(parse.err.find("line 2") != std::string::npos);

  CHECK(run({"tabulate", "--proposals", p, "--ballots", (dir.path() / "u.txt").string()}).code == 1);
  CHECK(run({"tabulate", "--proposals", p}).code == 2);
  CHECK(run(qvm({"--method", "topk"})).code == 2);
  CHECK(run(qvm({"--k", "3"})).code == 2);
  CHECK(run(qvm({"--method", "fancy"})).code == 2);
  CHECK(run(qvm({"--budget", "lots"})).code == 2);
  CHECK(run({"tabulate", "--proposals", "/nonexistent", "--ballots", p}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("example self-test") {
  const auto r = run({"example"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Hackathon\t7\t4000\t3") != std::string::npos);
  CHECK(r.out.find("Computer lab\t5\t7000\t2") != std::string::npos);
  CHECK(r.out.find("Water cooler\t4\t2000\t2") != std::string::npos);
  CHECK(r.out.find("Hackathon\t8\t4000\t4\nComputer lab\t8\t7000\t3") != std::string::npos);
  CHECK(r.out.find("Unspent: 4000.") != std::string::npos);
  CHECK(r.err.find("self-test passed") != std::string::npos);
}

TEST_CASE("graph validate") {
  const auto four = run({"graph", "validate", "--file", kData + "/four_relations.graph"});
  CHECK(four.code == 0);
  CHECK(four.out.find("support\t1\nrebut\t1\nundermine\t1\nundercut\t1\n") != std::string::npos);
  CHECK(four.out.find("acyclic") != std::string::npos);

  const auto cycle = run({"graph", "validate", "--file", kData + "/two_cycle.graph"});
  CHECK(cycle.code == 1);
  CHECK(cycle.out.find("cycle\t2 -> 4 -> 3 -> 5 -> 2") != std::string::npos);

  const auto empty = run({"graph", "validate", "--file", kData + "/empty.graph"});
  CHECK(empty.code == 0);
  CHECK(empty.out.find("support\t0") != std::string::npos);

  testing_support::TempDir dir;
  write(dir.path() / "bad.graph", "S\t1\t0\t-\tok\nQ\n");
  const auto bad = run({"graph", "validate", "--file", (dir.path() / "bad.graph").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 2") != std::string::npos);
  CHECK(run({"graph", "validate", "--file", "/nonexistent.graph"}).code == 2);
}

TEST_CASE("serve rejects bad configuration before binding") {
  testing_support::TempDir dir;
  write(dir.path() / "issue.conf", "budget = 100\nflavour = vanilla\n");
  write(dir.path() / "tokens", "t x\n");
  const auto r = run({"serve", "--config", (dir.path() / "issue.conf").string(), "--store",
                      (dir.path() / "store").string(), "--tokens", (dir.path() / "tokens").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("flavour") != std::string::npos);

  write(dir.path() / "ok.conf", "budget = 100\n");
  const auto missing_tokens = run({"serve", "--config", (dir.path() / "ok.conf").string(), "--store",
                                   (dir.path() / "store").string(), "--tokens", (dir.path() / "none").string()});
  CHECK(missing_tokens.code == 2);
}

TEST_CASE("service store seeding and restart") {
  testing_support::TempDir dir;
  write(dir.path() / "issue.conf",
        "budget = 20000\nissue_id = qvm\nproposals = " + kData + "/qvm_proposals.tsv\n" +
            "graph = " + kData + "/four_relations.graph\n");
  const auto config = load_config(dir.path() / "issue.conf");
  const auto now = parse_rfc3339("2019-06-01T00:00:00Z");
  Decision before;
  {
    auto store = cli::open_service_store(config, dir.path() / "store", now);
    const auto s = store->state();
    CHECK(s->issue.proposals.size() == 9);
    CHECK(s->graph.arguments().size() == 4);
    for (const auto& b : import_ballots(kData + "/qvm_ballots.txt")) store->append(now, BallotSubmitted{b});
    before = decide::decide(store->state()->live_ballots(), store->state()->issue.proposals, config.issue.budget_config);
  }
  auto store = cli::open_service_store(config, dir.path() / "store", now);
  CHECK(store->state()->issue.proposals.size() == 9);
  const auto after = decide::decide(store->state()->live_ballots(), store->state()->issue.proposals, config.issue.budget_config);
  CHECK(after.board == before.board);
  CHECK(after.winners == before.winners);
  CHECK(after.winners.winners.front() == ProposalId{790});

  testing_support::TempDir fresh;
  write(fresh.path() / "issue.conf", "budget = 100\n");
  auto empty = cli::open_service_store(load_config(fresh.path() / "issue.conf"), fresh.path() / "store", now);
  CHECK(empty->last_seq() == 0);
  CHECK(empty->state()->issue.proposals.empty());
}
