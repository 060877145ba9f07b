#include "decide/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "decide/api.hpp"
#include "decide/arggraph.hpp"
#include "decide/formats.hpp"
#include "decide/scoring.hpp"
#include "decide/selection.hpp"

namespace decide::cli {

namespace {

/// Domain violation: exit 1.
struct Violated : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Input error: exit 2.
struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Money euros_arg(const std::string& flag, const std::string& text) {
  try {
    return parse_euros(text);
  } catch (const std::invalid_argument& e) {
    throw BadInput(flag + ": " + e.what());
  }
}

template <typename F>
auto with_file(const std::filesystem::path& path, F&& f) {
  try {
    return f(path);
  } catch (const ParseError& e) {
    throw BadInput(path.string() + ": " + e.what());
  }
}

// tabulate

struct TabulateArgs {
  std::string proposals;
  std::string ballots;
  std::string budget;
  std::string method = "borda";
  std::size_t k = 0;
  std::string budget_filter;
  std::string out;
  bool pretty = false;
};

void check_references(const std::vector<Ballot>& ballots, const std::vector<Proposal>& proposals) {
  for (std::size_t i = 0; i < ballots.size(); ++i) {
    const auto problems = validate_ballot(ballots[i], proposals);
    if (!problems.empty()) {
      throw Violated("ballot on line " + std::to_string(i + 1) + ": " + std::string(to_string(problems[0].kind)) +
                     " proposal " + std::to_string(problems[0].proposal.value));
    }
  }
}

void tabulate(const TabulateArgs& a, std::ostream& out, std::ostream& err) {
  if ((a.method == "topk") != (a.k > 0)) throw BadInput("--k is required with --method topk and only valid there");

  const auto proposals = with_file(a.proposals, import_proposals);
  auto ballots = with_file(a.ballots, import_ballots);
  {
    std::set<ProposalId> ids;
    for (const auto& p : proposals) {
      if (!ids.insert(p.id).second) throw Violated("duplicate proposal id " + std::to_string(p.id.value));
    }
  }
  check_references(ballots, proposals);
  const auto costs = cost_map(proposals);

  std::optional<Money> budget;
  if (!a.budget.empty()) budget = euros_arg("--budget", a.budget);
  if (!a.budget_filter.empty()) {
    const Money limit = euros_arg("--budget-filter", a.budget_filter);
    ballots = budget_filter_ballots(ballots, costs, limit);
  }

  std::ostringstream table;
  if (a.method == "borda") {
    ScoreBoard board;
    RankedList ranked;
    std::optional<WinnerSet> winners;
    if (budget) {
      Decision d = decide(ballots, proposals, BudgetConfig::with_budget(*budget));
      board = std::move(d.board);
      ranked = std::move(d.ranked);
      winners = std::move(d.winners);
    } else {
      std::vector<ProposalId> universe;
      for (const auto& p : proposals) universe.push_back(p.id);
      board = build_scoreboard(ballots, universe);
      ranked = rank(board, proposals);
    }
    write_tally(table, board, ranked, costs, winners, TallyOptions{3, a.pretty});

    err << "ballots " << ballots.size() << ", proposals " << proposals.size() << ", longest ballot "
        << board.n_max << "\n";
    if (winners) {
      err << "winners";
      for (const auto& id : winners->winners) err << ' ' << id.value;
      err << "; spent " << format_euros(winners->spent) << ", leftover " << format_euros(winners->leftover) << "\n";
    }
  } else {
    Tally scores;
    std::string label;
    if (a.method == "approval") {
      scores = approval_score(ballots);
      label = "Approval";
    } else if (a.method == "single") {
      scores = single_vote(ballots);
      label = "Single";
    } else {
      scores = top_k_approval(ballots, a.k);
      label = "Top " + std::to_string(a.k);
    }
    write_score_table(table, label, scores, proposals, a.pretty);
    err << "ballots " << ballots.size() << ", proposals " << proposals.size() << "\n";
  }

  out << table.str();
  if (!a.out.empty()) {
    std::ofstream file(a.out, std::ios::binary | std::ios::trunc);
    file << table.str();
    if (!file.flush()) throw BadInput("cannot write " + a.out);
  }
}

// example

struct Expected {
  std::map<ProposalId, std::int64_t> borda;
  std::map<ProposalId, std::int64_t> approval;
  std::vector<ProposalId> winners;
  Money leftover;
};

std::vector<Expected> expected_examples() {
  const ProposalId hackathon{1}, cooler{2}, lab{3};
  return {
      {{{hackathon, 7}, {lab, 5}, {cooler, 4}},
       {{hackathon, 3}, {lab, 2}, {cooler, 2}},
       {hackathon, cooler},
       Money::from_euros(4000)},
      {{{hackathon, 8}, {lab, 8}, {cooler, 6}},
       {{hackathon, 4}, {lab, 3}, {cooler, 3}},
       {hackathon, cooler},
       Money::from_euros(4000)},
  };
}

std::string name_of(const std::vector<Proposal>& proposals, ProposalId id) {
  for (const auto& p : proposals) {
    if (p.id == id) return p.text;
  }
  return std::to_string(id.value);
}

int example(std::ostream& out, std::ostream& err) {
  const auto examples = worked_examples();
  const auto expected = expected_examples();
  std::vector<std::string> failures;

  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    const auto& want = expected[i];
    const Decision d = decide(ex.ballots, ex.proposals, ex.budget);
    const auto costs = cost_map(ex.proposals);

    out << ex.title << ", budget " << format_euros(ex.budget.budget) << "\n\n";
    out << "Participant";
    for (std::size_t r = 1; r <= d.board.n_max; ++r) out << '\t' << ordinal_label(r) << " (" << d.board.n_max - r + 1 << " P)";
    out << "\trejected\n";
    for (const auto& b : ex.ballots) {
      out << b.participant.value;
      for (std::size_t r = 0; r < d.board.n_max; ++r) {
        out << '\t' << (r < b.preferences.size() ? name_of(ex.proposals, b.preferences[r]) : "-");
      }
      out << '\t';
      bool first = true;
      for (const auto& p : ex.proposals) {
        if (std::find(b.preferences.begin(), b.preferences.end(), p.id) == b.preferences.end()) {
          out << (first ? "" : ", ") << p.text;
          first = false;
        }
      }
      out << (first ? "-" : "") << "\n";
    }

    out << "\nProposal\tPoints\tCosts\tApprovals\n";
    for (const auto& e : d.ranked) {
      out << name_of(ex.proposals, e.id) << '\t' << e.borda << '\t' << format_euros(costs.at(e.id)) << '\t'
          << e.approval << "\n";
    }
    out << "\n";

    Money left = ex.budget.budget;
    for (const auto& e : d.ranked) {
      const std::string name = name_of(ex.proposals, e.id);
      const Money cost = costs.at(e.id);
      if (e.approval == 0) {
        out << name << " has no approvals and cannot win.\n";
      } else if (cost <= left) {
        left -= cost;
        out << name << " (" << e.borda << " points, " << e.approval << " approvals) costs " << format_euros(cost)
            << " and wins, leaving " << format_euros(left) << ".\n";
      } else {
        out << name << " costs " << format_euros(cost) << ", more than the " << format_euros(left)
            << " left, and does not win.\n";
      }
    }
    out << "Winners:";
    for (std::size_t w = 0; w < d.winners.winners.size(); ++w) {
      out << (w ? ", " : " ") << name_of(ex.proposals, d.winners.winners[w]);
    }
    out << ". Unspent: " << format_euros(d.winners.leftover) << ".\n\n";

    auto fail = [&](const std::string& what) { failures.push_back(ex.title + ": " + what); };
    for (const auto& [id, score] : want.borda) {
      const auto got = d.board.rows.at(id).borda;
      if (got != score) fail(name_of(ex.proposals, id) + " points " + std::to_string(got) + ", expected " + std::to_string(score));
    }
    for (const auto& [id, score] : want.approval) {
      const auto got = d.board.rows.at(id).approval;
      if (got != score) fail(name_of(ex.proposals, id) + " approvals " + std::to_string(got) + ", expected " + std::to_string(score));
    }
    if (d.ranked.empty() || d.ranked.front().id != want.winners.front()) fail("wrong first rank");
    if (d.winners.winners != want.winners) fail("wrong winner set");
    if (d.winners.leftover != want.leftover) fail("leftover " + format_euros(d.winners.leftover));
  }

  if (!failures.empty()) {
    for (const auto& f : failures) err << "self-test failed: " << f << "\n";
    return kExitViolation;
  }
  err << "self-test passed\n";
  return kExitOk;
}

// graph validate

int graph_validate(const std::string& file, std::ostream& out) {
  std::ifstream in(file);
  if (!in) throw BadInput("cannot open " + file);
  ArgumentGraph graph;
  try {
    graph = read_graph(in);
  } catch (const GraphParseError& e) {
    throw BadInput(file + ": " + e.what());
  } catch (const GraphError& e) {
    throw BadInput(file + ": " + e.what());
  }

  const Relation all[] = {Relation::support, Relation::rebut, Relation::undermine, Relation::undercut,
                          Relation::attack};
  std::map<Relation, std::size_t> counts;
  for (auto r : all) counts[r] = 0;
  std::ostringstream labels;
  for (const auto& [id, arg] : graph.arguments()) {
    const auto rel = graph.classify_relation(id);
    labels << "argument\t" << id.value << '\t';
    for (std::size_t i = 0; i < rel.size(); ++i) {
      ++counts[rel[i]];
      labels << (i ? "," : "") << to_string(rel[i]);
    }
    labels << "\n";
  }
  out << "statements\t" << graph.statements().size() << "\n";
  out << "arguments\t" << graph.arguments().size() << "\n";
  for (auto r : all) out << to_string(r) << '\t' << counts[r] << "\n";
  out << labels.str();

  const auto cycles = graph.validate_acyclic();
  for (const auto& c : cycles) {
    out << "cycle\t";
    for (const auto& n : c) out << n.value << " -> ";
    out << c.front().value << "\n";
  }
  out << (cycles.empty() ? "acyclic\n" : "cyclic\n");
  return cycles.empty() ? kExitOk : kExitViolation;
}

// serve

std::atomic<bool> g_stop_requested{false};

void on_signal(int) { g_stop_requested = true; }

int serve_command(const std::string& config_file, const std::string& store_dir, const std::string& tokens_file,
                  std::ostream& err) {
  ServiceConfig config;
  try {
    config = load_config(config_file);
  } catch (const ConfigError& e) {
    err << "config: " << e.what() << "\n";
    return kExitInput;
  }
  std::pair<std::string, int> address;
  try {
    address = api::parse_listen_address(config.listen);
  } catch (const std::invalid_argument& e) {
    err << "config: listen: " << e.what() << "\n";
    return kExitInput;
  }
  std::shared_ptr<const api::TokenProvider> tokens;
  try {
    tokens = std::make_shared<api::StaticTokenProvider>(api::StaticTokenProvider::from_file(tokens_file));
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitInput;
  }

  std::unique_ptr<Store> store;
  try {
    store = open_service_store(config, store_dir, std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
  } catch (const std::exception& e) {
    err << "store: " << e.what() << "\n";
    return kExitViolation;
  }

  api::Service service(*store, tokens, api::system_clock(),
                       api::ServiceOptions{config.requests_per_minute, 3, config.anonymize_salt});
  api::HttpServer server(service);
  int port = 0;
  try {
    port = server.bind(address.first, address.second);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitViolation;
  }
  err << "serving issue " << config.issue.id << " on " << address.first << ':' << port << " (" << store->last_seq()
      << " events)\n";

  g_stop_requested = false;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!done) {
      if (g_stop_requested) {
        server.stop();
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
  });
  server.listen();
  done = true;
  watcher.join();
  store->write_snapshot();
  return kExitOk;
}

}  // namespace

std::unique_ptr<Store> open_service_store(const ServiceConfig& config, const std::filesystem::path& dir,
                                          Timestamp now) {
  auto store = Store::open(dir, config.issue);
  if (store->last_seq() > 0) return store;

  std::set<std::int64_t> used;
  std::int64_t ordinal = 0;
  if (config.proposals) {
    for (auto p : import_proposals(*config.proposals)) {
      if (!validate_proposal(p, config.issue.budget_config).empty()) {
        throw std::invalid_argument("proposal " + std::to_string(p.id.value) + " violates the cost bounds");
      }
      p.ordinal = ++ordinal;
      used.insert(p.id.value);
      store->append(now, ProposalAdded{p});
    }
  }
  if (config.graph) {
    std::ifstream in(*config.graph);
    if (!in) throw std::runtime_error("cannot open " + config.graph->string());
    const ArgumentGraph graph = read_graph(in);
    for (const auto& [id, s] : graph.statements()) {
      if (used.count(id.value)) continue;
      if (s.is_position) {
        store->append(now, ProposalAdded{Proposal{ProposalId{id.value}, s.text, *s.cost, ++ordinal, {}, false}});
      } else {
        store->append(now, StatementAdded{s});
      }
    }
    std::vector<Argument> pending;
    for (const auto& [id, a] : graph.arguments()) pending.push_back(a);
    while (!pending.empty()) {
      const auto before = pending.size();
      std::vector<Argument> later;
      for (const auto& a : pending) {
        if (store->state()->graph.contains(a.conclusion)) {
          store->append(now, ArgumentAdded{a});
        } else {
          later.push_back(a);
        }
      }
      pending = std::move(later);
      if (pending.size() == before) throw std::runtime_error("graph arguments reference missing conclusions");
    }
  }
  return store;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Participatory budgeting tabulation and service"};
  app.require_subcommand(1);

  TabulateArgs tab;
  auto* tabulate_cmd = app.add_subcommand("tabulate", "Score ballots and print the tally table");
  tabulate_cmd->add_option("--proposals", tab.proposals, "Proposal file: id<TAB>text<TAB>cost")->required();
  tabulate_cmd->add_option("--ballots", tab.ballots, "Ballot file: one ranked id list per line")->required();
  tabulate_cmd->add_option("--budget", tab.budget, "Budget in euros; flags the winner set");
  tabulate_cmd->add_option("--method", tab.method, "Scoring method")
      ->check(CLI::IsMember({"borda", "approval", "single", "topk"}));
  tabulate_cmd->add_option("--k", tab.k, "Ballot prefix length for topk")->check(CLI::PositiveNumber);
  tabulate_cmd->add_option("--budget-filter", tab.budget_filter,
                           "Restrict each ballot to what fits this budget before scoring");
  tabulate_cmd->add_option("--out", tab.out, "Also write the table to this file");
  tabulate_cmd->add_flag("--pretty", tab.pretty, "Aligned columns instead of TSV");

  auto* example_cmd = app.add_subcommand("example", "Run the built-in worked example and check its numbers");

  std::string graph_file;
  auto* graph_cmd = app.add_subcommand("graph", "Argument graph tools");
  graph_cmd->require_subcommand(1);
  auto* validate_cmd = graph_cmd->add_subcommand("validate", "Classify relations and list cycles");
  validate_cmd->add_option("--file", graph_file, "Graph file")->required();

  std::string config_file, store_dir, tokens_file;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--config", config_file, "Issue configuration")->required();
  serve_cmd->add_option("--store", store_dir, "Event log directory")->required();
  serve_cmd->add_option("--tokens", tokens_file, "Token file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (tabulate_cmd->parsed()) {
      tabulate(tab, out, err);
      return kExitOk;
    }
    if (example_cmd->parsed()) return example(out, err);
    if (validate_cmd->parsed()) return graph_validate(graph_file, out);
    if (serve_cmd->parsed()) return serve_command(config_file, store_dir, tokens_file, err);
  } catch (const BadInput& e) {
    err << e.what() << "\n";
    return kExitInput;
  } catch (const Violated& e) {
    err << e.what() << "\n";
    return kExitViolation;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitViolation;
  }
  return kExitInput;
}

}  // namespace decide::cli
