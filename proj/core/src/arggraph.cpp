#include "decide/arggraph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "splitmix.hpp"

namespace decide {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::support: return "support";
    case Relation::rebut: return "rebut";
    case Relation::undermine: return "undermine";
    case Relation::undercut: return "undercut";
    case Relation::attack: return "attack";
  }
  return "unknown";
}

std::string_view to_string(GraphErrc code) {
  switch (code) {
    case GraphErrc::empty_text: return "empty-text";
    case GraphErrc::cost_on_plain_statement: return "cost-on-plain-statement";
    case GraphErrc::missing_position_cost: return "missing-position-cost";
    case GraphErrc::unknown_node: return "unknown-node";
    case GraphErrc::premise_not_statement: return "premise-not-statement";
    case GraphErrc::empty_premises: return "empty-premises";
    case GraphErrc::unsupported_relation: return "unsupported-relation";
    case GraphErrc::self_reference: return "self-reference";
    case GraphErrc::duplicate_id: return "duplicate-id";
  }
  return "unknown";
}

namespace {

[[noreturn]] void raise(GraphErrc code, const std::string& detail) {
  throw GraphError(code, std::string(to_string(code)) + ": " + detail);
}

std::string id_str(NodeId id) { return std::to_string(id.value); }

}  // namespace

NodeId ArgumentGraph::fresh_id() const {
  std::int64_t max = 0;
  if (!statements_.empty()) max = std::max(max, statements_.rbegin()->first.value);
  if (!arguments_.empty()) max = std::max(max, arguments_.rbegin()->first.value);
  return NodeId{max + 1};
}

void ArgumentGraph::check_statement(const Statement& s) const {
  if (s.text.empty()) raise(GraphErrc::empty_text, "statement " + id_str(s.id));
  if (s.cost && !s.is_position) raise(GraphErrc::cost_on_plain_statement, "statement " + id_str(s.id));
  if (s.cost && !decision_issue_) raise(GraphErrc::cost_on_plain_statement, "costs require a decision issue");
  if (s.is_position && decision_issue_ && !s.cost) raise(GraphErrc::missing_position_cost, "position " + id_str(s.id));
}

void ArgumentGraph::check_argument(const Argument& a) const {
  if (a.premises.empty()) raise(GraphErrc::empty_premises, "argument " + id_str(a.id));
  for (const auto& p : a.premises) {
    if (!contains(p)) raise(GraphErrc::unknown_node, "premise " + id_str(p));
    if (!statements_.count(p)) raise(GraphErrc::premise_not_statement, "premise " + id_str(p));
    if (p == a.conclusion) raise(GraphErrc::self_reference, "premise " + id_str(p) + " is also the conclusion");
  }
  if (a.conclusion == a.id) raise(GraphErrc::self_reference, "argument " + id_str(a.id) + " concludes itself");
  if (!contains(a.conclusion)) raise(GraphErrc::unknown_node, "conclusion " + id_str(a.conclusion));
  if (arguments_.count(a.conclusion) && a.attitude == Attitude::positive) {
    raise(GraphErrc::unsupported_relation, "positive attitude toward argument " + id_str(a.conclusion));
  }
}

NodeId ArgumentGraph::add_statement(std::string text, bool is_position, std::optional<Money> cost) {
  Statement s{fresh_id(), std::move(text), is_position, cost};
  check_statement(s);
  const NodeId id = s.id;
  statements_.emplace(id, std::move(s));
  return id;
}

NodeId ArgumentGraph::add_argument(std::vector<NodeId> premises, NodeId conclusion, Attitude attitude) {
  Argument a{fresh_id(), std::move(premises), conclusion, attitude};
  check_argument(a);
  const NodeId id = a.id;
  arguments_.emplace(id, std::move(a));
  return id;
}

void ArgumentGraph::insert_statement(Statement s) {
  if (contains(s.id)) raise(GraphErrc::duplicate_id, id_str(s.id));
  check_statement(s);
  const NodeId id = s.id;
  statements_.emplace(id, std::move(s));
}

void ArgumentGraph::insert_argument(Argument a) {
  if (contains(a.id)) raise(GraphErrc::duplicate_id, id_str(a.id));
  check_argument(a);
  const NodeId id = a.id;
  arguments_.emplace(id, std::move(a));
}

void ArgumentGraph::set_cost(NodeId position, Money cost) {
  auto it = statements_.find(position);
  if (it == statements_.end()) raise(GraphErrc::unknown_node, id_str(position));
  if (!it->second.is_position) raise(GraphErrc::cost_on_plain_statement, id_str(position));
  it->second.cost = cost;
}

const Statement* ArgumentGraph::statement(NodeId id) const {
  auto it = statements_.find(id);
  return it == statements_.end() ? nullptr : &it->second;
}

const Argument* ArgumentGraph::argument(NodeId id) const {
  auto it = arguments_.find(id);
  return it == arguments_.end() ? nullptr : &it->second;
}

std::vector<Relation> ArgumentGraph::classify_relation(NodeId id) const {
  const Argument* a = argument(id);
  if (!a) raise(GraphErrc::unknown_node, "argument " + id_str(id));
  if (arguments_.count(a->conclusion)) return {Relation::undercut};
  if (a->attitude == Attitude::positive) return {Relation::support};

  bool is_premise = false;
  bool is_supported = false;
  for (const auto& [other_id, other] : arguments_) {
    if (other_id == id) continue;
    if (std::find(other.premises.begin(), other.premises.end(), a->conclusion) != other.premises.end()) {
      is_premise = true;
    }
    if (other.conclusion == a->conclusion && other.attitude == Attitude::positive) is_supported = true;
  }
  std::vector<Relation> labels;
  if (is_premise) labels.push_back(Relation::undermine);
  if (is_supported) labels.push_back(Relation::rebut);
  if (labels.empty()) labels.push_back(Relation::attack);
  return labels;
}

PositionArguments ArgumentGraph::position_arguments(NodeId position, std::optional<std::size_t> limit,
                                                    std::uint64_t seed) const {
  const Statement* s = statement(position);
  if (!s || !s->is_position) raise(GraphErrc::unknown_node, "position " + id_str(position));
  PositionArguments out;
  for (const auto& [aid, a] : arguments_) {
    if (a.conclusion != position) continue;
    (a.attitude == Attitude::positive ? out.pro : out.con).push_back(aid);
  }
  SplitMix64 root(seed);
  SplitMix64 pro_rng = root.split();
  SplitMix64 con_rng = root.split();
  pro_rng.shuffle(out.pro);
  con_rng.shuffle(out.con);
  if (limit) {
    if (out.pro.size() > *limit) out.pro.resize(*limit);
    if (out.con.size() > *limit) out.con.resize(*limit);
  }
  return out;
}

std::vector<std::vector<NodeId>> ArgumentGraph::validate_acyclic() const {
  // Nodes are statements and arguments; edges premise -> argument and argument -> conclusion.
  std::map<NodeId, std::vector<NodeId>> succ;
  for (const auto& [id, st] : statements_) succ[id];
  for (const auto& [id, a] : arguments_) {
    succ[id].push_back(a.conclusion);
    for (const auto& p : a.premises) succ[p].push_back(id);
  }
  for (auto& [id, next] : succ) {
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
  }

  // Enumerate elementary cycles rooted at their smallest node: from each start, search only through
  // larger nodes, blocking nodes on the current path.
  std::vector<std::vector<NodeId>> cycles;
  std::vector<NodeId> path;
  std::set<NodeId> on_path;
  auto search = [&](auto&& self, NodeId start, NodeId node) -> void {
    for (const NodeId& next : succ[node]) {
      if (next == start) {
        cycles.push_back(path);
      } else if (start < next && !on_path.count(next)) {
        path.push_back(next);
        on_path.insert(next);
        self(self, start, next);
        on_path.erase(next);
        path.pop_back();
      }
    }
  };
  for (const auto& [start, next] : succ) {
    path = {start};
    on_path = {start};
    search(search, start, start);
  }
  return cycles;
}

void write_graph(std::ostream& out, const ArgumentGraph& graph) {
  for (const auto& [id, s] : graph.statements()) {
    out << "S\t" << id.value << '\t' << (s.is_position ? 1 : 0) << '\t' << (s.cost ? format_euros(*s.cost) : "-")
        << '\t' << s.text << '\n';
  }
  for (const auto& [id, a] : graph.arguments()) {
    out << "A\t" << id.value << '\t' << (a.attitude == Attitude::positive ? '+' : '-') << '\t'
        << a.conclusion.value << '\t';
    for (std::size_t i = 0; i < a.premises.size(); ++i) {
      if (i) out << ',';
      out << a.premises[i].value;
    }
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_tabs(const std::string& line, std::size_t max_fields) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (fields.size() + 1 < max_fields) {
    const auto tab = line.find('\t', pos);
    if (tab == std::string::npos) break;
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  fields.push_back(line.substr(pos));
  return fields;
}

NodeId parse_node_id(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw GraphParseError(line, "invalid node id '" + s + "'");
  return NodeId{v};
}

}  // namespace

ArgumentGraph read_graph(std::istream& in, bool decision_issue) {
  std::vector<std::pair<std::size_t, Statement>> statements;
  std::vector<std::pair<std::size_t, Argument>> arguments;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("S\t", 0) == 0) {
      auto f = split_tabs(line, 5);
      if (f.size() != 5) throw GraphParseError(lineno, "statement record needs 5 fields");
      Statement s;
      s.id = parse_node_id(f[1], lineno);
      if (f[2] != "0" && f[2] != "1") throw GraphParseError(lineno, "is_position must be 0 or 1");
      s.is_position = f[2] == "1";
      if (f[3] != "-") {
        try {
          s.cost = parse_euros(f[3]);
        } catch (const std::invalid_argument& e) {
          throw GraphParseError(lineno, e.what());
        }
      }
      s.text = f[4];
      statements.emplace_back(lineno, std::move(s));
    } else if (line.rfind("A\t", 0) == 0) {
      auto f = split_tabs(line, 5);
      if (f.size() != 5) throw GraphParseError(lineno, "argument record needs 5 fields");
      Argument a;
      a.id = parse_node_id(f[1], lineno);
      if (f[2] != "+" && f[2] != "-") throw GraphParseError(lineno, "attitude must be + or -");
      a.attitude = f[2] == "+" ? Attitude::positive : Attitude::negative;
      a.conclusion = parse_node_id(f[3], lineno);
      std::stringstream premises(f[4]);
      std::string tok;
      while (std::getline(premises, tok, ',')) a.premises.push_back(parse_node_id(tok, lineno));
      arguments.emplace_back(lineno, std::move(a));
    } else {
      throw GraphParseError(lineno, "unknown record type");
    }
  }

  ArgumentGraph graph(decision_issue);
  for (auto& [ln, s] : statements) {
    try {
      graph.insert_statement(std::move(s));
    } catch (const GraphError& e) {
      throw GraphParseError(ln, e.what());
    }
  }
  // Arguments can target arguments defined later; insert in dependency order.
  std::vector<bool> done(arguments.size(), false);
  std::size_t remaining = arguments.size();
  while (remaining > 0) {
    bool progress = false;
    for (std::size_t i = 0; i < arguments.size(); ++i) {
      if (done[i] || !graph.contains(arguments[i].second.conclusion)) continue;
      try {
        graph.insert_argument(arguments[i].second);
      } catch (const GraphError& e) {
        throw GraphParseError(arguments[i].first, e.what());
      }
      done[i] = true;
      --remaining;
      progress = true;
    }
    if (!progress) {
      for (std::size_t i = 0; i < arguments.size(); ++i) {
        if (done[i]) continue;
        const auto c = arguments[i].second.conclusion;
        bool is_argument_id = std::any_of(arguments.begin(), arguments.end(),
                                          [&](const auto& p) { return p.second.id == c; });
        throw GraphParseError(arguments[i].first, is_argument_id
                                                      ? "argument conclusions form a cycle"
                                                      : "unknown-node: conclusion " + std::to_string(c.value));
      }
    }
  }
  return graph;
}

std::string_view to_string(ReviewKind k) {
  switch (k) {
    case ReviewKind::delete_statement: return "delete";
    case ReviewKind::spelling: return "spelling";
    case ReviewKind::edit_request: return "edit-request";
    case ReviewKind::split: return "split";
    case ReviewKind::merge: return "merge";
  }
  return "unknown";
}

std::string_view to_string(ReviewState s) {
  switch (s) {
    case ReviewState::pending: return "pending";
    case ReviewState::accepted: return "accepted";
    case ReviewState::rejected: return "rejected";
  }
  return "unknown";
}

std::optional<ReviewKind> review_kind_from_string(std::string_view s) {
  for (auto k : {ReviewKind::delete_statement, ReviewKind::spelling, ReviewKind::edit_request, ReviewKind::split,
                 ReviewKind::merge}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

ReviewCase cast_review_vote(ReviewCase c, ReviewSide side) {
  if (c.state != ReviewState::pending) {
    throw std::logic_error("vote-on-decided-case: review of node " + std::to_string(c.target.value) + " is " +
                           std::string(to_string(c.state)));
  }
  (side == ReviewSide::pro ? c.pro_votes : c.con_votes) += 1;
  const int lead = c.pro_votes - c.con_votes;
  if (std::max(c.pro_votes, c.con_votes) >= kReviewDecisiveVotes || lead >= kReviewDecisiveLead ||
      -lead >= kReviewDecisiveLead) {
    c.state = lead > 0 ? ReviewState::accepted : ReviewState::rejected;
  }
  return c;
}

}  // namespace decide
