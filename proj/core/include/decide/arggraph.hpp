#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "decide/model.hpp"

namespace decide {

struct NodeId {
  std::int64_t value = 0;
  constexpr auto operator<=>(const NodeId&) const = default;
};

enum class Attitude { positive, negative };

struct Statement {
  NodeId id;
  std::string text;
  bool is_position = false;
  std::optional<Money> cost;

  bool operator==(const Statement&) const = default;
};

struct Argument {
  NodeId id;
  std::vector<NodeId> premises;  // statement ids
  NodeId conclusion;             // statement or argument id
  Attitude attitude = Attitude::positive;

  bool operator==(const Argument&) const = default;
};

enum class Relation { support, rebut, undermine, undercut, attack };

std::string_view to_string(Relation r);

enum class GraphErrc {
  empty_text,
  cost_on_plain_statement,
  missing_position_cost,
  unknown_node,
  premise_not_statement,
  empty_premises,
  unsupported_relation,
  self_reference,
  duplicate_id,
};

std::string_view to_string(GraphErrc code);

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  GraphErrc code() const noexcept { return code_; }

 private:
  GraphErrc code_;
};

struct PositionArguments {
  std::vector<NodeId> pro;
  std::vector<NodeId> con;
};

/// Statements (including cost-bearing positions) and attitude-carrying argument edges.
///
/// Ids are shared between statements and arguments. Acyclicity is not enforced on insertion;
/// call validate_acyclic() to inspect it.
class ArgumentGraph {
 public:
  /// In a decision issue every position carries a cost.
  explicit ArgumentGraph(bool decision_issue = true) : decision_issue_(decision_issue) {}

  NodeId add_statement(std::string text, bool is_position, std::optional<Money> cost = std::nullopt);
  NodeId add_argument(std::vector<NodeId> premises, NodeId conclusion, Attitude attitude);

  /// Insert with a caller-chosen id (import and replay). Same checks as add_*, plus duplicate_id.
  void insert_statement(Statement s);
  void insert_argument(Argument a);

  /// Updates a position's cost; positions only.
  void set_cost(NodeId position, Money cost);

  /// Relation labels of an argument, primary structural label first.
  std::vector<Relation> classify_relation(NodeId argument) const;

  /// One-layer arguments whose conclusion is the position itself, shuffled per seed and truncated.
  PositionArguments position_arguments(NodeId position, std::optional<std::size_t> limit,
                                       std::uint64_t seed) const;

  /// Every elementary directed cycle over premise -> argument -> conclusion edges.
  /// Each cycle starts at its smallest node id. Empty means acyclic.
  std::vector<std::vector<NodeId>> validate_acyclic() const;

  const Statement* statement(NodeId id) const;
  const Argument* argument(NodeId id) const;
  bool contains(NodeId id) const { return statements_.count(id) || arguments_.count(id); }

  const std::map<NodeId, Statement>& statements() const { return statements_; }
  const std::map<NodeId, Argument>& arguments() const { return arguments_; }
  bool decision_issue() const { return decision_issue_; }

  /// Throws GraphError if the node could not be inserted as-is (duplicate ids excluded).
  void check_statement(const Statement& s) const;
  void check_argument(const Argument& a) const;
  /// One past the largest id in use.
  NodeId fresh_id() const;

  bool operator==(const ArgumentGraph&) const = default;

 private:
  bool decision_issue_;
  std::map<NodeId, Statement> statements_;
  std::map<NodeId, Argument> arguments_;
};

/// Line-oriented export: `S <id> <0|1> <cost|-> <text>` and `A <id> <+|-> <conclusion> <p1>[,<p2>...]`,
/// tab-separated. Costs are written in euros. Statements first, then arguments, each by id.
void write_graph(std::ostream& out, const ArgumentGraph& graph);

class GraphParseError : public std::runtime_error {
 public:
  GraphParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses the export format. Records may reference nodes defined later in the file.
/// Blank lines and lines starting with '#' are ignored.
ArgumentGraph read_graph(std::istream& in, bool decision_issue = true);

// Distributed moderation.

enum class ReviewKind { delete_statement, spelling, edit_request, split, merge };
enum class ReviewState { pending, accepted, rejected };
enum class ReviewSide { pro, con };

std::string_view to_string(ReviewKind k);
std::string_view to_string(ReviewState s);
std::optional<ReviewKind> review_kind_from_string(std::string_view s);

struct ReviewCase {
  NodeId target;
  ReviewKind kind = ReviewKind::delete_statement;
  int pro_votes = 0;
  int con_votes = 0;
  ReviewState state = ReviewState::pending;

  bool operator==(const ReviewCase&) const = default;
};

inline constexpr int kReviewDecisiveVotes = 5;
inline constexpr int kReviewDecisiveLead = 3;

/// Adds one vote, then decides when one side reaches five votes or leads by three.
/// Throws std::logic_error if the case is already decided.
ReviewCase cast_review_vote(ReviewCase c, ReviewSide side);

}  // namespace decide
