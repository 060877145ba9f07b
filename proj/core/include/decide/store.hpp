#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "decide/arggraph.hpp"
#include "decide/model.hpp"
#include "decide/process.hpp"

namespace decide {

struct ProposalAdded {
  Proposal proposal;
  bool operator==(const ProposalAdded&) const = default;
};
struct ProposalEdited {
  ProposalId id;
  Money cost;
  bool operator==(const ProposalEdited&) const = default;
};
struct ProposalTombstoned {
  ProposalId id;
  bool operator==(const ProposalTombstoned&) const = default;
};
struct BallotSubmitted {
  Ballot ballot;
  bool operator==(const BallotSubmitted&) const = default;
};
struct StatementAdded {
  Statement statement;
  bool operator==(const StatementAdded&) const = default;
};
struct ArgumentAdded {
  Argument argument;
  bool operator==(const ArgumentAdded&) const = default;
};
struct ReviewVoteCast {
  NodeId target;
  ReviewKind kind;
  ReviewSide side;
  bool operator==(const ReviewVoteCast&) const = default;
};

using Payload = std::variant<ProposalAdded, ProposalEdited, ProposalTombstoned, BallotSubmitted, StatementAdded,
                             ArgumentAdded, ReviewVoteCast>;

/// "proposal-added", "ballot-submitted", ...
std::string_view event_kind(const Payload& p);

struct Event {
  std::int64_t seq = 0;
  Timestamp at;
  Payload payload;
  bool operator==(const Event&) const = default;
};

class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Folds one event into the state. Throws StorageError when the event does not fit the state
/// (a corrupt or foreign log).
void apply_event(IssueState& state, const Event& event);

/// Builds the state from an issue template (budget, schedule, title) and an event sequence.
IssueState replay(const Issue& issue, const std::vector<Event>& events);

/// One event per line as a self-describing JSON document.
std::string encode_event(const Event& e);
Event decode_event(const std::string& line);

struct StoreOptions {
  std::size_t snapshot_every = 500;  // 0 disables snapshots
};

/// Append-only event log with a single writer and snapshot readers.
///
/// On disk a store directory holds `events.log` (a versioned header line, then one event per line)
/// and `snapshot.json` (state up to some seq). Every append is fsync'ed before it returns.
class Store {
 public:
  /// Opens or creates a store in `dir`. The issue template supplies the configured budget and schedule;
  /// proposals, ballots and graph come from the log.
  static std::unique_ptr<Store> open(const std::filesystem::path& dir, Issue issue, StoreOptions options = {});
  /// Store without persistence.
  static std::unique_ptr<Store> in_memory(Issue issue);

  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  /// Validated payload in, seq out (previous max + 1).
  std::int64_t append(Timestamp at, Payload payload);

  using Decider = std::function<std::variant<Payload, Rejection>(const IssueState&)>;
  /// Runs `decider` against the current state under the writer lock and appends its payload if accepted.
  std::variant<Event, Rejection> commit(Timestamp at, const Decider& decider);

  /// Immutable state as of the last append.
  std::shared_ptr<const IssueState> state() const;
  std::int64_t last_seq() const;
  std::vector<Event> events() const;

  /// Replaces participant ids in stored ballots with "anon:" + hex SHA-256 of salt ":" id, both on disk
  /// and in the live state. Idempotent.
  void anonymize(const std::string& salt);
  bool anonymized() const;

  /// Writes snapshot.json for the current state.
  void write_snapshot();

 private:
  Store(std::optional<std::filesystem::path> dir, Issue issue, StoreOptions options);
  void load();
  void write_event_line(const std::string& line);
  void rewrite_log();
  void snapshot_unlocked();

  std::optional<std::filesystem::path> dir_;
  Issue issue_template_;
  StoreOptions options_;

  mutable std::mutex mutex_;
  std::shared_ptr<const IssueState> state_;
  std::vector<Event> events_;
  bool anonymized_ = false;
  int log_fd_ = -1;
};

std::string participant_digest(const std::string& salt, const std::string& participant);

}  // namespace decide
