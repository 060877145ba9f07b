#include "decide/store.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace decide {

using nlohmann::json;

namespace {

constexpr const char* kLogFormat = "decide-eventlog";
constexpr const char* kSnapshotFormat = "decide-snapshot";
constexpr int kFormatVersion = 1;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string_view side_str(ReviewSide s) { return s == ReviewSide::pro ? "pro" : "con"; }

ReviewSide side_from(const std::string& s) {
  if (s == "pro") return ReviewSide::pro;
  if (s == "con") return ReviewSide::con;
  throw StorageError("unknown review side '" + s + "'");
}

ReviewState review_state_from(const std::string& s) {
  for (auto st : {ReviewState::pending, ReviewState::accepted, ReviewState::rejected}) {
    if (to_string(st) == s) return st;
  }
  throw StorageError("unknown review state '" + s + "'");
}

ReviewKind review_kind_from(const std::string& s) {
  auto k = review_kind_from_string(s);
  if (!k) throw StorageError("unknown review kind '" + s + "'");
  return *k;
}

json ids_to_json(const std::vector<ProposalId>& ids) {
  json a = json::array();
  for (const auto& id : ids) a.push_back(id.value);
  return a;
}

json nodes_to_json(const std::vector<NodeId>& ids) {
  json a = json::array();
  for (const auto& id : ids) a.push_back(id.value);
  return a;
}

json proposal_to_json(const Proposal& p) {
  return {{"id", p.id.value},     {"text", p.text},           {"cost", p.cost.cents},
          {"ordinal", p.ordinal}, {"author", p.author.value}, {"removed", p.removed}};
}

Proposal proposal_from_json(const json& j) {
  Proposal p;
  p.id = ProposalId{j.at("id").get<std::int64_t>()};
  p.text = j.at("text").get<std::string>();
  p.cost = Money{j.at("cost").get<std::int64_t>()};
  p.ordinal = j.at("ordinal").get<std::int64_t>();
  p.author = ParticipantId{j.at("author").get<std::string>()};
  p.removed = j.value("removed", false);
  return p;
}

json ballot_to_json(const Ballot& b) {
  return {{"participant", b.participant.value}, {"preferences", ids_to_json(b.preferences)}, {"sequence", b.sequence}};
}

Ballot ballot_from_json(const json& j) {
  Ballot b;
  b.participant = ParticipantId{j.at("participant").get<std::string>()};
  for (const auto& v : j.at("preferences")) b.preferences.push_back(ProposalId{v.get<std::int64_t>()});
  b.sequence = j.at("sequence").get<std::int64_t>();
  return b;
}

json statement_to_json(const Statement& s) {
  json j{{"id", s.id.value}, {"text", s.text}, {"is_position", s.is_position}};
  j["cost"] = s.cost ? json(s.cost->cents) : json(nullptr);
  return j;
}

Statement statement_from_json(const json& j) {
  Statement s;
  s.id = NodeId{j.at("id").get<std::int64_t>()};
  s.text = j.at("text").get<std::string>();
  s.is_position = j.at("is_position").get<bool>();
  if (j.contains("cost") && !j.at("cost").is_null()) s.cost = Money{j.at("cost").get<std::int64_t>()};
  return s;
}

json argument_to_json(const Argument& a) {
  return {{"id", a.id.value},
          {"premises", nodes_to_json(a.premises)},
          {"conclusion", a.conclusion.value},
          {"attitude", a.attitude == Attitude::positive ? "+" : "-"}};
}

Argument argument_from_json(const json& j) {
  Argument a;
  a.id = NodeId{j.at("id").get<std::int64_t>()};
  for (const auto& v : j.at("premises")) a.premises.push_back(NodeId{v.get<std::int64_t>()});
  a.conclusion = NodeId{j.at("conclusion").get<std::int64_t>()};
  const auto att = j.at("attitude").get<std::string>();
  if (att != "+" && att != "-") throw StorageError("unknown attitude '" + att + "'");
  a.attitude = att == "+" ? Attitude::positive : Attitude::negative;
  return a;
}

json payload_to_json(const Payload& p) {
  return std::visit(overloaded{
                        [](const ProposalAdded& e) { return json{{"proposal", proposal_to_json(e.proposal)}}; },
                        [](const ProposalEdited& e) { return json{{"id", e.id.value}, {"cost", e.cost.cents}}; },
                        [](const ProposalTombstoned& e) { return json{{"id", e.id.value}}; },
                        [](const BallotSubmitted& e) { return json{{"ballot", ballot_to_json(e.ballot)}}; },
                        [](const StatementAdded& e) { return json{{"statement", statement_to_json(e.statement)}}; },
                        [](const ArgumentAdded& e) { return json{{"argument", argument_to_json(e.argument)}}; },
                        [](const ReviewVoteCast& e) {
                          return json{{"target", e.target.value},
                                      {"kind", std::string(to_string(e.kind))},
                                      {"side", std::string(side_str(e.side))}};
                        },
                    },
                    p);
}

Payload payload_from_json(const std::string& kind, const json& j) {
  if (kind == "proposal-added") return ProposalAdded{proposal_from_json(j.at("proposal"))};
  if (kind == "proposal-edited") {
    return ProposalEdited{ProposalId{j.at("id").get<std::int64_t>()}, Money{j.at("cost").get<std::int64_t>()}};
  }
  if (kind == "proposal-tombstoned") return ProposalTombstoned{ProposalId{j.at("id").get<std::int64_t>()}};
  if (kind == "ballot-submitted") return BallotSubmitted{ballot_from_json(j.at("ballot"))};
  if (kind == "statement-added") return StatementAdded{statement_from_json(j.at("statement"))};
  if (kind == "argument-added") return ArgumentAdded{argument_from_json(j.at("argument"))};
  if (kind == "review-vote") {
    return ReviewVoteCast{NodeId{j.at("target").get<std::int64_t>()}, review_kind_from(j.at("kind").get<std::string>()),
                          side_from(j.at("side").get<std::string>())};
  }
  throw StorageError("unknown event kind '" + kind + "'");
}

json state_to_json(const IssueState& s) {
  json proposals = json::array();
  for (const auto& p : s.issue.proposals) proposals.push_back(proposal_to_json(p));
  json statements = json::array();
  for (const auto& [id, st] : s.graph.statements()) statements.push_back(statement_to_json(st));
  json arguments = json::array();
  for (const auto& [id, a] : s.graph.arguments()) arguments.push_back(argument_to_json(a));
  json ballots = json::array();
  for (const auto& [pid, b] : s.ballots) ballots.push_back(ballot_to_json(b));
  json reviews = json::array();
  for (const auto& [key, c] : s.reviews) {
    reviews.push_back({{"target", c.target.value},
                       {"kind", std::string(to_string(c.kind))},
                       {"pro", c.pro_votes},
                       {"con", c.con_votes},
                       {"state", std::string(to_string(c.state))}});
  }
  return {{"proposals", proposals}, {"statements", statements}, {"arguments", arguments},
          {"ballots", ballots},     {"reviews", reviews},       {"ballot_sequence", s.ballot_sequence}};
}

IssueState state_from_json(const Issue& issue, const json& j) {
  IssueState s;
  s.issue = issue;
  s.issue.proposals.clear();
  for (const auto& p : j.at("proposals")) s.issue.proposals.push_back(proposal_from_json(p));
  for (const auto& st : j.at("statements")) s.graph.insert_statement(statement_from_json(st));
  // Arguments were written in id order, which need not be dependency order for undercuts.
  std::vector<Argument> pending;
  for (const auto& a : j.at("arguments")) pending.push_back(argument_from_json(a));
  while (!pending.empty()) {
    const auto before = pending.size();
    std::erase_if(pending, [&](const Argument& a) {
      if (!s.graph.contains(a.conclusion)) return false;
      s.graph.insert_argument(a);
      return true;
    });
    if (pending.size() == before) throw StorageError("snapshot arguments reference unknown nodes");
  }
  for (const auto& b : j.at("ballots")) {
    Ballot ballot = ballot_from_json(b);
    s.ballots[ballot.participant] = std::move(ballot);
  }
  for (const auto& r : j.at("reviews")) {
    ReviewCase c{NodeId{r.at("target").get<std::int64_t>()}, review_kind_from(r.at("kind").get<std::string>()),
                 r.at("pro").get<int>(), r.at("con").get<int>(), review_state_from(r.at("state").get<std::string>())};
    s.reviews[{c.target, c.kind}] = c;
  }
  s.ballot_sequence = j.at("ballot_sequence").get<std::int64_t>();
  return s;
}

std::string header_line(bool anonymized) {
  return json{{"format", kLogFormat}, {"version", kFormatVersion}, {"anonymized", anonymized}}.dump();
}

void write_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw StorageError(std::string("write failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

void write_file_durably(const std::filesystem::path& path, const std::string& data) {
  const auto tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw StorageError("cannot create " + tmp + ": " + std::strerror(errno));
  try {
    write_all(fd, data);
    if (::fsync(fd) != 0) throw StorageError("fsync failed on " + tmp);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw StorageError("cannot replace " + path.string() + ": " + ec.message());
}

}  // namespace

std::string_view event_kind(const Payload& p) {
  return std::visit(overloaded{
                        [](const ProposalAdded&) { return std::string_view("proposal-added"); },
                        [](const ProposalEdited&) { return std::string_view("proposal-edited"); },
                        [](const ProposalTombstoned&) { return std::string_view("proposal-tombstoned"); },
                        [](const BallotSubmitted&) { return std::string_view("ballot-submitted"); },
                        [](const StatementAdded&) { return std::string_view("statement-added"); },
                        [](const ArgumentAdded&) { return std::string_view("argument-added"); },
                        [](const ReviewVoteCast&) { return std::string_view("review-vote"); },
                    },
                    p);
}

std::string encode_event(const Event& e) {
  return json{{"seq", e.seq},
              {"at", format_rfc3339(e.at)},
              {"kind", std::string(event_kind(e.payload))},
              {"payload", payload_to_json(e.payload)}}
      .dump();
}

Event decode_event(const std::string& line) {
  try {
    const json j = json::parse(line);
    Event e;
    e.seq = j.at("seq").get<std::int64_t>();
    e.at = parse_rfc3339(j.at("at").get<std::string>());
    e.payload = payload_from_json(j.at("kind").get<std::string>(), j.at("payload"));
    return e;
  } catch (const StorageError&) {
    throw;
  } catch (const std::exception& ex) {
    throw StorageError(std::string("corrupt event record: ") + ex.what());
  }
}

void apply_event(IssueState& state, const Event& event) {
  try {
    std::visit(overloaded{
                   [&](const ProposalAdded& e) {
                     if (state.issue.find(e.proposal.id)) {
                       throw StorageError("proposal " + std::to_string(e.proposal.id.value) + " already exists");
                     }
                     state.graph.insert_statement(
                         Statement{NodeId{e.proposal.id.value}, e.proposal.text, true, e.proposal.cost});
                     state.issue.proposals.push_back(e.proposal);
                   },
                   [&](const ProposalEdited& e) {
                     Proposal* p = state.issue.find(e.id);
                     if (!p) throw StorageError("edit of unknown proposal " + std::to_string(e.id.value));
                     p->cost = e.cost;
                     state.graph.set_cost(NodeId{e.id.value}, e.cost);
                   },
                   [&](const ProposalTombstoned& e) {
                     Proposal* p = state.issue.find(e.id);
                     if (!p) throw StorageError("tombstone of unknown proposal " + std::to_string(e.id.value));
                     p->removed = true;
                   },
                   [&](const BallotSubmitted& e) {
                     state.ballots[e.ballot.participant] = e.ballot;
                     state.ballot_sequence = std::max(state.ballot_sequence, e.ballot.sequence);
                   },
                   [&](const StatementAdded& e) { state.graph.insert_statement(e.statement); },
                   [&](const ArgumentAdded& e) { state.graph.insert_argument(e.argument); },
                   [&](const ReviewVoteCast& e) {
                     auto [it, inserted] =
                         state.reviews.try_emplace({e.target, e.kind}, ReviewCase{e.target, e.kind});
                     it->second = cast_review_vote(it->second, e.side);
                   },
               },
               event.payload);
  } catch (const StorageError&) {
    throw;
  } catch (const std::exception& ex) {
    throw StorageError("event " + std::to_string(event.seq) + " does not apply: " + ex.what());
  }
}

IssueState replay(const Issue& issue, const std::vector<Event>& events) {
  IssueState state;
  state.issue = issue;
  state.issue.proposals.clear();
  for (const auto& e : events) apply_event(state, e);
  return state;
}

std::string participant_digest(const std::string& salt, const std::string& participant) {
  const std::string input = salt + ":" + participant;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(input.data(), input.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw StorageError("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out = "anon:";
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

Store::Store(std::optional<std::filesystem::path> dir, Issue issue, StoreOptions options)
    : dir_(std::move(dir)), issue_template_(std::move(issue)), options_(options) {
  issue_template_.proposals.clear();
  auto initial = std::make_shared<IssueState>();
  initial->issue = issue_template_;
  state_ = std::move(initial);
}

Store::~Store() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

std::unique_ptr<Store> Store::in_memory(Issue issue) {
  return std::unique_ptr<Store>(new Store(std::nullopt, std::move(issue), StoreOptions{0}));
}

std::unique_ptr<Store> Store::open(const std::filesystem::path& dir, Issue issue, StoreOptions options) {
  std::unique_ptr<Store> store(new Store(dir, std::move(issue), options));
  store->load();
  return store;
}

void Store::load() {
  std::error_code ec;
  std::filesystem::create_directories(*dir_, ec);
  if (ec) throw StorageError("cannot create store directory " + dir_->string() + ": " + ec.message());
  const auto log_path = *dir_ / "events.log";

  if (!std::filesystem::exists(log_path)) {
    write_file_durably(log_path, header_line(false) + "\n");
  } else {
    std::ifstream in(log_path);
    std::string line;
    if (!std::getline(in, line)) throw StorageError("empty event log " + log_path.string());
    try {
      const json header = json::parse(line);
      if (header.at("format") != kLogFormat || header.at("version") != kFormatVersion) {
        throw StorageError("unsupported event log format");
      }
      anonymized_ = header.value("anonymized", false);
    } catch (const json::exception& ex) {
      throw StorageError(std::string("corrupt event log header: ") + ex.what());
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      Event e = decode_event(line);
      const std::int64_t expected = events_.empty() ? 1 : events_.back().seq + 1;
      if (e.seq != expected) {
        throw StorageError("event log line " + std::to_string(lineno) + ": seq " + std::to_string(e.seq) +
                           ", expected " + std::to_string(expected));
      }
      events_.push_back(std::move(e));
    }
  }

  IssueState state;
  state.issue = issue_template_;
  std::int64_t from_seq = 0;
  const auto snap_path = *dir_ / "snapshot.json";
  if (std::filesystem::exists(snap_path)) {
    std::ifstream in(snap_path);
    try {
      const json snap = json::parse(in);
      if (snap.at("format") != kSnapshotFormat || snap.at("version") != kFormatVersion) {
        throw StorageError("unsupported snapshot format");
      }
      const auto seq = snap.at("seq").get<std::int64_t>();
      if (seq > (events_.empty() ? 0 : events_.back().seq)) throw StorageError("snapshot is ahead of the log");
      state = state_from_json(issue_template_, snap.at("state"));
      from_seq = seq;
    } catch (const std::exception&) {
      // The log is authoritative; an unusable snapshot only costs a full replay.
      state = IssueState{};
      state.issue = issue_template_;
      from_seq = 0;
    }
  }
  for (const auto& e : events_) {
    if (e.seq > from_seq) apply_event(state, e);
  }
  state_ = std::make_shared<const IssueState>(std::move(state));

  log_fd_ = ::open(log_path.c_str(), O_WRONLY | O_APPEND | O_CLOEXEC);
  if (log_fd_ < 0) throw StorageError("cannot open " + log_path.string() + ": " + std::strerror(errno));
}

void Store::write_event_line(const std::string& line) {
  if (log_fd_ < 0) return;
  write_all(log_fd_, line + "\n");
  if (::fsync(log_fd_) != 0) throw StorageError(std::string("fsync failed: ") + std::strerror(errno));
}

std::int64_t Store::append(Timestamp at, Payload payload) {
  auto result = commit(at, [&](const IssueState&) { return std::variant<Payload, Rejection>(payload); });
  return std::get<Event>(result).seq;
}

std::variant<Event, Rejection> Store::commit(Timestamp at, const Decider& decider) {
  std::lock_guard lock(mutex_);
  auto decision = decider(*state_);
  if (auto* rejection = std::get_if<Rejection>(&decision)) return std::move(*rejection);

  Event event{events_.empty() ? 1 : events_.back().seq + 1, at, std::get<Payload>(std::move(decision))};
  auto next = std::make_shared<IssueState>(*state_);
  apply_event(*next, event);  // throws before anything is persisted
  write_event_line(encode_event(event));
  events_.push_back(event);
  state_ = std::move(next);
  if (options_.snapshot_every && event.seq % static_cast<std::int64_t>(options_.snapshot_every) == 0) {
    snapshot_unlocked();
  }
  return event;
}

std::shared_ptr<const IssueState> Store::state() const {
  std::lock_guard lock(mutex_);
  return state_;
}

std::int64_t Store::last_seq() const {
  std::lock_guard lock(mutex_);
  return events_.empty() ? 0 : events_.back().seq;
}

std::vector<Event> Store::events() const {
  std::lock_guard lock(mutex_);
  return events_;
}

bool Store::anonymized() const {
  std::lock_guard lock(mutex_);
  return anonymized_;
}

void Store::write_snapshot() {
  std::lock_guard lock(mutex_);
  snapshot_unlocked();
}

void Store::snapshot_unlocked() {
  if (!dir_) return;
  write_file_durably(*dir_ / "snapshot.json",
                     json{{"format", kSnapshotFormat}, {"version", kFormatVersion},
                          {"seq", events_.empty() ? 0 : events_.back().seq}, {"state", state_to_json(*state_)}}
                         .dump());
}

void Store::rewrite_log() {
  std::string data = header_line(anonymized_) + "\n";
  for (const auto& e : events_) data += encode_event(e) + "\n";
  if (log_fd_ >= 0) {
    ::close(log_fd_);
    log_fd_ = -1;
  }
  const auto log_path = *dir_ / "events.log";
  write_file_durably(log_path, data);
  log_fd_ = ::open(log_path.c_str(), O_WRONLY | O_APPEND | O_CLOEXEC);
  if (log_fd_ < 0) throw StorageError("cannot reopen " + log_path.string());
}

void Store::anonymize(const std::string& salt) {
  std::lock_guard lock(mutex_);
  if (anonymized_) return;
  for (auto& e : events_) {
    if (auto* b = std::get_if<BallotSubmitted>(&e.payload)) {
      b->ballot.participant.value = participant_digest(salt, b->ballot.participant.value);
    }
  }
  auto next = std::make_shared<IssueState>(*state_);
  next->ballots.clear();
  for (const auto& [pid, b] : state_->ballots) {
    Ballot anon = b;
    anon.participant.value = participant_digest(salt, pid.value);
    next->ballots[anon.participant] = std::move(anon);
  }
  state_ = std::move(next);
  anonymized_ = true;
  // Snapshot first: if the log rewrite is interrupted, loading still yields anonymized ballots.
  snapshot_unlocked();
  if (dir_) rewrite_log();
}

}  // namespace decide
