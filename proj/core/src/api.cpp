#include "decide/api.hpp"

#include <httplib.h>

#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "decide/process.hpp"
#include "decide/selection.hpp"

namespace decide::api {

using nlohmann::json;

namespace {

struct HttpError {
  int status;
  std::string code;
  std::string message;
  json details = json::object();
};

Response reply(int status, const json& body) { return Response{status, body.dump()}; }

Response error_reply(const HttpError& e) {
  return reply(e.status, json{{"code", e.code}, {"message", e.message}, {"details", e.details}});
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::int64_t parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw HttpError{400, "bad-request", std::string("invalid ") + what + " '" + s + "'"};
}

json parse_body(const Request& r) {
  try {
    return json::parse(r.body);
  } catch (const json::exception& e) {
    throw HttpError{400, "bad-request", std::string("malformed JSON body: ") + e.what()};
  }
}

template <typename T>
T field(const json& body, const char* name) {
  if (!body.is_object() || !body.contains(name)) {
    throw HttpError{400, "bad-request", std::string("missing field '") + name + "'"};
  }
  try {
    return body.at(name).get<T>();
  } catch (const json::exception&) {
    throw HttpError{400, "bad-request", std::string("field '") + name + "' has the wrong type"};
  }
}

int status_for(RejectReason reason) {
  switch (reason) {
    case RejectReason::phase_closed:
    case RejectReason::phase_not_voting:
    case RejectReason::cost_frozen:
    case RejectReason::review_decided: return 409;
    case RejectReason::unknown_proposal: return 404;
    case RejectReason::unknown_participant: return 401;
    case RejectReason::cost_bounds:
    case RejectReason::empty_text:
    case RejectReason::invalid_ballot:
    case RejectReason::graph_violation: return 422;
  }
  return 422;
}

HttpError from_rejection(const Rejection& r) {
  HttpError e{status_for(r.reason), std::string(to_string(r.reason)), r.message};
  if (!r.violations.empty()) {
    json v = json::array();
    for (const auto& violation : r.violations) {
      v.push_back({{"kind", std::string(to_string(violation.kind))}, {"bound", violation.bound.cents}});
    }
    e.details["violations"] = v;
  }
  if (!r.ballot_problems.empty()) {
    json v = json::array();
    for (const auto& p : r.ballot_problems) {
      v.push_back({{"kind", std::string(to_string(p.kind))}, {"proposal", p.proposal.value}});
    }
    e.details["problems"] = v;
  }
  return e;
}

json optional_time(const std::optional<Timestamp>& t) { return t ? json(format_rfc3339(*t)) : json(nullptr); }

json proposal_json(const Proposal& p) {
  return {{"id", p.id.value}, {"text", p.text}, {"cost", p.cost.cents}, {"ordinal", p.ordinal}};
}

json argument_entries(const ArgumentGraph& graph, const std::vector<NodeId>& ids) {
  json out = json::array();
  for (const auto& id : ids) {
    const Argument* a = graph.argument(id);
    std::string text;
    for (const auto& premise : a->premises) {
      if (!text.empty()) text += "; ";
      text += graph.statement(premise)->text;
    }
    out.push_back({{"id", id.value}, {"text", text}});
  }
  return out;
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::uint64_t seed_from(const Request& r) {
  auto it = r.query.find("seed");
  if (it == r.query.end()) return fresh_seed();
  try {
    std::size_t used = 0;
    const auto v = std::stoull(it->second, &used);
    if (used == it->second.size()) return v;
  } catch (const std::exception&) {
  }
  throw HttpError{400, "bad-request", "invalid seed '" + it->second + "'"};
}

bool flag(const Request& r, const char* name) {
  auto it = r.query.find(name);
  return it != r.query.end() && (it->second == "true" || it->second == "1");
}

}  // namespace

StaticTokenProvider StaticTokenProvider::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open token file " + path.string());
  std::map<std::string, ParticipantId> tokens;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string token, participant, extra;
    if (!(fields >> token >> participant) || (fields >> extra)) {
      throw std::runtime_error("token file line " + std::to_string(lineno) + ": expected <token> <participant>");
    }
    tokens[token] = ParticipantId{participant};
  }
  return StaticTokenProvider(std::move(tokens));
}

std::optional<ParticipantId> StaticTokenProvider::resolve(const std::string& token) const {
  auto it = tokens_.find(token);
  if (it == tokens_.end()) return std::nullopt;
  return it->second;
}

Clock system_clock() {
  return [] { return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()); };
}

Service::Service(Store& store, std::shared_ptr<const TokenProvider> tokens, Clock clock, ServiceOptions options)
    : store_(store), tokens_(std::move(tokens)), clock_(std::move(clock)), options_(std::move(options)) {
  if (options_.anonymize_salt.empty()) {
    options_.anonymize_salt = std::to_string(fresh_seed()) + std::to_string(fresh_seed());
  }
}

Response Service::handle(const Request& request) {
  try {
    const Timestamp now = clock_();
    {
      auto state = store_.state();
      if (phase_at(state->issue.schedule, now) == Phase::closed && !store_.anonymized()) {
        store_.anonymize(options_.anonymize_salt);
      }
    }

    const auto parts = split_path(request.path);
    const std::string& method = request.method;

    std::optional<ParticipantId> caller;
    auto authenticate = [&]() -> const ParticipantId& {
      if (caller) return *caller;
      auto it = request.headers.find("authorization");
      const std::string prefix = "Bearer ";
      if (it == request.headers.end() || it->second.rfind(prefix, 0) != 0) {
        throw HttpError{401, "unauthorized", "missing bearer token"};
      }
      const std::string token = it->second.substr(prefix.size());
      auto who = tokens_ ? tokens_->resolve(token) : std::nullopt;
      if (!who) throw HttpError{401, "unauthorized", "unknown token"};
      {
        std::lock_guard lock(rate_mutex_);
        const auto minute = std::chrono::duration_cast<std::chrono::minutes>(now.time_since_epoch()).count();
        RateWindow& w = rate_[token];
        if (w.minute != minute) w = RateWindow{minute, 0};
        if (++w.count > options_.requests_per_minute) {
          throw HttpError{429, "rate-limited", "request cap reached for this token"};
        }
      }
      caller = std::move(who);
      return *caller;
    };

    auto commit = [&](const Store::Decider& decider) -> Event {
      auto result = store_.commit(now, decider);
      if (auto* rejection = std::get_if<Rejection>(&result)) throw from_rejection(*rejection);
      return std::get<Event>(result);
    };

    auto snapshot = store_.state();
    const IssueState& state = *snapshot;

    // /proposals/{pid}/arguments
    if (parts.size() == 3 && parts[0] == "proposals" && parts[2] == "arguments") {
      if (method != "GET") throw HttpError{405, "method-not-allowed", method + " " + request.path};
      const ProposalId pid{parse_int(parts[1], "proposal id")};
      const Proposal* p = state.issue.find(pid);
      if (!p || p->removed) throw HttpError{404, "not-found", "unknown proposal " + parts[1]};
      const std::uint64_t seed = seed_from(request);
      const bool all = flag(request, "all");
      auto args = state.graph.position_arguments(NodeId{pid.value},
                                                 all ? std::nullopt : std::optional(options_.argument_limit), seed);
      return reply(200, json{{"proposal", pid.value},
                             {"seed", std::to_string(seed)},
                             {"pro", argument_entries(state.graph, args.pro)},
                             {"con", argument_entries(state.graph, args.con)}});
    }

    if (parts.size() < 2 || parts[0] != "issues") throw HttpError{404, "not-found", "no route " + request.path};
    if (parts[1] != state.issue.id) throw HttpError{404, "not-found", "unknown issue " + parts[1]};
    const PhaseSchedule& schedule = state.issue.schedule;

    if (parts.size() == 2) {
      if (method != "GET") throw HttpError{405, "method-not-allowed", method + " " + request.path};
      std::size_t live = 0;
      for (const auto& p : state.issue.proposals) live += p.removed ? 0 : 1;
      const auto& cfg = state.issue.budget_config;
      return reply(200, json{{"id", state.issue.id},
                             {"title", state.issue.title},
                             {"budget", cfg.budget.cents},
                             {"cost_min", cfg.cost_min.cents},
                             {"cost_max", cfg.cost_max.cents},
                             {"phase", std::string(to_string(phase_at(schedule, now)))},
                             {"proposing_open", proposing_open(schedule, now)},
                             {"voting_open", voting_open(schedule, now)},
                             {"results_visible", results_visible(schedule, now)},
                             {"schedule",
                              {{"proposals_close_at", optional_time(schedule.proposals_close_at)},
                               {"voting_opens_at", optional_time(schedule.voting_opens_at)},
                               {"voting_closes_at", optional_time(schedule.voting_closes_at)},
                               {"results_always_visible", schedule.results_always_visible}}},
                             {"proposal_count", live}});
    }

    const std::string& resource = parts[2];

    if (resource == "proposals" && parts.size() == 3 && method == "GET") {
      const std::uint64_t seed = seed_from(request);
      const bool all = flag(request, "all");
      json list = json::array();
      for (const auto& p : state.issue.proposals) {
        if (p.removed) continue;
        json entry = proposal_json(p);
        const NodeId position{p.id.value};
        auto full = state.graph.position_arguments(position, std::nullopt, seed);
        auto shown = all ? full : state.graph.position_arguments(position, options_.argument_limit, seed);
        entry["pro"] = argument_entries(state.graph, shown.pro);
        entry["con"] = argument_entries(state.graph, shown.con);
        entry["pro_total"] = full.pro.size();
        entry["con_total"] = full.con.size();
        list.push_back(std::move(entry));
      }
      return reply(200, json{{"seed", std::to_string(seed)}, {"proposals", list}});
    }

    if (resource == "proposals" && parts.size() == 3 && method == "POST") {
      const ParticipantId& who = authenticate();
      const json body = parse_body(request);
      ProposalDraft draft{field<std::string>(body, "text"), Money{field<std::int64_t>(body, "cost")}, who};
      Event e = commit([&](const IssueState& s) -> std::variant<Payload, Rejection> {
        auto v = submit_proposal(s, draft, now);
        if (auto* r = std::get_if<Rejection>(&v)) return *r;
        return ProposalAdded{std::get<Proposal>(v)};
      });
      return reply(201, proposal_json(std::get<ProposalAdded>(e.payload).proposal));
    }

    if (resource == "proposals" && parts.size() == 4 && (method == "PATCH" || method == "DELETE")) {
      const ParticipantId& who = authenticate();
      const ProposalId pid{parse_int(parts[3], "proposal id")};
      const Proposal* p = state.issue.find(pid);
      if (!p || p->removed) throw HttpError{404, "not-found", "unknown proposal " + parts[3]};
      if (p->author != who) throw HttpError{403, "forbidden", "only the author may change a proposal"};
      if (method == "PATCH") {
        const Money cost{field<std::int64_t>(parse_body(request), "cost")};
        Event e = commit([&](const IssueState& s) -> std::variant<Payload, Rejection> {
          auto v = edit_proposal_cost(s, pid, cost, now);
          if (auto* r = std::get_if<Rejection>(&v)) return *r;
          return ProposalEdited{pid, cost};
        });
        return reply(200, proposal_json(*store_.state()->issue.find(pid)));
      }
      commit([&](const IssueState& s) -> std::variant<Payload, Rejection> {
        auto v = remove_proposal(s, pid, now);
        if (auto* r = std::get_if<Rejection>(&v)) return *r;
        return ProposalTombstoned{pid};
      });
      return reply(200, json{{"id", pid.value}, {"removed", true}});
    }

    if (resource == "ballot" && parts.size() == 3) {
      if (method != "PUT") throw HttpError{405, "method-not-allowed", method + " " + request.path};
      const ParticipantId& who = authenticate();
      const json body = parse_body(request);
      const json& list = body.is_object() && body.contains("preferences") ? body.at("preferences") : body;
      if (!list.is_array()) throw HttpError{400, "bad-request", "ballot body must be an array of proposal ids"};
      std::vector<ProposalId> prefs;
      for (const auto& v : list) {
        if (!v.is_number_integer()) throw HttpError{400, "bad-request", "proposal ids must be integers"};
        prefs.push_back(ProposalId{v.get<std::int64_t>()});
      }
      Event e = commit([&](const IssueState& s) -> std::variant<Payload, Rejection> {
        auto v = submit_ballot(s, who, prefs, now);
        if (auto* r = std::get_if<Rejection>(&v)) return *r;
        return BallotSubmitted{std::get<Ballot>(v)};
      });
      const Ballot& b = std::get<BallotSubmitted>(e.payload).ballot;
      json ids = json::array();
      for (const auto& id : b.preferences) ids.push_back(id.value);
      return reply(200, json{{"preferences", ids}, {"sequence", b.sequence}});
    }

    if (resource == "result" && parts.size() == 3) {
      if (method != "GET") throw HttpError{405, "method-not-allowed", method + " " + request.path};
      if (!results_visible(schedule, now)) {
        throw HttpError{403, "results-hidden", "results are hidden until voting closes",
                        json{{"voting_closes_at", optional_time(schedule.voting_closes_at)}}};
      }
      const auto ballots = state.live_ballots();
      const Decision d = decide(ballots, state.issue.proposals, state.issue.budget_config);
      json rows = json::array();
      json ranking = json::array();
      std::set<ProposalId> winning(d.winners.winners.begin(), d.winners.winners.end());
      for (const auto& entry : d.ranked) {
        const ScoreRow& row = d.board.rows.at(entry.id);
        rows.push_back({{"id", entry.id.value},
                        {"cost", state.issue.find(entry.id)->cost.cents},
                        {"borda", row.borda},
                        {"approval", row.approval},
                        {"histogram", row.histogram},
                        {"winner", winning.count(entry.id) > 0}});
        ranking.push_back(entry.id.value);
      }
      json winners = json::array();
      for (const auto& id : d.winners.winners) winners.push_back(id.value);
      return reply(200, json{{"n_max", d.board.n_max},
                             {"ballots", ballots.size()},
                             {"rows", rows},
                             {"ranking", ranking},
                             {"winners", winners},
                             {"budget", state.issue.budget_config.budget.cents},
                             {"spent", d.winners.spent.cents},
                             {"leftover", d.winners.leftover.cents}});
    }

    if (resource == "statements" && parts.size() == 3 && method == "POST") {
      authenticate();
      const std::string text = field<std::string>(parse_body(request), "text");
      Event e = commit([&](const IssueState& s) -> std::variant<Payload, Rejection> {
        auto v = add_statement(s, text);
        if (auto* r = std::get_if<Rejection>(&v)) return *r;
        return StatementAdded{std::get<Statement>(v)};
      });
      const Statement& st = std::get<StatementAdded>(e.payload).statement;
      return reply(201, json{{"id", st.id.value}, {"text", st.text}});
    }

    if (resource == "arguments" && parts.size() == 3 && method == "POST") {
      authenticate();
      const json body = parse_body(request);
      std::vector<NodeId> premises;
      for (auto id : field<std::vector<std::int64_t>>(body, "premises")) premises.push_back(NodeId{id});
      const NodeId conclusion{field<std::int64_t>(body, "conclusion")};
      const std::string att = field<std::string>(body, "attitude");
      Attitude attitude;
      if (att == "+" || att == "positive") {
        attitude = Attitude::positive;
      } else if (att == "-" || att == "negative") {
        attitude = Attitude::negative;
      } else {
        throw HttpError{400, "bad-request", "attitude must be positive or negative"};
      }
      Event e = commit([&](const IssueState& s) -> std::variant<Payload, Rejection> {
        auto v = add_argument(s, premises, conclusion, attitude);
        if (auto* r = std::get_if<Rejection>(&v)) return *r;
        return ArgumentAdded{std::get<Argument>(v)};
      });
      const Argument& a = std::get<ArgumentAdded>(e.payload).argument;
      json labels = json::array();
      for (auto rel : store_.state()->graph.classify_relation(a.id)) labels.push_back(std::string(to_string(rel)));
      return reply(201, json{{"id", a.id.value}, {"relations", labels}});
    }

    if (resource == "reviews" && parts.size() == 3 && method == "POST") {
      authenticate();
      const json body = parse_body(request);
      const NodeId target{field<std::int64_t>(body, "target")};
      auto kind = review_kind_from_string(field<std::string>(body, "kind"));
      if (!kind) throw HttpError{400, "bad-request", "unknown review kind"};
      const std::string side_text = field<std::string>(body, "side");
      if (side_text != "pro" && side_text != "con") throw HttpError{400, "bad-request", "side must be pro or con"};
      const ReviewSide side = side_text == "pro" ? ReviewSide::pro : ReviewSide::con;
      commit([&](const IssueState& s) -> std::variant<Payload, Rejection> {
        auto v = review_vote(s, target, *kind, side);
        if (auto* r = std::get_if<Rejection>(&v)) return *r;
        return ReviewVoteCast{target, *kind, side};
      });
      const ReviewCase& c = store_.state()->reviews.at({target, *kind});
      return reply(200, json{{"target", c.target.value},
                             {"kind", std::string(to_string(c.kind))},
                             {"pro", c.pro_votes},
                             {"con", c.con_votes},
                             {"state", std::string(to_string(c.state))}});
    }

    throw HttpError{404, "not-found", "no route " + method + " " + request.path};
  } catch (const HttpError& e) {
    return error_reply(e);
  } catch (const StorageError& e) {
    return error_reply(HttpError{500, "storage-failure", e.what()});
  }
}

std::pair<std::string, int> parse_listen_address(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) throw std::invalid_argument("listen address must be host:port");
  const std::string host = text.substr(0, colon);
  const std::string port_text = text.substr(colon + 1);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(port_text, &used);
    if (used != port_text.size()) throw std::invalid_argument("port");
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid port in listen address '" + text + "'");
  }
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range in '" + text + "'");
  return {host, port};
}

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}
  Service& service;
  httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    Request r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query[k] = v;
    for (const auto& [k, v] : req.headers) {
      std::string name = k;
      for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      r.headers[name] = v;
    }
    r.body = req.body;
    Response out = impl_->service.handle(r);
    res.status = out.status;
    res.set_content(out.body, "application/json; charset=utf-8");
  };
  // Catch-all routes so httplib reads the body before the service sees the request.
  const std::string any = ".*";
  impl_->server.Get(any, handler);
  impl_->server.Post(any, handler);
  impl_->server.Put(any, handler);
  impl_->server.Patch(any, handler);
  impl_->server.Delete(any, handler);
  impl_->server.Options(any, handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void serve(Service& service, const std::string& host, int port) {
  HttpServer server(service);
  server.bind(host, port);
  server.listen();
}

}  // namespace decide::api
