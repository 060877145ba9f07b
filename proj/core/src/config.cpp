#include "decide/config.hpp"

#include <fstream>
#include <set>

namespace decide {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ServiceConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  ServiceConfig cfg;
  cfg.issue.id = "1";
  cfg.issue.title = "Participatory budget";
  std::optional<Money> budget, cost_min, cost_max;
  std::set<std::string> seen;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(stripped, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(key, "duplicate key '" + key + "'");

    auto bad = [&](const std::string& why) { return ConfigError(key, "invalid value for '" + key + "': " + why); };
    auto money = [&]() {
      try {
        return parse_euros(value);
      } catch (const std::invalid_argument& e) {
        throw bad(e.what());
      }
    };
    auto time = [&]() -> std::optional<Timestamp> {
      if (value.empty()) return std::nullopt;
      try {
        return parse_rfc3339(value);
      } catch (const std::invalid_argument& e) {
        throw bad(e.what());
      }
    };
    auto path = [&]() -> std::optional<std::filesystem::path> {
      if (value.empty()) return std::nullopt;
      std::filesystem::path p(value);
      return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };

    if (key == "budget") {
      budget = money();
    } else if (key == "cost_min") {
      cost_min = money();
    } else if (key == "cost_max") {
      cost_max = money();
    } else if (key == "proposals_close_at") {
      cfg.issue.schedule.proposals_close_at = time();
    } else if (key == "voting_opens_at") {
      cfg.issue.schedule.voting_opens_at = time();
    } else if (key == "voting_closes_at") {
      cfg.issue.schedule.voting_closes_at = time();
    } else if (key == "results_always_visible") {
      if (value == "true" || value == "1" || value == "yes") {
        cfg.issue.schedule.results_always_visible = true;
      } else if (value == "false" || value == "0" || value == "no" || value.empty()) {
        cfg.issue.schedule.results_always_visible = false;
      } else {
        throw bad("expected true or false");
      }
    } else if (key == "issue_id") {
      if (value.empty() || value.find('/') != std::string::npos) throw bad("must be non-empty without '/'");
      cfg.issue.id = value;
    } else if (key == "title") {
      cfg.issue.title = value;
    } else if (key == "listen") {
      cfg.listen = value;
    } else if (key == "proposals") {
      cfg.proposals = path();
    } else if (key == "graph") {
      cfg.graph = path();
    } else if (key == "anonymize_salt") {
      cfg.anonymize_salt = value;
    } else if (key == "requests_per_minute") {
      try {
        std::size_t used = 0;
        const auto v = std::stoul(value, &used);
        if (used != value.size() || v == 0) throw std::invalid_argument("");
        cfg.requests_per_minute = v;
      } catch (const std::exception&) {
        throw bad("expected a positive integer");
      }
    } else {
      throw ConfigError(key, "unknown configuration key '" + key + "'");
    }
  }

  if (!budget) throw ConfigError("budget", "missing required key 'budget'");
  cfg.issue.budget_config = BudgetConfig{*budget, cost_min.value_or(Money{}), cost_max.value_or(*budget)};
  if (!cfg.issue.budget_config.valid()) {
    throw ConfigError(cost_max ? "cost_max" : "cost_min", "cost bounds must satisfy 0 <= cost_min <= cost_max <= budget");
  }
  if (!cfg.issue.schedule.valid()) {
    throw ConfigError("voting_closes_at", "voting_closes_at must not precede proposals_close_at or voting_opens_at");
  }
  return cfg;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  return parse_config(in, path.parent_path());
}

}  // namespace decide
