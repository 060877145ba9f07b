#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "decide/model.hpp"

namespace decide {

/// Issue configuration read at service start.
///
/// `key = value` lines; '#' starts a comment line. Money in euros, timestamps RFC-3339,
/// an empty value leaves an optional key unset.
///
///   budget, cost_min, cost_max, proposals_close_at, voting_opens_at, voting_closes_at,
///   results_always_visible, issue_id, title, listen, proposals, graph, anonymize_salt,
///   requests_per_minute
struct ServiceConfig {
  Issue issue;
  std::string listen = "127.0.0.1:8080";
  std::optional<std::filesystem::path> proposals;  // seeds a fresh store
  std::optional<std::filesystem::path> graph;      // seeds a fresh store
  std::string anonymize_salt;
  std::size_t requests_per_minute = 600;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what) : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Relative paths resolve against `base_dir`.
ServiceConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ServiceConfig load_config(const std::filesystem::path& path);

}  // namespace decide
