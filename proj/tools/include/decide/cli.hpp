#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "decide/config.hpp"
#include "decide/store.hpp"

namespace decide::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInput = 2;

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Opens the store in `dir`. A fresh store is seeded from the config's proposals and graph files.
std::unique_ptr<Store> open_service_store(const ServiceConfig& config, const std::filesystem::path& dir,
                                          Timestamp now);

/// The built-in three- and four-participant fixtures.
struct WorkedExample {
  std::string title;
  std::vector<Proposal> proposals;
  std::vector<Ballot> ballots;
  BudgetConfig budget;
};

std::vector<WorkedExample> worked_examples();

}  // namespace decide::cli
