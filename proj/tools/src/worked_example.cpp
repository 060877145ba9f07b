#include "decide/cli.hpp"

namespace decide::cli {

namespace {

constexpr ProposalId kHackathon{1};
constexpr ProposalId kWaterCooler{2};
constexpr ProposalId kComputerLab{3};

Ballot ballot(std::string who, std::vector<ProposalId> prefs, std::int64_t seq) {
  return Ballot{ParticipantId{std::move(who)}, std::move(prefs), seq};
}

}  // namespace

std::vector<WorkedExample> worked_examples() {
  const std::vector<Proposal> proposals = {
      {kHackathon, "Hackathon", Money::from_euros(4000), 1, {}, false},
      {kWaterCooler, "Water cooler", Money::from_euros(2000), 2, {}, false},
      {kComputerLab, "Computer lab", Money::from_euros(7000), 3, {}, false},
  };
  std::vector<Ballot> three = {
      ballot("Christian", {kWaterCooler, kHackathon}, 1),
      ballot("Alexander", {kComputerLab, kHackathon, kWaterCooler}, 2),
      ballot("Markus", {kHackathon, kComputerLab}, 3),
  };
  std::vector<Ballot> four = three;
  four.push_back(ballot("Martin", {kComputerLab, kWaterCooler, kHackathon}, 4));

  const auto budget = BudgetConfig::with_budget(Money::from_euros(10000));
  return {
      {"Three participants", proposals, std::move(three), budget},
      {"Four participants", proposals, std::move(four), budget},
  };
}

}  // namespace decide::cli
