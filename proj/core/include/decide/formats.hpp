#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "decide/model.hpp"
#include "decide/scoring.hpp"
#include "decide/selection.hpp"

namespace decide {

/// Input file error; `line` is 1-based, 0 when the file itself could not be read.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// One ballot per non-empty line, ids separated by tabs or spaces, leftmost = first preference.
/// Participants are synthesized as "row-<n>" in line order.
std::vector<Ballot> parse_ballots(std::istream& in);
std::vector<Ballot> import_ballots(const std::filesystem::path& path);
void write_ballots(std::ostream& out, const std::vector<Ballot>& ballots);

/// `<id>\t<text>\t<cost-euros>` per line; ordinal = line number.
std::vector<Proposal> parse_proposals(std::istream& in);
std::vector<Proposal> import_proposals(const std::filesystem::path& path);
void write_proposals(std::ostream& out, const std::vector<Proposal>& proposals);

/// "1st", "2nd", "3rd", "4th", ..., "11th", "21st".
std::string ordinal_label(std::size_t rank);

struct TallyOptions {
  std::size_t top_k = 3;
  bool pretty = false;  // aligned columns instead of TSV
};

/// Rows in rank order: ID, Cost, one count per priority 1..N, Borda, Approval, Single, Top k, Winner,
/// followed by one footer row with the priority column sums. Winner is "1"/"0", or "-" without a winner set.
void write_tally(std::ostream& out, const ScoreBoard& board, const RankedList& ranked,
                 const std::map<ProposalId, Money>& costs, const std::optional<WinnerSet>& winners,
                 const TallyOptions& options = {});
void export_tally(const ScoreBoard& board, const RankedList& ranked, const std::map<ProposalId, Money>& costs,
                  const std::optional<WinnerSet>& winners, const std::filesystem::path& path,
                  const TallyOptions& options = {});

/// Two-column score table (ID, Cost, <label>) sorted by score desc, then creation ordinal.
void write_score_table(std::ostream& out, const std::string& label, const Tally& scores,
                       const std::vector<Proposal>& proposals, bool pretty = false);

}  // namespace decide
