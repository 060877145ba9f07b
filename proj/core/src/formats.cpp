#include "decide/formats.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace decide {

namespace {

std::int64_t parse_id(std::string_view token, std::size_t line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "non-integer token '" + std::string(token) + "'");
  }
  if (v < 0) throw ParseError(line, "negative proposal id " + std::string(token));
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Renders rows either as TSV or as space-padded columns.
void emit_rows(std::ostream& out, const std::vector<std::vector<std::string>>& rows, bool pretty) {
  if (!pretty) {
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << row[i];
      out << '\n';
    }
    return;
  }
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += std::string(width[i] - row[i].size(), ' ') + row[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

}  // namespace

std::vector<Ballot> parse_ballots(std::istream& in) {
  std::vector<Ballot> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    std::istringstream tokens(line);
    std::string tok;
    Ballot b;
    std::set<std::int64_t> seen;
    while (tokens >> tok) {
      const auto id = parse_id(tok, lineno);
      if (!seen.insert(id).second) throw ParseError(lineno, "duplicate proposal id " + tok);
      b.preferences.push_back(ProposalId{id});
    }
    if (b.preferences.empty()) continue;
    b.sequence = static_cast<std::int64_t>(out.size()) + 1;
    b.participant = ParticipantId{"row-" + std::to_string(lineno)};
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<Ballot> import_ballots(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_ballots(in);
}

void write_ballots(std::ostream& out, const std::vector<Ballot>& ballots) {
  for (const auto& b : ballots) {
    for (std::size_t i = 0; i < b.preferences.size(); ++i) out << (i ? "\t" : "") << b.preferences[i].value;
    out << '\n';
  }
}

std::vector<Proposal> parse_proposals(std::istream& in) {
  std::vector<Proposal> out;
  std::set<std::int64_t> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto first = line.find('\t');
    const auto last = line.rfind('\t');
    if (first == std::string::npos || first == last) {
      throw ParseError(lineno, "malformed proposal line: expected <id>\\t<text>\\t<cost>");
    }
    Proposal p;
    p.id = ProposalId{parse_id(line.substr(0, first), lineno)};
    if (!ids.insert(p.id.value).second) throw ParseError(lineno, "duplicate proposal id");
    p.text = line.substr(first + 1, last - first - 1);
    if (p.text.empty()) throw ParseError(lineno, "empty proposal text");
    try {
      p.cost = parse_euros(line.substr(last + 1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    }
    p.ordinal = static_cast<std::int64_t>(lineno);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Proposal> import_proposals(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_proposals(in);
}

void write_proposals(std::ostream& out, const std::vector<Proposal>& proposals) {
  for (const auto& p : proposals) out << p.id.value << '\t' << p.text << '\t' << format_euros(p.cost) << '\n';
}

std::string ordinal_label(std::size_t rank) {
  const std::size_t mod100 = rank % 100;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    switch (rank % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
      default: break;
    }
  }
  return std::to_string(rank) + suffix;
}

void write_tally(std::ostream& out, const ScoreBoard& board, const RankedList& ranked,
                 const std::map<ProposalId, Money>& costs, const std::optional<WinnerSet>& winners,
                 const TallyOptions& options) {
  std::set<ProposalId> winning;
  if (winners) winning.insert(winners->winners.begin(), winners->winners.end());

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"ID", "Cost"};
  for (std::size_t r = 1; r <= board.n_max; ++r) header.push_back(ordinal_label(r));
  for (const char* h : {"Borda", "Approval", "Single"}) header.emplace_back(h);
  header.push_back("Top " + std::to_string(options.top_k));
  header.emplace_back("Winner");
  rows.push_back(header);

  for (const auto& entry : ranked) {
    const ScoreRow& row = board.rows.at(entry.id);
    std::vector<std::string> cells{std::to_string(entry.id.value)};
    auto cost = costs.find(entry.id);
    cells.push_back(cost == costs.end() ? "-" : format_euros(cost->second));
    for (auto count : row.histogram) cells.push_back(std::to_string(count));
    const std::size_t k = std::min(options.top_k, row.histogram.size());
    const auto single = row.histogram.empty() ? 0 : row.histogram.front();
    std::int64_t top = 0;
    for (std::size_t r = 0; r < k; ++r) top += row.histogram[r];
    cells.push_back(std::to_string(row.borda));
    cells.push_back(std::to_string(row.approval));
    cells.push_back(std::to_string(single));
    cells.push_back(std::to_string(top));
    cells.push_back(winners ? (winning.count(entry.id) ? "1" : "0") : "-");
    rows.push_back(std::move(cells));
  }

  std::vector<std::string> footer{"Total", ""};
  for (auto sum : board.column_sums()) footer.push_back(std::to_string(sum));
  footer.resize(header.size());
  rows.push_back(std::move(footer));
  emit_rows(out, rows, options.pretty);
}

void export_tally(const ScoreBoard& board, const RankedList& ranked, const std::map<ProposalId, Money>& costs,
                  const std::optional<WinnerSet>& winners, const std::filesystem::path& path,
                  const TallyOptions& options) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_tally(out, board, ranked, costs, winners, options);
  out.flush();
  if (!out) throw std::runtime_error("write failure on " + path.string());
}

void write_score_table(std::ostream& out, const std::string& label, const Tally& scores,
                       const std::vector<Proposal>& proposals, bool pretty) {
  std::vector<const Proposal*> order;
  for (const auto& p : proposals) {
    if (!p.removed) order.push_back(&p);
  }
  std::sort(order.begin(), order.end(), [&](const Proposal* a, const Proposal* b) {
    const auto sa = score_of(scores, a->id);
    const auto sb = score_of(scores, b->id);
    return sa != sb ? sa > sb : a->ordinal < b->ordinal;
  });
  std::vector<std::vector<std::string>> rows{{"ID", "Cost", label}};
  for (const Proposal* p : order) {
    rows.push_back({std::to_string(p->id.value), format_euros(p->cost), std::to_string(score_of(scores, p->id))});
  }
  emit_rows(out, rows, pretty);
}

}  // namespace decide
