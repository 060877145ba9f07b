#include "decide/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <set>
#include <utility>

namespace decide {

std::string format_euros(Money m) {
  const bool negative = m.cents < 0;
  const std::int64_t abs = negative ? -m.cents : m.cents;
  std::string out = negative ? "-" : "";
  out += std::to_string(abs / 100);
  if (abs % 100 != 0) {
    char frac[4];
    std::snprintf(frac, sizeof frac, "%02lld", static_cast<long long>(abs % 100));
    out += '.';
    out += frac;
  }
  return out;
}

Money parse_euros(std::string_view text) {
  auto fail = [&] { return std::invalid_argument("invalid euro amount: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  const auto sep = text.find_first_of(".,");
  const std::string_view whole = text.substr(0, sep);
  std::string_view frac = sep == std::string_view::npos ? std::string_view{} : text.substr(sep + 1);
  if (whole.empty() || (sep != std::string_view::npos && (frac.empty() || frac.size() > 2))) throw fail();
  auto all_digits = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  if (!all_digits(whole) || !all_digits(frac)) throw fail();

  std::int64_t euros = 0;
  auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), euros);
  if (ec != std::errc{} || ptr != whole.data() + whole.size() || euros > INT64_MAX / 100 - 1) throw fail();
  std::int64_t cents = 0;
  if (!frac.empty()) {
    cents = (frac[0] - '0') * 10 + (frac.size() == 2 ? frac[1] - '0' : 0);
  }
  return Money{euros * 100 + cents};
}

namespace {

bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace

Timestamp parse_rfc3339(std::string_view s) {
  auto fail = [&] { return std::invalid_argument("invalid RFC-3339 timestamp: '" + std::string(s) + "'"); };
  int y, mo, d, h, mi, sec;
  if (!parse_fixed(s, 0, 4, y) || s.size() < 19 || s[4] != '-' || !parse_fixed(s, 5, 2, mo) || s[7] != '-' ||
      !parse_fixed(s, 8, 2, d) || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') || !parse_fixed(s, 11, 2, h) ||
      s[13] != ':' || !parse_fixed(s, 14, 2, mi) || s[16] != ':' || !parse_fixed(s, 17, 2, sec)) {
    throw fail();
  }
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw fail();
  }
  if (pos >= s.size()) throw fail();
  std::chrono::seconds offset{0};
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    int oh, om;
    if (!parse_fixed(s, pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
        !parse_fixed(s, pos + 4, 2, om) || oh > 23 || om > 59) {
      throw fail();
    }
    offset = std::chrono::hours{oh} + std::chrono::minutes{om};
    if (s[pos] == '-') offset = -offset;
    pos += 6;
  } else {
    throw fail();
  }
  if (pos != s.size()) throw fail();

  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) throw fail();
  const auto local = std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} +
                     std::chrono::seconds{sec};
  return Timestamp{local - offset};
}

std::string format_rfc3339(Timestamp t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::year_month_day ymd{day};
  const std::chrono::hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

bool BudgetConfig::valid() const {
  return Money{} <= cost_min && cost_min <= cost_max && cost_max <= budget;
}

bool PhaseSchedule::valid() const {
  if (voting_closes_at) {
    if (proposals_close_at && *proposals_close_at > *voting_closes_at) return false;
    if (voting_opens_at && *voting_opens_at > *voting_closes_at) return false;
  }
  return true;
}

const Proposal* Issue::find(ProposalId pid) const {
  auto it = std::find_if(proposals.begin(), proposals.end(), [&](const Proposal& p) { return p.id == pid; });
  return it == proposals.end() ? nullptr : &*it;
}

Proposal* Issue::find(ProposalId pid) {
  return const_cast<Proposal*>(std::as_const(*this).find(pid));
}

std::int64_t Issue::next_ordinal() const {
  std::int64_t max = 0;
  for (const auto& p : proposals) max = std::max(max, p.ordinal);
  return max + 1;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::below_min: return "below-min";
    case ViolationKind::above_max: return "above-max";
    case ViolationKind::empty_text: return "empty-text";
  }
  return "unknown";
}

std::vector<Violation> validate_proposal(const Proposal& proposal, const BudgetConfig& config) {
  std::vector<Violation> out;
  if (proposal.cost < config.cost_min) out.push_back({ViolationKind::below_min, config.cost_min});
  if (proposal.cost > config.cost_max) out.push_back({ViolationKind::above_max, config.cost_max});
  if (proposal.text.empty()) out.push_back({ViolationKind::empty_text, Money{}});
  return out;
}

std::string_view to_string(BallotProblemKind kind) {
  switch (kind) {
    case BallotProblemKind::duplicate: return "duplicate";
    case BallotProblemKind::unknown: return "unknown";
    case BallotProblemKind::removed: return "removed";
  }
  return "unknown";
}

std::vector<BallotProblem> validate_ballot(const Ballot& ballot, const std::vector<Proposal>& proposals) {
  std::vector<BallotProblem> out;
  std::set<ProposalId> seen;
  for (const auto& pid : ballot.preferences) {
    if (!seen.insert(pid).second) {
      out.push_back({BallotProblemKind::duplicate, pid});
      continue;
    }
    auto it = std::find_if(proposals.begin(), proposals.end(), [&](const Proposal& p) { return p.id == pid; });
    if (it == proposals.end()) {
      out.push_back({BallotProblemKind::unknown, pid});
    } else if (it->removed) {
      out.push_back({BallotProblemKind::removed, pid});
    }
  }
  return out;
}

}  // namespace decide
