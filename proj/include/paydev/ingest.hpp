#pragma once

// Commit records: the git-log export reader and the canonical JSON-lines
// format every later stage consumes.
//
// Export grammar (one record):
//
//   0x1E sha 0x1F name 0x1F email 0x1F unix-time 0x1F date [0x1F message 0x1D] '\n'
//   [blank line]
//   added '\t' deleted '\t' path '\n'    (zero or more numstat lines)
//
// `date` must end in a numeric offset (`+HHMM` / `-HHMM`); only that offset is
// used, the instant comes from `unix-time`. The message field is optional so
// the five-field form of the export command also parses (messages then empty).

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "paydev/civil_time.hpp"
#include "paydev/error.hpp"
#include "paydev/text.hpp"

namespace paydev {

struct CommitRecord {
  std::string sha;
  std::string author_name;
  std::string author_email;
  std::int64_t timestamp_utc = 0;
  int tz_offset_minutes = 0;
  std::int64_t lines_added = 0;    // -1: unknown (binary only)
  std::int64_t lines_deleted = 0;  // -1: unknown (binary only)
  std::string message;

  LocalTime local_time() const { return to_local(timestamp_utc, tz_offset_minutes); }
  bool has_line_counts() const { return lines_added >= 0 && lines_deleted >= 0; }
  bool operator==(const CommitRecord&) const = default;
};

inline constexpr int kMaxOffsetMinutes = 1440;
// 0000-01-01T00:00:00Z .. 9999-12-31T23:59:59Z
inline constexpr std::int64_t kMinTimestamp = -62167219200;
inline constexpr std::int64_t kMaxTimestamp = 253402300799;

inline constexpr std::string_view kGitExportCommand =
    "git log --all --no-merges --date-order "
    "--pretty=format:'%x1e%H%x1f%an%x1f%ae%x1f%at%x1f%ad%x1f%B%x1d' "
    "--date=format:'%Y-%m-%d %H:%M:%S %z' --numstat";

inline bool is_valid_sha(std::string_view sha) {
  if (sha.size() != 40) return false;
  for (char c : sha)
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  return true;
}

// `+HHMM` / `-HHMM` to minutes east of UTC.
inline std::optional<int> parse_tz_offset(std::string_view s) {
  if (s.size() != 5 || (s[0] != '+' && s[0] != '-')) return std::nullopt;
  for (std::size_t i = 1; i < 5; ++i)
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
  const int hh = (s[1] - '0') * 10 + (s[2] - '0');
  const int mm = (s[3] - '0') * 10 + (s[4] - '0');
  if (mm >= 60) return std::nullopt;
  const int total = hh * 60 + mm;
  if (total > kMaxOffsetMinutes) return std::nullopt;
  return s[0] == '-' ? -total : total;
}

namespace detail {

inline constexpr char kRecordStart = '\x1e';
inline constexpr char kFieldSep = '\x1f';
inline constexpr char kMessageEnd = '\x1d';

struct NumstatTotals {
  std::int64_t added = 0, deleted = 0;
  bool any_text = false, any_binary = false;
};

inline void parse_numstat_line(std::string_view line, NumstatTotals& totals, std::size_t offset,
                               std::size_t record) {
  std::string_view added, deleted;
  if (line.find('\t') != std::string_view::npos) {
    auto parts = text::split(line, '\t');
    if (parts.size() < 3) throw ParseError("malformed numstat line", offset, record);
    added = parts[0];
    deleted = parts[1];
  } else {
    // Space separated variant: `3 1 path`.
    std::size_t a_end = line.find(' ');
    if (a_end == std::string_view::npos) throw ParseError("malformed numstat line", offset, record);
    std::size_t d_begin = line.find_first_not_of(' ', a_end);
    std::size_t d_end = d_begin == std::string_view::npos ? d_begin : line.find(' ', d_begin);
    if (d_end == std::string_view::npos) throw ParseError("malformed numstat line", offset, record);
    added = line.substr(0, a_end);
    deleted = line.substr(d_begin, d_end - d_begin);
  }
  if (added == "-" && deleted == "-") {
    totals.any_binary = true;
    return;
  }
  auto a = text::parse_int<std::int64_t>(added);
  auto d = text::parse_int<std::int64_t>(deleted);
  if (!a || !d || *a < 0 || *d < 0 || added.front() == '+' || deleted.front() == '+')
    throw ParseError("malformed numstat counts", offset, record);
  if (*a > INT64_MAX - totals.added || *d > INT64_MAX - totals.deleted)
    throw ParseError("numstat counts overflow", offset, record);
  totals.added += *a;
  totals.deleted += *d;
  totals.any_text = true;
}

}  // namespace detail

inline std::vector<CommitRecord> parse_git_log(std::string_view data) {
  using namespace detail;
  std::vector<CommitRecord> records;
  std::unordered_set<std::string> seen;

  std::size_t pos = 0;
  while (pos < data.size() && text::is_space(data[pos])) ++pos;
  if (pos == data.size()) return records;
  if (data[pos] != kRecordStart) throw ParseError("expected record start (0x1E)", pos, 0);

  std::size_t index = 0;
  while (pos < data.size()) {
    const std::size_t start = pos + 1;
    std::size_t end = data.find(kRecordStart, start);
    if (end == std::string_view::npos) end = data.size();
    const std::string_view chunk = data.substr(start, end - start);

    std::size_t line_end = chunk.find('\n');
    if (line_end == std::string_view::npos) line_end = chunk.size();
    std::string_view first_line = chunk.substr(0, line_end);

    // Locate the five header fields; a sixth (message) runs to 0x1D.
    std::vector<std::string_view> fields;
    std::size_t fpos = 0;
    for (int i = 0; i < 4; ++i) {
      std::size_t sep = first_line.find(kFieldSep, fpos);
      if (sep == std::string_view::npos)
        throw ParseError("header has " + std::to_string(i + 1) + " fields, expected 5", start, index);
      fields.push_back(first_line.substr(fpos, sep - fpos));
      fpos = sep + 1;
    }
    std::string_view message;
    std::size_t body_begin;
    std::size_t date_end = first_line.find(kFieldSep, fpos);
    if (date_end == std::string_view::npos) {
      fields.push_back(first_line.substr(fpos));
      body_begin = line_end;
    } else {
      fields.push_back(first_line.substr(fpos, date_end - fpos));
      std::size_t msg_end = chunk.find(kMessageEnd, date_end + 1);
      if (msg_end == std::string_view::npos)
        throw ParseError("unterminated message field (missing 0x1D)", start + date_end, index);
      message = chunk.substr(date_end + 1, msg_end - date_end - 1);
      body_begin = msg_end + 1;
    }

    CommitRecord rec;
    const std::string_view sha = text::trim(fields[0]);
    if (!is_valid_sha(sha)) throw ParseError("invalid sha", start, index);
    rec.sha = std::string(sha);
    rec.author_name = text::sanitize_utf8(fields[1]);
    rec.author_email = text::ascii_lower(text::sanitize_utf8(text::trim(fields[2])));
    auto ts = text::parse_int<std::int64_t>(text::trim(fields[3]));
    if (!ts || *ts < kMinTimestamp || *ts > kMaxTimestamp)
      throw ParseError("invalid unix timestamp", start, index);
    rec.timestamp_utc = *ts;

    std::string_view date = text::trim(fields[4]);
    std::size_t last_space = date.find_last_of(' ');
    std::string_view offset_str =
        last_space == std::string_view::npos ? date : date.substr(last_space + 1);
    auto offset = parse_tz_offset(offset_str);
    if (!offset) throw ParseError("invalid offset string '" + std::string(offset_str) + "'", start, index);
    rec.tz_offset_minutes = *offset;

    std::string_view msg = message;
    while (!msg.empty() && (msg.back() == '\n' || msg.back() == '\r')) msg.remove_suffix(1);
    rec.message = text::sanitize_utf8(msg);

    NumstatTotals totals;
    std::string_view body = chunk.substr(std::min(body_begin, chunk.size()));
    std::size_t line_offset = start + (chunk.size() - body.size());
    for (std::string_view line : text::split(body, '\n')) {
      std::string_view l = line;
      if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
      if (!text::trim(l).empty()) parse_numstat_line(l, totals, line_offset, index);
      line_offset += line.size() + 1;
    }
    if (totals.any_text) {
      rec.lines_added = totals.added;
      rec.lines_deleted = totals.deleted;
    } else if (totals.any_binary) {
      rec.lines_added = rec.lines_deleted = -1;
    }

    if (!seen.insert(rec.sha).second) throw DuplicateRecordError(rec.sha);
    records.push_back(std::move(rec));
    pos = end;
    ++index;
  }
  return records;
}

inline std::vector<CommitRecord> parse_git_log(std::istream& in) {
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_git_log(std::string_view(data));
}

// ---------------------------------------------------------------------------
// Canonical JSON-lines format.

inline void validate(const CommitRecord& r) {
  if (!is_valid_sha(r.sha)) throw Error(ErrorCode::schema, "invalid sha '" + r.sha + "'");
  if (r.tz_offset_minutes < -kMaxOffsetMinutes || r.tz_offset_minutes > kMaxOffsetMinutes)
    throw Error(ErrorCode::schema, "tz_offset_minutes out of range in " + r.sha);
  if (r.timestamp_utc < kMinTimestamp || r.timestamp_utc > kMaxTimestamp)
    throw Error(ErrorCode::schema, "timestamp_utc out of range in " + r.sha);
  if (r.lines_added < -1 || r.lines_deleted < -1)
    throw Error(ErrorCode::schema, "negative line count in " + r.sha);
  if (text::ascii_lower(r.author_email) != r.author_email)
    throw Error(ErrorCode::schema, "author_email not lowercase in " + r.sha);
}

inline nlohmann::ordered_json to_json(const CommitRecord& r) {
  nlohmann::ordered_json j;
  j["sha"] = r.sha;
  j["author_name"] = r.author_name;
  j["author_email"] = r.author_email;
  j["timestamp_utc"] = r.timestamp_utc;
  j["tz_offset_minutes"] = r.tz_offset_minutes;
  j["lines_added"] = r.lines_added;
  j["lines_deleted"] = r.lines_deleted;
  j["message"] = r.message;
  return j;
}

inline void write_canonical(const std::vector<CommitRecord>& records, std::ostream& out) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

inline std::string write_canonical(const std::vector<CommitRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

inline CommitRecord commit_from_json(const nlohmann::json& j, std::size_t line_no) {
  const std::string where = "line " + std::to_string(line_no) + ": ";
  if (!j.is_object()) throw Error(ErrorCode::schema, where + "expected a JSON object");
  static const std::array<std::string_view, 8> kFields = {
      "sha", "author_name", "author_email", "timestamp_utc",
      "tz_offset_minutes", "lines_added", "lines_deleted", "message"};
  for (const auto& [key, _] : j.items())
    if (std::find(kFields.begin(), kFields.end(), key) == kFields.end())
      throw Error(ErrorCode::schema, where + "unknown field '" + key + "'");
  auto field = [&](std::string_view name) -> const nlohmann::json& {
    auto it = j.find(std::string(name));
    if (it == j.end()) throw Error(ErrorCode::schema, where + "missing field '" + std::string(name) + "'");
    return *it;
  };
  auto str = [&](std::string_view name) {
    const auto& v = field(name);
    if (!v.is_string())
      throw Error(ErrorCode::schema, where + "field '" + std::string(name) + "' must be a string");
    return v.get<std::string>();
  };
  auto integer = [&](std::string_view name) {
    const auto& v = field(name);
    if (!v.is_number_integer())
      throw Error(ErrorCode::schema, where + "field '" + std::string(name) + "' must be an integer");
    return v.get<std::int64_t>();
  };
  CommitRecord r;
  r.sha = str("sha");
  r.author_name = str("author_name");
  r.author_email = str("author_email");
  r.timestamp_utc = integer("timestamp_utc");
  const std::int64_t off = integer("tz_offset_minutes");
  if (off < -kMaxOffsetMinutes || off > kMaxOffsetMinutes)
    throw Error(ErrorCode::schema, where + "tz_offset_minutes out of range");
  r.tz_offset_minutes = static_cast<int>(off);
  r.lines_added = integer("lines_added");
  r.lines_deleted = integer("lines_deleted");
  r.message = str("message");
  try {
    validate(r);
  } catch (const Error& e) {
    throw Error(ErrorCode::schema, where + e.what());
  }
  return r;
}

inline std::vector<CommitRecord> read_canonical(std::istream& in) {
  std::vector<CommitRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::schema, "line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    CommitRecord r = commit_from_json(j, line_no);
    if (!seen.insert(r.sha).second) throw DuplicateRecordError(r.sha);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace paydev
