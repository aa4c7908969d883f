#include "fairrank/ingest/interactions.hpp"

#include <algorithm>
#include <optional>

#include "fairrank/errors.hpp"
#include "fairrank/ingest/text_table.hpp"

namespace fairrank::ingest {

namespace {

std::size_t column_position(const std::vector<std::string_view>& header, const std::string& name,
                            const std::filesystem::path& path) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw SchemaError(path.string() + ": missing column '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

std::string parse_error_prefix(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

}  // namespace

InteractionLog parse_interactions(const std::filesystem::path& path, const ColumnSpec& columns) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw SchemaError(path.string() + ": missing header line");

  const auto header = split_fields(lines[0], columns.delimiter);
  const std::size_t user_col = column_position(header, columns.user, path);
  const std::size_t item_col = column_position(header, columns.item, path);
  const std::size_t label_col = column_position(header, columns.label, path);
  const std::size_t time_col = column_position(header, columns.timestamp, path);
  const std::size_t needed = std::max({user_col, item_col, label_col, time_col}) + 1;

  InteractionLog log;
  log.records.reserve(lines.size() - 1);
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    if (lines[n].empty()) continue;
    const auto fields = split_fields(lines[n], columns.delimiter);
    if (fields.size() < needed) {
      throw ParseError(parse_error_prefix(path, line_no) + "expected at least " +
                       std::to_string(needed) + " fields, got " + std::to_string(fields.size()));
    }
    if (fields[user_col].empty() || fields[item_col].empty()) {
      throw ParseError(parse_error_prefix(path, line_no) + "empty user or item id");
    }
    Interaction r;
    r.user = std::string(fields[user_col]);
    r.item = std::string(fields[item_col]);
    r.label = parse_double(fields[label_col], path, line_no);
    r.timestamp = parse_int(fields[time_col], path, line_no);
    if (r.label < 0.0 || r.label > 5.0) {
      throw ParseError(parse_error_prefix(path, line_no) + "label outside [0, 5]");
    }
    log.records.push_back(std::move(r));
  }
  return log;
}

std::map<std::string, std::vector<std::string>> parse_item_groups(const std::filesystem::path& path) {
  std::map<std::string, std::vector<std::string>> out;
  const auto lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto fields = split_fields(lines[n], '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(parse_error_prefix(path, n + 1) + "expected 'item_id<TAB>group|...'");
    }
    auto& groups = out[std::string(fields[0])];
    for (auto g : split_fields(fields[1], '|')) {
      if (g.empty()) throw ParseError(parse_error_prefix(path, n + 1) + "empty group id");
      groups.emplace_back(g);
    }
  }
  return out;
}

std::map<std::string, std::string> parse_user_groups(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  const auto lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto fields = split_fields(lines[n], '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(parse_error_prefix(path, n + 1) + "expected 'user_id<TAB>group_id'");
    }
    out[std::string(fields[0])] = std::string(fields[1]);
  }
  return out;
}

}  // namespace fairrank::ingest
