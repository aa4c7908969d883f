#include "fairrank/ingest/canonical_io.hpp"

#include <map>
#include <nlohmann/json.hpp>
#include <string>

#include "fairrank/errors.hpp"
#include "fairrank/ingest/text_table.hpp"

namespace fairrank::ingest {

namespace fs = std::filesystem;

namespace {

constexpr const char* kFormatName = "fairrank-dataset";

void check_field(const std::string& value, const char* what, bool forbid_pipe = false) {
  if (value.empty() || value.find_first_of("\t\n\r") != std::string::npos ||
      (forbid_pipe && value.find('|') != std::string::npos)) {
    throw InvalidArgument(std::string(what) + " id '" + value + "' cannot be stored in a table");
  }
}

std::string attributes_json(const AttributeMap& attrs) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : attrs) j[k] = v;
  return j.dump();
}

AttributeMap parse_attributes(std::string_view text, const fs::path& path, std::size_t line) {
  AttributeMap out;
  try {
    auto j = nlohmann::json::parse(text);
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value().get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": bad attribute object");
  }
  return out;
}

std::string records_table(const InteractionLog& log) {
  std::string out;
  for (const auto& r : log.records) {
    check_field(r.user, "user");
    check_field(r.item, "item");
    out += r.user + '\t' + r.item + '\t' + exact_decimal(r.label) + '\t' +
           std::to_string(r.timestamp) + '\n';
  }
  return out;
}

InteractionLog read_records(const fs::path& path) {
  InteractionLog log;
  const auto lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    auto f = split_fields(lines[n], '\t');
    if (f.size() != 4) throw ParseError(path.string() + ":" + std::to_string(n + 1) + ": expected 4 fields");
    log.records.push_back({std::string(f[0]), std::string(f[1]), parse_double(f[2], path, n + 1),
                           parse_int(f[3], path, n + 1)});
  }
  return log;
}

std::map<std::string, std::string> read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.tsv";
  if (!fs::exists(path)) throw IoError("no dataset manifest in '" + dir.string() + "'");
  std::map<std::string, std::string> out;
  const auto lines = read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    auto f = split_fields(lines[n], '\t');
    if (f.size() != 2) throw ParseError(path.string() + ":" + std::to_string(n + 1) + ": bad manifest line");
    out[std::string(f[0])] = std::string(f[1]);
  }
  return out;
}

const std::string& manifest_value(const std::map<std::string, std::string>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw ParseError("dataset manifest lacks '" + key + "'");
  return it->second;
}

}  // namespace

void write_dataset(const SplitDataset& dataset, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  const Catalog& cat = dataset.catalog;
  std::string groups;
  for (GroupIndex g = 0; g < cat.num_groups(); ++g) {
    check_field(cat.group_id(g), "group", true);
    groups += cat.group_id(g) + '\n';
  }
  std::string users;
  for (UserIndex u = 0; u < cat.num_users(); ++u) {
    check_field(cat.user_id(u), "user");
    users += cat.user_id(u) + '\t' + attributes_json(cat.user_attributes(u)) + '\n';
  }
  std::string items;
  for (ItemIndex i = 0; i < cat.num_items(); ++i) {
    check_field(cat.item_id(i), "item");
    items += cat.item_id(i) + '\t';
    bool first = true;
    for (GroupIndex g : cat.groups_of(i)) {
      if (!first) items += '|';
      items += cat.group_id(g);
      first = false;
    }
    items += '\t' + attributes_json(cat.item_attributes(i)) + '\n';
  }

  write_text(dir / "groups.tsv", groups);
  write_text(dir / "users.tsv", users);
  write_text(dir / "items.tsv", items);
  if (cat.has_user_groups()) {
    std::string ug;
    for (UserIndex u = 0; u < cat.num_users(); ++u) {
      if (auto g = cat.group_of_user(u)) ug += cat.user_id(u) + '\t' + cat.group_id(*g) + '\n';
    }
    write_text(dir / "user_groups.tsv", ug);
  }
  write_text(dir / "train.tsv", records_table(dataset.train));
  write_text(dir / "valid.tsv", records_table(dataset.valid));
  write_text(dir / "test.tsv", records_table(dataset.test));

  const auto& spec = dataset.split_spec;
  std::string manifest;
  manifest += std::string("format\t") + kFormatName + '\n';
  manifest += "version\t" + std::to_string(kDatasetFormatVersion) + '\n';
  manifest += "min_interactions\t" + std::to_string(spec.min_interactions) + '\n';
  manifest += "ratio_train\t" + exact_decimal(spec.ratios[0]) + '\n';
  manifest += "ratio_valid\t" + exact_decimal(spec.ratios[1]) + '\n';
  manifest += "ratio_test\t" + exact_decimal(spec.ratios[2]) + '\n';
  manifest += "has_user_groups\t" + std::string(cat.has_user_groups() ? "1" : "0") + '\n';
  manifest += "train_records\t" + std::to_string(dataset.train.size()) + '\n';
  manifest += "valid_records\t" + std::to_string(dataset.valid.size()) + '\n';
  manifest += "test_records\t" + std::to_string(dataset.test.size()) + '\n';
  // manifest last: a directory without one is treated as incomplete
  write_text(dir / "manifest.tsv", manifest);
}

SplitDataset read_dataset(const fs::path& dir) {
  const auto manifest = read_manifest(dir);
  if (manifest_value(manifest, "format") != kFormatName) {
    throw VersionError("'" + dir.string() + "' is not a " + kFormatName + " directory");
  }
  if (manifest_value(manifest, "version") != std::to_string(kDatasetFormatVersion)) {
    throw VersionError("dataset version " + manifest_value(manifest, "version") +
                       " is not supported (expected " + std::to_string(kDatasetFormatVersion) + ")");
  }
  const fs::path mpath = dir / "manifest.tsv";

  SplitDataset out;
  out.split_spec.min_interactions =
      static_cast<std::size_t>(parse_int(manifest_value(manifest, "min_interactions"), mpath, 0));
  out.split_spec.ratios = {parse_double(manifest_value(manifest, "ratio_train"), mpath, 0),
                           parse_double(manifest_value(manifest, "ratio_valid"), mpath, 0),
                           parse_double(manifest_value(manifest, "ratio_test"), mpath, 0)};

  Catalog::Spec spec;
  for (const auto& line : read_lines(dir / "groups.tsv")) {
    if (!line.empty()) spec.groups.push_back(line);
  }
  {
    const fs::path path = dir / "users.tsv";
    const auto lines = read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
      if (lines[n].empty()) continue;
      auto f = split_fields(lines[n], '\t');
      if (f.size() != 2) throw ParseError(path.string() + ":" + std::to_string(n + 1) + ": expected 2 fields");
      spec.users.push_back({std::string(f[0]), parse_attributes(f[1], path, n + 1)});
    }
  }
  {
    const fs::path path = dir / "items.tsv";
    const auto lines = read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
      if (lines[n].empty()) continue;
      auto f = split_fields(lines[n], '\t');
      if (f.size() != 3) throw ParseError(path.string() + ":" + std::to_string(n + 1) + ": expected 3 fields");
      std::string id(f[0]);
      auto& groups = spec.item_groups[id];
      for (auto g : split_fields(f[1], '|')) groups.emplace_back(g);
      spec.items.push_back({id, parse_attributes(f[2], path, n + 1)});
    }
  }
  if (manifest_value(manifest, "has_user_groups") == "1") {
    spec.user_groups.emplace();
    const fs::path path = dir / "user_groups.tsv";
    const auto lines = read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
      if (lines[n].empty()) continue;
      auto f = split_fields(lines[n], '\t');
      if (f.size() != 2) throw ParseError(path.string() + ":" + std::to_string(n + 1) + ": expected 2 fields");
      (*spec.user_groups)[std::string(f[0])] = std::string(f[1]);
    }
  }
  out.catalog = Catalog(std::move(spec));
  out.train = read_records(dir / "train.tsv");
  out.valid = read_records(dir / "valid.tsv");
  out.test = read_records(dir / "test.tsv");

  auto check_count = [&](const char* key, const InteractionLog& log) {
    if (std::to_string(log.size()) != manifest_value(manifest, key)) {
      throw ParseError(std::string("record count mismatch for ") + key + " in '" + dir.string() + "'");
    }
  };
  check_count("train_records", out.train);
  check_count("valid_records", out.valid);
  check_count("test_records", out.test);
  return out;
}

void write_scores(const ScoreMatrix& scores, const Catalog& catalog, const fs::path& path) {
  std::string out;
  out += std::string("# semantics\t") +
         (scores.semantics() == ScoreSemantics::probability ? "probability" : "raw") + '\n';
  out += "user_id\titem_id\tscore\n";
  for (UserIndex u = 0; u < scores.num_users(); ++u) {
    for (const auto& e : scores.row(u)) {
      out += catalog.user_id(u) + '\t' + catalog.item_id(e.item) + '\t' + exact_decimal(e.score) + '\n';
    }
  }
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  write_text(path, out);
}

ScoreMatrix read_scores(const fs::path& path, const Catalog& catalog) {
  const auto lines = read_lines(path);
  if (lines.size() < 2 || lines[0].rfind("# semantics\t", 0) != 0) {
    throw FormatError(path.string() + ": missing '# semantics' preamble");
  }
  const std::string semantics = lines[0].substr(12);
  ScoreSemantics sem;
  if (semantics == "probability") {
    sem = ScoreSemantics::probability;
  } else if (semantics == "raw") {
    sem = ScoreSemantics::raw;
  } else {
    throw FormatError(path.string() + ": unknown score semantics '" + semantics + "'");
  }
  std::vector<std::vector<ScoredItem>> rows(catalog.num_users());
  for (std::size_t n = 2; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    auto f = split_fields(lines[n], '\t');
    if (f.size() != 3) throw ParseError(path.string() + ":" + std::to_string(n + 1) + ": expected 3 fields");
    rows[catalog.user_index(f[0])].push_back(
        {catalog.item_index(f[1]), parse_double(f[2], path, n + 1)});
  }
  return ScoreMatrix(catalog, std::move(rows), sem);
}

}  // namespace fairrank::ingest
