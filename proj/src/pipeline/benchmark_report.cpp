#include "fairrank/pipeline/benchmark_report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string_view>

#include "fairrank/errors.hpp"
#include "fairrank/ingest/text_table.hpp"
#include "fairrank/metrics/report.hpp"

namespace fairrank::pipeline {

namespace {

using namespace std::string_view_literals;

struct Layout {
  std::string_view title;
  std::vector<std::string_view> columns;
  std::vector<std::string_view> own;  // metrics that justify printing the table
};

const std::array<Layout, 3>& layouts() {
  static const std::array<Layout, 3> kLayouts = {
      Layout{"Ranking accuracy and fairness",
             {"ndcg"sv, "mrr"sv, "hr"sv, "mmf"sv, "gini"sv, "entropy"sv},
             {"ndcg"sv, "mrr"sv, "hr"sv}},
      Layout{"Re-ranking quality and fairness",
             {"r_ndcg"sv, "u_loss"sv, "mmf"sv, "gini"sv, "entropy"sv, "min_max_ratio"sv},
             {"r_ndcg"sv, "u_loss"sv, "min_max_ratio"sv}},
      Layout{"Diversity", {"err_ia"sv, "alpha_ndcg"sv, "s_recall"sv},
             {"err_ia"sv, "alpha_ndcg"sv, "s_recall"sv}},
  };
  return kLayouts;
}

bool requested(const BenchmarkReport& r, std::string_view key) {
  return std::find(r.metrics.begin(), r.metrics.end(), key) != r.metrics.end();
}

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

// Display width in code points (headers may carry arrows).
std::size_t width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

std::string pad(const std::string& s, std::size_t w, bool left) {
  const std::string fill(w > width(s) ? w - width(s) : 0, ' ');
  return left ? s + fill : fill + s;
}

}  // namespace

std::string format_metric(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  std::string out(buf);
  if (out == "-0.0000") out = "0.0000";
  return out;
}

std::string render_records(const BenchmarkReport& report) {
  std::ostringstream out;
  for (const auto& row : report.rows) {
    out << "{\"task\":" << quote(report.task) << ",\"stage\":" << quote(report.stage)
        << ",\"dataset\":" << quote(report.dataset) << ",\"model\":" << quote(row.model)
        << ",\"k\":" << row.k << ",\"seed\":" << report.seed << ",\"metrics\":{";
    bool first = true;
    for (const auto& key : report.metrics) {
      const auto it = row.values.find(key);
      if (it == row.values.end()) continue;
      const auto info = metrics::find_metric(key);
      out << (first ? "" : ",") << quote(std::string(info ? info->display : key)) << ":"
          << format_metric(it->second);
      first = false;
    }
    out << "}}\n";
  }
  return out.str();
}

std::string render_table(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "task: " << report.task << "  stage: " << report.stage << "  dataset: " << report.dataset
      << "  seed: " << report.seed << "\n";
  for (const auto& [key, value] : report.summary) out << key << ": " << value << "\n";

  for (const auto& layout : layouts()) {
    std::vector<std::string_view> cols;
    for (auto c : layout.columns) {
      if (requested(report, c)) cols.push_back(c);
    }
    const bool own = std::any_of(layout.own.begin(), layout.own.end(),
                                 [&](std::string_view m) { return requested(report, m); });
    if (cols.empty() || !own || report.rows.empty()) continue;

    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header{"Model", "K"};
    for (auto c : cols) {
      const auto info = metrics::find_metric(c);
      header.push_back(std::string(info->display) +
                       (info->direction == metrics::Direction::higher_is_better ? "↑" : "↓"));
    }
    grid.push_back(header);
    for (const auto& row : report.rows) {
      std::vector<std::string> line{row.model, std::to_string(row.k)};
      for (auto c : cols) {
        const auto it = row.values.find(std::string(c));
        line.push_back(it == row.values.end() ? "-" : format_metric(it->second));
      }
      grid.push_back(line);
    }
    std::vector<std::size_t> w(header.size(), 0);
    for (const auto& line : grid) {
      for (std::size_t j = 0; j < line.size(); ++j) w[j] = std::max(w[j], width(line[j]));
    }
    out << "\n" << layout.title << "\n";
    for (const auto& line : grid) {
      for (std::size_t j = 0; j < line.size(); ++j) {
        out << (j ? "  " : "") << pad(line[j], w[j], j == 0);
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string render_allocations(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "model\tk\taxis\tmode\tgroup\tutility\n";
  for (const auto& a : report.allocations) {
    for (const auto& [group, value] : a.groups) {
      out << a.model << '\t' << a.k << '\t' << a.axis << '\t' << a.mode << '\t' << group << '\t'
          << format_metric(value) << '\n';
    }
  }
  return out.str();
}

void emit_report(const BenchmarkReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  ingest::write_text(dir / "records.jsonl", render_records(report));
  ingest::write_text(dir / "table.txt", render_table(report));
  ingest::write_text(dir / "allocations.tsv", render_allocations(report));
  ingest::write_text(dir / "config.yaml", report.config_snapshot);
  char buf[64];
  std::snprintf(buf, sizeof buf, "wall_seconds\t%.3f\n", report.wall_seconds);
  ingest::write_text(dir / "timing.txt", buf);
}

}  // namespace fairrank::pipeline
