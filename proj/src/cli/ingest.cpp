#include "clusterks/cli/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "clusterks/errors.hpp"

namespace clusterks::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

// Reads all lines, dropping a UTF-8 BOM and trailing blank lines. Line numbers
// stay 1-based positions in the file.
struct Line {
  std::size_t row;
  std::string text;
};

std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  std::size_t row = 0;
  while (std::getline(in, text)) {
    ++row;
    if (row == 1 && text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
    if (!text.empty() && text.back() == '\r') text.pop_back();
    lines.push_back({row, text});
  }
  while (!lines.empty() && trim(lines.back().text).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("empty file", 1, 1);
  return lines;
}

double parse_field(std::string_view field, std::size_t row, std::size_t column) {
  double v = 0.0;
  if (!parse_decimal(field, v)) {
    throw ParseError("cannot parse '" + std::string(field) + "' as a finite decimal", row,
                     column);
  }
  return v;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

bool parse_decimal(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out, std::chars_format::general);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

ClusteredSample parse_clustered_csv(std::istream& in) {
  const auto lines = read_lines(in);
  const auto header = split_fields(lines.front().text);
  bool with_clusters;
  if (header.size() == 2 && header[0] == "value" && header[1] == "cluster") {
    with_clusters = true;
  } else if (header.size() == 1 && header[0] == "value") {
    with_clusters = false;
  } else {
    throw ParseError("missing header: expected 'value,cluster' or 'value'", 1, 1);
  }

  std::vector<Observation> observations;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto fields = split_fields(line.text);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line.row, std::min(fields.size(), header.size()) + 1);
    }
    const double value = parse_field(fields[0], line.row, 1);
    std::string cluster;
    if (with_clusters) {
      if (fields[1].empty()) throw ParseError("empty cluster label", line.row, 2);
      cluster = std::string(fields[1]);
    } else {
      cluster = std::to_string(observations.size());
    }
    observations.push_back({value, std::move(cluster)});
  }
  if (observations.empty()) throw ParseError("no data rows after header", 1, 1);
  return ClusteredSample(std::move(observations), !with_clusters);
}

ClusteredSample ingest_clustered_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_clustered_csv(in);
}

TrajectoryPanel parse_trajectory_csv(std::istream& in, double k_lip) {
  const auto lines = read_lines(in);
  const auto header = split_fields(lines.front().text);
  if (header.size() < 2 || header[0] != "time") {
    throw ParseError("missing header: expected 'time,unit_1,...,unit_n'", 1, 1);
  }
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] != "unit_" + std::to_string(c)) {
      throw ParseError("header column must be 'unit_" + std::to_string(c) + "'", 1, c + 1);
    }
  }
  const std::size_t units = header.size() - 1;
  std::vector<double> times;
  std::vector<std::vector<double>> paths(units);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto fields = split_fields(line.text);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line.row, std::min(fields.size(), header.size()) + 1);
    }
    const double t = parse_field(fields[0], line.row, 1);
    if (t < 0.0 || t > 1.0) throw ParseError("time outside [0, 1]", line.row, 1);
    if (!times.empty() && !(t > times.back())) {
      throw ParseError("times must be strictly increasing", line.row, 1);
    }
    times.push_back(t);
    for (std::size_t u = 0; u < units; ++u) {
      const double v = parse_field(fields[u + 1], line.row, u + 2);
      if (v < 0.0 || v > 1.0) throw ParseError("value outside [0, 1]", line.row, u + 2);
      paths[u].push_back(v);
    }
  }
  if (times.empty()) throw ParseError("no data rows after header", 1, 1);
  return TrajectoryPanel(std::move(times), std::move(paths), k_lip);
}

TrajectoryPanel ingest_trajectory_csv(const std::filesystem::path& path, double k_lip) {
  auto in = open_or_throw(path);
  return parse_trajectory_csv(in, k_lip);
}

}  // namespace clusterks::cli
