#include "rgc/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rgc/error.hpp"

namespace rgc {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return trim(hash == std::string::npos ? line : line.substr(0, hash));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_number(const std::string& text, double& value) {
  if (text.empty()) return false;
  char* end = nullptr;
  value = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size();
}

int parse_label(const std::string& text, std::size_t line_no) {
  double v = 0.0;
  if (!parse_number(text, v) || (v != -1.0 && v != 0.0 && v != 1.0)) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                       ": label '" + text +
                                       "' is not one of -1, 0, +1");
  }
  return static_cast<int>(v);
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::string format_double(double value) {
  // Shortest representation that round-trips.
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, res.ptr);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "file not found: " + path.string());
  return is;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return os;
}

EdgeListFile parse_edge_list(std::istream& is) {
  EdgeListFile out;
  Index declared = -1;
  Index max_index = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    if (body.rfind("n=", 0) == 0) {
      double v = 0.0;
      if (!parse_number(trim(body.substr(2)), v) || v < 1 || v != std::floor(v)) {
        parse_error(line_no, "bad node-count header '" + body + "'");
      }
      declared = static_cast<Index>(v);
      continue;
    }
    std::istringstream fields(body);
    std::string a, b, c, extra;
    if (!(fields >> a >> b >> c) || (fields >> extra)) {
      parse_error(line_no, "expected 'i<TAB>j<TAB>w', got '" + body + "'");
    }
    double i = 0, j = 0, w = 0;
    if (!parse_number(a, i) || !parse_number(b, j) || !parse_number(c, w) ||
        i < 0 || j < 0 || i != std::floor(i) || j != std::floor(j)) {
      parse_error(line_no, "malformed edge '" + body + "'");
    }
    out.edges.push_back({static_cast<Index>(i), static_cast<Index>(j), w});
    max_index = std::max({max_index, static_cast<Index>(i), static_cast<Index>(j)});
  }
  out.n = declared >= 0 ? declared : max_index + 1;
  if (out.n < 1) throw Error(ErrorCode::kParse, "edge list is empty");
  if (max_index >= out.n) {
    throw Error(ErrorCode::kParse, "edge index " + std::to_string(max_index) +
                                       " exceeds declared n = " +
                                       std::to_string(out.n));
  }
  return out;
}

EdgeListFile read_edge_list(const std::filesystem::path& path) {
  auto is = open_input(path);
  return parse_edge_list(is);
}

void write_edge_list(std::ostream& os, const WeightedGraph& graph) {
  os << "n=" << graph.size() << '\n';
  for (const Edge& e : graph.edges()) {
    os << e.i << '\t' << e.j << '\t' << format_double(e.w) << '\n';
  }
}

PointFile parse_points_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  bool has_label = false;
  std::size_t columns = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    const auto fields = split_csv(body);
    if (first) {
      first = false;
      double probe = 0.0;
      if (!parse_number(fields.front(), probe)) {
        has_label = fields.back() == "label";
        columns = fields.size();
        continue;
      }
      columns = fields.size();
    }
    if (fields.size() != columns) {
      parse_error(line_no, "expected " + std::to_string(columns) + " columns");
    }
    const std::size_t numeric = has_label ? columns - 1 : columns;
    std::vector<double> row(numeric);
    for (std::size_t c = 0; c < numeric; ++c) {
      if (!parse_number(fields[c], row[c])) {
        parse_error(line_no, "non-numeric value '" + fields[c] + "'");
      }
    }
    if (has_label) labels.push_back(parse_label(fields.back(), line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kParse, "point file has no rows");
  PointFile out;
  const auto dim = static_cast<Index>(rows.front().size());
  out.points.coords.resize(static_cast<Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Index c = 0; c < dim; ++c) out.points.coords(static_cast<Index>(r), c) = rows[r][c];
  }
  if (has_label) out.labels = std::move(labels);
  return out;
}

PointFile read_points_csv(const std::filesystem::path& path) {
  auto is = open_input(path);
  return parse_points_csv(is);
}

void write_points_csv(std::ostream& os, const PointCloud& points,
                      const std::vector<int>* labels) {
  for (Index c = 0; c < points.dim(); ++c) os << (c ? "," : "") << 'x' << c;
  if (labels) os << ",label";
  os << '\n';
  for (Index r = 0; r < points.size(); ++r) {
    for (Index c = 0; c < points.dim(); ++c) {
      os << (c ? "," : "") << format_double(points.coords(r, c));
    }
    if (labels) os << ',' << (*labels)[static_cast<std::size_t>(r)];
    os << '\n';
  }
}

std::vector<std::pair<Index, int>> parse_label_pairs(std::istream& is) {
  std::vector<std::pair<Index, int>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    const auto fields = split_csv(body);
    double node = 0.0;
    if (fields.size() != 2) parse_error(line_no, "expected 'node,label'");
    if (!parse_number(fields[0], node)) {
      if (out.empty()) continue;  // header
      parse_error(line_no, "non-numeric node '" + fields[0] + "'");
    }
    if (node < 0 || node != std::floor(node)) {
      parse_error(line_no, "bad node index '" + fields[0] + "'");
    }
    out.emplace_back(static_cast<Index>(node), parse_label(fields[1], line_no));
  }
  return out;
}

std::vector<std::pair<Index, int>> read_label_pairs(
    const std::filesystem::path& path) {
  auto is = open_input(path);
  return parse_label_pairs(is);
}

void write_label_pairs(std::ostream& os, const std::vector<int>& labels,
                       bool include_zeros) {
  os << "node,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 || include_zeros) os << i << ',' << labels[i] << '\n';
  }
}

void write_scores_csv(std::ostream& os, const ClassifierSolution& solution) {
  const std::vector<int> labels = predict(solution);
  os << "node,score,label\n";
  for (Index i = 0; i < solution.f_star.size(); ++i) {
    os << i << ',' << format_double(solution.f_star[i]) << ',' << labels[i]
       << '\n';
  }
}

}  // namespace rgc
