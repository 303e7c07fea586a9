#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rgc/classify.hpp"
#include "rgc/graph.hpp"

namespace rgc {

// Shortest round-trip-safe text: 17 significant digits.
std::string format_double(double value);

// Edge list: one `i<TAB>j<TAB>w` per line (any whitespace accepted), 0-based,
// `#` starts a comment, optional `n=<int>` header; otherwise n = max index + 1.
struct EdgeListFile {
  Index n = 0;
  std::vector<Edge> edges;
};

EdgeListFile parse_edge_list(std::istream& is);
EdgeListFile read_edge_list(const std::filesystem::path& path);
void write_edge_list(std::ostream& os, const WeightedGraph& graph);

// Point CSV: numeric columns, optional header row; a final column named
// `label` holds values in {-1, 0, +1}.
struct PointFile {
  PointCloud points;
  std::optional<std::vector<int>> labels;
};

PointFile parse_points_csv(std::istream& is);
PointFile read_points_csv(const std::filesystem::path& path);
void write_points_csv(std::ostream& os, const PointCloud& points,
                      const std::vector<int>* labels = nullptr);

// Label CSV: `node,label` rows (header optional). Nodes not listed are
// unlabelled.
std::vector<std::pair<Index, int>> parse_label_pairs(std::istream& is);
std::vector<std::pair<Index, int>> read_label_pairs(
    const std::filesystem::path& path);
void write_label_pairs(std::ostream& os, const std::vector<int>& labels,
                       bool include_zeros = false);

// Scores CSV: `node,score,label`.
void write_scores_csv(std::ostream& os, const ClassifierSolution& solution);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace rgc
