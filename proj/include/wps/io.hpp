#pragma once

// File formats.
//
// Point sets (JSON):
//   {"weights": [q0, ...], "points": [{"re": [...], "im": [...]}, ...]}   complex
//   {"weights": [q0, ...], "points": [[x0, ...], ...]}                     rational
// with optional "labels": [...]. Integers too large for 64 bits are written
// as decimal strings.
//
// Point sets (CSV): comment lines start with '#'. "# weights: q0 q1 ..." is
// required; "# labels: last-column" marks a trailing label column. Rows are
// re0,im0,re1,im1,... (complex) or x0,x1,... (rational); the kind follows
// from the field count.
//
// Every JSON document written here carries a "meta" object with the tool
// name, version and resolved configuration.

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wps/cluster.hpp"
#include "wps/core.hpp"
#include "wps/finsler.hpp"
#include "wps/preprocess.hpp"
#include "wps/scaling_metrics.hpp"

namespace wps {

using Json = nlohmann::ordered_json;

struct PointSet {
  Weights weights;
  std::variant<std::vector<ProjPoint>, std::vector<RatProjPoint>> points;
  /// empty when the file has no labels
  std::vector<std::size_t> labels;

  bool rational() const { return points.index() == 1; }
  std::size_t size() const;
  const std::vector<ProjPoint>& complex_points() const;
  const std::vector<RatProjPoint>& rational_points() const;
};

enum class FileFormat { json, csv };

/// ".csv" selects CSV, anything else JSON.
FileFormat format_for(const std::filesystem::path& path);

/// Parse failures throw ParseError naming the line (CSV, JSON syntax) or
/// the field path (JSON structure), e.g. "points[3].re[1]".
PointSet parse_points_json(std::string_view text);
PointSet parse_points_csv(std::string_view text);
PointSet read_points(const std::filesystem::path& path);

std::string points_to_json(const PointSet& set, const Json& meta);
/// `comments` are emitted as "# " lines before the weights header.
std::string points_to_csv(const PointSet& set, const std::vector<std::string>& comments);

Json to_json(const DistanceMatrix& m);
DistanceMatrix matrix_from_json(const Json& j);

Json to_json(const Dendrogram& d);
Dendrogram dendrogram_from_json(const Json& j);

/// "index,label" rows after the comment lines.
std::string partition_to_csv(const Partition& p, const std::vector<std::string>& comments);
Partition parse_partition_csv(std::string_view text);

Json to_json(const WeightedPCAResult& r);
Json to_json(const GeodesicResult& r);
Json to_json(const ViolationReport& r);

/// Parses JSON text, mapping syntax errors to ParseError with line/column.
Json parse_json(std::string_view text, std::string_view what);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary file in the same directory, then renames it over
/// `path`, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace wps
