#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mmc/consistency.hpp"
#include "mmc/corpus.hpp"

namespace mmc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kLossFormat = "mmc-loss/1";
inline constexpr const char* kReportFormat = "mmc-report/1";
inline constexpr const char* kGeometryFormat = "mmc-geometry/1";

struct LossDocument {
  std::string name;
  LossMatrix loss;
  std::vector<std::string> labels;
};

/// Entries may be JSON integers or strings holding integers, p/q or exact
/// decimals. JSON floats are rejected. Syntax errors carry line and column;
/// bad entries name their (row, column) in the matrix.
LossDocument parse_loss_document(std::string_view text);

Json loss_document_json(const LossDocument& doc);
LossDocument to_document(const CorpusEntry& entry);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

struct ReportConfig {
  std::size_t cap = 10;
  std::size_t grid = 0;
  std::uint64_t seed = 0;
};

Json report_json(const LossDocument& doc, const ConsistencyReport& report,
                 const ReportConfig& config);

/// Barycentric regions, dominant-label lines and pair midpoints; k = 3 only.
Json geometry_json(const LossDocument& doc, const EnumerationLimits& limits = {});

/// Vertices of a k = 3 region in cyclic order around their centroid.
std::vector<RVector> cyclic_order(std::vector<RVector> points);

Json to_json(const Rational& x);
Json to_json(std::span<const Rational> v);

/// Deterministic text: two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace mmc
