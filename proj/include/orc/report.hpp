#pragma once

#include <orc/curvature.hpp>

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace orc {

inline constexpr int kSchemaVersion = 1;

// 17 significant digits: parses back to the identical double.
std::string format_double(double v);

// Edge CSV header:
//   edge_id,cardinality,agg,curvature,estimator,time_ns,skip_reason
// agg and curvature are empty on skipped rows.
void write_edge_csv(std::ostream& out, const CurvatureReport& report);
// Node CSV header: node_id,kappa_n,kappa_e,skip_reason
void write_node_csv(std::ostream& out, const CurvatureReport& report);

struct EdgeCsv {
    std::vector<EstimatorKind> estimators;  // one per row
    std::vector<EdgeRecord> records;
};

// Throws ParseError on a malformed header or row.
EdgeCsv read_edge_csv(std::istream& in);
std::vector<NodeRecord> read_node_csv(std::istream& in);

// Configuration, counts and timing of a curvature run.
nlohmann::json report_summary_json(const CurvatureReport& report);
nlohmann::json config_json(const CurvatureConfig& config);

// Compile-time build description recorded with benchmark output.
std::string build_flags();

}  // namespace orc
