#include <orc/report.hpp>

#include <orc/error.hpp>

#include <fmt/format.h>

#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>

#ifndef ORC_BUILD_FLAGS
#define ORC_BUILD_FLAGS "unknown"
#endif

namespace orc {

namespace {

constexpr std::string_view kEdgeHeader = "edge_id,cardinality,agg,curvature,estimator,time_ns,skip_reason";
constexpr std::string_view kNodeHeader = "node_id,kappa_n,kappa_e,skip_reason";

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

std::vector<std::string> split_row(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    if (quoted) throw ParseError(line_no, "unterminated quoted field");
    return fields;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line_no, std::string_view column) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(line_no, "bad " + std::string(column) + " value '" + text + "'");
    }
    return value;
}

std::optional<double> parse_optional(const std::string& text, std::size_t line_no, std::string_view column) {
    if (text.empty()) return std::nullopt;
    return parse_number<double>(text, line_no, column);
}

template <typename RowFn>
void read_rows(std::istream& in, std::string_view header, std::size_t columns, RowFn&& on_row) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw ParseError(1, "unexpected header '" + line + "'");
    for (std::size_t n = 2; std::getline(in, line); ++n) {
        if (line.empty()) continue;
        auto fields = split_row(line, n);
        if (fields.size() != columns) throw ParseError(n, "expected " + std::to_string(columns) + " columns");
        on_row(n, fields);
    }
}

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void write_edge_csv(std::ostream& out, const CurvatureReport& report) {
    out << kEdgeHeader << '\n';
    const auto estimator = to_string(report.config.estimator);
    for (const auto& r : report.edges) {
        out << r.id << ',' << r.cardinality << ',' << optional_field(r.agg) << ',' << optional_field(r.curvature) << ','
            << estimator << ',' << r.time_ns << ',' << quote(r.skip_reason) << '\n';
    }
}

void write_node_csv(std::ostream& out, const CurvatureReport& report) {
    out << kNodeHeader << '\n';
    for (const auto& r : report.nodes) {
        out << r.id << ',' << optional_field(r.kappa_neighborhood) << ',' << optional_field(r.kappa_edges) << ','
            << quote(r.skip_reason) << '\n';
    }
}

EdgeCsv read_edge_csv(std::istream& in) {
    EdgeCsv csv;
    read_rows(in, kEdgeHeader, 7, [&](std::size_t n, const std::vector<std::string>& f) {
        EdgeRecord r;
        r.id = parse_number<EdgeId>(f[0], n, "edge_id");
        r.cardinality = parse_number<std::size_t>(f[1], n, "cardinality");
        r.agg = parse_optional(f[2], n, "agg");
        r.curvature = parse_optional(f[3], n, "curvature");
        try {
            csv.estimators.push_back(parse_estimator_kind(f[4]));
        } catch (const Error& e) {
            throw ParseError(n, e.what());
        }
        r.time_ns = parse_number<std::int64_t>(f[5], n, "time_ns");
        r.skip_reason = f[6];
        csv.records.push_back(std::move(r));
    });
    return csv;
}

std::vector<NodeRecord> read_node_csv(std::istream& in) {
    std::vector<NodeRecord> out;
    read_rows(in, kNodeHeader, 4, [&](std::size_t n, const std::vector<std::string>& f) {
        NodeRecord r;
        r.id = parse_number<VertexId>(f[0], n, "node_id");
        r.kappa_neighborhood = parse_optional(f[1], n, "kappa_n");
        r.kappa_edges = parse_optional(f[2], n, "kappa_e");
        r.skip_reason = f[3];
        out.push_back(std::move(r));
    });
    return out;
}

nlohmann::json config_json(const CurvatureConfig& c) {
    return {
        {"measure", to_string(c.measure)},
        {"agg", to_string(c.agg)},
        {"estimator", to_string(c.estimator)},
        {"alpha", c.alpha},
        {"overlap_mode", to_string(c.bound.overlap)},
        {"exact_max_support", c.exact.max_support},
        {"sinkhorn", {{"reg", c.sinkhorn.reg}, {"max_iters", c.sinkhorn.max_iters}, {"threshold", c.sinkhorn.threshold},
                      {"cost_normalisation", "divide by max cost"}}},
        {"count_singletons_in_node_degree", c.count_singletons_in_node_degree},
        {"threads", c.threads},
    };
}

nlohmann::json report_summary_json(const CurvatureReport& report) {
    std::size_t edges_ok = 0, nodes_ok = 0;
    double kappa_sum = 0.0;
    std::int64_t edge_ns = 0;
    for (const auto& r : report.edges) {
        edge_ns += r.time_ns;
        if (r.curvature) {
            ++edges_ok;
            kappa_sum += *r.curvature;
        }
    }
    for (const auto& r : report.nodes) nodes_ok += r.kappa_neighborhood.has_value();
    return {
        {"schema_version", kSchemaVersion},
        {"config", config_json(report.config)},
        {"edges", {{"total", report.edges.size()}, {"computed", edges_ok}, {"skipped", report.edges.size() - edges_ok}}},
        {"nodes", {{"total", report.nodes.size()}, {"computed", nodes_ok}}},
        {"mean_edge_curvature", edges_ok ? nlohmann::json(kappa_sum / static_cast<double>(edges_ok)) : nlohmann::json()},
        {"edge_time_ns", edge_ns},
        {"total_time_ns", report.total_time_ns},
    };
}

std::string build_flags() { return ORC_BUILD_FLAGS; }

}  // namespace orc
