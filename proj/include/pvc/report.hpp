#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pvc/core.hpp"
#include "pvc/identities.hpp"

namespace pvc {

using ordered_json = nlohmann::ordered_json;

/// Shortest round-trip decimal form; keeps report files byte-stable.
std::string num_str(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    size_t width_;
};

/// CSV (point_re, point_im, lhs_re, lhs_im, rhs_re, rhs_im, residual) plus a
/// JSON summary {max_residual, verdict, tolerance, nodes}.
void write_identity_report(const IdentityReport& rep, const std::string& csv_path,
                           const std::string& json_path, const ordered_json& meta,
                           const std::string& verdict);

void write_json(const ordered_json& doc, const std::string& path);

} // namespace pvc
