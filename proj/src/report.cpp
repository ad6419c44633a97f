#include "pvc/report.hpp"

#include <charconv>

namespace pvc {

std::string num_str(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), width_(header.size()) {
    if (!out_) throw InputError("cannot write " + path);
    for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << num_str(values[i]);
    out_ << '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
}

void write_identity_report(const IdentityReport& rep, const std::string& csv_path,
                           const std::string& json_path, const ordered_json& meta,
                           const std::string& verdict) {
    CsvWriter csv(csv_path,
                  {"point_re", "point_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual"});
    for (size_t i = 0; i < rep.points.size(); ++i)
        csv.row({rep.points[i].real(), rep.points[i].imag(), rep.lhs[i].real(),
                 rep.lhs[i].imag(), rep.rhs[i].real(), rep.rhs[i].imag(), rep.residuals[i]});
    ordered_json doc = meta;
    doc["max_residual"] = rep.max_residual;
    doc["verdict"] = verdict;
    doc["tolerance"] = rep.tolerance;
    doc["nodes"] = rep.nodes;
    doc["points"] = rep.points.size();
    doc["inconclusive"] = rep.inconclusive;
    write_json(doc, json_path);
}

void write_json(const ordered_json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << doc.dump(2) << '\n';
}

} // namespace pvc
