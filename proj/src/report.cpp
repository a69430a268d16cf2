#include "lattice/report.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>

namespace lattice {

nlohmann::ordered_json make_report(const std::string& command) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["kind"] = "report";
    doc["command"] = command;
    return doc;
}

nlohmann::ordered_json complex_json(const cplx& z) {
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

nlohmann::ordered_json residual_report_json(const std::string& kind, const ResidualReport& r) {
    nlohmann::ordered_json doc;
    doc["kind"] = kind;
    doc["max_abs_residual"] = r.max_abs_residual;
    doc["worst_assignment"] = r.worst_assignment;
    doc["worst_label"] = r.worst_label;
    doc["evaluations"] = r.evaluations;
    return doc;
}

std::string render_report(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

void write_report(const nlohmann::ordered_json& doc, const std::string& path) {
    const std::string text = render_report(doc);
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace lattice
