#pragma once

#include <string>

#include "json.hpp"
#include "lattice/numerics.hpp"
#include "lattice/relations.hpp"

namespace lattice {

// Every run emits one JSON document with a stable key order, so identical
// configurations produce byte-identical files. Reports carry no timestamps,
// hostnames, or thread counts.
nlohmann::ordered_json make_report(const std::string& command);

nlohmann::ordered_json complex_json(const cplx& z);

nlohmann::ordered_json residual_report_json(const std::string& kind, const ResidualReport& r);

std::string render_report(const nlohmann::ordered_json& doc);

// Writes to the path, or to stdout when path is empty.
void write_report(const nlohmann::ordered_json& doc, const std::string& path);

}  // namespace lattice
