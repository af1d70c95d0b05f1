#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cxhess/errors.hpp"
#include "cxhess/modulus.hpp"

namespace cxhess::modulus {

namespace {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& field) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        throw ArgumentError("read_csv: malformed number '" + field + "'");
    }
    if (used != field.size()) throw ArgumentError("read_csv: trailing characters in '" + field + "'");
    return v;
}

} // namespace

void write_csv(const ModulusCurve& curve, std::ostream& out) {
    out << "t,w\n";
    for (const auto& k : curve.knots()) out << format17(k.t) << ',' << format17(k.w) << '\n';
}

ModulusCurve read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || (line != "t,w" && line != "t,w\r")) throw ArgumentError("read_csv: expected header 't,w'");
    std::vector<Knot> knots;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ArgumentError("read_csv: expected two columns");
        knots.push_back({parse_double(line.substr(0, comma)), parse_double(line.substr(comma + 1))});
    }
    return ModulusCurve(std::move(knots));
}

std::string to_json(const ModulusCurve& curve) {
    nlohmann::json j;
    auto& arr = j["knots"] = nlohmann::json::array();
    for (const auto& k : curve.knots()) arr.push_back({k.t, k.w});
    return j.dump();
}

ModulusCurve modulus_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("modulus_from_json: ") + e.what());
    }
    if (!j.contains("knots") || !j["knots"].is_array()) throw ArgumentError("modulus_from_json: missing 'knots' array");
    std::vector<Knot> knots;
    for (const auto& k : j["knots"]) {
        if (!k.is_array() || k.size() != 2) throw ArgumentError("modulus_from_json: knot must be [t, w]");
        knots.push_back({k[0].get<double>(), k[1].get<double>()});
    }
    return ModulusCurve(std::move(knots));
}

} // namespace cxhess::modulus
