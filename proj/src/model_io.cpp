#include "stochcirc/model_io.hpp"

#include <stdexcept>

namespace stochcirc {

using nlohmann::json;

namespace {

json coefficients(const ScalarFunction& f) {
    if (!f.is_polynomial()) throw std::invalid_argument("element characteristics must be polynomials");
    json arr = json::array();
    for (double c : f.coefficients()) arr.push_back(c);
    if (arr.empty()) arr.push_back(0.0);
    return arr;
}

ScalarFunction poly_from(const json& arr, Interval d) {
    return ScalarFunction::polynomial(arr.get<std::vector<double>>(), d);
}

json drive_to_json(const ScalarFunction& e) {
    if (e.is_zero()) return {{"form", "zero"}};
    if (e.is_constant()) return {{"form", "const"}, {"value", e.constant_value()}};
    if (e.coefficients().empty() && e.sinusoids().size() == 1) {
        const auto& s = e.sinusoids().front();
        return {{"form", "sin"}, {"amp", s.amplitude}, {"omega", s.omega}, {"phase", s.phase}};
    }
    return {{"form", "general"}, {"function", function_to_json(e)}};
}

ScalarFunction drive_from_json(const json& j) {
    const auto form = j.at("form").get<std::string>();
    const Interval time_domain = kTimeDomain;
    if (form == "zero") return ScalarFunction::zero(time_domain);
    if (form == "const") return ScalarFunction::constant(j.at("value").get<double>(), time_domain);
    if (form == "sin") {
        return ScalarFunction::sinusoid(j.at("amp").get<double>(), j.at("omega").get<double>(),
                                        j.at("phase").get<double>(), time_domain);
    }
    if (form == "general") return function_from_json(j.at("function"), time_domain);
    throw std::invalid_argument("unknown drive form '" + form + "'");
}

}  // namespace

json function_to_json(const ScalarFunction& f) {
    json sines = json::array();
    for (const auto& s : f.sinusoids()) sines.push_back({{"amp", s.amplitude}, {"omega", s.omega}, {"phase", s.phase}});
    json coeffs = json::array();
    for (double c : f.coefficients()) coeffs.push_back(c);
    return {{"coefficients", coeffs}, {"sinusoids", sines}};
}

ScalarFunction function_from_json(const json& j, Interval domain) {
    ScalarFunction f = ScalarFunction::polynomial(j.value("coefficients", std::vector<double>{}), domain);
    for (const auto& s : j.value("sinusoids", json::array())) {
        f = f + ScalarFunction::sinusoid(s.at("amp").get<double>(), s.at("omega").get<double>(),
                                         s.at("phase").get<double>(), domain);
    }
    return f;
}

json model_to_json(const PhaseSpaceModel& model) {
    const CircuitSpec& s = model.spec();
    json doc;
    doc["format"] = kModelFormat;
    doc["domain"] = {s.domain.lo, s.domain.hi};
    doc["inductor"] = {{"L", coefficients(s.inductance)}};
    if (s.capacitance) {
        doc["capacitor"] = {{"C", coefficients(*s.capacitance)}};
    } else if (s.potential_derivative) {
        doc["capacitor"] = {{"dPhi", coefficients(*s.potential_derivative)}};
    } else {
        doc["capacitor"] = nullptr;
    }
    doc["resistor"] = s.resistance ? json{{"R", coefficients(*s.resistance)}} : json(nullptr);
    doc["memristor"] = s.memristance ? json{{"M", coefficients(*s.memristance)}} : json(nullptr);
    doc["dissipator"] = s.topology == DissipatorTopology::series ? "series" : "parallel";
    doc["drive"] = drive_to_json(s.drive);
    doc["flags"] = {{"series", model.is_series()}, {"constant_inductance", model.constant_inductance().has_value()}};
    doc["derived"] = {{"dissipation", dissipation_formula(model)}};
    return doc;
}

CircuitSpec spec_from_json(const json& doc) {
    if (doc.contains("format") && doc.at("format").get<std::string>() != kModelFormat) {
        throw std::invalid_argument("unsupported model format '" + doc.at("format").get<std::string>() + "'");
    }
    CircuitSpec s;
    if (doc.contains("domain")) {
        const auto d = doc.at("domain").get<std::vector<double>>();
        if (d.size() != 2 || !(d[0] < d[1])) throw std::invalid_argument("domain must be [lo, hi] with lo < hi");
        s.domain = {d[0], d[1]};
    }
    s.inductance = poly_from(doc.at("inductor").at("L"), s.domain);
    if (doc.contains("capacitor") && !doc.at("capacitor").is_null()) {
        const json& c = doc.at("capacitor");
        if (c.contains("C")) s.capacitance = poly_from(c.at("C"), s.domain);
        else if (c.contains("dPhi")) s.potential_derivative = poly_from(c.at("dPhi"), s.domain);
        else throw std::invalid_argument("capacitor needs 'C' or 'dPhi'");
    }
    if (doc.contains("resistor") && !doc.at("resistor").is_null()) s.resistance = poly_from(doc.at("resistor").at("R"), s.domain);
    if (doc.contains("memristor") && !doc.at("memristor").is_null()) s.memristance = poly_from(doc.at("memristor").at("M"), s.domain);
    const std::string topo = doc.value("dissipator", "series");
    if (topo == "series") s.topology = DissipatorTopology::series;
    else if (topo == "parallel") s.topology = DissipatorTopology::parallel;
    else throw std::invalid_argument("dissipator must be 'series' or 'parallel'");
    s.drive = doc.contains("drive") ? drive_from_json(doc.at("drive")) : drive_from_json(json{{"form", "zero"}});
    return s;
}

}  // namespace stochcirc
