#include "mqg/report.hpp"

#include <sstream>

namespace mqg {

namespace {

const char* kVersion = "0.1.0";

}  // namespace

json coeff_to_json(const Coefficient& c) {
    json terms = json::array();
    for (auto& [mono, r] : c.num) {
        json m = json::object();
        for (auto& [sym, form] : mono.exps) {
            if (!form.const_part.is_zero()) m[sym.to_string()] = form.const_part.to_string();
            for (auto& [lab, h] : form.r_coeffs)
                m[sym.to_string() + "@r" + std::to_string(lab)] = h.to_string();
        }
        terms.push_back(json{{"coef", rational_to_string(r)}, {"mono", m}});
    }
    return json{{"num", terms}, {"lampow", c.lambda_pow}};
}

json ncpoly_to_json(const NCPoly& p) {
    json terms = json::array();
    for (auto& [w, c] : p.terms) {
        json word = json::array();
        for (auto g : w) word.push_back(g.to_string());
        terms.push_back(json{{"word", word}, {"coef", coeff_to_json(c)}});
    }
    return json{{"terms", terms}};
}

json module_to_json(const ModuleElement& v) {
    json weights = json::array();
    for (auto& w : v.weights) weights.push_back(w.to_string());
    json terms = json::array();
    for (auto& [e, c] : v.terms)
        terms.push_back(json{{"exps", e}, {"coef", coeff_to_json(c)}});
    return json{{"weights", weights}, {"restricted", v.restricted}, {"terms", terms}};
}

void attach_value(json& j, const Coefficient& c, const EvalContext& eval) {
    if (!eval.active) return;
    try {
        j["value"] = rational_to_string(specialize(c, eval.params, eval.r_values));
    } catch (const std::exception& e) {
        j["value_error"] = e.what();
    }
}

void Report::add(const std::string& name, const std::string& status, json payload) {
    payload["name"] = name;
    payload["status"] = status;
    checks.push_back(std::move(payload));
    if (status == "pass")
        ++pass;
    else if (status == "fail")
        ++fail;
    else
        ++recorded;
}

json Report::to_json() const {
    return json{{"tool", "mqg"},
                {"version", kVersion},
                {"command", command},
                {"checks", checks},
                {"summary", json{{"pass", pass}, {"fail", fail}, {"recorded", recorded}}}};
}

std::string Report::to_text() const {
    std::ostringstream out;
    out << "# mqg " << kVersion << " : " << command << "\n";
    for (auto& c : checks) {
        out << "[" << c.at("status").get<std::string>() << "] " << c.at("name").get<std::string>();
        for (auto& [k, v] : c.items()) {
            if (k == "name" || k == "status") continue;
            out << "\n    " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump());
        }
        out << "\n";
    }
    out << "summary: " << pass << " pass, " << fail << " fail, " << recorded << " recorded\n";
    return out.str();
}

}  // namespace mqg
