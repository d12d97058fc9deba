#pragma once

#include <json.hpp>

#include "mqg/rep.hpp"

namespace mqg {

using json = nlohmann::json;  // std::map-backed: keys serialize sorted

json coeff_to_json(const Coefficient& c);
json ncpoly_to_json(const NCPoly& p);
json module_to_json(const ModuleElement& v);

// Evaluated value field when a full parameter assignment is supplied.
struct EvalContext {
    std::map<ParamSymbol, Rational> params;
    std::map<int, Rational> r_values;
    bool active = false;
};
void attach_value(json& j, const Coefficient& c, const EvalContext& eval);

struct Report {
    std::string command;
    std::vector<json> checks;  // {name, status, ...payload}
    int pass = 0, fail = 0, recorded = 0;

    void add(const std::string& name, const std::string& status, json payload = json::object());
    int exit_code() const { return fail > 0 ? 1 : 0; }
    json to_json() const;
    std::string to_text() const;
};

}  // namespace mqg
