#include "mmtsp/params.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mmtsp {

void Params::validate() const {
    auto bad = [](const std::string& what) { throw std::invalid_argument("params: " + what); };
    if (n_solutions < 1) bad("n_solutions must be at least 1");
    if (!(d_rate_construct >= 0.0 && d_rate_construct <= 1.0)) bad("d_rate_construct must be in [0, 1]");
    if (!(d_rate_improve >= 0.0 && d_rate_improve <= 1.0)) bad("d_rate_improve must be in [0, 1]");
    if (!(l_rate > 0.0 && l_rate < 1.0)) bad("l_rate must be in (0, 1)");
    if (age_max < 1) bad("age_max must be at least 1");
    if (!(epsilon > 0.0)) bad("epsilon must be positive");
}

Params default_params(int m, int n_cities) {
    if (m < 1) throw std::invalid_argument("default_params: m must be positive");
    if (n_cities < 1) throw std::invalid_argument("default_params: n_cities must be positive");
    static constexpr double ratios[4] = {0.01, 0.05, 0.10, 0.15};
    static constexpr Params table[4] = {
        {19, 0.87, 0.96, 0.31, 12, 1e-9},
        {17, 0.83, 0.97, 0.26, 13, 1e-9},
        {13, 0.66, 0.98, 0.45, 2, 1e-9},
        {17, 0.86, 0.93, 0.20, 15, 1e-9},
    };
    const double ratio = static_cast<double>(m) / n_cities;
    int pick = 0;
    double best = std::fabs(ratio - ratios[0]);
    for (int i = 1; i < 4; ++i) {
        double d = std::fabs(ratio - ratios[i]);
        if (d < best) {
            best = d;
            pick = i;
        }
    }
    return table[pick];
}

Params load_params(const std::string& path, Params defaults) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw std::runtime_error(path + ": expected a JSON object");
    Params p = defaults;
    for (const auto& [key, value] : j.items()) {
        if (key == "n_solutions") p.n_solutions = value.get<int>();
        else if (key == "d_rate_construct") p.d_rate_construct = value.get<double>();
        else if (key == "d_rate_improve") p.d_rate_improve = value.get<double>();
        else if (key == "l_rate") p.l_rate = value.get<double>();
        else if (key == "age_max") p.age_max = value.get<int>();
        else if (key == "epsilon") p.epsilon = value.get<double>();
        else throw std::runtime_error(path + ": unknown parameter \"" + key + "\"");
    }
    p.validate();
    return p;
}

} // namespace mmtsp
