#pragma once

#include <string>

namespace mmtsp {

/// Solver parameters. Defaults come from the tuned per-regime table keyed by
/// the ratio m / n_cities (regimes 1%, 5%, 10%, 15%; nearest regime wins,
/// ties toward the smaller ratio).
struct Params {
    int n_solutions = 17;
    double d_rate_construct = 0.83;
    double d_rate_improve = 0.97;
    double l_rate = 0.26;
    int age_max = 13;
    double epsilon = 1e-9;

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

/// Tuned defaults for an instance with n_cities cities and m salesmen.
Params default_params(int m, int n_cities);

/// Loads a JSON object {"n_solutions": ..., "d_rate_construct": ...,
/// "d_rate_improve": ..., "l_rate": ..., "age_max": ..., "epsilon": ...}.
/// Missing keys keep the supplied defaults; unknown keys are an error.
Params load_params(const std::string& path, Params defaults);

} // namespace mmtsp
