#ifndef MAGNL_CONFIG_HPP
#define MAGNL_CONFIG_HPP

#include <string>

#include "magnl/experiments.hpp"

namespace magnl {

/// Loads a sweep configuration from JSON. The schema is strict: unknown keys
/// are rejected and every error names the offending field. Defaults:
/// h = eps_min/8, m = 6, tol = 1e-8, eta = auto, grid_n = 32, seed = 12345,
/// field = uniform b0 = 1.
SweepConfig load_config(const std::string& path);

/// Same, from an in-memory JSON document.
SweepConfig parse_config(const std::string& json_text);

}  // namespace magnl

#endif  // MAGNL_CONFIG_HPP
