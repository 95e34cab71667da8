#pragma once

#include <string>

#include "json.hpp"

namespace weakslit {

enum class Dimension { length, momentum };

// Reads a quantity from a config value. Bare numbers are taken in
// `default_unit`; strings carry their own unit, e.g. "40 um", "633 nm",
// "1.77 mm", "0.224 h/s", "2 hbar/s". Lengths are returned in metres and
// momenta in internal units (hbar/s). Errors name `key_path`.
double parse_quantity(const nlohmann::json& value, Dimension dim, const std::string& default_unit,
                      const std::string& key_path);

// Scale of a unit symbol relative to metres or hbar/s. Throws ConfigError for
// unknown symbols or symbols of a different dimension.
double unit_scale(const std::string& unit, Dimension dim, const std::string& key_path);

}  // namespace weakslit
