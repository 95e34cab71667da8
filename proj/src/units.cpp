#include "weakslit/units.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "weakslit/errors.hpp"
#include "weakslit/grid.hpp"

namespace weakslit {
namespace {

const std::map<std::string, double>& length_units() {
    static const std::map<std::string, double> units{
        {"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"\xC2\xB5m", 1e-6}, {"nm", 1e-9}};
    return units;
}

const std::map<std::string, double>& momentum_units() {
    static const std::map<std::string, double> units{{"hbar/s", 1.0}, {"h/s", kTwoPi}};
    return units;
}

const char* dimension_name(Dimension d) { return d == Dimension::length ? "length" : "momentum"; }

}  // namespace

double unit_scale(const std::string& unit, Dimension dim, const std::string& key_path) {
    const auto& own = dim == Dimension::length ? length_units() : momentum_units();
    if (auto it = own.find(unit); it != own.end()) return it->second;
    const auto& other = dim == Dimension::length ? momentum_units() : length_units();
    if (other.count(unit)) {
        throw ConfigError(fmt::format("{}: unit mismatch, expected a {} but got unit '{}'", key_path,
                                      dimension_name(dim), unit));
    }
    throw ConfigError(fmt::format("{}: unknown unit '{}'", key_path, unit));
}

double parse_quantity(const nlohmann::json& value, Dimension dim, const std::string& default_unit,
                      const std::string& key_path) {
    double number = 0.0;
    std::string unit = default_unit;
    if (value.is_number()) {
        number = value.get<double>();
    } else if (value.is_string()) {
        std::istringstream in(value.get<std::string>());
        if (!(in >> number)) {
            throw ConfigError(fmt::format("{}: cannot read a number from '{}'", key_path, value.get<std::string>()));
        }
        std::string rest;
        if (in >> rest) unit = rest;
        std::string extra;
        if (in >> extra) throw ConfigError(fmt::format("{}: trailing text '{}'", key_path, extra));
    } else {
        throw ConfigError(fmt::format("{}: expected a number or a quantity string", key_path));
    }
    if (!std::isfinite(number)) throw ConfigError(fmt::format("{}: value is not finite", key_path));
    return number * unit_scale(unit, dim, key_path);
}

}  // namespace weakslit
