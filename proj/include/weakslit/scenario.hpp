#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "weakslit/moments.hpp"
#include "weakslit/pointer.hpp"

namespace weakslit {

struct ChannelSpec {
    std::string type = "identity";  // identity | scully | classical_kick
    std::vector<Kick> kicks;        // kick momenta in hbar/s
};

// A fully validated scenario. Lengths of the bench are in metres; momenta and
// grid extent are in internal units (hbar/s and slit separations).
struct ScenarioConfig {
    double slit_width = 40e-6;
    double slit_separation = 80e-6;
    std::string edge = "sharp";  // sharp | gaussian
    double edge_scale = 0.0;     // metres; 0 selects width / 10
    std::array<double, 2> amplitudes{1.0, 1.0};

    double wavelength = 633e-9;
    double focal_length = 1.0;

    std::size_t n_points = 16384;
    double extent = 64.0;

    ChannelSpec channel;

    int n_min = -7;
    int n_max = 7;
    double window_width = 0.224 * kTwoPi;
    int focus_index = -1;  // window shown by wvp, eraser and pointer

    Eraser eraser = Eraser::none;

    PointerSpec pointer;
    std::vector<double> ratios{0.3, 0.139, 0.05, 0.01, 0.001};

    RegularizationSpec regularization;  // empty lists select default sweeps

    double display_range = 3.0 * kTwoPi;  // |p| and |q| shown in tables and plots
    std::string output_dir = "out";

    nlohmann::json canonical;  // fully resolved config, used for the provenance hash

    LabFrame lab() const { return {wavelength, focal_length, slit_separation}; }
    SimGrid grid() const { return make_grid(n_points, extent); }
    // Geometry in internal units (lengths divided by the slit separation).
    SlitGeometry geometry() const;
    MeasurementChannel channel_op() const;
    WindowSet windows() const { return {n_min, n_max, window_width}; }
    MomentumWindow focus_window() const { return {focus_index, window_width}; }
    TransverseState initial_state() const { return build_double_slit(geometry(), grid()); }
};

// Values of the "paper" preset (slits, bench, sliver, pointer, Scully marker).
nlohmann::json paper_preset();

// Parses a JSON scenario. Missing keys take defaults, a "preset" key selects a
// base document that the remaining keys override, unknown keys are rejected.
// Throws ConfigError naming the offending key path.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig parse_config(const nlohmann::json& doc);

// Applies "a.b.c=value" to a JSON document; value is read as JSON when it
// parses, otherwise as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

enum class Command { wvp, transfer, variance, eraser, pointer, sweep };
Command command_from_string(const std::string& s);
std::string to_string(Command c);

struct Column {
    std::string quantity;
    std::string unit;
};

struct Table {
    std::string name;
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
};

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// One figure: x in hbar/s on the bottom axis, focal-plane mm on the top axis.
struct Plot {
    std::string name;
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<double> markers;  // vertical guide lines (x positions)
    double mm_per_unit = 0.0;     // focal-plane millimetres per x unit; 0 hides the top axis
};

struct ResultBundle {
    Command command = Command::transfer;
    std::vector<Table> tables;
    std::vector<Plot> plots;
    nlohmann::json summary;
    std::vector<std::string> warnings;
};

ResultBundle run(const ScenarioConfig& config, Command command);

// Writes <table>.csv, summary.json and <plot>.svg into dir. Throws IoError.
std::vector<std::string> emit_outputs(const ResultBundle& bundle, const std::string& dir);

// CSV text for one table: header "quantity [unit],..." then one row per line.
std::string format_csv(const Table& table);
std::string render_svg(const Plot& plot);

// FNV-1a 64-bit hash, used to fingerprint configs.
std::uint64_t fnv1a64(const std::string& text);

}  // namespace weakslit
