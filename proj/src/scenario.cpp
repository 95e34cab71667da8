#include "weakslit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "weakslit/errors.hpp"
#include "weakslit/units.hpp"

namespace weakslit {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
        throw ConfigError(fmt::format("{}: expected an object", path.empty() ? "<root>" : path));
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(fmt::format("{}: unknown key", path.empty() ? key : path + "." + key));
        }
    }
}

std::string join(const std::string& path, const std::string& key) { return path + "." + key; }

template <typename T>
T get_as(const json& obj, const std::string& key, const std::string& path, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(fmt::format("{}: wrong value type", join(path, key)));
    }
}

double length_or(const json& obj, const std::string& key, const std::string& path, const std::string& unit,
                 double fallback) {
    return obj.contains(key) ? parse_quantity(obj.at(key), Dimension::length, unit, join(path, key)) : fallback;
}

double momentum_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
    return obj.contains(key) ? parse_quantity(obj.at(key), Dimension::momentum, "hbar/s", join(path, key))
                             : fallback;
}

std::vector<double> momentum_list(const json& obj, const std::string& key, const std::string& path) {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const auto& arr = obj.at(key);
    if (!arr.is_array()) throw ConfigError(fmt::format("{}: expected a list", join(path, key)));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(parse_quantity(arr[i], Dimension::momentum, "hbar/s", fmt::format("{}.{}[{}]", path, key, i)));
    }
    return out;
}

// Re-raises module errors with the config section that produced them.
template <typename F>
void with_context(const std::string& path, F&& f) {
    try {
        f();
    } catch (const GeometryError& e) {
        throw GeometryError(fmt::format("{}: {}", path, e.what()));
    } catch (const ResolutionError& e) {
        throw ResolutionError(fmt::format("{}: {}", path, e.what()));
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", path, e.what()));
    }
}

json merged_document(const json& doc) {
    check_keys(doc, "", {"preset", "geometry", "lab", "grid", "channel", "windows", "eraser", "pointer",
                         "regularization", "output"});
    if (!doc.contains("preset")) return doc;
    const auto& name = doc.at("preset");
    if (!name.is_string() || name.get<std::string>() != "paper") {
        throw ConfigError(fmt::format("preset: unknown preset {}", name.dump()));
    }
    json base = paper_preset();
    json user = doc;
    user.erase("preset");
    // A window given by width in the user document replaces the preset sliver and vice versa.
    if (user.contains("windows") && user["windows"].is_object() && base["windows"].is_object()) {
        if (user["windows"].contains("width")) base["windows"].erase("sliver_width");
        if (user["windows"].contains("sliver_width")) base["windows"].erase("width");
    }
    base.merge_patch(user);
    return base;
}

}  // namespace

json paper_preset() {
    return json{
        {"geometry", {{"slit_width", "40 um"}, {"slit_separation", "80 um"}, {"edge", "sharp"}}},
        {"lab", {{"wavelength", "633 nm"}, {"focal_length", "1 m"}}},
        {"grid", {{"n_points", 16384}, {"extent", 64}}},
        {"channel", {{"type", "scully"}}},
        {"windows", {{"n_min", -7}, {"n_max", 7}, {"sliver_width", "1.77 mm"}, {"focus_index", -1}}},
        {"eraser", "none"},
        {"pointer", {{"sigma", "1.01 mm"}, {"displacement", "0.14 mm"}}},
    };
}

SlitGeometry ScenarioConfig::geometry() const {
    SlitGeometry g;
    g.width = slit_width / slit_separation;
    g.separation = 1.0;
    g.amplitudes = amplitudes;
    if (edge == "gaussian") {
        g.edges = edge_scale > 0.0 ? GaussianEdges{edge_scale / slit_separation} : default_smooth_edges(g);
    }
    return g;
}

MeasurementChannel ScenarioConfig::channel_op() const {
    if (channel.type == "identity") return identity_channel();
    if (channel.type == "scully") return scully_wwm(geometry(), grid());
    return classical_kick(channel.kicks);
}

ScenarioConfig parse_config(const std::string& text) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return parse_config(json::object());
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    return parse_config(doc);
}

ScenarioConfig parse_config(const json& input) {
    const json doc = merged_document(input);
    ScenarioConfig cfg;

    const json empty = json::object();
    auto section = [&](const char* name, const std::set<std::string>& keys) -> const json& {
        if (!doc.contains(name)) return empty;
        check_keys(doc.at(name), name, keys);
        return doc.at(name);
    };

    const auto& geom = section("geometry", {"slit_width", "slit_separation", "edge", "edge_scale", "amplitudes"});
    cfg.slit_width = length_or(geom, "slit_width", "geometry", "um", cfg.slit_width);
    cfg.slit_separation = length_or(geom, "slit_separation", "geometry", "um", cfg.slit_separation);
    cfg.edge = get_as<std::string>(geom, "edge", "geometry", cfg.edge);
    if (cfg.edge != "sharp" && cfg.edge != "gaussian") {
        throw ConfigError(fmt::format("geometry.edge: expected 'sharp' or 'gaussian', got '{}'", cfg.edge));
    }
    cfg.edge_scale = length_or(geom, "edge_scale", "geometry", "um", cfg.edge_scale);
    if (geom.contains("amplitudes")) {
        const auto amps = get_as<std::vector<double>>(geom, "amplitudes", "geometry", {});
        if (amps.size() != 2) throw ConfigError("geometry.amplitudes: expected [left, right]");
        cfg.amplitudes = {amps[0], amps[1]};
    }

    const auto& lab = section("lab", {"wavelength", "focal_length"});
    cfg.wavelength = length_or(lab, "wavelength", "lab", "nm", cfg.wavelength);
    cfg.focal_length = length_or(lab, "focal_length", "lab", "m", cfg.focal_length);
    with_context("lab", [&] { validate(cfg.lab()); });

    const auto& grid = section("grid", {"n_points", "extent"});
    cfg.n_points = get_as<std::size_t>(grid, "n_points", "grid", cfg.n_points);
    cfg.extent = get_as<double>(grid, "extent", "grid", cfg.extent);
    with_context("grid", [&] { (void)cfg.grid(); });

    with_context("geometry", [&] {
        if (!(cfg.edge_scale >= 0.0)) throw GeometryError("edge_scale must be positive");
        (void)cfg.initial_state();
    });

    const auto& ch = section("channel", {"type", "kicks"});
    cfg.channel.type = get_as<std::string>(ch, "type", "channel", cfg.channel.type);
    if (cfg.channel.type == "classical_kick") {
        if (!ch.contains("kicks") || !ch.at("kicks").is_array()) {
            throw ConfigError("channel.kicks: classical_kick needs a list of {q, prob}");
        }
        const auto& kicks = ch.at("kicks");
        for (std::size_t i = 0; i < kicks.size(); ++i) {
            const std::string path = fmt::format("channel.kicks[{}]", i);
            check_keys(kicks[i], path, {"q", "prob"});
            if (!kicks[i].contains("q") || !kicks[i].contains("prob")) {
                throw ConfigError(fmt::format("{}: needs both q and prob", path));
            }
            cfg.channel.kicks.push_back({parse_quantity(kicks[i].at("q"), Dimension::momentum, "hbar/s", path + ".q"),
                                         get_as<double>(kicks[i], "prob", path, 0.0)});
        }
    } else if (cfg.channel.type != "identity" && cfg.channel.type != "scully") {
        throw ConfigError(fmt::format("channel.type: unknown channel '{}'", cfg.channel.type));
    } else if (ch.contains("kicks")) {
        throw ConfigError("channel.kicks: only valid for classical_kick");
    }
    with_context("channel", [&] { (void)cfg.channel_op(); });

    const auto& win = section("windows", {"n_min", "n_max", "width", "sliver_width", "focus_index"});
    cfg.n_min = get_as<int>(win, "n_min", "windows", cfg.n_min);
    cfg.n_max = get_as<int>(win, "n_max", "windows", cfg.n_max);
    cfg.focus_index = get_as<int>(win, "focus_index", "windows", cfg.focus_index);
    if (win.contains("width") && win.contains("sliver_width")) {
        throw ConfigError("windows: give either width or sliver_width, not both");
    }
    cfg.window_width = momentum_or(win, "width", "windows", cfg.window_width);
    if (win.contains("sliver_width")) {
        const double delta = length_or(win, "sliver_width", "windows", "mm", 0.0);
        if (!(delta > 0.0)) throw ConfigError("windows.sliver_width: must be positive");
        cfg.window_width = momentum_at_focal_position(delta, cfg.lab());
    }
    if (cfg.n_max < cfg.n_min) throw ConfigError("windows: n_max is below n_min");
    with_context("windows", [&] { validate(cfg.focus_window(), cfg.grid()); });

    if (doc.contains("eraser")) {
        if (!doc.at("eraser").is_string()) throw ConfigError("eraser: expected a string");
        with_context("eraser", [&] { cfg.eraser = eraser_from_string(doc.at("eraser").get<std::string>()); });
    }

    const auto& ptr = section("pointer", {"sigma", "displacement", "ratios"});
    cfg.pointer.sigma = length_or(ptr, "sigma", "pointer", "mm", cfg.pointer.sigma);
    cfg.pointer.displacement = length_or(ptr, "displacement", "pointer", "mm", cfg.pointer.displacement);
    cfg.pointer.sliver_width = focal_plane_position(cfg.window_width, cfg.lab());
    cfg.pointer.window_index = cfg.focus_index;
    cfg.ratios = get_as<std::vector<double>>(ptr, "ratios", "pointer", cfg.ratios);
    with_context("pointer", [&] {
        validate(cfg.pointer);
        for (double r : cfg.ratios) {
            if (!(r > 0.0 && r < 1.0)) throw ConfigError(fmt::format("ratio {} outside (0, 1)", r));
        }
    });

    const auto& reg = section("regularization", {"q_max", "kappa"});
    cfg.regularization.q_max = momentum_list(reg, "q_max", "regularization");
    cfg.regularization.kappa = momentum_list(reg, "kappa", "regularization");
    for (double v : cfg.regularization.q_max) {
        if (!(v > 0.0)) throw ConfigError("regularization.q_max: entries must be positive");
    }
    for (double v : cfg.regularization.kappa) {
        if (!(v > 0.0)) throw ConfigError("regularization.kappa: entries must be positive");
    }

    const auto& out = section("output", {"dir", "p_range"});
    cfg.output_dir = get_as<std::string>(out, "dir", "output", cfg.output_dir);
    cfg.display_range = momentum_or(out, "p_range", "output", cfg.display_range);
    if (!(cfg.display_range > 0.0)) throw ConfigError("output.p_range: must be positive");

    json kicks = json::array();
    for (const auto& k : cfg.channel.kicks) kicks.push_back({{"q_hbar_per_s", k.q}, {"prob", k.prob}});
    cfg.canonical = json{
        {"geometry",
         {{"slit_width_m", cfg.slit_width},
          {"slit_separation_m", cfg.slit_separation},
          {"edge", cfg.edge},
          {"edge_scale_m", cfg.edge_scale},
          {"amplitudes", cfg.amplitudes}}},
        {"lab", {{"wavelength_m", cfg.wavelength}, {"focal_length_m", cfg.focal_length}}},
        {"grid", {{"n_points", cfg.n_points}, {"extent_s", cfg.extent}}},
        {"channel", {{"type", cfg.channel.type}, {"kicks", kicks}}},
        {"windows",
         {{"n_min", cfg.n_min}, {"n_max", cfg.n_max}, {"width_hbar_per_s", cfg.window_width},
          {"focus_index", cfg.focus_index}}},
        {"eraser", to_string(cfg.eraser)},
        {"pointer",
         {{"sigma_m", cfg.pointer.sigma}, {"displacement_m", cfg.pointer.displacement}, {"ratios", cfg.ratios}}},
        {"regularization", {{"q_max_hbar_per_s", cfg.regularization.q_max},
                            {"kappa_hbar_per_s", cfg.regularization.kappa}}},
        {"output", {{"p_range_hbar_per_s", cfg.display_range}}},
    };
    return cfg;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError(fmt::format("--set '{}': expected key=value", assignment));
    }
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError(fmt::format("--set '{}': empty key segment", assignment));
        if (!node->is_object()) throw ConfigError(fmt::format("--set '{}': {} is not an object", assignment, key));
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

Command command_from_string(const std::string& s) {
    if (s == "wvp") return Command::wvp;
    if (s == "transfer") return Command::transfer;
    if (s == "variance") return Command::variance;
    if (s == "eraser") return Command::eraser;
    if (s == "pointer") return Command::pointer;
    if (s == "sweep") return Command::sweep;
    throw ConfigError(fmt::format("unknown command '{}'", s));
}

std::string to_string(Command c) {
    switch (c) {
        case Command::wvp: return "wvp";
        case Command::transfer: return "transfer";
        case Command::variance: return "variance";
        case Command::eraser: return "eraser";
        case Command::pointer: return "pointer";
        case Command::sweep: return "sweep";
    }
    return "transfer";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const Column kMomentumCol{"p_f", "hbar/s"};
const Column kFocalCol{"x_f", "mm"};

struct RunContext {
    const ScenarioConfig& cfg;
    LabFrame lab;
    SimGrid grid;
    TransverseState state;
    MeasurementChannel channel;

    explicit RunContext(const ScenarioConfig& c)
        : cfg(c), lab(c.lab()), grid(c.grid()), state(c.initial_state()), channel(c.channel_op()) {}

    double mm(double p) const { return focal_plane_position(p, lab) * 1e3; }
    double mm_per_unit() const { return mm(1.0); }
    bool shown(double p) const { return std::abs(p) <= cfg.display_range; }
};

json nan_to_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json window_summary(const RunContext& ctx, const MomentumWindow& w) {
    return {{"index", w.index},
            {"center_hbar_per_s", w.center()},
            {"center_mm", ctx.mm(w.center())},
            {"width_hbar_per_s", w.width},
            {"width_h_per_s", w.width / kTwoPi},
            {"width_mm", ctx.mm(w.width)}};
}

Series curve_series(const RunContext& ctx, const std::string& label, const RealSamples& y) {
    Series s{label, {}, {}};
    for (std::size_t k = 0; k < ctx.grid.size(); ++k) {
        if (!ctx.shown(ctx.grid.p(k))) continue;
        s.x.push_back(ctx.grid.p(k));
        s.y.push_back(y[k]);
    }
    return s;
}

Plot momentum_plot(const RunContext& ctx, std::string name, std::string title, std::string y_label) {
    Plot plot;
    plot.name = std::move(name);
    plot.title = std::move(title);
    plot.x_label = "p_f [hbar/s]";
    plot.y_label = std::move(y_label);
    plot.mm_per_unit = ctx.mm_per_unit();
    return plot;
}

double max_abs(const RealSamples& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void run_wvp(const RunContext& ctx, ResultBundle& out) {
    const auto win = ctx.cfg.focus_window();
    const auto curve = conditional_wvp(ctx.state, ctx.channel, win, ctx.cfg.eraser);
    const auto p_i = momentum_distribution(ctx.state);
    const auto p_f = momentum_distribution(ctx.state, &ctx.channel);

    Table t{"wvp",
            {kMomentumCol, kFocalCol, {"P_wv(p_i|p_f)", "1"}, {"J", "s/hbar"}, {"P(p_i)", "s/hbar"},
             {"P(p_f)", "s/hbar"}, {"in_window", "1"}},
            {}};
    for (std::size_t k = 0; k < ctx.grid.size(); ++k) {
        const double p = ctx.grid.p(k);
        if (!ctx.shown(p)) continue;
        t.rows.push_back({p, ctx.mm(p), curve.values[k], curve.joint[k], p_i[k], p_f[k],
                          win.contains(p) ? 1.0 : 0.0});
    }
    out.tables.push_back(std::move(t));

    auto plot = momentum_plot(ctx, "wvp", "Weak-valued probability P_wv(p_i|p_f)", "P_wv(p_i|p_f)");
    plot.series.push_back(curve_series(ctx, "P_wv(p_i|p_f)", curve.values));
    plot.markers = {win.lo(), win.hi()};
    out.plots.push_back(std::move(plot));

    auto inset = momentum_plot(ctx, "wvp_intensity", "Momentum distributions", "density [s/hbar]");
    inset.series.push_back(curve_series(ctx, "P(p_i) without marker", p_i));
    inset.series.push_back(curve_series(ctx, "P(p_f) with marker", p_f));
    out.plots.push_back(std::move(inset));

    const auto side = fringe_side_extremes(curve, p_i, ctx.cfg.display_range);
    double lo = kNaN, hi = kNaN;
    for (std::size_t k = 0; k < curve.values.size(); ++k) {
        if (!curve.defined[k] || !ctx.shown(ctx.grid.p(k))) continue;
        lo = std::isnan(lo) ? curve.values[k] : std::min(lo, curve.values[k]);
        hi = std::isnan(hi) ? curve.values[k] : std::max(hi, curve.values[k]);
    }
    const double period = fringe_period(ctx.grid, p_i, std::min(ctx.cfg.display_range, 0.9 * kTwoPi * 2.0));
    out.summary["window"] = window_summary(ctx, win);
    out.summary["eraser"] = to_string(ctx.cfg.eraser);
    out.summary["wvp_min"] = nan_to_null(lo);
    out.summary["wvp_max"] = nan_to_null(hi);
    out.summary["min_near_fringe_maximum"] = side.min_near_maximum;
    out.summary["min_near_fringe_maximum_at_hbar_per_s"] = side.p_min_near_maximum;
    out.summary["max_near_fringe_minimum"] = side.max_near_minimum;
    out.summary["max_near_fringe_minimum_at_hbar_per_s"] = side.p_max_near_minimum;
    out.summary["fringe_period_hbar_per_s"] = period;
    out.summary["fringe_period_mm"] = ctx.mm(period);
    out.summary["expected_fringe_period_mm"] = ctx.cfg.focal_length * ctx.cfg.wavelength / ctx.cfg.slit_separation * 1e3;
}

TransferDistribution transfer_for(const RunContext& ctx, ResultBundle& out) {
    auto dist = transfer_distribution(ctx.state, ctx.channel, ctx.cfg.windows(), ctx.cfg.eraser);
    if (dist.coverage_warning) out.warnings.push_back(*dist.coverage_warning);
    return dist;
}

void run_transfer(const RunContext& ctx, ResultBundle& out) {
    const auto dist = transfer_for(ctx, out);
    const auto floor = transfer_distribution(ctx.state, identity_channel(), ctx.cfg.windows(), Eraser::none);

    Table t{"transfer", {{"q", "hbar/s"}, {"q", "mm"}, {"P_wv(q)", "s/hbar"}}, {}};
    Series s{"P_wv(q)", {}, {}};
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double q = dist.q(i);
        if (!ctx.shown(q)) continue;
        t.rows.push_back({q, ctx.mm(q), dist.density[i]});
        s.x.push_back(q);
        s.y.push_back(dist.density[i]);
    }
    out.tables.push_back(std::move(t));
    auto plot = momentum_plot(ctx, "transfer", "Weak-valued momentum-transfer distribution", "P_wv(q) [s/hbar]");
    plot.x_label = "q [hbar/s]";
    plot.series.push_back(std::move(s));
    plot.markers = {-1.0, 1.0};
    out.plots.push_back(std::move(plot));

    out.summary["integral"] = dist.integral();
    out.summary["covered_mass"] = dist.covered_mass;
    out.summary["windows"] = {{"n_min", ctx.cfg.n_min}, {"n_max", ctx.cfg.n_max},
                              {"width_hbar_per_s", ctx.cfg.window_width}};
    out.summary["mean"] = mean_transfer(dist);
    out.summary["min_value"] = dist.min_value();
    out.summary["mass_outside_hbar_over_s"] = dist.mass_outside(1.0);
    out.summary["abs_mass_outside_hbar_over_s"] = dist.abs_mass_outside(1.0);
    out.summary["identity_floor_abs_mass_outside"] = floor.abs_mass_outside(1.0);
    out.summary["q_extent_hbar_per_s"] = dist.q_extent();
}

void run_variance(const RunContext& ctx, ResultBundle& out) {
    const auto dist = transfer_for(ctx, out);
    RegularizationSpec reg = ctx.cfg.regularization;
    if (reg.q_max.empty()) {
        const std::size_t n = 400;
        for (std::size_t i = 1; i <= n; ++i) reg.q_max.push_back(4.0 * kTwoPi * static_cast<double>(i) / n);
    }
    if (reg.kappa.empty()) reg.kappa = default_kappa_ladder(dist, ctx.cfg.window_width, 24);
    validate(reg, dist);

    Table sharp{"variance", {{"q_max", "hbar/s"}, {"q_max", "mm"}, {"V_sharp", "hbar^2/s^2"}}, {}};
    std::vector<double> values;
    Series s{"sharp cut-off variance", {}, {}};
    for (double q : reg.q_max) {
        const double v = sharp_cutoff_variance(dist, q);
        values.push_back(v);
        sharp.rows.push_back({q, ctx.mm(q), v});
        s.x.push_back(q);
        s.y.push_back(v);
    }
    out.tables.push_back(std::move(sharp));
    auto plot = momentum_plot(ctx, "variance", "Variance integral over [-q_max, q_max]", "V [hbar^2/s^2]");
    plot.x_label = "q_max [hbar/s]";
    plot.series.push_back(std::move(s));
    out.plots.push_back(std::move(plot));

    const auto sweep = apodized_sweep(dist, reg.kappa);
    Table apod{"apodized", {{"kappa", "hbar/s"}, {"kappa", "mm"}, {"V_apodized", "hbar^2/s^2"}}, {}};
    Series a{"apodized variance", {}, {}};
    for (std::size_t i = 0; i < sweep.kappa.size(); ++i) {
        apod.rows.push_back({sweep.kappa[i], ctx.mm(sweep.kappa[i]), sweep.value[i]});
        a.x.push_back(sweep.kappa[i]);
        a.y.push_back(sweep.value[i]);
    }
    out.tables.push_back(std::move(apod));
    auto aplot = momentum_plot(ctx, "apodized", "Apodized variance exp(-|q|/kappa)", "V [hbar^2/s^2]");
    aplot.x_label = "kappa [hbar/s]";
    aplot.series.push_back(std::move(a));
    out.plots.push_back(std::move(aplot));

    const double floor = ctx.cfg.window_width * ctx.cfg.window_width / 12.0;
    out.summary["sharp_sign_changes"] = count_sign_changes(values);
    out.summary["window_floor"] = floor;
    out.summary["largest_kappa_hbar_per_s"] = sweep.largest_kappa;
    out.summary["apodized_at_largest_kappa"] = sweep.value_at_largest;
    out.summary["apodized_extremal"] = sweep.extremal_value;
    out.summary["apodized_trend"] = sweep.trend;
    out.summary["integral"] = dist.integral();
}

void run_eraser(const RunContext& ctx, ResultBundle& out) {
    const auto win = ctx.cfg.focus_window();
    const auto plus = conditional_wvp(ctx.state, ctx.channel, win, Eraser::plus45);
    const auto minus = conditional_wvp(ctx.state, ctx.channel, win, Eraser::minus45);
    const auto total = joint_wvp(ctx.state, ctx.channel, win, Eraser::none);

    Table t{"eraser",
            {kMomentumCol, kFocalCol, {"P_wv_plus45", "1"}, {"P_wv_minus45", "1"}, {"J_plus45", "s/hbar"},
             {"J_minus45", "s/hbar"}, {"J_total", "s/hbar"}, {"P_plus45", "s/hbar"}, {"P_minus45", "s/hbar"},
             {"in_window", "1"}},
            {}};
    double indicator_dev = 0.0, partition = 0.0, minus_out = 0.0, plus_joint_out = 0.0, minus_joint_match = 0.0;
    const double scale = max_abs(total);
    for (std::size_t k = 0; k < ctx.grid.size(); ++k) {
        const double p = ctx.grid.p(k);
        const bool in = win.contains(p);
        partition = std::max(partition, std::abs(total[k] - plus.joint[k] - minus.joint[k]));
        if (plus.defined[k]) indicator_dev = std::max(indicator_dev, std::abs(plus.values[k] - (in ? 1.0 : 0.0)));
        if (!in) {
            if (minus.defined[k]) minus_out = std::max(minus_out, std::abs(minus.values[k]));
            plus_joint_out = std::max(plus_joint_out, std::abs(plus.joint[k]));
            minus_joint_match = std::max(minus_joint_match, std::abs(minus.joint[k] - total[k]));
        }
        if (ctx.shown(p)) {
            t.rows.push_back({p, ctx.mm(p), plus.values[k], minus.values[k], plus.joint[k], minus.joint[k], total[k],
                              plus.density[k], minus.density[k], in ? 1.0 : 0.0});
        }
    }
    out.tables.push_back(std::move(t));
    for (const auto* c : {&plus, &minus}) {
        const bool is_plus = c == &plus;
        auto plot = momentum_plot(ctx, is_plus ? "eraser_plus" : "eraser_minus",
                                  is_plus ? "Eraser +45 polarizer" : "Eraser -45 polarizer", "P_wv(p_i|p_f)");
        plot.series.push_back(curve_series(ctx, "P_wv(p_i|p_f)", c->values));
        plot.markers = {win.lo(), win.hi()};
        out.plots.push_back(std::move(plot));
    }
    out.summary["window"] = window_summary(ctx, win);
    out.summary["plus45_indicator_max_deviation"] = indicator_dev;
    out.summary["partition_max_abs_error"] = partition;
    out.summary["partition_relative_error"] = scale > 0.0 ? partition / scale : 0.0;
    out.summary["minus45_out_of_window_max_abs"] = minus_out;
    out.summary["plus45_out_of_window_joint_max_abs"] = plus_joint_out;
    out.summary["minus45_out_of_window_joint_vs_total_max_abs"] = minus_joint_match;
}

void run_pointer(const RunContext& ctx, ResultBundle& out) {
    const auto map = run_tagged(ctx.state, ctx.channel, ctx.cfg.pointer, ctx.lab);
    const auto est = estimate_wvp(map);
    const auto analytic = conditional_wvp(ctx.state, ctx.channel, map.window, Eraser::none);
    const auto p_f = subset_distribution(ctx.state, ctx.channel, Eraser::none);

    Table t{"pointer",
            {kMomentumCol, kFocalCol, {"d/D", "1"}, {"P_wv(p_i|p_f)", "1"}, {"marginal", "s/hbar"},
             {"P(p_f)", "s/hbar"}},
            {}};
    double dev = 0.0, disturbance = 0.0;
    for (std::size_t k = 0; k < ctx.grid.size(); ++k) {
        const double p = ctx.grid.p(k);
        if (est.defined[k] && analytic.defined[k]) dev = std::max(dev, std::abs(est.values[k] - analytic.values[k]));
        disturbance = std::max(disturbance, std::abs(map.marginal(k) - p_f[k]));
        if (ctx.shown(p)) t.rows.push_back({p, ctx.mm(p), est.values[k], analytic.values[k], map.marginal(k), p_f[k]});
    }
    out.tables.push_back(std::move(t));
    auto plot = momentum_plot(ctx, "pointer", "Pointer estimate d/D against the weak-valued probability", "d/D");
    plot.series.push_back(curve_series(ctx, "d/D", est.values));
    plot.series.push_back(curve_series(ctx, "P_wv(p_i|p_f)", analytic.values));
    plot.markers = {map.window.lo(), map.window.hi()};
    out.plots.push_back(std::move(plot));

    out.summary["window"] = window_summary(ctx, map.window);
    out.summary["ratio"] = map.ratio();
    out.summary["max_abs_deviation"] = dev;
    out.summary["marginal_max_disturbance"] = disturbance;
}

void run_sweep(const RunContext& ctx, ResultBundle& out) {
    const auto table = convergence_sweep(ctx.state, ctx.channel, ctx.cfg.pointer, ctx.lab, ctx.cfg.ratios);
    Table t{"sweep",
            {{"D/sigma", "1"}, {"max_abs_deviation", "1"}, {"rms_deviation", "1"}, {"p_at_max", "hbar/s"},
             {"x_at_max", "mm"}},
            {}};
    Series s{"max |d/D - P_wv|", {}, {}};
    json rows = json::array();
    for (const auto& r : table.rows) {
        t.rows.push_back({r.ratio, r.max_abs_deviation, r.rms_deviation, r.p_at_max, ctx.mm(r.p_at_max)});
        s.x.push_back(std::log10(r.ratio));
        s.y.push_back(std::log10(r.max_abs_deviation));
        rows.push_back({{"ratio", r.ratio}, {"max_abs_deviation", r.max_abs_deviation}});
    }
    out.tables.push_back(std::move(t));
    Plot plot;
    plot.name = "sweep";
    plot.title = "Convergence of the pointer estimate";
    plot.x_label = "log10(D/sigma)";
    plot.y_label = "log10(max deviation)";
    plot.series.push_back(std::move(s));
    out.plots.push_back(std::move(plot));

    out.summary["rows"] = rows;
    out.summary["monotonic"] = table.monotonic;
    out.summary["small_ratio_slope"] = table.small_ratio_slope;
}

}  // namespace

ResultBundle run(const ScenarioConfig& config, Command command) {
    ResultBundle out;
    out.command = command;
    const RunContext ctx(config);
    switch (command) {
        case Command::wvp: run_wvp(ctx, out); break;
        case Command::transfer: run_transfer(ctx, out); break;
        case Command::variance: run_variance(ctx, out); break;
        case Command::eraser: run_eraser(ctx, out); break;
        case Command::pointer: run_pointer(ctx, out); break;
        case Command::sweep: run_sweep(ctx, out); break;
    }
    const std::string canonical = config.canonical.dump();
    out.summary["command"] = to_string(command);
    out.summary["warnings"] = out.warnings;
    out.summary["provenance"] = {
        {"config_hash", fmt::format("{:016x}", fnv1a64(canonical))},
        {"config", config.canonical},
        {"grid",
         {{"n_points", ctx.grid.size()}, {"extent_s", ctx.grid.x_extent()}, {"dx_s", ctx.grid.dx()},
          {"dp_hbar_per_s", ctx.grid.dp()}}},
        {"tolerances",
         {{"undefined_threshold_relative", kUndefinedThreshold}, {"coverage_threshold", kCoverageThreshold}}},
        {"units", {{"momentum", "hbar/s"}, {"focal_plane", "mm"}, {"mm_per_hbar_over_s", ctx.mm_per_unit()}}},
    };
    return out;
}

}  // namespace weakslit
