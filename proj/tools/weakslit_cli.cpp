#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "weakslit/errors.hpp"
#include "weakslit/scenario.hpp"

namespace {

nlohmann::json load_document(const std::string& path, const std::string& preset) {
    nlohmann::json doc = nlohmann::json::object();
    if (!path.empty()) {
        std::ifstream f(path);
        if (!f) throw weakslit::IoError(fmt::format("{}: cannot open config", path));
        std::stringstream ss;
        ss << f.rdbuf();
        doc = nlohmann::json::parse(ss.str(), nullptr, false);
        if (doc.is_discarded()) throw weakslit::ConfigError(fmt::format("{}: not valid JSON", path));
    }
    if (!preset.empty()) doc["preset"] = preset;
    return doc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak-valued momentum transfer in a double-slit which-way measurement"};
    app.require_subcommand(1);

    std::string config_path, preset, out_dir;
    std::vector<std::string> overrides;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"wvp", "conditional weak-valued probability for one window"},
        {"transfer", "momentum-transfer distribution P_wv(q)"},
        {"variance", "sharp and apodized variance integrals"},
        {"eraser", "quantum eraser with +45 and -45 polarizers"},
        {"pointer", "simulated pointer readout d/D"},
        {"sweep", "pointer convergence over D/sigma"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config,-c", config_path, "JSON scenario file");
        sub->add_option("--preset", preset, "base preset")->check(CLI::IsMember({"paper"}));
        sub->add_option("--out,-o", out_dir, "output directory");
        sub->add_option("--set", overrides, "override key.path=value")->take_all();
    }
    CLI11_PARSE(app, argc, argv);

    try {
        const auto command = weakslit::command_from_string(app.get_subcommands().front()->get_name());
        auto doc = load_document(config_path, preset);
        for (const auto& o : overrides) weakslit::apply_override(doc, o);
        const auto cfg = weakslit::parse_config(doc);
        const auto bundle = weakslit::run(cfg, command);
        for (const auto& w : bundle.warnings) std::cerr << "warning: " << w << '\n';
        const auto files = weakslit::emit_outputs(bundle, out_dir.empty() ? cfg.output_dir : out_dir);
        for (const auto& f : files) std::cout << f << '\n';
        return 0;
    } catch (const weakslit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
