#include <cmath>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#include "weakslit/errors.hpp"
#include "weakslit/scenario.hpp"

namespace weakslit {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += fmt::format("{} [{}]", table.columns[i].quantity, table.columns[i].unit);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += std::isfinite(row[i]) ? fmt::format("{:.17g}", row[i]) : std::string("nan");
        }
        out += '\n';
    }
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError(fmt::format("{}: cannot open for writing", path.string()));
    f << text;
    if (!f) throw IoError(fmt::format("{}: write failed", path.string()));
}

}  // namespace

std::vector<std::string> emit_outputs(const ResultBundle& bundle, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("{}: {}", dir, ec.message()));

    std::vector<std::string> written;
    auto put = [&](const std::string& name, const std::string& text) {
        const fs::path path = fs::path(dir) / name;
        write_file(path, text);
        written.push_back(path.string());
    };
    for (const auto& t : bundle.tables) put(t.name + ".csv", format_csv(t));
    for (const auto& p : bundle.plots) put(p.name + ".svg", render_svg(p));
    put("summary.json", bundle.summary.dump(2) + "\n");
    return written;
}

}  // namespace weakslit
