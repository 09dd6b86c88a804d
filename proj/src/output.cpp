#include "frontlab/output.hpp"

#include <cstdio>
#include <fstream>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw InvalidArgument("write_csv: header/column count mismatch");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != rows) throw InvalidArgument("write_csv: ragged columns");
    }
    std::string text;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) text += ',';
        text += header[j];
    }
    text += '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j) text += ',';
            text += format_real(columns[j][i]);
        }
        text += '\n';
    }
    auto out = open_for_write(path);
    out << text;
}

void write_snapshots(const std::filesystem::path& dir, const std::vector<Snapshot>& snapshots) {
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "%03zu.csv", i);
        write_csv(dir / "snapshots" / name, {"x", "u"}, {snapshots[i].x, snapshots[i].u});
    }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
    auto out = open_for_write(path);
    out << value.dump(2) << '\n';
}

}  // namespace frontlab
