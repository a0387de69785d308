#include "etmfd/snapshot_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "etmfd/error.hpp"
#include "json.hpp"

namespace etmfd {

namespace {

std::string full(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
    return out;
}

std::filesystem::path with_ext(std::filesystem::path stem, const char* ext)
{
    stem += ext;
    return stem;
}

}  // namespace

void write_snapshot(const std::filesystem::path& stem, const RectMesh& mesh,
                    const Snapshot& snapshot, double dt)
{
    {
        auto csv = open_out(with_ext(stem, ".csv"));
        csv << "edge,orientation,x,y,E,J\n";
        for (int e = 0; e < mesh.num_edges(); ++e) {
            const auto mid = mesh.edge_midpoint(e);
            csv << e << ','
                << (mesh.orientation(e) == EdgeOrientation::Horizontal ? 'h' : 'v') << ','
                << full(mid.x()) << ',' << full(mid.y()) << ',' << full(snapshot.e[e]) << ','
                << full(snapshot.j[e]) << '\n';
        }
    }
    nlohmann::json meta = {
        {"nx", mesh.nx()},
        {"ny", mesh.ny()},
        {"lx", mesh.lx()},
        {"ly", mesh.ly()},
        {"boundary", to_string(mesh.mode())},
        {"num_edges", mesh.num_edges()},
        {"num_horizontal_edges", mesh.num_horizontal_edges()},
        {"step", snapshot.step},
        {"time", snapshot.time},
        {"dt", dt},
        {"columns", {"edge", "orientation", "x", "y", "E", "J"}},
    };
    auto sidecar = open_out(with_ext(stem, ".json"));
    sidecar << meta.dump(2) << '\n';
}

void write_probe_traces(const std::filesystem::path& path, const RunResult& result)
{
    auto out = open_out(path);
    out << "step,time";
    for (const auto& p : result.probes) out << ",E[" << p.edge << "],J[" << p.edge << "]";
    out << '\n';
    for (std::size_t n = 0; n < result.times.size(); ++n) {
        out << n << ',' << full(result.times[n]);
        for (const auto& p : result.probes) out << ',' << full(p.e[n]) << ',' << full(p.j[n]);
        out << '\n';
    }
}

LoadedSnapshot read_snapshot(const std::filesystem::path& stem)
{
    std::ifstream meta_in(with_ext(stem, ".json"));
    if (!meta_in) throw ValidationError("missing snapshot sidecar for " + stem.string());
    const auto meta = nlohmann::json::parse(meta_in);
    LoadedSnapshot snap;
    snap.nx = meta.at("nx").get<int>();
    snap.ny = meta.at("ny").get<int>();
    snap.step = meta.at("step").get<long>();
    snap.time = meta.at("time").get<double>();
    const int n = meta.at("num_edges").get<int>();
    snap.e.resize(n);
    snap.j.resize(n);

    std::ifstream csv(with_ext(stem, ".csv"));
    if (!csv) throw ValidationError("missing snapshot data for " + stem.string());
    std::string line;
    std::getline(csv, line);
    int row = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 6 || std::stoi(cells[0]) != row || row >= n) {
            throw ValidationError("malformed snapshot row " + std::to_string(row));
        }
        snap.e[row] = std::stod(cells[4]);
        snap.j[row] = std::stod(cells[5]);
        ++row;
    }
    if (row != n) throw ValidationError("snapshot has " + std::to_string(row) + " rows, expected " +
                                        std::to_string(n));
    return snap;
}

}  // namespace etmfd
