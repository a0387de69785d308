#pragma once

#include <filesystem>
#include <string>

#include "etmfd/stepper.hpp"

namespace etmfd {

/// Write `<stem>.csv` and `<stem>.json` for one snapshot.
///
/// The CSV has header `edge,orientation,x,y,E,J` and one row per edge in
/// global edge index order (horizontal edges first); x, y are the edge
/// midpoint. The JSON sidecar records nx, ny, lx, ly, boundary, num_edges,
/// step, time, dt and the column list. Values use full precision (%.17g).
void write_snapshot(const std::filesystem::path& stem, const RectMesh& mesh,
                    const Snapshot& snapshot, double dt);

/// One row per level: `step,time,E[e0],J[e0],E[e1],J[e1],...`.
void write_probe_traces(const std::filesystem::path& path, const RunResult& result);

/// Parsed back from a snapshot sidecar + CSV (used by tests and tools).
struct LoadedSnapshot {
    int nx = 0;
    int ny = 0;
    long step = 0;
    double time = 0.0;
    EdgeField e;
    EdgeField j;
};

LoadedSnapshot read_snapshot(const std::filesystem::path& stem);

}  // namespace etmfd
