#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "etmfd/analysis.hpp"
#include "json.hpp"

namespace etmfd::cli {

/// Everything a subcommand may read from the JSON config. Keys not listed
/// in the schema are rejected; missing keys take these defaults (the
/// normalized units eps0 = c0 = omega_i = omega_p = 1).
struct AppConfig {
    std::string experiment;  ///< optional; must match the subcommand when given
    Medium medium;
    double nu = 0.5;
    double gamma = 1.0;

    // converge / simulate
    double final_time = 4.0;
    int mode_x = 1;  ///< kx = mode_x * pi
    int mode_y = 1;  ///< ky = mode_y * pi
    std::vector<double> h_list{1.0 / 16, 1.0 / 32, 1.0 / 64};
    std::vector<std::string> schemes{"ETMFD", "ET-Yee"};

    // anisotropy
    double k = 4.0;
    std::vector<double> ppw{12.0, 24.0};
    int theta_points = 72;
    std::vector<double> gammas{1.0};
    /// nu -> nu * min(gamma^3, 1) per aspect ratio.
    bool scale_nu_by_gamma_cubed = false;
    std::optional<double> cell_area;

    // simulate
    int n = 16;
    std::string scheme = "ETMFD";
    std::vector<int> probes;  ///< empty: the automatic probe edge
    int snapshot_stride = 0;
    NormMatrix norm = NormMatrix::Assembled;  ///< error norm for converge / simulate

    // roots
    std::vector<double> root_k{0.0, 4.0, 4.44288293815836624702};
};

/// Parse and validate a config document for `command`.
AppConfig parse_config(const nlohmann::json& doc, const std::string& command);

/// Defaults when `path` is empty; otherwise parse the file. Throws
/// ValidationError for unreadable or malformed files.
AppConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::string& command);

NamedScheme scheme_by_name(const std::string& name);

/// `digits` significant digits, as used in printed tables.
std::string sig(double v, int digits = 6);

/// Entry point: returns the process exit code (0 ok, 1 validation or usage
/// error, 2 numerical failure or failed selftest).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace etmfd::cli
