#pragma once

#include "cqmtf/geometry.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace cqmtf {

using cd = std::complex<double>;

// One experiment, read from a flat key = value file.
struct RunConfig {
    std::string name;
    std::string experiment;  // manufactured | planewave | frequency
    std::string scene;       // circle1 | circle2 | square4 | kite2
    double size = 0.5;       // radius or side length
    std::vector<double> c;   // wavespeeds c_0 .. c_M

    // time domain
    double omega = 1.0;
    double T = 1.0;
    double tlag = 0.5;
    Vec2 d{1.0, 0.0};
    std::string scheme = "bdf2";
    int N = 64;
    std::vector<int> N_list;
    std::vector<std::string> schemes;
    std::string reference = "finest";  // exact | finest
    std::vector<double> snapshot_times;
    int snapshot_nx = 61, snapshot_ny = 61;

    // frequency domain
    std::vector<cd> s;  // one per subdomain
    std::vector<int> L_list;
    int L_ref = 80;

    // discretization
    int L = 20;
    int Q = 0, Ng = 0;  // 0: defaults
    int field_points = 12;
    double guard = 0.05;  // fraction of the scene diameter

    int threads = 1;
    std::string out_dir = "out";

    // key = value lines, in file order, as read (for output headers)
    std::vector<std::pair<std::string, std::string>> source;
};

// Sets one key (also used for command-line overrides); unknown keys and
// malformed values throw ConfigError.
void set_option(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");
RunConfig load_config_file(const std::string& path);

std::vector<std::string> preset_names();
RunConfig load_preset(const std::string& name);

// Checks counts, lengths and names; throws ConfigError.
void validate(const RunConfig& cfg);

Scene make_scene(const RunConfig& cfg);

// "# key = value" metadata lines.
std::string metadata_header(const RunConfig& cfg);

cd parse_complex(const std::string& text);

}  // namespace cqmtf
