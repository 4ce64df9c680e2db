#include "cqmtf/config.hpp"

#include "cqmtf/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef CQMTF_PRESET_DIR
#define CQMTF_PRESET_DIR "presets"
#endif

namespace cqmtf {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    std::string t = trim(v);
    double sign = 1.0;
    if (!t.empty() && t[0] == '-') sign = -1.0, t = trim(t.substr(1));
    try {
        // sqrt(x) is accepted so that directions can be written exactly.
        if (t.rfind("sqrt(", 0) == 0 && t.back() == ')')
            return sign * std::sqrt(std::stod(t.substr(5, t.size() - 6)));
        size_t pos = 0;
        const double x = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return sign * x;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "': cannot read '" + v + "' as a number");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 1e9)
        throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (auto& t : split_list(v)) out.push_back(to_double(key, t));
    return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (auto& t : split_list(v)) out.push_back(to_int(key, t));
    return out;
}

}  // namespace

cd parse_complex(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw ConfigError("empty complex number");
    auto real_part = [&](const std::string& u) -> double {
        if (u.empty() || u == "+") return 0.0;
        return to_double("complex", u);
    };
    if (t.back() != 'i') return real_part(t);
    std::string body = t.substr(0, t.size() - 1);
    // split at the last sign that is not an exponent sign or the leading one
    size_t cut = std::string::npos;
    for (size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            cut = k;
            break;
        }
    std::string re = cut == std::string::npos ? "" : body.substr(0, cut);
    std::string im = cut == std::string::npos ? body : body.substr(cut);
    double imv;
    if (im.empty() || im == "+") imv = 1.0;
    else if (im == "-") imv = -1.0;
    else imv = to_double("complex", im);
    return {real_part(re), imv};
}

void set_option(RunConfig& cfg, const std::string& key_in, const std::string& value_in) {
    const std::string key = trim(key_in), v = trim(value_in);
    if (key == "name") cfg.name = v;
    else if (key == "experiment") cfg.experiment = v;
    else if (key == "scene") cfg.scene = v;
    else if (key == "size") cfg.size = to_double(key, v);
    else if (key == "c") cfg.c = to_doubles(key, v);
    else if (key == "omega") cfg.omega = to_double(key, v);
    else if (key == "T") cfg.T = to_double(key, v);
    else if (key == "tlag") cfg.tlag = to_double(key, v);
    else if (key == "d") {
        auto x = to_doubles(key, v);
        if (x.size() != 2) throw ConfigError("'d' needs two components");
        cfg.d = Vec2(x[0], x[1]);
    } else if (key == "scheme") cfg.scheme = v;
    else if (key == "N") cfg.N = to_int(key, v);
    else if (key == "N_list") cfg.N_list = to_ints(key, v);
    else if (key == "schemes") cfg.schemes = split_list(v);
    else if (key == "reference") cfg.reference = v;
    else if (key == "snapshot_times") cfg.snapshot_times = to_doubles(key, v);
    else if (key == "snapshot_nx") cfg.snapshot_nx = to_int(key, v);
    else if (key == "snapshot_ny") cfg.snapshot_ny = to_int(key, v);
    else if (key == "s") {
        cfg.s.clear();
        for (auto& t : split_list(v)) cfg.s.push_back(parse_complex(t));
    } else if (key == "L_list") cfg.L_list = to_ints(key, v);
    else if (key == "L_ref") cfg.L_ref = to_int(key, v);
    else if (key == "L") cfg.L = to_int(key, v);
    else if (key == "Q") cfg.Q = to_int(key, v);
    else if (key == "Ng") cfg.Ng = to_int(key, v);
    else if (key == "field_points") cfg.field_points = to_int(key, v);
    else if (key == "guard") cfg.guard = to_double(key, v);
    else if (key == "threads") cfg.threads = to_int(key, v);
    else if (key == "out") cfg.out_dir = v;
    else throw ConfigError("unknown key '" + key + "'");
    auto it = std::find_if(cfg.source.begin(), cfg.source.end(),
                           [&](const auto& kv) { return kv.first == key; });
    if (it != cfg.source.end()) it->second = v;
    else cfg.source.emplace_back(key, v);
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            set_option(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    std::error_code ec;
    for (auto& e : std::filesystem::directory_iterator(CQMTF_PRESET_DIR, ec))
        if (e.path().extension() == ".cfg") names.push_back(e.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

RunConfig load_preset(const std::string& name) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string list;
        for (auto& n : names) list += (list.empty() ? "" : ", ") + n;
        throw ConfigError("unknown preset '" + name + "' (valid: " + list + ")");
    }
    return load_config_file(std::string(CQMTF_PRESET_DIR) + "/" + name + ".cfg");
}

void validate(const RunConfig& cfg) {
    static const std::vector<std::string> kinds{"manufactured", "planewave", "frequency"};
    if (std::find(kinds.begin(), kinds.end(), cfg.experiment) == kinds.end())
        throw ConfigError("experiment must be manufactured, planewave or frequency");
    static const std::map<std::string, int> subdomains{
        {"circle1", 2}, {"circle2", 3}, {"square4", 5}, {"kite2", 3}};
    auto it = subdomains.find(cfg.scene);
    if (it == subdomains.end()) throw ConfigError("unknown scene '" + cfg.scene + "'");
    if (static_cast<int>(cfg.c.size()) != it->second)
        throw ConfigError("scene '" + cfg.scene + "' needs " + std::to_string(it->second) +
                          " wavespeeds");
    for (double c : cfg.c)
        if (!(c > 0)) throw ConfigError("wavespeeds must be positive");
    if (!(cfg.size > 0)) throw ConfigError("size must be positive");
    if (cfg.L < 1) throw ConfigError("L must be positive");
    if (cfg.Q < 0 || cfg.Ng < 0) throw ConfigError("Q and Ng must be nonnegative");
    if (cfg.threads < 1) throw ConfigError("threads must be positive");
    if (!(cfg.guard > 0 && cfg.guard < 0.5)) throw ConfigError("guard must lie in (0, 0.5)");
    if (cfg.field_points < 1) throw ConfigError("field_points must be positive");
    if (cfg.experiment == "frequency") {
        if (static_cast<int>(cfg.s.size()) != it->second)
            throw ConfigError("frequency experiment needs one s per subdomain");
        for (int L : cfg.L_list)
            if (L < 1) throw ConfigError("L_list entries must be positive");
        if (cfg.L_ref < 1) throw ConfigError("L_ref must be positive");
        return;
    }
    if (!(cfg.T > 0)) throw ConfigError("T must be positive");
    if (cfg.N < 1) throw ConfigError("N must be positive");
    for (int N : cfg.N_list)
        if (N < 1) throw ConfigError("N_list entries must be positive");
    if (cfg.scheme != "bdf2" && cfg.scheme != "radau2" && cfg.scheme != "lobatto3")
        throw ConfigError("scheme must be bdf2, radau2 or lobatto3");
    for (auto& s : cfg.schemes)
        if (s != "bdf2" && s != "radau2" && s != "lobatto3")
            throw ConfigError("unknown scheme '" + s + "' in schemes");
    if (cfg.reference != "exact" && cfg.reference != "finest")
        throw ConfigError("reference must be exact or finest");
    if (cfg.reference == "exact" && cfg.experiment != "manufactured")
        throw ConfigError("an exact reference needs the manufactured experiment");
    if (std::abs(cfg.d.norm() - 1.0) > 1e-12) throw ConfigError("d must be a unit vector");
    if (cfg.snapshot_nx < 2 || cfg.snapshot_ny < 2) throw ConfigError("snapshot grid too small");
}

Scene make_scene(const RunConfig& cfg) { return build_scene(cfg.scene, cfg.size, cfg.c); }

std::string metadata_header(const RunConfig& cfg) {
    std::string out;
    for (auto& [k, v] : cfg.source) out += "# " + k + " = " + v + "\n";
    return out;
}

}  // namespace cqmtf
