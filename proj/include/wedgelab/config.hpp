#pragma once

#include "wedgelab/core.hpp"
#include "wedgelab/smatrix.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace wedgelab::app {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sectioned key-value text ([section] / key = value / # comments). All
/// run parameters come from the file; reproducibility beats flags.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path);
    }

    static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>")
    {
        KeyValueConfig cfg;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            cfg.values_[section + "." + key] = val;
        }
        return cfg;
    }

    bool has(const std::string& dotted) const { return values_.count(dotted) > 0; }

    std::string get(const std::string& dotted, const std::string& fallback) const
    {
        auto it = values_.find(dotted);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& dotted, double fallback) const
    {
        auto it = values_.find(dotted);
        if (it == values_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key " + dotted + ": not a number: '" + it->second + "'");
        }
    }

    long get_int(const std::string& dotted, long fallback) const
    {
        auto it = values_.find(dotted);
        if (it == values_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const long v = std::stol(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key " + dotted + ": not an integer: '" + it->second + "'");
        }
    }

    bool get_bool(const std::string& dotted, bool fallback) const
    {
        auto it = values_.find(dotted);
        if (it == values_.end()) return fallback;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw ConfigError("config key " + dotted + ": not a boolean: '" + it->second + "'");
    }

    std::vector<std::string> get_list(const std::string& dotted) const
    {
        std::vector<std::string> out;
        auto it = values_.find(dotted);
        if (it == values_.end()) return out;
        std::istringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    const std::map<std::string, std::string>& raw() const { return values_; }

private:
    static std::string trim(const std::string& s)
    {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    std::map<std::string, std::string> values_;
};

struct RunConfig {
    std::string model_name = "ising";
    double g = 1.0;
    double kappa = 1.0;
    double mass = 1.0;
    int internal_dim = 2; // flip models

    int grid_points = 6;
    double grid_theta_max = 4.0;
    int n_max = 3;

    double quad_theta_max = 8.0;
    int quad_panels = 4;
    int quad_per_panel = 64;

    Tolerances tol;
    std::uint64_t seed = 1;
    std::vector<std::string> suites; // empty = all
    std::string out_dir = "reports";
    bool informational_fail_exit = false;

    std::map<std::string, std::string> echo; // raw key-value pairs

    static RunConfig from(const KeyValueConfig& kv)
    {
        RunConfig rc;
        rc.model_name = kv.get("model.name", rc.model_name);
        rc.g = kv.get_double("model.g", rc.g);
        rc.kappa = kv.get_double("model.kappa", rc.kappa);
        rc.mass = kv.get_double("model.mass", rc.mass);
        rc.internal_dim = static_cast<int>(kv.get_int("model.internal_dim", rc.internal_dim));
        rc.grid_points = static_cast<int>(kv.get_int("grid.points", rc.grid_points));
        rc.grid_theta_max = kv.get_double("grid.theta_max", rc.grid_theta_max);
        rc.n_max = static_cast<int>(kv.get_int("truncation.n_max", rc.n_max));
        rc.quad_theta_max = kv.get_double("quadrature.theta_max", rc.quad_theta_max);
        rc.quad_panels = static_cast<int>(kv.get_int("quadrature.panels", rc.quad_panels));
        rc.quad_per_panel = static_cast<int>(kv.get_int("quadrature.per_panel", rc.quad_per_panel));
        rc.tol.algebraic = kv.get_double("tolerance.algebraic", rc.tol.algebraic);
        rc.tol.rounding = kv.get_double("tolerance.rounding", rc.tol.rounding);
        rc.tol.quadrature = kv.get_double("tolerance.quadrature", rc.tol.quadrature);
        rc.seed = static_cast<std::uint64_t>(kv.get_int("run.seed", 1));
        rc.suites = kv.get_list("run.suites");
        rc.out_dir = kv.get("run.out", rc.out_dir);
        rc.informational_fail_exit = kv.get_bool("run.informational_fail_exit", false);
        rc.echo = kv.raw();
        rc.validate();
        return rc;
    }

    void validate() const
    {
        if (grid_points < 2) throw ConfigError("grid.points must be >= 2");
        if (n_max < 1) throw ConfigError("truncation.n_max must be >= 1");
        if (!(tol.algebraic > 0) || !(tol.rounding > 0) || !(tol.quadrature > 0))
            throw ConfigError("tolerances must be positive");
        if (!(grid_theta_max > 0)) throw ConfigError("grid.theta_max must be positive");
        if (quad_panels < 1 || quad_per_panel < 2) throw ConfigError("bad quadrature parameters");
    }

    smx::SMatrixModel build_model() const
    {
        if (model_name == "free") return smx::free_model(mass);
        if (model_name == "ising") return smx::ising_model(mass);
        if (model_name == "sinh_gordon") return smx::sinh_gordon_model(g, mass);
        if (model_name == "nc_exp") return smx::nc_exp_model(kappa, mass);
        if (model_name == "flip+")
            return smx::flip_model(+1, smx::ParticleSpectrum::uniform(internal_dim, mass));
        if (model_name == "flip-")
            return smx::flip_model(-1, smx::ParticleSpectrum::uniform(internal_dim, mass));
        if (model_name == "noncrossing") return smx::crossing_violating_model(g, mass);
        if (model_name == "broken") return smx::broken_model(mass);
        throw ConfigError("unknown model: " + model_name);
    }

    QuadratureRule quadrature() const
    {
        return composite_gauss_legendre(-quad_theta_max, quad_theta_max, quad_panels, quad_per_panel);
    }
};

inline std::vector<std::string> known_models()
{
    return {"free", "ising", "sinh_gordon", "nc_exp", "flip+", "flip-", "noncrossing", "broken"};
}

} // namespace wedgelab::app
