#pragma once

// Run configuration: INI file plus command-line overrides.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "weylsum/arith.hpp"
#include "weylsum/hecke.hpp"
#include "weylsum/pipeline/params.hpp"

namespace weylsum::harness {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double voronoi = 1e-6;
    double poisson = 1e-6;
    double ablation = 1e-2;   // the dropped-congruence residual must exceed this
    double stilde = 1e-4;
    double l2_constant = 10.0;
    double approx_constant = 1e-3;  // frozen: first run max 6.74e-4
    double omega_ratio = 10.0;
    double sigma0_agreement = 1e-8;
    double sweep_ratio = 0.06;      // frozen: first run max 0.05816
};

struct RunConfig {
    std::string subcommand;
    std::string form = "delta";
    unsigned workers = std::max(1U, std::thread::hardware_concurrency());
    std::filesystem::path cache_dir = hecke::default_cache_dir();
    std::filesystem::path out = "results";

    // single instance
    double N = 500.0;
    u64 p = 13;
    double theta = 0.05;

    // sweep grid
    double grid_N_min = 1e3, grid_N_max = 1e5;
    int grid_N_count = 21;
    u64 grid_p_max = 3000;
    std::vector<u64> grid_p;  // explicit list; empty means all primes <= grid_p_max
    std::vector<double> grid_theta{0.05};

    Tolerances tol;

    /// Odd primes only: the quadratic character needs p > 2.
    std::vector<u64> sweep_primes() const {
        if (!grid_p.empty()) return grid_p;
        auto ps = primes_up_to(grid_p_max);
        std::erase(ps, 2U);
        return ps;
    }
};

namespace detail {

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
    std::vector<T> out;
    std::istringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        std::istringstream cell(item.substr(b, e - b + 1));
        T v{};
        if (!(cell >> v) || !cell.eof()) throw ConfigError("config: bad list entry '" + item + "' for " + key);
        out.push_back(v);
    }
    return out;
}

template <class T>
void read(const boost::property_tree::ptree& t, const std::string& key, T& field) {
    if (auto v = t.get_optional<std::string>(key)) {
        std::istringstream in(*v);
        T parsed{};
        if (!(in >> parsed) || !(in >> std::ws).eof()) throw ConfigError("config: cannot parse " + key + " = " + *v);
        field = parsed;
    }
}

inline void read_string(const boost::property_tree::ptree& t, const std::string& key, std::string& field) {
    if (auto v = t.get_optional<std::string>(key)) field = *v;
}

}  // namespace detail

/// Throws ConfigError unless every field is usable.
inline void validate(const RunConfig& c) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string("config: ") + name + " must be > 0");
    };
    positive(c.tol.voronoi, "tolerance.voronoi");
    positive(c.tol.poisson, "tolerance.poisson");
    positive(c.tol.ablation, "tolerance.ablation");
    positive(c.tol.stilde, "tolerance.stilde");
    positive(c.tol.l2_constant, "tolerance.l2_constant");
    positive(c.tol.approx_constant, "tolerance.approx_constant");
    positive(c.tol.omega_ratio, "tolerance.omega_ratio");
    positive(c.tol.sigma0_agreement, "tolerance.sigma0_agreement");
    positive(c.tol.sweep_ratio, "tolerance.sweep_ratio");
    if (c.form != "delta" && c.form != "delta_e4") throw ConfigError("config: form must be delta or delta_e4");
    if (!pipeline::theta_admissible(c.theta)) throw ConfigError("config: theta must lie in (0, 1/10)");
    if (!(c.N >= 1.0)) throw ConfigError("config: N must be >= 1");
    if (!is_prime(c.p) || c.p == 2) throw ConfigError("config: p must be an odd prime");
    if (c.workers == 0) throw ConfigError("config: workers must be >= 1");
    if (!(c.grid_N_min >= 1.0) || c.grid_N_max < c.grid_N_min || c.grid_N_count < 1)
        throw ConfigError("config: empty or invalid N grid");
    if (c.grid_theta.empty()) throw ConfigError("config: empty theta grid");
    for (double th : c.grid_theta)
        if (!pipeline::theta_admissible(th)) throw ConfigError("config: grid theta must lie in (0, 1/10)");
    for (u64 p : c.grid_p)
        if (!is_prime(p) || p == 2) throw ConfigError("config: grid p entries must be odd primes, got " + std::to_string(p));
    if (c.grid_p.empty() && c.grid_p_max < 3) throw ConfigError("config: empty p grid");
}

/// Applies an INI tree on top of `c`.
inline void apply_tree(const boost::property_tree::ptree& t, RunConfig& c) {
    using detail::read;
    detail::read_string(t, "run.form", c.form);
    read(t, "run.workers", c.workers);
    if (auto v = t.get_optional<std::string>("run.cache_dir")) c.cache_dir = *v;
    if (auto v = t.get_optional<std::string>("run.out")) c.out = *v;
    read(t, "params.N", c.N);
    read(t, "params.p", c.p);
    read(t, "params.theta", c.theta);
    read(t, "grid.N_min", c.grid_N_min);
    read(t, "grid.N_max", c.grid_N_max);
    read(t, "grid.N_count", c.grid_N_count);
    read(t, "grid.p_max", c.grid_p_max);
    if (auto v = t.get_optional<std::string>("grid.p")) c.grid_p = detail::parse_list<u64>(*v, "grid.p");
    if (auto v = t.get_optional<std::string>("grid.theta"))
        c.grid_theta = detail::parse_list<double>(*v, "grid.theta");
    read(t, "tolerance.voronoi", c.tol.voronoi);
    read(t, "tolerance.poisson", c.tol.poisson);
    read(t, "tolerance.ablation", c.tol.ablation);
    read(t, "tolerance.stilde", c.tol.stilde);
    read(t, "tolerance.l2_constant", c.tol.l2_constant);
    read(t, "tolerance.approx_constant", c.tol.approx_constant);
    read(t, "tolerance.omega_ratio", c.tol.omega_ratio);
    read(t, "tolerance.sigma0_agreement", c.tol.sigma0_agreement);
    read(t, "tolerance.sweep_ratio", c.tol.sweep_ratio);
}

/// Loads and validates; an empty file gives the defaults.
inline RunConfig load_config(const std::filesystem::path& path) {
    boost::property_tree::ptree t;
    try {
        boost::property_tree::ini_parser::read_ini(path.string(), t);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig c;
    apply_tree(t, c);
    validate(c);
    return c;
}

inline RunConfig load_config_from_string(const std::string& text) {
    boost::property_tree::ptree t;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, t);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig c;
    apply_tree(t, c);
    validate(c);
    return c;
}

}  // namespace weylsum::harness
