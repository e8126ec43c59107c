#pragma once

// Aggregates the artifacts of a results directory into summary.json and a
// plot-ready ratios.csv.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "weylsum/pipeline/sweep.hpp"

namespace weylsum::harness {

using json = nlohmann::json;

inline void write_json(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << std::setw(2) << j << '\n';
}

inline json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return json::parse(in);
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// Counts per decade: key "1e-k" holds residuals in (1e-(k+1), 1e-k].
inline json decade_histogram(const std::vector<double>& values) {
    std::map<int, int> bins;
    for (double v : values) {
        const int k = v <= 0.0 ? 17 : std::clamp(static_cast<int>(std::floor(-std::log10(v))), -3, 17);
        ++bins[k];
    }
    json out = json::object();
    for (auto [k, n] : bins) out["1e" + std::to_string(-k)] = n;
    return out;
}

inline std::string theta_key(double theta) {
    std::ostringstream s;
    s << theta;
    return s.str();
}

struct ReportPaths {
    std::filesystem::path summary, plot;
};

inline ReportPaths report(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir) || fs::is_empty(dir)) throw std::runtime_error("report: empty results directory " + dir.string());

    json summary = json::object();
    bool found = false;

    const auto sweep_path = dir / "sweep.csv";
    std::vector<pipeline::SweepRecord> cells;
    if (fs::exists(sweep_path)) {
        std::ifstream in(sweep_path);
        cells = pipeline::read_sweep_csv(in);
        found = true;
        std::map<double, std::vector<const pipeline::SweepRecord*>> by_theta;
        for (const auto& r : cells) by_theta[r.theta].push_back(&r);
        json per = json::object();
        double overall = -1.0;
        for (const auto& [theta, rs] : by_theta) {
            std::vector<double> all, window;
            for (const auto* r : rs) {
                all.push_back(r->ratio);
                if (r->window) window.push_back(r->ratio);
            }
            json t;
            t["cells"] = rs.size();
            t["max_ratio"] = *std::max_element(all.begin(), all.end());
            t["median_ratio"] = median(all);
            t["window_cells"] = window.size();
            t["max_window_ratio"] = window.empty() ? json(nullptr) : json(*std::max_element(window.begin(), window.end()));
            t["median_window_ratio"] = window.empty() ? json(nullptr) : json(median(window));
            overall = std::max(overall, *std::max_element(all.begin(), all.end()));
            per[theta_key(theta)] = t;
        }
        summary["sweep"] = {{"cells", cells.size()}, {"max_ratio", overall}, {"by_theta", per}};
    }

    if (fs::exists(dir / "jutila.json")) {
        found = true;
        const auto j = read_json(dir / "jutila.json");
        double l2 = 0.0, l2_log = 0.0, approx = 0.0;
        for (const auto& c : j.value("l2", json::array())) {
            l2 = std::max(l2, c.at("ratio").get<double>());
            l2_log = std::max(l2_log, c.at("log_normalized").get<double>());
        }
        for (const auto& c : j.value("approx", json::array())) approx = std::max(approx, c.at("ratio").get<double>());
        summary["l2_constant"] = l2;
        summary["l2_constant_log_normalized"] = l2_log;
        summary["approx_constant"] = approx;
    }

    if (fs::exists(dir / "omega.json")) {
        found = true;
        const auto j = read_json(dir / "omega.json");
        double r0 = 0.0, rn = 0.0;
        for (const auto& c : j.value("cells", json::array())) {
            r0 = std::max(r0, c.at("ratio0").get<double>());
            rn = std::max(rn, c.at("ratio_nonzero").get<double>());
        }
        summary["omega"] = {{"max_ratio0", r0}, {"max_ratio_nonzero", rn}};
    }

    json hist = json::object();
    for (const char* name : {"voronoi", "poisson", "stilde"}) {
        const auto path = dir / (std::string(name) + ".json");
        if (!fs::exists(path)) continue;
        found = true;
        std::vector<double> res;
        for (const auto& c : read_json(path).value("cases", json::array())) res.push_back(c.at("residual").get<double>());
        hist[name] = decade_histogram(res);
    }
    if (!hist.empty()) summary["residual_histograms"] = hist;

    if (!found) throw std::runtime_error("report: no recognised artifacts in " + dir.string());

    ReportPaths paths{dir / "summary.json", dir / "ratios.csv"};
    write_json(paths.summary, summary);
    std::ofstream plot(paths.plot);
    plot << "N,p,theta,window,ratio\n" << std::setprecision(17);
    for (const auto& r : cells) plot << r.N << ',' << r.p << ',' << r.theta << ',' << (r.window ? 1 : 0) << ',' << r.ratio << '\n';
    return paths;
}

}  // namespace weylsum::harness
