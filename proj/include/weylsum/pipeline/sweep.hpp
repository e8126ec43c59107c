#pragma once

// Parameter sweep of the direct sums over (N, p, theta) cells.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "weylsum/characters.hpp"
#include "weylsum/hecke.hpp"
#include "weylsum/pipeline/direct_sum.hpp"
#include "weylsum/pipeline/params.hpp"
#include "weylsum/pipeline/sign_change.hpp"

namespace weylsum::pipeline {

struct SweepCell {
    double N = 0.0;
    u64 p = 0;
    double theta = 0.0;
};

struct SweepRecord {
    double N = 0.0;
    u64 p = 0;
    double theta = 0.0;
    bool window = false;
    double abs_S_sharp = 0.0;
    double abs_S_smooth = 0.0;
    double denominator = 0.0;  // N^{3/4 + theta/2} p^{1/6}
    double ratio = 0.0;        // abs_S_sharp / denominator
    i64 sign_change_index = -1;
    double seconds = 0.0;
};

inline const char* sweep_csv_header =
    "N,p,theta,window,abs_S_sharp,abs_S_smooth,denominator,ratio,sign_change_index,seconds";

/// round(10^{a + i (b - a)/(count - 1)}), duplicates removed.
inline std::vector<double> log_spaced(double lo, double hi, int count) {
    if (count < 1 || !(lo >= 1.0) || hi < lo) throw std::invalid_argument("log_spaced: bad range");
    std::vector<double> out;
    const double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        const double v = std::round(std::pow(10.0, a + t * (b - a)));
        if (out.empty() || out.back() != v) out.push_back(v);
    }
    return out;
}

inline std::vector<SweepCell> make_grid(const std::vector<double>& Ns, const std::vector<u64>& ps,
                                        const std::vector<double>& thetas) {
    std::vector<SweepCell> cells;
    for (double th : thetas)
        for (double N : Ns)
            for (u64 p : ps) cells.push_back({N, p, th});
    return cells;
}

inline SweepRecord run_cell(const hecke::CuspForm& f, const SweepCell& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto e = make_params(c.N, c.p, c.theta);
    const auto chi = chars::quadratic_character(c.p);
    SweepRecord r;
    r.N = c.N;
    r.p = c.p;
    r.theta = c.theta;
    r.window = e.in_window();
    r.abs_S_sharp = std::abs(direct_sum(f, chi, c.N, SumWindow::Sharp).value);
    r.abs_S_smooth = std::abs(direct_sum(f, chi, c.N, SumWindow::SmoothH1).value);
    r.denominator = std::pow(c.N, 0.75 + c.theta / 2.0) * std::pow(static_cast<double>(c.p), 1.0 / 6.0);
    r.ratio = r.abs_S_sharp / r.denominator;
    const auto sc = first_sign_disagreement(f, c.p);
    r.sign_change_index = sc.index.value_or(-1);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/// Runs every cell on `workers` threads; output order is the cell order.
inline std::vector<SweepRecord> run_sweep(const hecke::CuspForm& f, const std::vector<SweepCell>& cells,
                                          unsigned workers) {
    std::vector<SweepRecord> out(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_guard;
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                out[i] = run_cell(f, cells[i]);
            } catch (...) {
                std::lock_guard lock(failure_guard);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < std::max(1U, workers); ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

/// Largest ratio over in-window cells; nullopt-like -1 when none.
inline double max_window_ratio(const std::vector<SweepRecord>& rs) {
    double m = -1.0;
    for (const auto& r : rs)
        if (r.window) m = std::max(m, r.ratio);
    return m;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& rs) {
    out << sweep_csv_header << '\n';
    out << std::setprecision(17);
    for (const auto& r : rs) {
        out << r.N << ',' << r.p << ',' << r.theta << ',' << (r.window ? 1 : 0) << ',' << r.abs_S_sharp << ','
            << r.abs_S_smooth << ',' << r.denominator << ',' << r.ratio << ',' << r.sign_change_index << ','
            << r.seconds << '\n';
    }
}

inline std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != sweep_csv_header) throw std::runtime_error("sweep csv: bad header");
    std::vector<SweepRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::vector<std::string> f;
        for (std::string cell; std::getline(row, cell, ',');) f.push_back(cell);
        if (f.size() != 10) throw std::runtime_error("sweep csv: expected 10 fields");
        SweepRecord r;
        r.N = std::stod(f[0]);
        r.p = std::stoull(f[1]);
        r.theta = std::stod(f[2]);
        r.window = f[3] == "1";
        r.abs_S_sharp = std::stod(f[4]);
        r.abs_S_smooth = std::stod(f[5]);
        r.denominator = std::stod(f[6]);
        r.ratio = std::stod(f[7]);
        r.sign_change_index = std::stoll(f[8]);
        r.seconds = std::stod(f[9]);
        out.push_back(r);
    }
    return out;
}

}  // namespace weylsum::pipeline
