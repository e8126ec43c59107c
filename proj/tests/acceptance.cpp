// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 when the failing set equals `expected_failures`: claims
// that are false as stated and documented as such. Any other failure, or an
// expected failure that starts passing, exits 1.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "weylsum/weylsum.hpp"

using namespace weylsum;
using namespace weylsum::pipeline;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const std::set<int> expected_failures{7, 9};

const hecke::CuspForm& form() {
    static const auto f = hecke::load_or_compute("delta", 1'000'000, hecke::default_cache_dir());
    return f;
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome voronoi() {
    const auto t0 = std::chrono::steady_clock::now();
    const VoronoiChecker v(form());
    double worst = 0.0;
    std::size_t cases = 0;
    for (double Y : {20.0, 50.0, 200.0})
        for (i64 q = 1; q <= 10; ++q)
            for (const auto& r : v.check_all(q, Y)) {
                worst = std::max(worst, r.residual);
                ++cases;
            }
    const double s = since(t0);
    return {worst < 1e-6 && s < 120, std::to_string(cases) + " cases, max residual " + num(worst) + ", " + num(s) + " s"};
}

Outcome poisson() {
    const auto t0 = std::chrono::steady_clock::now();
    const double N = 500;
    double worst = 0.0, weakest = INFINITY;
    int degenerate = 0, cases = 0;
    for (u64 p : {13ULL, 101ULL, 1009ULL}) {
        for (u64 j : {(p - 1) / 2, u64{1}}) {
            const PoissonChecker c(chars::make_character(p, j), N);
            for (i64 q : {3, 5, 7, 11})
                for (double x : {0.0, 0.5 / N, -0.5 / N})
                    for (i64 a = 1; a < q; ++a) {
                        const auto r = c.check(a, q, x);
                        worst = std::max(worst, r.residual);
                        ++cases;
                        if (r.absolute) {
                            ++degenerate;
                            continue;
                        }
                        weakest = std::min(weakest, c.check(a, q, x, false).residual);
                    }
        }
    }
    const double s = since(t0);
    return {worst < 1e-6 && weakest > 1e-2 && s < 120,
            std::to_string(cases) + " cases, max residual " + num(worst) + ", min ablation residual " + num(weakest) +
                " (" + std::to_string(degenerate) + " cases with |lhs| < 1e-6 skipped), " + num(s) + " s"};
}

Outcome l2() {
    const auto tile = circle::l2_report(circle::build_itilde(circle::make_moduli({2}), 0.25));
    double C = 0.0;
    for (double Q : {10.0, 20.0, 40.0, 80.0, 160.0})
        for (double delta : {1.0 / Q, std::pow(Q, -1.5), 1.0 / (Q * Q)})
            C = std::max(C, circle::l2_report(circle::build_itilde(circle::build_moduli(Q, 0), delta)).log_normalized);
    const bool tiling = std::abs(tile.error - 1.0) <= 1e-12;
    return {C <= 10.0 && tiling, "C = " + num(C) + ", single-fraction error " + std::to_string(tile.error)};
}

Outcome approx() {
    const auto t0 = std::chrono::steady_clock::now();
    const harness::Tolerances tol;
    double worst = 0.0;
    for (double N : {256.0, 512.0, 1024.0})
        for (double theta : {0.02, 0.05})
            worst = std::max(worst, approx_error_report(form(), chars::quadratic_character(13),
                                                        make_params(N, 13, theta)).ratio);
    const double s = since(t0);
    return {worst <= tol.approx_constant && s < 600,
            "max ratio " + num(worst) + " vs frozen C' " + num(tol.approx_constant) + ", " + num(s) + " s"};
}

Outcome stilde() {
    int good = 0, total = 0;
    double worst = 0.0;
    for (u64 p : {13ULL, 101ULL}) {
        const auto e = make_params(500, p, 0.05);
        const StildeEngine eng(form(), chars::quadratic_character(p), e);
        for (double x : {0.0, p == 13 ? 0.5 * e.delta : -0.5 * e.delta}) {
            const auto r = stilde_consistency(eng, p, 500, x);
            worst = std::max(worst, r.relative);
            ++total;
            if (r.relative < 1e-4) ++good;
        }
    }
    return {good >= 3, std::to_string(good) + "/" + std::to_string(total) + " instances agree, max relative " + num(worst)};
}

Outcome omega() {
    const auto e = make_params(500, 1009, 0.05);
    const auto chi = chars::quadratic_character(1009);
    double r0 = 0.0, rn = 0.0, agree = 0.0;
    int cells = 0;
    for (i64 q1 : default_q1s(e)) {
        const auto q2s = default_q2s(e, q1);
        if (q2s.empty()) continue;
        for (double x : {0.0, 0.5 * e.delta}) {
            const auto r = compute_omega(form(), chi, {e, q1, q2s, x, 0});
            r0 = std::max(r0, r.ratio0);
            rn = std::max(rn, r.ratio_nonzero);
            agree = std::max(agree, std::abs(r.sigma0 - r.sigma0_kloosterman) / std::max(1.0, std::abs(r.sigma0)));
            ++cells;
        }
    }
    return {cells > 0 && r0 <= 10 && rn <= 10 && agree < 1e-8,
            std::to_string(cells) + " (q1, x) cells, max ratios " + num(r0) + " / " + num(rn) +
                ", Sigma0 formula gap " + num(agree)};
}

Outcome oracles() {
    std::vector<std::string> broken;
    const i64 n_max = 100'000;
    const auto f = hecke::delta_form(n_max);
    const auto& a = f.coefficients();
    bool mult = true, deligne = true;
    for (i64 m = 2; m * m <= n_max && mult; ++m)
        for (i64 n = m + 1; m * n <= n_max; ++n)
            if (std::gcd(m, n) == 1 && !(a[m * n] == a[m] * a[n])) mult = false;
    for (i64 n = 1; n <= n_max && deligne; ++n) deligne = hecke::deligne_bound_holds(f, n);
    if (!mult) broken.push_back("multiplicativity");
    if (!deligne) broken.push_back("Deligne");

    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<i64> cdist(1, 3000);
    double margin = 0.0;
    for (int i = 0; i < 10'000; ++i) {
        const i64 c = cdist(rng);
        std::uniform_int_distribution<i64> r(0, c - 1);
        margin = std::max(margin, expsums::weil_margin(r(rng), r(rng), c));
    }
    if (margin > 1.0 + 1e-9) broken.push_back("Weil margin " + num(margin));

    std::string gcd_note;
    for (i64 c : {1, 12, 2310}) {
        // G(x, y) = sum_{a <= x, b <= y} gcd(a, b, c) by 2D prefix sums
        std::vector<std::vector<i64>> G(201, std::vector<i64>(201, 0));
        i64 bad = 0;
        std::pair<i64, i64> first{0, 0};
        for (i64 x = 1; x <= 200; ++x)
            for (i64 y = 1; y <= 200; ++y) {
                G[x][y] = std::gcd(std::gcd(x, y), c) + G[x - 1][y] + G[x][y - 1] - G[x - 1][y - 1];
                if (G[x][y] > x * y) {
                    if (bad++ == 0) first = {x, y};
                }
            }
        if (bad > 0) {
            broken.push_back("gcd-sum bound fails for c=" + std::to_string(c) + " in " + std::to_string(bad) +
                             " of 40000 (x, y), first at (" + std::to_string(first.first) + ", " +
                             std::to_string(first.second) + ")");
            if (expsums::gcd_triple_sum(first.first, first.second, c).bound_ok) broken.push_back("gcd oracle mismatch");
        }
    }

    double gauss = 0.0;
    for (u64 p : primes_up_to(101)) {
        if (p < 3) continue;
        for (u64 j = 1; j + 1 < p; ++j)
            gauss = std::max(gauss, std::abs(std::abs(chars::gauss_sum(chars::make_character(p, j))) -
                                             std::sqrt(static_cast<double>(p))));
    }
    if (gauss >= 1e-10) broken.push_back("Gauss sum modulus " + num(gauss));

    std::string detail = "tau multiplicative and Deligne to 1e5, Weil margin " + num(margin) + ", Gauss gap " + num(gauss);
    for (const auto& b : broken) detail += "; " + b;
    return {broken.empty(), detail};
}

Outcome sweep() {
    const auto t0 = std::chrono::steady_clock::now();
    const harness::Tolerances tol;
    auto ps = primes_up_to(3000);
    std::erase(ps, 2U);
    const auto cells = make_grid(log_spaced(1e3, 1e5, 21), ps, {0.05});
    const auto rs = run_sweep(form(), cells, 8);
    const double worst = max_window_ratio(rs);
    std::size_t window = 0;
    for (const auto& r : rs) window += r.window ? 1 : 0;
    const double s = since(t0);
    return {window > 0 && worst <= tol.sweep_ratio && s < 1800,
            std::to_string(rs.size()) + " cells, " + std::to_string(window) + " in window, max ratio " + num(worst) +
                " vs frozen " + num(tol.sweep_ratio) + ", " + num(s) + " s"};
}

Outcome sign_change() {
    std::string bad;
    int count = 0;
    for (u64 p : primes_up_to(1000)) {
        if (p == 2) continue;  // no quadratic character mod 2
        const auto r = first_sign_disagreement(form(), p);
        const double bound = std::pow(static_cast<double>(p), 2.0 / 3.0 + 0.1);
        if (!r.index || static_cast<double>(*r.index) > bound) {
            ++count;
            bad += " p=" + std::to_string(p) + " index " + (r.index ? std::to_string(*r.index) : "none") + " > " + num(bound);
        }
    }
    return {count == 0, count == 0 ? "all odd p <= 1000 within p^(2/3+0.1)" : std::to_string(count) + " exceptions:" + bad};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Voronoi identity", voronoi},         {"twisted Poisson identity", poisson},
        {"Farey-arc L2 error", l2},            {"circle-method approximation", approx},
        {"S~_x transform consistency", stilde}, {"Omega frequency split", omega},
        {"arithmetic oracles", oracles},       {"ratio sweep", sweep},
        {"first sign disagreement", sign_change}};
    std::set<int> failed;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) failed.insert(id);
        std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << id << ' ' << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    const bool as_documented = failed == expected_failures;
    std::cout << "failing criteria:";
    for (int id : failed) std::cout << ' ' << id;
    std::cout << (as_documented ? " (exactly the documented set)" : " (differs from the documented set)") << '\n';
    return as_documented ? 0 : 1;
}
