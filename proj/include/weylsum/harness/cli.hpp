#pragma once

// The weylsum command line: subcommands, flag/config precedence and exit codes.
//
//   0  every check passed
//   1  at least one residual or bound exceeded its tolerance
//   2  usage, configuration or precondition error

#include <boost/property_tree/ini_parser.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "weylsum/characters.hpp"
#include "weylsum/circle.hpp"
#include "weylsum/expsums.hpp"
#include "weylsum/harness/config.hpp"
#include "weylsum/harness/report.hpp"
#include "weylsum/hecke.hpp"
#include "weylsum/pipeline/jutila.hpp"
#include "weylsum/pipeline/omega.hpp"
#include "weylsum/pipeline/params.hpp"
#include "weylsum/pipeline/poisson.hpp"
#include "weylsum/pipeline/sign_change.hpp"
#include "weylsum/pipeline/stilde.hpp"
#include "weylsum/pipeline/sweep.hpp"
#include "weylsum/pipeline/voronoi.hpp"

namespace weylsum::harness {

/// Collects verification failures; prints FAIL lines and the JSON list.
class Checks {
public:
    explicit Checks(std::ostream& out) : out_(out) {}

    void expect(bool ok, const std::string& check, const std::string& detail) {
        if (ok) return;
        out_ << "FAIL " << check << ": " << detail << '\n';
        failures_.push_back({{"check", check}, {"detail", detail}});
    }

    int finish() const {
        if (failures_.empty()) return 0;
        out_ << json{{"failures", failures_}}.dump() << '\n';
        return 1;
    }

private:
    std::ostream& out_;
    json failures_ = json::array();
};

/// Table sizes are rounded up to a short ladder so runs share cache files.
inline i64 canonical_table_size(i64 needed) {
    for (i64 s : {10'000LL, 100'000LL, 300'000LL, 1'000'000LL, 2'000'000LL, 4'000'000LL})
        if (needed <= s) return s;
    throw std::domain_error("coefficient table of " + std::to_string(needed) + " terms exceeds the desk ceiling");
}

inline hecke::CuspForm load_form(const RunConfig& c, i64 needed) {
    i64 size = canonical_table_size(std::max<i64>(needed, 1));
    if (c.form == "delta_e4") {
        if (needed > 50'000) throw std::domain_error("delta_e4 coefficients are capped at 5e4");
        size = std::min<i64>(size, 50'000);
    }
    std::filesystem::create_directories(c.cache_dir);
    return hecke::load_or_compute(c.form, size, c.cache_dir);
}

/// Largest n with 4 pi sqrt(N n)/q below the I1 table range.
inline i64 dual_extent(double N, i64 q_max) {
    const double s = pipeline::i1_table_X_hi * static_cast<double>(q_max) / (4.0 * std::numbers::pi);
    return static_cast<i64>(std::floor(s * s / N)) + 1;
}

inline std::string fmt(double v, int precision = 6) {
    std::ostringstream s;
    s << std::setprecision(precision) << v;
    return s.str();
}

inline json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

inline void save(const RunConfig& c, const std::string& name, const json& j) {
    if (!c.out.empty()) write_json(c.out / name, j);
}

inline std::vector<double> default_shifts(double N) { return {0.0, 0.5 / N, -0.5 / N}; }

// ---------------------------------------------------------------------------

inline int run_tau(int n, std::ostream& out) {
    if (n < 1) throw std::invalid_argument("--n must be >= 1");
    const auto t = hecke::delta_coefficients(n);
    for (int i = 1; i <= n; ++i) out << i << ' ' << hecke::to_string(t[i]) << '\n';
    return 0;
}

inline int run_char(u64 p, std::optional<u64> j, i64 count, std::ostream& out) {
    if (!is_prime(p)) throw std::invalid_argument("--p must be prime");
    const auto chi = j ? chars::make_character(p, *j) : chars::quadratic_character(p);
    out << std::setprecision(17);
    out << "# p=" << p << " index=" << chi.index() << (chi.is_quadratic() ? " quadratic" : "") << '\n';
    for (i64 n = 0; n < count; ++n) out << n << ' ' << chi(n).real() << ' ' << chi(n).imag() << '\n';
    if (chi.is_primitive()) {
        const cplx g = chars::gauss_sum(chi);
        out << "gauss_sum " << g.real() << ' ' << g.imag() << '\n';
        out << "abs_minus_sqrt_p " << std::abs(g) - std::sqrt(static_cast<double>(p)) << '\n';
    }
    return 0;
}

inline int run_kloosterman(i64 a, i64 b, i64 c, std::ostream& out) {
    if (c < 1) throw std::invalid_argument("--c must be >= 1");
    out << std::setprecision(15) << expsums::kloosterman(a, b, c) << '\n';
    return 0;
}

inline int run_jutila_error(const RunConfig& c, const std::vector<double>& Qs, std::ostream& out) {
    Checks checks(out);
    json art{{"l2", json::array()}, {"approx", json::array()}};

    const auto tile = circle::l2_report(circle::build_itilde(circle::make_moduli({2}), 0.25));
    checks.expect(std::abs(tile.error - 1.0) <= 1e-12, "jutila-tiling", "single fraction error " + fmt(tile.error, 17));
    out << "tiling Phi={2} delta=1/4 error " << fmt(tile.error, 17) << '\n';

    double worst = 0.0;
    for (double Q : Qs) {
        for (double delta : {1.0 / Q, std::pow(Q, -1.5), 1.0 / (Q * Q)}) {
            const auto r = circle::l2_report(circle::build_itilde(circle::build_moduli(Q, 0), delta));
            worst = std::max(worst, r.log_normalized);
            out << "l2 Q=" << Q << " delta=" << fmt(delta) << " L=" << r.L << " error=" << fmt(r.error)
                << " ratio=" << fmt(r.ratio) << " log_normalized=" << fmt(r.log_normalized) << '\n';
            art["l2"].push_back({{"Q", Q}, {"delta", delta}, {"L", r.L}, {"error", r.error}, {"ratio", r.ratio},
                                 {"log_normalized", r.log_normalized}});
        }
    }
    checks.expect(worst <= c.tol.l2_constant, "jutila-l2",
                  "max error*delta*L^2/(Q^2 log^2 Q) = " + fmt(worst) + " > " + fmt(c.tol.l2_constant));

    const auto f = load_form(c, 2 * 1024 + 2);
    const auto chi = chars::quadratic_character(c.p);
    double worst_approx = 0.0;
    for (double N : {256.0, 512.0, 1024.0}) {
        for (double theta : {0.02, 0.05}) {
            const auto r = pipeline::approx_error_report(f, chi, pipeline::make_params(N, c.p, theta));
            worst_approx = std::max(worst_approx, r.ratio);
            out << "approx N=" << N << " theta=" << theta << " Q=" << fmt(r.Q) << " |S-S~|=" << fmt(r.abs_error)
                << " ratio=" << fmt(r.ratio) << '\n';
            art["approx"].push_back({{"N", N}, {"theta", theta}, {"Q", r.Q}, {"L", r.L}, {"S", cjson(r.S)},
                                     {"S_tilde", cjson(r.S_tilde)}, {"abs_error", r.abs_error}, {"ratio", r.ratio}});
        }
    }
    checks.expect(worst_approx <= c.tol.approx_constant, "jutila-approx",
                  "max |S-S~| Q/(N^{3/2} log QN) = " + fmt(worst_approx) + " > " + fmt(c.tol.approx_constant));
    save(c, "jutila.json", art);
    return checks.finish();
}

inline int run_voronoi(const RunConfig& c, const std::vector<i64>& qs, const std::vector<double>& Ys,
                       std::optional<i64> a_only, std::ostream& out) {
    Checks checks(out);
    i64 need = 0;
    {
        // the checker's dual length depends on its table only through the cutoff
        const auto probe = hecke::compute_form(c.form, 2);
        const pipeline::VoronoiChecker v(probe);
        for (i64 q : qs)
            for (double Y : Ys) need = std::max({need, v.dual_length(q, Y), static_cast<i64>(2 * Y) + 1});
    }
    const auto f = load_form(c, need);
    const pipeline::VoronoiChecker checker(f);
    json art{{"cases", json::array()}};
    std::vector<pipeline::VoronoiResult> all;
    double worst = 0.0;
    for (double Y : Ys) {
        for (i64 q : qs) {
            std::vector<pipeline::VoronoiResult> rs;
            if (a_only) {
                rs.push_back(checker.check(*a_only, q, Y));
            } else {
                rs = checker.check_all(q, Y);
            }
            for (const auto& r : rs) {
                worst = std::max(worst, r.residual);
                all.push_back(r);
                art["cases"].push_back({{"a", r.a}, {"q", r.q}, {"Y", r.Y}, {"lhs", cjson(r.lhs)}, {"rhs", cjson(r.rhs)},
                                        {"residual", r.residual}, {"absolute", r.absolute}, {"dual_terms", r.dual_terms}});
                checks.expect(r.residual < c.tol.voronoi, "voronoi",
                              "a=" + std::to_string(r.a) + " q=" + std::to_string(q) + " Y=" + fmt(Y) +
                                  " residual " + fmt(r.residual));
            }
        }
    }
    const cplx u = pipeline::fitted_unimodular_constant(all);
    art["fitted_constant"] = cjson(u);
    out << "voronoi cases=" << all.size() << " max_residual=" << fmt(worst) << " fitted_constant=(" << fmt(u.real(), 12)
        << ", " << fmt(u.imag(), 12) << ")\n";
    save(c, "voronoi.json", art);
    return checks.finish();
}

inline int run_poisson(const RunConfig& c, const std::vector<u64>& ps, const std::vector<i64>& qs,
                       std::ostream& out) {
    Checks checks(out);
    json art{{"cases", json::array()}};
    double worst = 0.0, weakest_ablation = INFINITY;
    int degenerate = 0;
    for (u64 p : ps) {
        if (!is_prime(p) || p < 3) throw std::invalid_argument("poisson-check: p must be an odd prime");
        std::vector<u64> indices{(p - 1) / 2};
        if (p > 3) indices.push_back(1);  // non-real
        for (u64 j : indices) {
            const pipeline::PoissonChecker checker(chars::make_character(p, j), c.N);
            for (i64 q : qs) {
                for (double x : default_shifts(c.N)) {
                    for (i64 a = 1; a < q; ++a) {
                        if (std::gcd(a, q) != 1) continue;
                        const auto r = checker.check(a, q, x);
                        const auto ab = checker.check(a, q, x, false);
                        worst = std::max(worst, r.residual);
                        const std::string where = "p=" + std::to_string(p) + " j=" + std::to_string(j) +
                                                  " q=" + std::to_string(q) + " a=" + std::to_string(a) + " x=" + fmt(x);
                        checks.expect(r.residual < c.tol.poisson, "poisson", where + " residual " + fmt(r.residual));
                        if (r.absolute) {
                            ++degenerate;  // both sides vanish; the ablation has nothing to break
                        } else {
                            weakest_ablation = std::min(weakest_ablation, ab.residual);
                            checks.expect(ab.residual > c.tol.ablation, "poisson-ablation",
                                          where + " dropped-congruence residual " + fmt(ab.residual));
                        }
                        art["cases"].push_back({{"p", p}, {"chi_index", j}, {"q", q}, {"a", a}, {"x", x},
                                                {"lhs", cjson(r.lhs)}, {"rhs", cjson(r.rhs)}, {"residual", r.residual},
                                                {"absolute", r.absolute}, {"ablation_residual", ab.residual}});
                    }
                }
            }
        }
    }
    out << "poisson cases=" << art["cases"].size() << " max_residual=" << fmt(worst)
        << " min_ablation_residual=" << fmt(weakest_ablation) << " degenerate=" << degenerate << '\n';
    save(c, "poisson.json", art);
    return checks.finish();
}

inline int run_stilde(const RunConfig& c, const std::vector<double>& xs, bool average, std::ostream& out) {
    Checks checks(out);
    const auto e = pipeline::make_params(c.N, c.p, c.theta);
    const auto f = load_form(c, std::max<i64>(dual_extent(c.N, static_cast<i64>(std::floor(2 * e.Q))),
                                              static_cast<i64>(2 * c.N) + 2));
    const pipeline::StildeEngine engine(f, chars::quadratic_character(c.p), e);
    json art{{"cases", json::array()}};
    for (double x : xs) {
        const auto r = pipeline::stilde_consistency(engine, c.p, c.N, x);
        out << "stilde N=" << c.N << " p=" << c.p << " x=" << fmt(x) << " pre=(" << fmt(r.pre.real(), 12) << ", "
            << fmt(r.pre.imag(), 12) << ") post=(" << fmt(r.post.real(), 12) << ", " << fmt(r.post.imag(), 12)
            << ") relative=" << fmt(r.relative) << '\n';
        checks.expect(r.relative < c.tol.stilde, "stilde", "x=" + fmt(x) + " relative " + fmt(r.relative));
        art["cases"].push_back({{"N", c.N}, {"p", c.p}, {"theta", c.theta}, {"x", x}, {"pre", cjson(r.pre)},
                                {"post", cjson(r.post)}, {"residual", r.relative}});
    }
    if (average) {
        const cplx avg = engine.x_average(), closed = engine.jutila();
        const double rel = std::abs(avg - closed) / std::max(std::abs(closed), 1e-300);
        out << "x-average " << fmt(avg.real(), 12) << " closed-form " << fmt(closed.real(), 12) << " relative "
            << fmt(rel) << '\n';
        checks.expect(rel < c.tol.stilde, "stilde-average", "relative " + fmt(rel));
        art["average"] = {{"quadrature", cjson(avg)}, {"closed_form", cjson(closed)}, {"residual", rel}};
    }
    save(c, "stilde.json", art);
    return checks.finish();
}

inline int run_omega(const RunConfig& c, std::vector<i64> q1s, std::vector<double> xs, i64 n_cap,
                     std::ostream& out) {
    Checks checks(out);
    const auto e = pipeline::make_params(c.N, c.p, c.theta);
    if (!e.in_window()) out << "note: parameters outside the window (" << e.describe() << ")\n";
    if (q1s.empty()) q1s = pipeline::default_q1s(e);
    if (xs.empty()) xs = {0.0, 0.5 / c.N};
    i64 q_max = 1;
    for (i64 q1 : q1s)
        for (i64 q2 : pipeline::default_q2s(e, q1)) q_max = std::max(q_max, q1 * q2);
    const auto f = load_form(c, n_cap > 0 ? n_cap : dual_extent(c.N, q_max));
    const auto chi = chars::quadratic_character(c.p);
    json art{{"cells", json::array()}};
    for (i64 q1 : q1s) {
        const auto q2s = pipeline::default_q2s(e, q1);
        if (q2s.empty()) {
            out << "omega q1=" << q1 << " skipped: no q2 in [Q2, 2Q2] coprime to q1\n";
            continue;
        }
        for (double x : xs) {
            const auto r = pipeline::compute_omega(f, chi, {e, q1, q2s, x, n_cap});
            const double agree = std::abs(r.sigma0 - r.sigma0_kloosterman) / std::max(1.0, std::abs(r.sigma0));
            out << "omega q1=" << q1 << " x=" << fmt(x) << " Omega=" << fmt(r.omega_direct.real(), 10)
                << " Sigma0=" << fmt(r.sigma0.real(), 10) << " Sigma!=0=" << fmt(r.sigma_nonzero.real(), 10)
                << " poisson_rel=" << fmt(r.poisson_relative, 3) << " ratio0=" << fmt(r.ratio0)
                << " ratio_nonzero=" << fmt(r.ratio_nonzero) << '\n';
            const std::string where = "q1=" + std::to_string(q1) + " x=" + fmt(x);
            checks.expect(r.ratio0 <= c.tol.omega_ratio, "omega-zero-frequency", where + " ratio " + fmt(r.ratio0));
            checks.expect(r.ratio_nonzero <= c.tol.omega_ratio, "omega-nonzero-frequency",
                          where + " ratio " + fmt(r.ratio_nonzero));
            checks.expect(agree < c.tol.sigma0_agreement, "omega-sigma0-formulas", where + " difference " + fmt(agree));
            checks.expect(r.poisson_relative < c.tol.poisson, "omega-poisson",
                          where + " direct vs dual " + fmt(r.poisson_relative));
            art["cells"].push_back({{"q1", q1}, {"x", x}, {"q2s", q2s}, {"omega", cjson(r.omega_direct)},
                                    {"sigma0", cjson(r.sigma0)}, {"sigma0_kloosterman", cjson(r.sigma0_kloosterman)},
                                    {"sigma_nonzero", cjson(r.sigma_nonzero)}, {"poisson_relative", r.poisson_relative},
                                    {"ratio0", r.ratio0}, {"ratio_nonzero", r.ratio_nonzero}});
        }
    }
    save(c, "omega.json", art);
    return checks.finish();
}

inline int run_sweep_cmd(const RunConfig& c, std::ostream& out) {
    Checks checks(out);
    const auto Ns = pipeline::log_spaced(c.grid_N_min, c.grid_N_max, c.grid_N_count);
    const auto cells = pipeline::make_grid(Ns, c.sweep_primes(), c.grid_theta);
    const auto f = load_form(c, static_cast<i64>(std::ceil(2 * c.grid_N_max)) + 1);
    const auto records = pipeline::run_sweep(f, cells, c.workers);

    std::vector<double> prefix(static_cast<std::size_t>(f.n_max()) + 1, 0.0);
    for (i64 n = 1; n <= f.n_max(); ++n) prefix[n] = prefix[n - 1] + std::abs(f.lambda(n));
    for (const auto& r : records) {
        const double ceiling = prefix[static_cast<std::size_t>(std::floor(r.N))] / r.denominator;
        checks.expect(r.ratio <= ceiling * (1.0 + 1e-12), "sweep-trivial-ceiling",
                      "N=" + fmt(r.N) + " p=" + std::to_string(r.p) + " ratio above sum|lambda|/denominator");
    }
    const double worst = pipeline::max_window_ratio(records);
    std::size_t in_window = 0;
    for (const auto& r : records) in_window += r.window ? 1 : 0;
    out << "sweep cells=" << records.size() << " in_window=" << in_window << " max_window_ratio=" << fmt(worst, 10)
        << '\n';
    if (in_window > 0)
        checks.expect(worst <= c.tol.sweep_ratio, "sweep-ratio",
                      "max in-window ratio " + fmt(worst, 10) + " > " + fmt(c.tol.sweep_ratio));
    if (!c.out.empty()) {
        std::filesystem::create_directories(c.out);
        std::ofstream csv(c.out / "sweep.csv");
        pipeline::write_sweep_csv(csv, records);
    }
    return checks.finish();
}

inline int run_sign_change(const RunConfig& c, const std::vector<u64>& ps, u64 p_max, std::ostream& out) {
    Checks checks(out);
    std::vector<u64> primes = ps;
    if (primes.empty())
        for (u64 p : primes_up_to(p_max))
            if (p > 2) primes.push_back(p);
    const auto f = load_form(c, 100'000);
    json art{{"cases", json::array()}};
    for (u64 p : primes) {
        const auto r = pipeline::first_sign_disagreement(f, p);
        const double bound = std::pow(static_cast<double>(p), 2.0 / 3.0 + 0.1);
        if (!r.index) {
            out << "p=" << p << " no disagreement up to " << r.scanned << '\n';
            checks.expect(false, "sign-change", "p=" + std::to_string(p) + " none found in table");
            continue;
        }
        out << "p=" << p << " index=" << *r.index << " index/p^(2/3)=" << fmt(r.normalized) << '\n';
        checks.expect(static_cast<double>(*r.index) <= bound, "sign-change",
                      "p=" + std::to_string(p) + " index " + std::to_string(*r.index) + " > p^(2/3+0.1) = " + fmt(bound));
        art["cases"].push_back({{"p", p}, {"index", *r.index}, {"normalized", r.normalized}, {"bound", bound}});
    }
    save(c, "sign_change.json", art);
    return checks.finish();
}

// ---------------------------------------------------------------------------

/// Parses argv, merges config file and flags, and runs one subcommand.
inline int cli_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
    CLI::App app{"weylsum: experiments on short twisted sums of Hecke eigenvalues"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    std::string config_path, form, out_dir, cache_dir;
    unsigned workers = 0;
    app.add_option("--config", config_path, "INI configuration file");
    app.add_option("--form", form, "Cusp form: delta or delta_e4");
    app.add_option("--out", out_dir, "Directory for CSV/JSON artifacts");
    app.add_option("--workers", workers, "Worker threads for sweeps");
    app.add_option("--cache-dir", cache_dir, "Coefficient cache directory (else $WEYLSUM_CACHE_DIR)");

    double N = 0, theta = 0;
    u64 p = 0;
    auto add_params = [&](CLI::App* s) {
        s->add_option("--N", N, "Length of the sum");
        s->add_option("--p", p, "Prime modulus of the character");
        s->add_option("--theta", theta, "theta in (0, 1/10)");
    };

    int tau_n = 10;
    auto* tau = app.add_subcommand("tau", "Print Ramanujan tau(1..n)");
    tau->add_option("--n", tau_n, "How many coefficients");

    u64 char_p = 5;
    std::optional<u64> char_j;
    i64 char_count = -1;
    auto* chr = app.add_subcommand("char", "Print a Dirichlet character and its Gauss sum");
    chr->add_option("--p", char_p, "Prime modulus")->required();
    chr->add_option("--j", char_j, "Character index (default: quadratic)");
    chr->add_option("--n", char_count, "How many values (default p)");

    i64 ka = 0, kb = 0, kc = 1;
    auto* kl = app.add_subcommand("kloosterman", "Print S(a, b; c)");
    kl->add_option("--a", ka)->required();
    kl->add_option("--b", kb)->required();
    kl->add_option("--c", kc)->required();

    std::vector<double> jQ{10, 20, 40, 80, 160};
    auto* jut = app.add_subcommand("jutila-error", "L2 error of the Farey-arc weight and |S - S~|");
    jut->add_option("--Q", jQ, "Moduli scales for the L2 grid")->delimiter(',');
    jut->add_option("--p", p, "Character modulus for |S - S~|");

    std::vector<i64> vq{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> vY{20, 50, 200};
    std::optional<i64> va;
    auto* vor = app.add_subcommand("voronoi-check", "Two-sided Voronoi summation check");
    vor->add_option("--q", vq, "Moduli")->delimiter(',');
    vor->add_option("--Y", vY, "Scales")->delimiter(',');
    vor->add_option("--a", va, "Single residue (default: all reduced)");

    std::vector<u64> pp;
    std::vector<i64> pq{3, 5, 7, 11};
    auto* poi = app.add_subcommand("poisson-check", "Twisted Poisson summation check with ablation");
    poi->add_option("--p", pp, "Primes (default: config p)")->delimiter(',');
    poi->add_option("--q", pq, "Moduli")->delimiter(',');
    poi->add_option("--N", N, "Length");

    std::vector<double> sx;
    bool s_avg = false;
    auto* sti = app.add_subcommand("stilde-consistency", "S~_x before and after the dual transforms");
    add_params(sti);
    sti->add_option("--x", sx, "Shifts (default 0, +-delta/2)")->delimiter(',');
    sti->add_flag("--average", s_avg, "Also check the x-average against the closed form");

    std::vector<i64> oq1;
    std::vector<double> ox;
    i64 o_cap = 0;
    auto* ome = app.add_subcommand("omega", "Omega: direct, zero and non-zero frequency");
    add_params(ome);
    ome->add_option("--q1", oq1, "q1 values (default: [Q1, 2Q1] coprime to p)")->delimiter(',');
    ome->add_option("--x", ox, "Shifts (default 0, delta/2)")->delimiter(',');
    ome->add_option("--n-cap", o_cap, "Truncate the n-sum (0: kernel decay)");

    double gmin = 0, gmax = 0;
    int gcount = 0;
    u64 gpmax = 0;
    auto* swp = app.add_subcommand("sweep", "Ratio sweep over (N, p, theta)");
    swp->add_option("--N-min", gmin);
    swp->add_option("--N-max", gmax);
    swp->add_option("--N-count", gcount);
    swp->add_option("--p-max", gpmax);

    std::vector<u64> scp;
    u64 sc_max = 1000;
    auto* sgn = app.add_subcommand("sign-change", "First n where lambda(n) and a quadratic character disagree");
    sgn->add_option("--p", scp, "Primes (default: odd primes up to --p-max)")->delimiter(',');
    sgn->add_option("--p-max", sc_max);

    std::string report_dir;
    auto* rep = app.add_subcommand("report", "Summarise a results directory");
    rep->add_option("--dir", report_dir, "Results directory (default --out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        RunConfig c;
        boost::property_tree::ptree tree;
        if (!config_path.empty()) {
            try {
                boost::property_tree::ini_parser::read_ini(config_path, tree);
            } catch (const boost::property_tree::ini_parser_error& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
            apply_tree(tree, c);
        }
        auto flag = [&](const std::string& name, const std::string& key, bool given, auto& field, auto value) {
            if (!given) return;
            if (tree.get_optional<std::string>(key)) err << "config: flag --" << name << " overrides " << key << '\n';
            field = value;
        };
        const auto* sub = app.get_subcommands().front();
        auto has = [&](const std::string& opt) {
            const auto* o = sub->get_option_no_throw(opt);
            return o != nullptr && o->count() > 0;
        };
        auto given = [&](const std::string& opt) { return app.count(opt) > 0; };
        flag("form", "run.form", given("--form"), c.form, form);
        flag("out", "run.out", given("--out"), c.out, std::filesystem::path(out_dir));
        flag("workers", "run.workers", given("--workers"), c.workers, workers);
        flag("cache-dir", "run.cache_dir", given("--cache-dir"), c.cache_dir, std::filesystem::path(cache_dir));
        flag("N", "params.N", has("--N"), c.N, N);
        if (sub == jut || sub == sti || sub == ome)
            flag("p", "params.p", has("--p"), c.p, p);
        flag("theta", "params.theta", has("--theta"), c.theta, theta);
        flag("N-min", "grid.N_min", has("--N-min"), c.grid_N_min, gmin);
        flag("N-max", "grid.N_max", has("--N-max"), c.grid_N_max, gmax);
        flag("N-count", "grid.N_count", has("--N-count"), c.grid_N_count, gcount);
        flag("p-max", "grid.p_max", sub == swp && has("--p-max"), c.grid_p_max, gpmax);
        validate(c);
        c.subcommand = sub->get_name();

        if (sub == tau) return run_tau(tau_n, out);
        if (sub == chr) return run_char(char_p, char_j, char_count < 0 ? static_cast<i64>(char_p) : char_count, out);
        if (sub == kl) return run_kloosterman(ka, kb, kc, out);
        if (sub == jut) return run_jutila_error(c, jQ, out);
        if (sub == vor) return run_voronoi(c, vq, vY, va, out);
        if (sub == poi) return run_poisson(c, pp.empty() ? std::vector<u64>{c.p} : pp, pq, out);
        if (sub == sti) return run_stilde(c, sx.empty() ? default_shifts(c.N) : sx, s_avg, out);
        if (sub == ome) return run_omega(c, oq1, ox, o_cap, out);
        if (sub == swp) return run_sweep_cmd(c, out);
        if (sub == sgn) return run_sign_change(c, scp, sc_max, out);
        if (sub == rep) {
            const auto paths = report(report_dir.empty() ? c.out : std::filesystem::path(report_dir));
            out << "wrote " << paths.summary.string() << " and " << paths.plot.string() << '\n';
            return 0;
        }
        return 2;
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace weylsum::harness
