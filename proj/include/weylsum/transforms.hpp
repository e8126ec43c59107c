#pragma once

// Oscillatory integrals against smooth weights: Bessel-kernel (Hankel)
// transforms, the dual integrals I1 and I2 produced by Voronoi and Poisson
// summation, and the triple integral appearing after the second Poisson step.
//
// Direct evaluators integrate from scratch. The *Table classes tabulate a
// transform once as a piecewise Chebyshev interpolant and are what the sums
// over n and m use.

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "weylsum/arith.hpp"
#include "weylsum/bessel.hpp"
#include "weylsum/bump.hpp"
#include "weylsum/quadrature.hpp"

namespace weylsum::transforms {

using quad::OscillatoryIntegralResult;
using bump::BumpFunction;

enum class KernelMode { ExactKernel, Asymptotic };

inline constexpr int transition_panels = 8;

/// Segments in s = sqrt(u) covering supp b (b supported in u > 0), sized for
/// a kernel J(X s) times e(c s^2).
inline std::vector<quad::Segment> kernel_segments(const BumpFunction& b, double X, double c) {
    if (b.lo() < 0.0) throw std::invalid_argument("kernel_segments: weight must live on u >= 0");
    std::vector<quad::Segment> segs;
    const auto& knots = b.knots();
    const double freq = std::abs(X) + 4.0 * std::numbers::pi * std::abs(c) * std::sqrt(b.hi());
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = std::sqrt(knots[i]), z = std::sqrt(knots[i + 1]);
        const i64 minimum = b.flat_piece(i) ? 2 : transition_panels;
        segs.push_back({a, z, quad::panels_for(z - a, freq, minimum)});
    }
    return segs;
}

/// Integrand of int b(u) e(c u) J_nu(X sqrt u) du after u = s^2.
struct KernelIntegrand {
    const BumpFunction* b;
    int nu;
    double X, c;
    KernelMode mode;

    cplx operator()(double s) const {
        const double u = s * s;
        const double w = (*b)(u);
        if (w == 0.0) return {0.0, 0.0};
        const double z = X * s;
        double kernel;
        if (mode == KernelMode::ExactKernel) {
            kernel = bessel_j(nu, z);
        } else {
            kernel = z > 0.0 ? bessel_j_leading(nu, z) : 0.0;
        }
        const double amp = 2.0 * s * w * kernel;
        if (c == 0.0) return {amp, 0.0};
        return amp * e(c * u);
    }
};

/// int b(u) e(c u) J_nu(X sqrt u) du on a fixed panel layout (no doubling).
inline cplx kernel_integral_fixed(const BumpFunction& b, int nu, double X, double c,
                                  KernelMode mode = KernelMode::ExactKernel) {
    return quad::integrate(KernelIntegrand{&b, nu, X, c, mode}, kernel_segments(b, X, c));
}

inline OscillatoryIntegralResult kernel_integral(const BumpFunction& b, int nu, double X, double c, double tol,
                                                 KernelMode mode = KernelMode::ExactKernel) {
    return quad::integrate_adaptive(KernelIntegrand{&b, nu, X, c, mode}, kernel_segments(b, X, c), tol);
}

/// int_0^inf v(y/Y) J_{k-1}(4 pi sqrt(n y)/q) dy, with the weight v supported
/// in [1, 2] (so y in [Y, 2Y]). Error target 1e-10 * Y.
inline OscillatoryIntegralResult hankel_transform(const BumpFunction& v, double Y, i64 n, i64 q, int k) {
    if (n < 1 || q < 1) throw std::domain_error("hankel_transform: n and q must be >= 1");
    const double X = 4.0 * std::numbers::pi * std::sqrt(static_cast<double>(n) * Y) / static_cast<double>(q);
    auto r = kernel_integral(v, k - 1, X, 0.0, 1e-10);
    r.value *= Y;
    r.abs_error_estimate *= Y;
    return r;
}

/// The Bessel argument scale 4 pi sqrt(N n)/q at u = 1.
inline double bessel_scale(i64 n, i64 q, double N) {
    return 4.0 * std::numbers::pi * std::sqrt(N * static_cast<double>(n)) / static_cast<double>(q);
}

/// True when the kernel argument at u = 1 lies below the order, where the
/// large-argument Bessel form is not valid and the two modes must differ.
inline bool below_turning_point(i64 n, i64 q, double N, int k) { return bessel_scale(n, q, N) < k; }

/// Prefactor 2 pi i^k N^{1/4} n^{1/4} q^{-1/2} of I1.
inline cplx i1_prefactor(i64 n, i64 q, double N, int k) {
    static const std::array<cplx, 4> ipow{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
    return two_pi * ipow[static_cast<std::size_t>(k % 4)] * std::pow(N * static_cast<double>(n), 0.25) /
           std::sqrt(static_cast<double>(q));
}

/// I1(n, x, q) = 2 pi i^k (N n)^{1/4} q^{-1/2} int h1(u) e(N x u) J_{k-1}(4 pi sqrt(N n u)/q) du.
/// With this normalisation Voronoi summation of sum lambda(n) e(an/q) e(nx) h1(n/N)
/// gives exactly N^{3/4} q^{-1/2} sum lambda(n) n^{-1/4} e(-abar n/q) I1(n, x, q).
inline OscillatoryIntegralResult integral_I1(i64 n, double x, i64 q, double N, int k,
                                             KernelMode mode = KernelMode::ExactKernel, double tol = 1e-12) {
    if (n < 1 || q < 1) throw std::domain_error("integral_I1: n and q must be >= 1");
    auto r = kernel_integral(bump::h1(), k - 1, bessel_scale(n, q, N), N * x, tol, mode);
    const cplx pre = i1_prefactor(n, q, N, k);
    r.value *= pre;
    r.abs_error_estimate *= std::abs(pre);
    return r;
}

/// int_a^b e(-xi u) du in closed form.
inline cplx flat_fourier(double a, double b, double xi) {
    if (xi == 0.0) return {b - a, 0.0};
    const double arg = std::numbers::pi * xi * (b - a);
    return e(-0.5 * xi * (a + b)) * (std::sin(arg) / (std::numbers::pi * xi));
}

/// Fourier transform int b(u) e(-xi u) du; flat pieces are done in closed form.
inline OscillatoryIntegralResult fourier_bump(const BumpFunction& b, double xi, double tol = 1e-13) {
    OscillatoryIntegralResult out;
    out.converged = true;
    const auto& knots = b.knots();
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i], z = knots[i + 1];
        if (b.flat_piece(i)) {
            out.value += flat_fourier(a, z, xi);
            continue;
        }
        auto f = [&](double u) { return b(u) * e(-xi * u); };
        std::vector<quad::Segment> segs{{a, z, quad::panels_for(z - a, two_pi * xi, transition_panels)}};
        const auto r = quad::integrate_adaptive(f, segs, tol);
        out.value += r.value;
        out.abs_error_estimate += r.abs_error_estimate;
        out.panel_count += r.panel_count;
        out.converged = out.converged && r.converged;
    }
    return out;
}

/// Argument of h2-hat at which I2(m, x, q) is evaluated: N x + m N/(p q).
inline double i2_frequency(double m, double x, i64 q, double N, u64 p) {
    return N * x + m * N / (static_cast<double>(p) * static_cast<double>(q));
}

/// I2(m, x, q) = int h2(u) e(-N x u) e(-m N u/(p q)) du, directly.
inline OscillatoryIntegralResult integral_I2(double m, double x, i64 q, double N, u64 p) {
    return fourier_bump(bump::h2(), i2_frequency(m, x, q, N, p));
}

/// Tabulated G(X) = int b(u) e(c u) J_nu(X sqrt u) du on [0, X_hi]. As a
/// function of X this is of exponential type sqrt(hi) <= 1.5, so panels of
/// width 2 with 21 nodes interpolate it to near machine precision.
class HankelTable {
public:
    static constexpr double panel_width = 2.0;
    static constexpr int degree = 20;

    HankelTable(const BumpFunction& b, int nu, double c, double X_hi) : nu_(nu), c_(c) {
        table_ = quad::ChebyshevTable([&](double X) { return kernel_integral_fixed(b, nu, X, c); }, 0.0, X_hi,
                                      panel_width, degree);
        for (const cplx& v : table_.samples()) peak_ = std::max(peak_, std::abs(v));
    }

    int order() const { return nu_; }
    double phase_coefficient() const { return c_; }
    double X_hi() const { return table_.hi(); }
    double peak() const { return peak_; }

    cplx operator()(double X) const { return table_(X); }

    /// Smallest X beyond which every tabulated sample is below eps * peak.
    double decay_cutoff(double eps) const {
        const auto& s = table_.samples();
        for (std::size_t i = s.size(); i-- > 0;) {
            if (std::abs(s[i]) > eps * peak_) return std::min(table_.hi(), table_.sample_point(i) + panel_width);
        }
        return 0.0;
    }

private:
    int nu_;
    double c_;
    double peak_ = 0.0;
    quad::ChebyshevTable table_;
};

/// Process-wide cache of immutable tables keyed by their parameters.
inline std::shared_ptr<const HankelTable> hankel_table(bump::BumpKind kind, int nu, double c, double X_hi) {
    using Key = std::tuple<int, int, double, double>;
    static std::mutex guard;
    static std::map<Key, std::shared_ptr<const HankelTable>> cache;
    const Key key{static_cast<int>(kind), nu, c, X_hi};
    {
        std::lock_guard lock(guard);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto table = std::make_shared<const HankelTable>(BumpFunction(kind), nu, c, X_hi);
    std::lock_guard lock(guard);
    return cache.emplace(key, std::move(table)).first->second;
}

/// h2-hat(xi) tabulated on [-xi_hi, xi_hi] through the real-weight symmetry
/// h2-hat(-xi) = conj h2-hat(xi). The factor e(-1.5 xi) is split off so the
/// interpolated part varies slowly.
class H2Table {
public:
    static constexpr double panel_width = 0.5;
    static constexpr int degree = 20;
    static constexpr double centre = 1.5;

    explicit H2Table(double xi_hi) {
        table_ = quad::ChebyshevTable(
            [](double xi) { return e(centre * xi) * fourier_bump(bump::h2(), xi).value; }, 0.0, xi_hi, panel_width,
            degree);
        for (const cplx& v : table_.samples()) peak_ = std::max(peak_, std::abs(v));
    }

    double xi_hi() const { return table_.hi(); }
    bool covers(double xi) const { return std::abs(xi) <= table_.hi(); }

    cplx operator()(double xi) const {
        const cplx v = table_(std::abs(xi)) * e(-centre * std::abs(xi));
        return xi < 0.0 ? std::conj(v) : v;
    }

    double decay_cutoff(double eps) const {
        const auto& s = table_.samples();
        for (std::size_t i = s.size(); i-- > 0;) {
            if (std::abs(s[i]) > eps * peak_) return std::min(table_.hi(), table_.sample_point(i) + panel_width);
        }
        return 0.0;
    }

private:
    double peak_ = 0.0;
    quad::ChebyshevTable table_;
};

inline constexpr double default_xi_hi = 400.0;

inline std::shared_ptr<const H2Table> h2_table(double xi_hi = default_xi_hi) {
    static std::mutex guard;
    static std::map<double, std::shared_ptr<const H2Table>> cache;
    std::lock_guard lock(guard);
    auto it = cache.find(xi_hi);
    if (it != cache.end()) return it->second;
    return cache.emplace(xi_hi, std::make_shared<const H2Table>(xi_hi)).first->second;
}

/// Data fixing the second-Poisson integral
/// I(k) = int W(t) I2(M0 t, x, q1 q2) conj I2(M0 t, x, q1 q2') e(-k M0 t/c) dt,
/// c = q1 q2 q2'.
struct ImSetup {
    double N = 0.0;
    u64 p = 0;
    double M0 = 0.0;
    double x = 0.0;
    i64 q1 = 0, q2 = 0, q2p = 0;

    i64 c() const { return q1 * q2 * q2p; }
};

/// Evaluates I(k) for many k on one node set; the product of the two I2
/// factors is computed once per node.
class ImIntegrator {
public:
    ImIntegrator(const ImSetup& s, i64 k_max, const H2Table& h2, double nodes_per_period = 10.0) : s_(s) {
        const double c = static_cast<double>(s.c());
        const double slope_a = s.M0 * s.N / (static_cast<double>(s.p) * static_cast<double>(s.q1 * s.q2));
        const double slope_b = s.M0 * s.N / (static_cast<double>(s.p) * static_cast<double>(s.q1 * s.q2p));
        // h2-hat is concentrated near frequencies of size 2.2 per unit argument
        const double freq = two_pi * (static_cast<double>(k_max) * s.M0 / c + 2.2 * (slope_a + slope_b));
        const auto& knots = bump::window().knots();
        std::vector<quad::Segment> segs;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            const i64 minimum = bump::window().flat_piece(i) ? 4 : transition_panels;
            segs.push_back({knots[i], knots[i + 1],
                            quad::panels_for(knots[i + 1] - knots[i], freq, minimum, nodes_per_period)});
        }
        panels_ = quad::panel_count(segs);
        nodes_ = quad::make_nodes(segs);
        weighted_.resize(nodes_.x.size());
        for (std::size_t j = 0; j < nodes_.x.size(); ++j) {
            const double t = nodes_.x[j];
            const double y = s.M0 * t;
            const cplx a = h2(i2_frequency(y, s.x, s.q1 * s.q2, s.N, s.p));
            const cplx b = h2(i2_frequency(y, s.x, s.q1 * s.q2p, s.N, s.p));
            weighted_[j] = nodes_.w[j] * bump::window()(t) * a * std::conj(b);
        }
    }

    i64 panel_count() const { return panels_; }

    cplx operator()(i64 k) const {
        const double scale = static_cast<double>(k) * s_.M0 / static_cast<double>(s_.c());
        cplx total{0.0, 0.0};
        for (std::size_t j = 0; j < nodes_.x.size(); ++j) total += weighted_[j] * e(-scale * nodes_.x[j]);
        return total;
    }

    /// I(k) for k = -k_max..k_max (index k + k_max), by powers of one root per node.
    std::vector<cplx> range(i64 k_max) const {
        std::vector<cplx> out(static_cast<std::size_t>(2 * k_max + 1), cplx{0, 0});
        const double step = s_.M0 / static_cast<double>(s_.c());
        for (std::size_t j = 0; j < nodes_.x.size(); ++j) {
            const cplx z = e(-step * nodes_.x[j]);
            cplx up = weighted_[j], down = weighted_[j];
            out[static_cast<std::size_t>(k_max)] += up;
            for (i64 k = 1; k <= k_max; ++k) {
                // re-seed every 64 steps to keep the rounding drift flat
                if (k % 64 == 0) {
                    up = weighted_[j] * e(-step * static_cast<double>(k) * nodes_.x[j]);
                    down = std::conj(e(-step * static_cast<double>(k) * nodes_.x[j])) * weighted_[j];
                } else {
                    up *= z;
                    down *= std::conj(z);
                }
                out[static_cast<std::size_t>(k_max + k)] += up;
                out[static_cast<std::size_t>(k_max - k)] += down;
            }
        }
        return out;
    }

private:
    ImSetup s_;
    i64 panels_ = 0;
    quad::NodeSet nodes_;
    std::vector<cplx> weighted_;
};

/// I(k) with node doubling until successive values agree within `tol`.
inline OscillatoryIntegralResult integral_Im(i64 k, const ImSetup& s, double tol = 1e-10) {
    const auto h2 = h2_table();
    OscillatoryIntegralResult out;
    double density = 10.0;
    cplx coarse = ImIntegrator(s, std::abs(k), *h2, density)(k);
    for (int round = 0; round < 12; ++round) {
        density *= 2.0;
        ImIntegrator fine(s, std::abs(k), *h2, density);
        const cplx v = fine(k);
        out.abs_error_estimate = std::abs(v - coarse);
        out.value = v;
        out.panel_count = fine.panel_count();
        if (out.abs_error_estimate <= tol) {
            out.converged = true;
            return out;
        }
        coarse = v;
    }
    return out;
}

}  // namespace weylsum::transforms
