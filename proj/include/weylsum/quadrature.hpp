#pragma once

// Composite Gauss-Legendre quadrature on user-supplied segments, an adaptive
// doubling driver, and piecewise Chebyshev tables for functions that are
// sampled at many points (kernel transforms evaluated for every n).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "weylsum/arith.hpp"

namespace weylsum::quad {

inline constexpr i64 node_budget = i64{1} << 20;

struct OscillatoryIntegralResult {
    cplx value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    i64 panel_count = 0;
    bool converged = false;
};

struct GaussRule {
    static constexpr int size = 16;
    std::array<double, size> x{}, w{};
};

/// 16-point Gauss-Legendre rule on [-1, 1].
inline const GaussRule& gauss16() {
    static const GaussRule rule = [] {
        using G = boost::math::quadrature::gauss<double, GaussRule::size>;
        GaussRule r;
        const auto& abs = G::abscissa();
        const auto& wts = G::weights();
        constexpr int half = GaussRule::size / 2;
        for (int i = 0; i < half; ++i) {
            r.x[half - 1 - i] = -abs[i];
            r.w[half - 1 - i] = wts[i];
            r.x[half + i] = abs[i];
            r.w[half + i] = wts[i];
        }
        return r;
    }();
    return rule;
}

/// [a, b] split into `panels` equal Gauss panels.
struct Segment {
    double a = 0.0, b = 0.0;
    i64 panels = 1;
};

struct NodeSet {
    std::vector<double> x, w;
};

inline i64 panel_count(const std::vector<Segment>& segments) {
    i64 total = 0;
    for (const auto& s : segments) total += s.panels;
    return total;
}

inline NodeSet make_nodes(const std::vector<Segment>& segments) {
    const auto& g = gauss16();
    NodeSet out;
    out.x.reserve(static_cast<std::size_t>(panel_count(segments)) * GaussRule::size);
    out.w.reserve(out.x.capacity());
    for (const auto& s : segments) {
        const double h = (s.b - s.a) / static_cast<double>(s.panels);
        for (i64 j = 0; j < s.panels; ++j) {
            const double mid = s.a + (static_cast<double>(j) + 0.5) * h;
            for (int i = 0; i < GaussRule::size; ++i) {
                out.x.push_back(mid + 0.5 * h * g.x[i]);
                out.w.push_back(0.5 * h * g.w[i]);
            }
        }
    }
    return out;
}

template <class F>
cplx integrate(F&& f, const std::vector<Segment>& segments) {
    const auto& g = gauss16();
    cplx total{0.0, 0.0};
    for (const auto& s : segments) {
        const double h = (s.b - s.a) / static_cast<double>(s.panels);
        for (i64 j = 0; j < s.panels; ++j) {
            const double mid = s.a + (static_cast<double>(j) + 0.5) * h;
            cplx panel{0.0, 0.0};
            for (int i = 0; i < GaussRule::size; ++i) panel += g.w[i] * cplx(f(mid + 0.5 * h * g.x[i]));
            total += 0.5 * h * panel;
        }
    }
    return total;
}

inline std::vector<Segment> doubled(std::vector<Segment> segments) {
    for (auto& s : segments) s.panels *= 2;
    return segments;
}

/// Integrates on `segments`, then keeps doubling every panel count until two
/// successive values agree within `tol` or the node budget runs out.
template <class F>
OscillatoryIntegralResult integrate_adaptive(F&& f, std::vector<Segment> segments, double tol) {
    OscillatoryIntegralResult out;
    cplx coarse = integrate(f, segments);
    while (true) {
        auto fine_segments = doubled(segments);
        const i64 panels = panel_count(fine_segments);
        if (panels * GaussRule::size > node_budget) {
            out.value = coarse;
            out.panel_count = panel_count(segments);
            out.converged = false;
            return out;
        }
        const cplx fine = integrate(f, fine_segments);
        const double diff = std::abs(fine - coarse);
        if (diff <= tol) {
            out.value = fine;
            out.abs_error_estimate = diff;
            out.panel_count = panels;
            out.converged = true;
            return out;
        }
        out.abs_error_estimate = diff;
        coarse = fine;
        segments = std::move(fine_segments);
    }
}

/// Panels needed on an interval of length `len` when the integrand turns
/// through `rad_per_unit` radians per unit length, at `nodes_per_period`.
inline i64 panels_for(double len, double rad_per_unit, i64 minimum, double nodes_per_period = 10.0) {
    const double periods = len * std::abs(rad_per_unit) / (2.0 * std::numbers::pi);
    const auto need = static_cast<i64>(std::ceil(periods * nodes_per_period / GaussRule::size));
    return std::max(minimum, need);
}

/// Piecewise Chebyshev interpolant of a complex function on [lo, hi] with
/// equal panels of width `width`, `degree + 1` first-kind nodes per panel.
/// Accurate when the function is band-limited relative to the panel width.
class ChebyshevTable {
public:
    ChebyshevTable() = default;

    template <class F>
    ChebyshevTable(F&& f, double lo, double hi, double width, int degree) : lo_(lo), width_(width), degree_(degree) {
        if (!(hi > lo) || !(width > 0) || degree < 1) throw std::invalid_argument("ChebyshevTable: bad layout");
        panels_ = static_cast<i64>(std::ceil((hi - lo) / width));
        hi_ = lo + static_cast<double>(panels_) * width;
        const int m = degree + 1;
        nodes_.resize(m);
        bary_.resize(m);
        for (int j = 0; j < m; ++j) {
            const double angle = (2.0 * j + 1.0) * std::numbers::pi / (2.0 * m);
            nodes_[j] = std::cos(angle);
            bary_[j] = ((j % 2 == 0) ? 1.0 : -1.0) * std::sin(angle);
        }
        values_.resize(static_cast<std::size_t>(panels_ * m));
        for (i64 panel = 0; panel < panels_; ++panel) {
            const double mid = lo_ + (static_cast<double>(panel) + 0.5) * width_;
            for (int j = 0; j < m; ++j) values_[panel * m + j] = cplx(f(mid + 0.5 * width_ * nodes_[j]));
        }
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool empty() const { return values_.empty(); }
    const std::vector<cplx>& samples() const { return values_; }
    double sample_point(std::size_t index) const {
        const int m = degree_ + 1;
        const auto panel = static_cast<i64>(index) / m;
        const int j = static_cast<int>(static_cast<i64>(index) % m);
        return lo_ + (static_cast<double>(panel) + 0.5) * width_ + 0.5 * width_ * nodes_[j];
    }

    cplx operator()(double t) const {
        if (t < lo_ || t > hi_) throw std::out_of_range("ChebyshevTable: argument outside table");
        auto panel = static_cast<i64>((t - lo_) / width_);
        panel = std::min(panel, panels_ - 1);
        const double mid = lo_ + (static_cast<double>(panel) + 0.5) * width_;
        const double z = (t - mid) / (0.5 * width_);
        const int m = degree_ + 1;
        const cplx* v = &values_[panel * m];
        cplx num{0.0, 0.0};
        double den = 0.0;
        for (int j = 0; j < m; ++j) {
            const double diff = z - nodes_[j];
            if (diff == 0.0) return v[j];
            const double c = bary_[j] / diff;
            num += c * v[j];
            den += c;
        }
        return num / den;
    }

private:
    double lo_ = 0.0, hi_ = 0.0, width_ = 1.0;
    int degree_ = 0;
    i64 panels_ = 0;
    std::vector<double> nodes_, bary_;
    std::vector<cplx> values_;
};

}  // namespace weylsum::quad
