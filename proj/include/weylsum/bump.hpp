#pragma once

// Compactly supported smooth weights built from psi(t) = exp(-1/(t(1-t))).
// The smooth step S(t) = int_0^t psi / int_0^1 psi is tabulated once; every
// weight is a product of two steps, so flat parts are exactly 1.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "weylsum/quadrature.hpp"

namespace weylsum::bump {

inline double psi(double t) { return (t <= 0.0 || t >= 1.0) ? 0.0 : std::exp(-1.0 / (t * (1.0 - t))); }

class SmoothStep {
public:
    static constexpr int intervals = 2048;  // on [0, 1/2]

    static const SmoothStep& instance() {
        static const SmoothStep step;
        return step;
    }

    double operator()(double t) const {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        if (t > 0.5) return 1.0 - (*this)(1.0 - t);
        auto i = static_cast<int>(t * (2 * intervals));
        if (i >= intervals) i = intervals - 1;
        const double left = static_cast<double>(i) / (2 * intervals);
        return (cumulative_[i] + partial(left, t)) / total_;
    }

    double total_mass() const { return total_; }

private:
    SmoothStep() : cumulative_(intervals + 1, 0.0) {
        const double h = 0.5 / intervals;
        const auto& g = quad::gauss16();
        for (int i = 0; i < intervals; ++i) {
            const double mid = (i + 0.5) * h;
            double s = 0.0;
            for (int j = 0; j < quad::GaussRule::size; ++j) s += g.w[j] * psi(mid + 0.5 * h * g.x[j]);
            cumulative_[i + 1] = cumulative_[i] + 0.5 * h * s;
        }
        total_ = 2.0 * cumulative_[intervals];
    }

    // int_a^b psi with an 8-point rule; b - a is below one table interval.
    static double partial(double a, double b) {
        static constexpr std::array<double, 4> x{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                                 0.9602898564975363};
        static constexpr std::array<double, 4> w{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                 0.1012285362903763};
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s += w[j] * (psi(mid - half * x[j]) + psi(mid + half * x[j]));
        return half * s;
    }

    std::vector<double> cumulative_;
    double total_ = 0.0;
};

inline double smooth_step(double t) { return SmoothStep::instance()(t); }

enum class BumpKind { H1, H2, Window, Mollifier };

/// A weight identically zero outside [knots.front(), knots.back()]. The knots
/// mark where the formula changes, so quadrature panels can align to them.
class BumpFunction {
public:
    explicit BumpFunction(BumpKind kind) : kind_(kind) {
        switch (kind) {
            case BumpKind::H1: knots_ = {1.0, 1.1, 1.9, 2.0}; break;
            case BumpKind::H2: knots_ = {0.8, 0.9, 2.1, 2.2}; break;
            case BumpKind::Window: knots_ = {-2.0, -1.0, 1.0, 2.0}; break;
            case BumpKind::Mollifier: knots_ = {1.0, 1.25, 1.75, 2.0}; break;
        }
    }

    BumpKind kind() const { return kind_; }
    double lo() const { return knots_.front(); }
    double hi() const { return knots_.back(); }
    const std::vector<double>& knots() const { return knots_; }

    /// True on the pieces where the function is identically 1.
    bool flat_piece(std::size_t i) const {
        return (kind_ != BumpKind::Mollifier) && i == 1;
    }

    double operator()(double t) const {
        switch (kind_) {
            case BumpKind::H1: return smooth_step((t - 1.0) / 0.1) * smooth_step((2.0 - t) / 0.1);
            case BumpKind::H2: return smooth_step((t - 0.8) / 0.1) * smooth_step((2.2 - t) / 0.1);
            case BumpKind::Window: return smooth_step(t + 2.0) * smooth_step(2.0 - t);
            case BumpKind::Mollifier:
                if (t <= 1.0 || t >= 2.0) return 0.0;
                return std::exp(4.0 - 1.0 / ((t - 1.0) * (2.0 - t)));
        }
        return 0.0;
    }

    std::string name() const {
        switch (kind_) {
            case BumpKind::H1: return "h1";
            case BumpKind::H2: return "h2";
            case BumpKind::Window: return "W";
            case BumpKind::Mollifier: return "mollifier";
        }
        return "?";
    }

private:
    BumpKind kind_;
    std::vector<double> knots_;
};

inline const BumpFunction& h1() {
    static const BumpFunction f(BumpKind::H1);
    return f;
}
inline const BumpFunction& h2() {
    static const BumpFunction f(BumpKind::H2);
    return f;
}
inline const BumpFunction& window() {
    static const BumpFunction f(BumpKind::Window);
    return f;
}
inline const BumpFunction& mollifier() {
    static const BumpFunction f(BumpKind::Mollifier);
    return f;
}

}  // namespace weylsum::bump
