#pragma once

// Derived scales for one (N, p, theta) experiment.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "weylsum/arith.hpp"

namespace weylsum::pipeline {

struct ExperimentParams {
    double N = 0.0;
    u64 p = 0;
    double theta = 0.0;

    double Q = 0.0;      // N^{1/2 + theta}
    double delta = 0.0;  // 1/N
    double Q1 = 0.0;     // N^{1 + 2 theta} / p^{2/3}
    double Q2 = 0.0;     // Q / Q1
    double M0 = 0.0;     // p Q / N
    double N0 = 0.0;     // Q^2 / N
    double R0 = 0.0;     // N Q2 / p

    /// N^{1+2 theta} < p < N^{3/2 - 3 theta}.
    bool in_window() const {
        const double P = static_cast<double>(p);
        return std::pow(N, 1.0 + 2.0 * theta) < P && P < std::pow(N, 1.5 - 3.0 * theta);
    }

    /// p/N < Q2 < N^{1/2 - 3 theta}.
    bool q2_in_range() const {
        return static_cast<double>(p) / N < Q2 && Q2 < std::pow(N, 0.5 - 3.0 * theta);
    }

    /// delta >= N^{2 theta}/Q^2 (equality by construction, 1e-9 slack).
    bool delta_condition() const { return delta >= std::pow(N, 2.0 * theta) / (Q * Q) * (1.0 - 1e-9); }

    /// 1/Q^2 <= delta <= 1/Q.
    bool delta_in_circle_range() const {
        return delta >= (1.0 - 1e-9) / (Q * Q) && delta <= (1.0 + 1e-9) / Q;
    }

    bool q_factorisation_consistent() const { return std::abs(Q1 * Q2 - Q) <= 1e-9 * Q; }

    /// Every inequality of the parameter chain that is expected to hold.
    bool chain_holds() const {
        return delta_condition() && delta_in_circle_range() && q_factorisation_consistent() &&
               (!in_window() || q2_in_range());
    }

    std::string describe() const {
        std::ostringstream s;
        s.precision(6);
        s << "N=" << N << " p=" << p << " theta=" << theta << " Q=" << Q << " delta=" << delta << " Q1=" << Q1
          << " Q2=" << Q2 << " M0=" << M0 << " N0=" << N0 << " R0=" << R0
          << " window=" << (in_window() ? "in" : "out");
        return s.str();
    }
};

/// Desk-scale ceiling on the character modulus.
inline constexpr u64 max_p = 100'000;

inline bool theta_admissible(double theta) { return theta > 0.0 && theta < 0.1; }

/// Derives all scales. p need not be prime here; characters check that.
inline ExperimentParams make_params(double N, u64 p, double theta) {
    if (!(N >= 1.0)) throw std::invalid_argument("make_params: N must be >= 1");
    if (p < 2) throw std::invalid_argument("make_params: p must be >= 2");
    if (p > max_p) throw std::domain_error("make_params: p above the desk ceiling 1e5");
    if (!theta_admissible(theta)) throw std::invalid_argument("make_params: theta must lie in (0, 1/10)");
    ExperimentParams e;
    e.N = N;
    e.p = p;
    e.theta = theta;
    const double P = static_cast<double>(p);
    e.Q = std::pow(N, 0.5 + theta);
    e.delta = 1.0 / N;
    e.Q1 = std::pow(N, 1.0 + 2.0 * theta) / std::pow(P, 2.0 / 3.0);
    e.Q2 = e.Q / e.Q1;
    e.M0 = P * e.Q / N;
    e.N0 = e.Q * e.Q / N;
    e.R0 = N * e.Q2 / P;
    return e;
}

}  // namespace weylsum::pipeline
