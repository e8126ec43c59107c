#pragma once

// Jutila's approximation of the indicator of [0, 1]: a normalised union of
// delta-neighbourhoods of the fractions d/q, q in a moduli set Phi. The step
// function is stored as a sorted event list with exact rational centres; the
// L^2 distance to 1_[0,1] is integrated exactly piece by piece.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "weylsum/arith.hpp"

namespace weylsum::circle {

enum class ModuliMode { Primes, AllCoprime };

struct ModuliSet {
    double Q = 0.0;
    u64 p = 0;
    std::vector<i64> members;
    i64 L = 0;  // sum of phi(q)

    i64 recomputed_mass() const {
        i64 total = 0;
        for (i64 q : members) total += totient(q);
        return total;
    }

    /// L log^2 Q / Q^2; the mass condition L >> Q^{2-eps} read with log factors.
    double log_normalized_mass() const {
        const double lq = std::log(Q);
        return static_cast<double>(L) * lq * lq / (Q * Q);
    }
    bool mass_condition() const { return log_normalized_mass() >= 1.0; }
};

inline ModuliSet make_moduli(std::vector<i64> members, double Q = 0.0, u64 p = 0) {
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
        throw std::invalid_argument("make_moduli: repeated modulus");
    if (members.empty() || members.front() < 1) throw std::invalid_argument("make_moduli: moduli must be >= 1");
    ModuliSet m;
    m.Q = Q > 0.0 ? Q : static_cast<double>(members.front());
    m.p = p;
    m.members = std::move(members);
    m.L = m.recomputed_mass();
    return m;
}

/// Phi = {q in [Q, 2Q] : gcd(q, p) = 1}, optionally restricted to primes.
inline ModuliSet build_moduli(double Q, u64 p, ModuliMode mode = ModuliMode::AllCoprime) {
    if (!(Q >= 2.0)) throw std::domain_error("build_moduli: Q must be >= 2");
    std::vector<i64> members;
    const auto lo = static_cast<i64>(std::ceil(Q));
    const auto hi = static_cast<i64>(std::floor(2.0 * Q));
    for (i64 q = lo; q <= hi; ++q) {
        if (p != 0 && std::gcd(q, static_cast<i64>(p)) != 1) continue;
        if (mode == ModuliMode::Primes && !is_prime(static_cast<u64>(q))) continue;
        members.push_back(q);
    }
    if (members.empty()) throw std::domain_error("build_moduli: empty moduli set, widen Q");
    return make_moduli(std::move(members), Q, p);
}

inline constexpr i64 max_intervals = 50'000'000;

/// Floating endpoints of [d/q - delta, d/q + delta]. Both the step function
/// and the naive evaluator use this, so their comparisons agree bit for bit.
inline std::pair<double, double> interval_bounds(i64 d, i64 q, double delta) {
    const double centre = static_cast<double>(d) / static_cast<double>(q);
    return {centre - delta, centre + delta};
}

/// A point num/den + side * delta (side in {-1, 0, +1}).
struct Event {
    i64 num = 0, den = 1;
    int side = 0;
    int count_change = 0;     // +1 interval opens, -1 closes
    int indicator_change = 0; // +1 at 0, -1 at 1
    long double key = 0.0L;
};

struct Breakpoint {
    double position = 0.0;
    double value = 0.0;  // value of the step function just right of position
};

class JutilaApprox {
public:
    JutilaApprox(ModuliSet moduli, double delta) : moduli_(std::move(moduli)), delta_(delta) {
        if (!(delta > 0.0)) throw std::domain_error("build_itilde: delta must be > 0");
        if (moduli_.L > max_intervals) throw std::length_error("build_itilde: too many intervals");
        height_ = 1.0 / (2.0 * delta * static_cast<double>(moduli_.L));
        const long double dl = delta;

        std::vector<Event> events;
        events.reserve(static_cast<std::size_t>(2 * moduli_.L + 2));
        starts_.reserve(static_cast<std::size_t>(moduli_.L));
        ends_.reserve(static_cast<std::size_t>(moduli_.L));
        for (i64 q : moduli_.members) {
            for (i64 d = 1; d <= q; ++d) {
                if (std::gcd(d, q) != 1) continue;
                const long double centre = static_cast<long double>(d) / static_cast<long double>(q);
                events.push_back({d, q, -1, +1, 0, centre - dl});
                events.push_back({d, q, +1, -1, 0, centre + dl});
                const auto [lo, hi] = interval_bounds(d, q, delta);
                starts_.push_back(lo);
                ends_.push_back(hi);
            }
        }
        events.push_back({0, 1, 0, 0, +1, 0.0L});
        events.push_back({1, 1, 0, 0, -1, 1.0L});
        std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.key < b.key; });
        std::sort(starts_.begin(), starts_.end());
        std::sort(ends_.begin(), ends_.end());

        // Pieces between consecutive events; lengths from the exact rational
        // difference plus the delta offsets, not from subtracting rounded keys.
        int count = 0, indicator = 0;
        for (std::size_t i = 0; i < events.size(); ++i) {
            count += events[i].count_change;
            indicator += events[i].indicator_change;
            if (i + 1 < events.size()) {
                const Event& a = events[i];
                const Event& b = events[i + 1];
                const long double rational =
                    static_cast<long double>(b.num * a.den - a.num * b.den) / (static_cast<long double>(a.den) * b.den);
                const long double len = rational + static_cast<long double>(b.side - a.side) * dl;
                pieces_.push_back({static_cast<double>(len), count, indicator});
            }
        }
        std::erase_if(events, [](const Event& ev) { return ev.count_change == 0; });
        count = 0;
        for (std::size_t i = 0; i < events.size(); ++i) {
            count += events[i].count_change;
            const bool merges = i + 1 < events.size() && same_point(events[i], events[i + 1], delta);
            if (!merges) breakpoints_.push_back({static_cast<double>(events[i].key), count * height_});
        }
    }

    const ModuliSet& moduli() const { return moduli_; }
    double delta() const { return delta_; }
    double height() const { return height_; }
    const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }

    /// Step-function value: number of closed intervals containing alpha.
    double value(double alpha) const {
        const auto opened = std::upper_bound(starts_.begin(), starts_.end(), alpha) - starts_.begin();
        const auto closed = std::lower_bound(ends_.begin(), ends_.end(), alpha) - ends_.begin();
        return static_cast<double>(opened - closed) * height_;
    }

    /// int_R I-tilde.
    double total_mass() const {
        CompensatedSum s;
        for (const auto& p : pieces_) s += p.length * p.count * height_;
        return s.value();
    }

    /// int_R (1_[0,1] - I-tilde)^2 in one pass over the pieces.
    double l2_error() const {
        CompensatedSum s;
        for (const auto& p : pieces_) {
            const double diff = p.indicator - p.count * height_;
            s += p.length * diff * diff;
        }
        return s.value();
    }

    /// The same quantity as int 1_[0,1] + int I-tilde^2 - 2 int_[0,1] I-tilde,
    /// each integral from its own pass.
    double l2_error_three_pass() const {
        CompensatedSum unit, square, overlap;
        for (const auto& p : pieces_) unit += p.length * p.indicator;
        for (const auto& p : pieces_) square += p.length * (p.count * height_) * (p.count * height_);
        for (const auto& p : pieces_) overlap += p.length * p.indicator * p.count * height_;
        return unit.value() + square.value() - 2.0 * overlap.value();
    }

    void write_csv(std::ostream& out) const {
        out << "position,value\n";
        out.precision(17);
        for (const auto& b : breakpoints_) out << b.position << ',' << b.value << '\n';
    }

private:
    struct Piece {
        double length;
        int count;
        int indicator;
    };

    static bool same_point(const Event& a, const Event& b, double delta) {
        if (a.side == b.side) return a.num * b.den == b.num * a.den;
        const long double gap = static_cast<long double>(b.num) / b.den - static_cast<long double>(a.num) / a.den;
        return gap == static_cast<long double>(a.side - b.side) * delta;
    }

    ModuliSet moduli_;
    double delta_;
    double height_ = 0.0;
    std::vector<double> starts_, ends_;
    std::vector<Piece> pieces_;
    std::vector<Breakpoint> breakpoints_;
};

inline JutilaApprox build_itilde(const ModuliSet& moduli, double delta) { return {moduli, delta}; }

inline double itilde_value(const JutilaApprox& approx, double alpha) { return approx.value(alpha); }

/// Direct double sum over (q, d); the reference for itilde_value.
inline double itilde_value_naive(const JutilaApprox& approx, double alpha) {
    i64 count = 0;
    for (i64 q : approx.moduli().members) {
        for (i64 d = 1; d <= q; ++d) {
            if (std::gcd(d, q) != 1) continue;
            const auto [lo, hi] = interval_bounds(d, q, approx.delta());
            if (lo <= alpha && alpha <= hi) ++count;
        }
    }
    return static_cast<double>(count) * approx.height();
}

/// True when 1/Q^2 <= delta <= 1/Q; outside this range the construction is
/// still defined but the error estimate is not expected to apply.
inline bool delta_in_range(double Q, double delta) {
    return delta >= 1.0 / (Q * Q) * (1.0 - 1e-12) && delta <= (1.0 / Q) * (1.0 + 1e-12);
}

struct L2Report {
    double Q = 0.0, delta = 0.0;
    i64 L = 0;
    double error = 0.0;
    double ratio = 0.0;             // error * delta L^2 / Q^2
    double log_normalized = 0.0;    // ratio / log^2 Q
};

inline L2Report l2_report(const JutilaApprox& a) {
    L2Report r;
    r.Q = a.moduli().Q;
    r.delta = a.delta();
    r.L = a.moduli().L;
    r.error = a.l2_error();
    const double L = static_cast<double>(r.L);
    r.ratio = r.error * r.delta * L * L / (r.Q * r.Q);
    const double lq = std::log(r.Q);
    r.log_normalized = r.ratio / (lq * lq);
    return r;
}

}  // namespace weylsum::circle
