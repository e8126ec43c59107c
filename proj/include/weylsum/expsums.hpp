#pragma once

// Complete exponential sums: Kloosterman and Ramanujan sums, the Weil-bound
// margin, and the gcd double sum sum_{a<=x} sum_{b<=y} (a,b,c).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "weylsum/arith.hpp"

namespace weylsum::expsums {

/// Reduced residues mod c with their inverses; reused across a batch of sums
/// sharing one modulus.
class InverseTable {
public:
    explicit InverseTable(i64 c) : c_(c), roots_(c) {
        if (c < 1) throw std::domain_error("InverseTable: modulus must be >= 1");
        for (i64 x = 0; x < c; ++x) {
            if (std::gcd(x, c) != 1) continue;
            units_.push_back(x);
            inverses_.push_back(inverse_mod(x, c));
        }
    }
    i64 modulus() const { return c_; }
    const std::vector<i64>& units() const { return units_; }
    const std::vector<i64>& inverses() const { return inverses_; }
    const RootTable& roots() const { return roots_; }

    /// S(a, b; c) as a complex number.
    cplx kloosterman_complex(i64 a, i64 b) const {
        const i64 ar = mod(a, c_), br = mod(b, c_);
        cplx total{0.0, 0.0};
        for (std::size_t t = 0; t < units_.size(); ++t) {
            const i64 phase = static_cast<i64>((static_cast<i128>(ar) * units_[t] + static_cast<i128>(br) * inverses_[t]) % c_);
            total += roots_[phase];
        }
        return total;
    }

private:
    i64 c_;
    std::vector<i64> units_, inverses_;
    RootTable roots_;
};

/// Kloosterman sum S(a, b; c) = sum_{x mod c, (x,c)=1} e((a x + b xbar)/c).
/// Real by the symmetry x -> -x; a non-negligible imaginary part is a bug.
inline double kloosterman(i64 a, i64 b, i64 c, const InverseTable& table) {
    if (table.modulus() != c) throw std::invalid_argument("kloosterman: table built for another modulus");
    const cplx s = table.kloosterman_complex(a, b);
    if (std::abs(s.imag()) > 1e-8) throw std::logic_error("kloosterman: imaginary part did not cancel");
    return s.real();
}

inline double kloosterman(i64 a, i64 b, i64 c) {
    if (c < 1) throw std::domain_error("kloosterman: modulus must be >= 1");
    return kloosterman(a, b, c, InverseTable(c));
}

/// c_c(a) = sum_{d | (a,c)} d mu(c/d), exactly.
inline i64 ramanujan_sum(i64 a, i64 c) {
    if (c < 1) throw std::domain_error("ramanujan_sum: modulus must be >= 1");
    const i64 g = std::gcd(mod(a, c), c);  // gcd(0, c) = c
    i64 total = 0;
    for (i64 d : divisors(g)) total += d * mobius(c / d);
    return total;
}

/// |S(a,b;c)| / (d(c) sqrt(c) sqrt(gcd(a,b,c))); Weil's bound says <= 1.
inline double weil_margin(i64 a, i64 b, i64 c) {
    const i64 g = std::gcd(std::gcd(mod(a, c), mod(b, c)), c);
    const double bound = static_cast<double>(divisor_count(c)) * std::sqrt(static_cast<double>(c)) *
                         std::sqrt(static_cast<double>(g));
    return std::abs(kloosterman(a, b, c)) / bound;
}

struct GcdTripleSum {
    i64 sum = 0;
    bool bound_ok = false;  // sum <= x*y
};

/// Brute-force sum_{1<=a<=x} sum_{1<=b<=y} gcd(a, b, c) against the bound x*y.
inline GcdTripleSum gcd_triple_sum(double x, double y, i64 c) {
    if (x < 1 || y < 1) throw std::domain_error("gcd_triple_sum: x and y must be >= 1");
    const i64 xa = static_cast<i64>(std::floor(x));
    const i64 yb = static_cast<i64>(std::floor(y));
    i64 total = 0;
    for (i64 a = 1; a <= xa; ++a) {
        const i64 ga = std::gcd(a, c);
        for (i64 b = 1; b <= yb; ++b) total += std::gcd(ga, b);
    }
    return {total, static_cast<double>(total) <= x * y};
}

}  // namespace weylsum::expsums
