#pragma once

// Bessel functions of the first kind for integer order.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>

namespace weylsum {

namespace detail {
// Evaluate in double throughout; long double promotion costs a factor of ~5.
using bessel_policy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;
}  // namespace detail

inline constexpr int bessel_max_order = 30;

/// J_nu(x) for 0 <= nu <= 30, x >= 0.
inline double bessel_j(int nu, double x) {
    if (nu < 0 || nu > bessel_max_order) throw std::domain_error("bessel_j: order outside 0..30");
    if (!(x >= 0.0)) throw std::domain_error("bessel_j: argument must be >= 0");
    if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
    return boost::math::cyl_bessel_j(nu, x, detail::bessel_policy());
}

/// Leading term of the large-argument expansion,
/// sqrt(2/(pi x)) cos(x - nu pi/2 - pi/4). Meaningless below x ~ nu.
inline double bessel_j_leading(int nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_j_leading: argument must be > 0");
    constexpr double pi = std::numbers::pi;
    return std::sqrt(2.0 / (pi * x)) * std::cos(x - 0.5 * nu * pi - 0.25 * pi);
}

}  // namespace weylsum
