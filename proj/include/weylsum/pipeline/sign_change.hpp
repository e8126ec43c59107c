#pragma once

// First n at which lambda_f(n) and a quadratic character disagree in sign.

#include <cmath>
#include <optional>

#include "weylsum/characters.hpp"
#include "weylsum/hecke.hpp"

namespace weylsum::pipeline {

struct SignChange {
    std::optional<i64> index;  // empty when none found within the table
    i64 scanned = 0;
    double normalized = 0.0;   // index / p^{2/3}
};

inline SignChange first_sign_disagreement(const hecke::CuspForm& f, u64 p) {
    const auto chi = chars::quadratic_character(p);
    SignChange out;
    for (i64 n = 1; n <= f.n_max(); ++n) {
        out.scanned = n;
        const auto k = chi.exponent(n);
        if (!k) continue;
        const double sign = (*k == 0) ? 1.0 : -1.0;  // quadratic: exponent 0 or (p-1)/2
        if (sign * f.lambda(n) < 0.0) {
            out.index = n;
            out.normalized = static_cast<double>(n) / std::pow(static_cast<double>(p), 2.0 / 3.0);
            return out;
        }
    }
    return out;
}

}  // namespace weylsum::pipeline
