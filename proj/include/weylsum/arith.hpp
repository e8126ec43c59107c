#pragma once

// Elementary arithmetic shared by every module: modular helpers, deterministic
// primality, multiplicative functions and additive characters e(x).

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace weylsum {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;
using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// e(x) = exp(2 pi i x).
inline cplx e(double x) { return std::polar(1.0, two_pi * x); }

/// Least non-negative residue of a modulo m (m > 0).
inline i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

/// e(num/den), reducing the numerator exactly before going to floating point.
inline cplx e_frac(i64 num, i64 den) {
    return std::polar(1.0, two_pi * static_cast<double>(mod(num, den)) / static_cast<double>(den));
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1U) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

/// Inverse of a modulo m by the extended Euclidean algorithm.
/// Throws std::domain_error when gcd(a, m) != 1.
inline i64 inverse_mod(i64 a, i64 m) {
    if (m <= 0) throw std::domain_error("inverse_mod: modulus must be positive");
    if (m == 1) return 0;
    i64 old_r = mod(a, m), r = m;
    i64 old_s = 1, s = 0;
    while (r != 0) {
        const i64 quot = old_r / r;
        old_r = std::exchange(r, old_r - quot * r);
        old_s = std::exchange(s, old_s - quot * s);
    }
    if (old_r != 1) throw std::domain_error("inverse_mod: argument not invertible");
    return mod(old_s, m);
}

/// Deterministic Miller-Rabin, valid for every 64-bit input.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % small == 0) return n == small;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Prime factorisation by trial division as (prime, exponent) pairs.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
    std::vector<std::pair<u64, int>> out;
    for (u64 d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d != 0) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline i64 totient(i64 n) {
    if (n <= 0) throw std::domain_error("totient: n must be positive");
    i64 result = n;
    for (auto [prime, e] : factorize(static_cast<u64>(n))) {
        (void)e;
        result -= result / static_cast<i64>(prime);
    }
    return result;
}

inline int mobius(i64 n) {
    if (n <= 0) throw std::domain_error("mobius: n must be positive");
    int sign = 1;
    for (auto [prime, e] : factorize(static_cast<u64>(n))) {
        (void)prime;
        if (e > 1) return 0;
        sign = -sign;
    }
    return sign;
}

inline i64 divisor_count(i64 n) {
    if (n <= 0) throw std::domain_error("divisor_count: n must be positive");
    i64 d = 1;
    for (auto [prime, e] : factorize(static_cast<u64>(n))) {
        (void)prime;
        d *= e + 1;
    }
    return d;
}

/// Positive divisors of n in increasing order.
inline std::vector<i64> divisors(i64 n) {
    std::vector<i64> small, large;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        small.push_back(d);
        if (d * d != n) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

inline std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

/// Sieved multiplicative functions on 1..limit (index 0 unused).
struct ArithmeticTables {
    std::vector<i64> phi;
    std::vector<int> mu;
    std::vector<i64> tau;  // number of divisors

    explicit ArithmeticTables(i64 limit) : phi(limit + 1), mu(limit + 1, 1), tau(limit + 1, 0) {
        std::iota(phi.begin(), phi.end(), i64{0});
        std::vector<bool> composite(limit + 1, false);
        for (i64 i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            for (i64 j = i; j <= limit; j += i) {
                if (j > i) composite[j] = true;
                phi[j] -= phi[j] / i;
                mu[j] = -mu[j];
            }
            if (i <= limit / i) {
                for (i64 j = i * i; j <= limit; j += i * i) mu[j] = 0;
            }
        }
        for (i64 d = 1; d <= limit; ++d) {
            for (i64 j = d; j <= limit; j += d) ++tau[j];
        }
    }
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Table of e(k/m) for k = 0..m-1.
class RootTable {
public:
    explicit RootTable(i64 m) : m_(m), roots_(static_cast<std::size_t>(m)) {
        for (i64 k = 0; k < m; ++k) roots_[static_cast<std::size_t>(k)] = e_frac(k, m);
    }
    i64 modulus() const { return m_; }
    const cplx& operator[](i64 k) const { return roots_[static_cast<std::size_t>(mod(k, m_))]; }

private:
    i64 m_;
    std::vector<cplx> roots_;
};

}  // namespace weylsum
