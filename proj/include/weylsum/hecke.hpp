#pragma once

// Fourier coefficients of level-one holomorphic Hecke eigenforms.
//
// Coefficients are exact integers. They are accumulated in wrapping 128-bit
// arithmetic, i.e. in Z/2^128; since every final coefficient satisfies
// |a(n)| <= d(n) n^((k-1)/2) < 2^127 inside the supported range, the signed
// reading of the residue is the integer itself, however large the
// intermediate products become.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "weylsum/arith.hpp"

namespace weylsum::hecke {

inline constexpr i64 delta_max_terms = 2'000'000;
inline constexpr i64 delta_e4_max_terms = 50'000;

/// Thrown when a coefficient beyond the computed table is requested.
struct CoefficientCacheMiss : std::out_of_range {
    using std::out_of_range::out_of_range;
};

class CuspForm {
public:
    CuspForm(std::string id, int weight, std::vector<i128> coeffs)
        : id_(std::move(id)), weight_(weight), coeffs_(std::move(coeffs)) {
        if (weight_ < 12 || weight_ % 2 != 0) throw std::invalid_argument("CuspForm: weight must be even and >= 12");
        if (coeffs_.size() < 2 || coeffs_[1] != 1) throw std::invalid_argument("CuspForm: a(1) must equal 1");
        lambda_.resize(coeffs_.size(), 0.0);
        const long double half_exp = (weight_ - 1) / 2.0L;
        for (std::size_t n = 1; n < coeffs_.size(); ++n) {
            lambda_[n] = static_cast<double>(static_cast<long double>(coeffs_[n]) /
                                             std::pow(static_cast<long double>(n), half_exp));
        }
    }

    const std::string& id() const { return id_; }
    int weight() const { return weight_; }
    i64 n_max() const { return static_cast<i64>(coeffs_.size()) - 1; }

    i128 coefficient(i64 n) const {
        if (n < 1) return 0;
        if (n > n_max()) throw CoefficientCacheMiss("coefficient beyond computed table");
        return coeffs_[static_cast<std::size_t>(n)];
    }

    /// lambda_f(n) = a(n)/n^((k-1)/2); zero for n <= 0.
    double lambda(i64 n) const {
        if (n < 1) return 0.0;
        if (n > n_max()) throw CoefficientCacheMiss("lambda beyond computed table; extend the coefficient table");
        return lambda_[static_cast<std::size_t>(n)];
    }

    const std::vector<i128>& coefficients() const { return coeffs_; }
    const std::vector<double>& lambdas() const { return lambda_; }

private:
    std::string id_;
    int weight_;
    std::vector<i128> coeffs_;   // index 0 unused
    std::vector<double> lambda_;
};

inline double normalized_lambda(const CuspForm& f, i64 n) { return f.lambda(n); }

/// tau(1..n_max) from Delta = q (eta^3)^8 with the Jacobi series
/// eta^3 = sum_j (-1)^j (2j+1) q^(j(j+1)/2). Index 0 of the result is 0.
inline std::vector<i128> delta_coefficients(i64 n_max) {
    if (n_max < 1) throw std::invalid_argument("delta_coefficients: n_max must be >= 1");
    if (n_max > delta_max_terms) throw std::invalid_argument("delta_coefficients: n_max beyond the exact 128-bit range");
    const i64 len = n_max;  // coefficients of q^0..q^(n_max-1) of prod (1-q^n)^24

    std::vector<i64> offsets;
    std::vector<u128> weights;
    for (i64 j = 0;; ++j) {
        const i64 exponent = j * (j + 1) / 2;
        if (exponent >= len) break;
        offsets.push_back(exponent);
        const i64 w = (j % 2 == 0 ? 1 : -1) * (2 * j + 1);
        weights.push_back(static_cast<u128>(static_cast<i128>(w)));
    }

    std::vector<u128> series(static_cast<std::size_t>(len), 0);
    for (std::size_t t = 0; t < offsets.size(); ++t) series[static_cast<std::size_t>(offsets[t])] = weights[t];

    // Seven more sparse multiplications, in place from the top degree down.
    for (int pass = 0; pass < 7; ++pass) {
        for (i64 i = len - 1; i >= 0; --i) {
            u128 acc = series[static_cast<std::size_t>(i)];  // offsets[0] == 0, weight 1
            for (std::size_t t = 1; t < offsets.size() && offsets[t] <= i; ++t) {
                acc += weights[t] * series[static_cast<std::size_t>(i - offsets[t])];
            }
            series[static_cast<std::size_t>(i)] = acc;
        }
    }

    std::vector<i128> tau(static_cast<std::size_t>(n_max) + 1, 0);
    for (i64 n = 1; n <= n_max; ++n) tau[static_cast<std::size_t>(n)] = static_cast<i128>(series[static_cast<std::size_t>(n - 1)]);
    return tau;
}

inline CuspForm delta_form(i64 n_max) { return {"delta", 12, delta_coefficients(n_max)}; }

/// Delta * E4, the weight-16 eigenform; E4 = 1 + 240 sum sigma_3(n) q^n.
inline CuspForm second_form(i64 n_max) {
    if (n_max < 1) throw std::invalid_argument("second_form: n_max must be >= 1");
    if (n_max > delta_e4_max_terms) throw std::invalid_argument("second_form: n_max beyond the exact 128-bit range");
    const auto tau = delta_coefficients(n_max);
    std::vector<u128> e4(static_cast<std::size_t>(n_max), 0);
    e4[0] = 1;
    for (i64 d = 1; d < n_max; ++d) {
        const u128 cube = static_cast<u128>(d) * d * d;
        for (i64 m = d; m < n_max; m += d) e4[static_cast<std::size_t>(m)] += 240 * cube;
    }
    std::vector<i128> coeffs(static_cast<std::size_t>(n_max) + 1, 0);
    for (i64 n = 1; n <= n_max; ++n) {
        u128 acc = 0;
        for (i64 j = 0; j < n; ++j) {
            acc += static_cast<u128>(tau[static_cast<std::size_t>(n - j)]) * e4[static_cast<std::size_t>(j)];
        }
        coeffs[static_cast<std::size_t>(n)] = static_cast<i128>(acc);
    }
    return {"delta_e4", 16, std::move(coeffs)};
}

/// Exact check |a(n)|^2 <= d(n)^2 n^(k-1).
inline bool deligne_bound_holds(const CuspForm& f, i64 n) {
    using boost::multiprecision::cpp_int;
    const i128 a = f.coefficient(n);
    const u128 mag = static_cast<u128>(a < 0 ? -a : a);
    cpp_int lhs = static_cast<cpp_int>(static_cast<std::uint64_t>(mag >> 64)) << 64;
    lhs += static_cast<std::uint64_t>(mag);
    lhs *= lhs;
    const cpp_int d = divisor_count(n);
    cpp_int rhs = d * d * boost::multiprecision::pow(cpp_int(n), static_cast<unsigned>(f.weight() - 1));
    return lhs <= rhs;
}

inline std::string to_string(i128 v) {
    if (v == 0) return "0";
    const bool negative = v < 0;
    u128 mag = negative ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
    std::string digits;
    while (mag > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
        mag /= 10;
    }
    if (negative) digits.push_back('-');
    return {digits.rbegin(), digits.rend()};
}

// ---------------------------------------------------------------------------
// Binary coefficient cache.
//
//   magic        8 bytes  "WEYLCF01"
//   endian tag   u32 LE   0x01020304
//   weight       u32 LE
//   n_max        u64 LE
//   id length    u32 LE, followed by the id bytes
//   records      n_max x 16 bytes, a(1..n_max) as little-endian two's complement
// ---------------------------------------------------------------------------

inline constexpr std::array<char, 8> cache_magic{'W', 'E', 'Y', 'L', 'C', 'F', '0', '1'};
inline constexpr std::uint32_t cache_endian_tag = 0x01020304U;

namespace detail {

template <class T>
void put_le(std::ostream& out, T value, int bytes) {
    for (int i = 0; i < bytes; ++i) {
        out.put(static_cast<char>(static_cast<unsigned char>(value & 0xFF)));
        value >>= 8;
    }
}

template <class T>
T get_le(std::istream& in, int bytes) {
    T value = 0;
    for (int i = 0; i < bytes; ++i) {
        const int c = in.get();
        if (c == EOF) throw std::runtime_error("coefficient cache truncated");
        value |= static_cast<T>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return value;
}

}  // namespace detail

struct CacheHeader {
    std::string id;
    int weight = 0;
    i64 n_max = 0;
};

inline void write_cache(const CuspForm& f, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write coefficient cache " + tmp.string());
        out.write(cache_magic.data(), cache_magic.size());
        detail::put_le<std::uint32_t>(out, cache_endian_tag, 4);
        detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.weight()), 4);
        detail::put_le<std::uint64_t>(out, static_cast<std::uint64_t>(f.n_max()), 8);
        detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.id().size()), 4);
        out.write(f.id().data(), static_cast<std::streamsize>(f.id().size()));
        for (i64 n = 1; n <= f.n_max(); ++n) detail::put_le<u128>(out, static_cast<u128>(f.coefficient(n)), 16);
        if (!out) throw std::runtime_error("failed writing coefficient cache");
    }
    std::filesystem::rename(tmp, path);
}

inline CacheHeader read_cache_header(std::istream& in) {
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != cache_magic) throw std::runtime_error("not a coefficient cache file");
    if (detail::get_le<std::uint32_t>(in, 4) != cache_endian_tag) throw std::runtime_error("coefficient cache endian tag mismatch");
    CacheHeader h;
    h.weight = static_cast<int>(detail::get_le<std::uint32_t>(in, 4));
    h.n_max = static_cast<i64>(detail::get_le<std::uint64_t>(in, 8));
    const auto len = detail::get_le<std::uint32_t>(in, 4);
    if (len > 256) throw std::runtime_error("coefficient cache id too long");
    h.id.resize(len);
    in.read(h.id.data(), len);
    if (!in) throw std::runtime_error("coefficient cache truncated");
    return h;
}

inline CuspForm read_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open coefficient cache " + path.string());
    const auto h = read_cache_header(in);
    std::vector<i128> coeffs(static_cast<std::size_t>(h.n_max) + 1, 0);
    for (i64 n = 1; n <= h.n_max; ++n) coeffs[static_cast<std::size_t>(n)] = static_cast<i128>(detail::get_le<u128>(in, 16));
    return {h.id, h.weight, std::move(coeffs)};
}

inline int form_weight(const std::string& id) {
    if (id == "delta") return 12;
    if (id == "delta_e4") return 16;
    throw std::invalid_argument("unknown form id '" + id + "' (expected delta or delta_e4)");
}

inline CuspForm compute_form(const std::string& id, i64 n_max) {
    if (id == "delta") return delta_form(n_max);
    if (id == "delta_e4") return second_form(n_max);
    throw std::invalid_argument("unknown form id '" + id + "' (expected delta or delta_e4)");
}

inline std::filesystem::path cache_path(const std::filesystem::path& dir, const std::string& id, i64 n_max) {
    return dir / (id + "-" + std::to_string(n_max) + ".wcf");
}

/// Default cache directory: $WEYLSUM_CACHE_DIR, else ".weylsum-cache".
inline std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("WEYLSUM_CACHE_DIR"); env != nullptr && *env != '\0') return env;
    return ".weylsum-cache";
}

/// Reads the cached table for (id, n_max), recomputing it when the file is
/// missing or its header does not echo the request.
inline CuspForm load_or_compute(const std::string& id, i64 n_max, const std::filesystem::path& dir) {
    const auto path = cache_path(dir, id, n_max);
    if (std::filesystem::exists(path)) {
        try {
            std::ifstream in(path, std::ios::binary);
            const auto h = read_cache_header(in);
            if (h.id == id && h.n_max == n_max && h.weight == form_weight(id)) return read_cache(path);
        } catch (const std::runtime_error&) {
            // stale or damaged; fall through and rebuild
        }
    }
    CuspForm f = compute_form(id, n_max);
    write_cache(f, path);
    return f;
}

}  // namespace weylsum::hecke
