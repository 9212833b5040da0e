// Exact rational arithmetic used throughout the library.
//
// A thin layer over GMP's mpq_class: every coefficient in this project is an
// exact rational, kept canonical (lowest terms, positive denominator) by GMP.
// No floating point is ever used in any computation path.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace lambda_ext {

using Rational = mpq_class;

// Convenience constructor: rat(3, 4) == 3/4, canonicalized.
inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// Renders "p/q" in lowest terms with positive denominator, or "p" if integral.
inline std::string to_string(const Rational& q) {
    return q.get_str();
}

// Parses an integer literal or "p/q". Returns nullopt on malformed input.
inline std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    // Validate: optional sign, digits, optionally "/" digits (with optional sign).
    std::size_t i = 0;
    auto scan_int = [&]() -> bool {
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        return i > start;
    };
    if (!scan_int()) return std::nullopt;
    if (i < text.size()) {
        if (text[i] != '/') return std::nullopt;
        ++i;
        if (!scan_int() || i != text.size()) return std::nullopt;
    }
    Rational q;
    if (q.set_str(text, 10) != 0) return std::nullopt;
    if (q.get_den() == 0) return std::nullopt;
    q.canonicalize();
    return q;
}

// Exact integer square root test: returns sqrt if n is a perfect square.
inline std::optional<mpz_class> exact_sqrt(const mpz_class& n) {
    if (sgn(n) < 0) return std::nullopt;
    mpz_class root, rem;
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
    if (rem != 0) return std::nullopt;
    return root;
}

// Exact rational square root: sqrt(p/q) exists iff p and q are both squares.
inline std::optional<Rational> exact_sqrt(const Rational& q) {
    auto num = exact_sqrt(mpz_class(q.get_num()));
    if (!num) return std::nullopt;
    auto den = exact_sqrt(mpz_class(q.get_den()));
    if (!den) return std::nullopt;
    return Rational(*num, *den);
}

}  // namespace lambda_ext
