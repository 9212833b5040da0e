// Truncated power series in t with exact coefficients.
//
// A Series<R> stores coefficients c[0..order] of an expansion around t = 0
// over a coefficient ring R (Rational, or ParamPoly for one-parameter
// families). Truncation is explicit: every operation reports results only up
// to the order it can honestly certify, using valuations to sharpen products.
#pragma once

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambda_ext/param_poly.hpp"
#include "lambda_ext/rational.hpp"

namespace lambda_ext {

template <typename R>
class Series {
  public:
    Series() : coeffs_(1, R(0)) {}
    explicit Series(int order) : coeffs_(static_cast<std::size_t>(order) + 1, R(0)) {
        if (order < 0) throw std::invalid_argument("negative series order");
    }
    explicit Series(std::vector<R> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.push_back(R(0));
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const R& operator[](int n) const {
        static const R zero = R(0);
        if (n < 0) return zero;
        if (n > order()) throw std::out_of_range("coefficient beyond truncation order");
        return coeffs_[static_cast<std::size_t>(n)];
    }
    R& at(int n) { return coeffs_.at(static_cast<std::size_t>(n)); }
    const std::vector<R>& coeffs() const { return coeffs_; }

    // Index of the first nonzero stored coefficient; order()+1 if all stored
    // coefficients vanish (the true valuation is then only bounded below).
    int valuation() const {
        for (int n = 0; n <= order(); ++n) {
            if (!is_zero(coeffs_[static_cast<std::size_t>(n)])) return n;
        }
        return order() + 1;
    }

    bool all_zero() const { return valuation() == order() + 1; }

    Series truncated(int new_order) const {
        if (new_order < 0) throw std::invalid_argument("negative truncation order");
        // Extending beyond the known order would fabricate zero coefficients.
        if (new_order > order()) throw std::invalid_argument("cannot extend truncation order");
        std::vector<R> c(coeffs_.begin(), coeffs_.begin() + new_order + 1);
        return Series(std::move(c));
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (int n = 0; n <= order(); ++n) {
            const R& c = coeffs_[static_cast<std::size_t>(n)];
            if (is_zero(c)) continue;
            if (!first) os << " + ";
            os << "(" << lambda_ext::to_string(c) << ")";
            if (n >= 1) os << "*t" << (n >= 2 ? "^" + std::to_string(n) : "");
            first = false;
        }
        if (first) os << "0";
        os << " + O(t^" << order() + 1 << ")";
        return os.str();
    }

  private:
    std::vector<R> coeffs_;
};

using QSeries = Series<Rational>;
using PSeries = Series<ParamPoly>;

// --- elementwise ring operations (common truncation: min of the orders) ----

template <typename R>
Series<R> add(const Series<R>& a, const Series<R>& b) {
    int n = std::min(a.order(), b.order());
    std::vector<R> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = a[k] + b[k];
    return Series<R>(std::move(c));
}

template <typename R>
Series<R> sub(const Series<R>& a, const Series<R>& b) {
    int n = std::min(a.order(), b.order());
    std::vector<R> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = a[k] - b[k];
    return Series<R>(std::move(c));
}

template <typename R, typename S>
Series<R> scal(const S& s, const Series<R>& a) {
    std::vector<R> c(a.coeffs());
    for (auto& x : c) x = x * R(s);
    return Series<R>(std::move(c));
}

// Product with truncation sharpened by valuations: coefficients of t^k for
// k <= min(na + vb, nb + va) are complete convolutions of known data.
template <typename R>
Series<R> mul(const Series<R>& a, const Series<R>& b) {
    int va = a.valuation(), vb = b.valuation();
    int n = std::min(a.order() + vb, b.order() + va);
    n = std::min(n, a.order() + b.order());
    std::vector<R> c(static_cast<std::size_t>(n) + 1, R(0));
    for (int i = va; i <= std::min(a.order(), n); ++i) {
        if (is_zero(a[i])) continue;
        for (int j = vb; i + j <= n && j <= b.order(); ++j) {
            c[static_cast<std::size_t>(i + j)] += a[i] * b[j];
        }
    }
    return Series<R>(std::move(c));
}

inline Rational constant_value(const Rational& x) { return x; }
inline Rational constant_value(const ParamPoly& x) {
    if (!x.is_constant()) {
        throw std::domain_error("series division by a parameter-valued constant term");
    }
    return x.constant_term();
}

// Quotient a/b with b(0) an invertible constant; order min(a.order, b.order).
template <typename R>
Series<R> div(const Series<R>& a, const Series<R>& b) {
    R b0 = b[0];
    Rational b0c = constant_value(b0);
    if (is_zero(b0c)) throw std::domain_error("series division needs a unit constant term");
    int n = std::min(a.order(), b.order());
    std::vector<R> q(static_cast<std::size_t>(n) + 1, R(0));
    for (int k = 0; k <= n; ++k) {
        R acc = a[k];
        for (int j = 1; j <= k; ++j) acc = acc - b[j] * q[static_cast<std::size_t>(k - j)];
        q[static_cast<std::size_t>(k)] = acc * R(Rational(1) / b0c);
    }
    return Series<R>(std::move(q));
}

// d/dt: drops one order.
template <typename R>
Series<R> deriv(const Series<R>& a) {
    int n = std::max(0, a.order() - 1);
    std::vector<R> c(static_cast<std::size_t>(n) + 1, R(0));
    for (int k = 0; k <= n && k + 1 <= a.order(); ++k) {
        c[static_cast<std::size_t>(k)] = R(Rational(k + 1)) * a[k + 1];
    }
    return Series<R>(std::move(c));
}

// Multiply by the polynomial sum_i p[i] t^i (exact: raises order by deg p).
template <typename R>
Series<R> mul_tpoly(const Series<R>& a, const std::vector<Rational>& p) {
    int n = a.order() + static_cast<int>(p.size()) - 1;
    std::vector<R> c(static_cast<std::size_t>(n) + 1, R(0));
    for (int i = 0; i <= a.order(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (is_zero(p[j])) continue;
            c[static_cast<std::size_t>(i) + j] += R(p[j]) * a[i];
        }
    }
    return Series<R>(std::move(c));
}

// Shift by t^k (k >= 0), raising the order accordingly.
template <typename R>
Series<R> shift_up(const Series<R>& a, int k) {
    if (k < 0) throw std::invalid_argument("negative shift; use shift_down");
    std::vector<R> c(static_cast<std::size_t>(a.order() + k) + 1, R(0));
    for (int i = 0; i <= a.order(); ++i) c[static_cast<std::size_t>(i + k)] = a[i];
    return Series<R>(std::move(c));
}

// Divide by t^k; requires the low-order coefficients to vanish identically.
template <typename R>
Series<R> shift_down(const Series<R>& a, int k) {
    if (k < 0) return shift_up(a, -k);
    if (k > a.order()) throw std::invalid_argument("shift below truncation order");
    for (int i = 0; i < k; ++i) {
        if (!is_zero(a[i])) throw std::domain_error("shift_down of a series with nonzero low coefficient");
    }
    std::vector<R> c(a.coeffs().begin() + k, a.coeffs().end());
    return Series<R>(std::move(c));
}

template <typename R>
bool eq_to_order(const Series<R>& a, const Series<R>& b, int n) {
    if (n > a.order() || n > b.order()) {
        throw std::invalid_argument("comparison order exceeds a truncation order");
    }
    for (int k = 0; k <= n; ++k) {
        if (!(a[k] == b[k])) return false;
    }
    return true;
}

// First order where the two series differ, or -1 if equal up to n.
template <typename R>
int first_mismatch(const Series<R>& a, const Series<R>& b, int n) {
    for (int k = 0; k <= n; ++k) {
        if (!(a[k] == b[k])) return k;
    }
    return -1;
}

// --- conversions between coefficient rings ---------------------------------

inline PSeries lift(const QSeries& a, const std::string& /*parameter*/ = "") {
    std::vector<ParamPoly> c;
    c.reserve(static_cast<std::size_t>(a.order()) + 1);
    for (int k = 0; k <= a.order(); ++k) c.emplace_back(a[k]);
    return PSeries(std::move(c));
}

inline QSeries specialize(const PSeries& a, const Rational& value) {
    std::vector<Rational> c;
    c.reserve(static_cast<std::size_t>(a.order()) + 1);
    for (int k = 0; k <= a.order(); ++k) c.push_back(a[k].eval(value));
    return QSeries(std::move(c));
}

// Substitutes the series' parameter by a polynomial in another parameter
// (calibration maps such as p = c0 + c1*alpha).
inline PSeries compose_param(const PSeries& a, const ParamPoly& map) {
    std::vector<ParamPoly> c;
    c.reserve(static_cast<std::size_t>(a.order()) + 1);
    for (int k = 0; k <= a.order(); ++k) c.push_back(a[k].compose(map));
    return PSeries(std::move(c));
}

// Rescale t -> s*t: coefficient of t^n gains a factor s^n.
template <typename R>
Series<R> rescale_t(const Series<R>& a, const Rational& s) {
    std::vector<R> c(a.coeffs());
    Rational pw = 1;
    for (int k = 1; k <= a.order(); ++k) {
        pw *= s;
        c[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)] * R(pw);
    }
    return Series<R>(std::move(c));
}

}  // namespace lambda_ext
