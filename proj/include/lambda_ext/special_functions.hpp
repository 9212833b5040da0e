// Exact series generators for Gauss hypergeometric functions, the elliptic
// integral normalizations used throughout the catalog, and an evaluator for
// algebraic closed-form expression trees built from rational powers.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <lambda_ext/prefactored.hpp>
#include <lambda_ext/series.hpp>

namespace lambda_ext {

// ---------------------------------------------------------------------------
// Hypergeometric series.
// ---------------------------------------------------------------------------

struct Hyp2F1Spec {
    Rational a, b, c;

    // The lower parameter must not be a non-positive integer; otherwise the
    // term recurrence divides by zero at order -c.
    void validate() const {
        if (is_integer(c) && c <= 0) {
            throw std::domain_error("2F1 lower parameter is a non-positive integer: " +
                                    lambda_ext::to_string(c));
        }
    }
};

// Coefficient of t^n is (a)_n (b)_n / ((c)_n n!), generated by the exact
// term-ratio recurrence  u_{n+1} = u_n (a+n)(b+n) / ((c+n)(n+1)).
inline QSeries hyp2f1_series(const Hyp2F1Spec& spec, int order) {
    spec.validate();
    if (order < 0) throw std::invalid_argument("hyp2f1_series: negative order");
    QSeries out(order);
    Rational u = rat(1);
    out.at(0) = u;
    for (int n = 0; n < order; ++n) {
        u *= (spec.a + n) * (spec.b + n) / ((spec.c + n) * (n + 1));
        out.at(n + 1) = u;
    }
    return out;
}

// Complete elliptic integrals in the normalization that drops all pi factors:
// Ktil = 2F1(1/2,1/2;1;t) and Etil = 2F1(1/2,-1/2;1;t), as series in t = k^2.
inline QSeries elliptic_Ktil(int order) {
    return hyp2f1_series({rat(1, 2), rat(1, 2), rat(1)}, order);
}
inline QSeries elliptic_Etil(int order) {
    return hyp2f1_series({rat(1, 2), rat(-1, 2), rat(1)}, order);
}

// The algebraic primitive 2(1 - (1-t)^{1/2})/t, analytic at t = 0 with
// constant term 1.
inline QSeries shifted_series(int order) {
    QSeries root = one_minus_t_pow<Rational>(rat(1, 2), order + 1);
    QSeries num(order + 1);
    num.at(0) = rat(1) - root[0];
    for (int n = 1; n <= order + 1; ++n) num.at(n) = -root[n];
    return scal(rat(2), shift_down(num, 1)).truncated(order);
}

// ---------------------------------------------------------------------------
// Exact rational roots: c^(p/q) when it exists in the rationals.
// ---------------------------------------------------------------------------

inline std::optional<Rational> exact_rational_power(const Rational& c, const Rational& r) {
    if (is_integer(r)) {
        long e = r.get_num().get_si();
        if (is_zero(c)) {
            if (e <= 0) return std::nullopt;
            return rat(0);
        }
        Rational out = rat(1);
        Rational base = e >= 0 ? c : rat(1) / c;
        for (long i = 0; i < (e >= 0 ? e : -e); ++i) out *= base;
        return out;
    }
    if (is_zero(c)) return r > 0 ? std::optional<Rational>(rat(0)) : std::nullopt;
    mpz_class q = r.get_den();
    if (c < 0 && mpz_even_p(q.get_mpz_t())) return std::nullopt;
    // q-th root of numerator and denominator separately.
    auto root_of = [&](const mpz_class& z) -> std::optional<mpz_class> {
        mpz_class a = z < 0 ? mpz_class(-z) : z;
        mpz_class rt;
        if (!mpz_root(rt.get_mpz_t(), a.get_mpz_t(), q.get_ui())) {
            mpz_class back;
            mpz_pow_ui(back.get_mpz_t(), rt.get_mpz_t(), q.get_ui());
            if (back != a) return std::nullopt;
        }
        return z < 0 ? mpz_class(-rt) : rt;
    };
    auto rn = root_of(c.get_num());
    auto rd = root_of(c.get_den());
    if (!rn || !rd) return std::nullopt;
    Rational root(*rn, *rd);
    root.canonicalize();
    return exact_rational_power(root, Rational(r.get_num()));
}

// ---------------------------------------------------------------------------
// Algebraic expression trees.
// ---------------------------------------------------------------------------

enum class AlgKind { Const, VarT, EllipticK, EllipticE, Sum, Product, RationalPower, Shifted };

struct AlgExpr {
    AlgKind kind = AlgKind::Const;
    Rational value;                  // Const payload
    Rational exponent;               // RationalPower payload
    std::vector<AlgExpr> children;   // Sum, Product, RationalPower (single child)
};

inline AlgExpr alg_const(Rational c) { return {AlgKind::Const, std::move(c), {}, {}}; }
inline AlgExpr alg_t() { return {AlgKind::VarT, {}, {}, {}}; }
inline AlgExpr alg_K() { return {AlgKind::EllipticK, {}, {}, {}}; }
inline AlgExpr alg_E() { return {AlgKind::EllipticE, {}, {}, {}}; }
inline AlgExpr alg_shifted() { return {AlgKind::Shifted, {}, {}, {}}; }
inline AlgExpr alg_sum(std::vector<AlgExpr> terms) {
    return {AlgKind::Sum, {}, {}, std::move(terms)};
}
inline AlgExpr alg_product(std::vector<AlgExpr> factors) {
    return {AlgKind::Product, {}, {}, std::move(factors)};
}
inline AlgExpr alg_pow(AlgExpr base, Rational r) {
    AlgExpr e{AlgKind::RationalPower, {}, std::move(r), {}};
    e.children.push_back(std::move(base));
    return e;
}
// Convenience: the polynomial 1 - t.
inline AlgExpr alg_one_minus_t() {
    return alg_sum({alg_const(rat(1)), alg_product({alg_const(rat(-1)), alg_t()})});
}

namespace detail {

// Adds two prefactored series exactly. The t-exponents must differ by an
// integer (otherwise the branches live on different covers and the sum is not
// a prefactored series); the (1-t)-exponent difference is folded into the
// body, which is exact because (1-t)^d has unit constant term.
template <typename R>
Prefactored<R> pref_add(const Prefactored<R>& x, const Prefactored<R>& y) {
    if (x.body().all_zero()) return y;
    if (y.body().all_zero()) return x;
    Rational dt = y.t_exponent() - x.t_exponent();
    if (dt < 0) return pref_add(y, x);
    if (!is_integer(dt)) {
        throw std::domain_error("sum of prefactored series with non-integer t-exponent gap");
    }
    int k = static_cast<int>(dt.get_num().get_si());
    Rational db = y.omt_exponent() - x.omt_exponent();
    Series<R> yb = mul(y.body(), one_minus_t_pow<R>(db, y.body().order()));
    Series<R> sum = add(x.body(), shift_up(yb, k));
    return Prefactored<R>(x.t_exponent(), x.omt_exponent(), sum);
}

}  // namespace detail

// Expands an expression tree into a prefactored series exact to the requested
// order. Rational powers extract the t-valuation, the (1-t)-exponent and the
// leading constant of their base; the constant must possess an exact rational
// root for the exponent.
inline QPrefactored eval_alg_expr(const AlgExpr& e, int order) {
    const int slack = order + 8;
    switch (e.kind) {
        case AlgKind::Const: {
            QSeries c(slack);
            c.at(0) = e.value;
            return QPrefactored(rat(0), rat(0), c);
        }
        case AlgKind::VarT: {
            QSeries one(slack);
            one.at(0) = rat(1);
            return QPrefactored(rat(1), rat(0), one);
        }
        case AlgKind::EllipticK:
            return QPrefactored(rat(0), rat(0), elliptic_Ktil(slack));
        case AlgKind::EllipticE:
            return QPrefactored(rat(0), rat(0), elliptic_Etil(slack));
        case AlgKind::Shifted:
            return QPrefactored(rat(0), rat(0), shifted_series(slack));
        case AlgKind::Sum: {
            if (e.children.empty()) throw std::invalid_argument("empty sum");
            QPrefactored acc = eval_alg_expr(e.children.front(), order);
            for (std::size_t i = 1; i < e.children.size(); ++i) {
                acc = detail::pref_add(acc, eval_alg_expr(e.children[i], order));
            }
            return acc;
        }
        case AlgKind::Product: {
            if (e.children.empty()) throw std::invalid_argument("empty product");
            QPrefactored acc = eval_alg_expr(e.children.front(), order);
            for (std::size_t i = 1; i < e.children.size(); ++i) {
                acc = mul(acc, eval_alg_expr(e.children[i], order));
            }
            return acc;
        }
        case AlgKind::RationalPower: {
            QPrefactored base = eval_alg_expr(e.children.front(), order).normalized();
            if (base.body().all_zero()) {
                throw std::domain_error("rational power of the zero series");
            }
            Rational c0 = base.body()[0];
            auto croot = exact_rational_power(c0, e.exponent);
            if (!croot) {
                throw std::domain_error("leading constant " + lambda_ext::to_string(c0) +
                                        " has no exact rational power " +
                                        lambda_ext::to_string(e.exponent));
            }
            QSeries unit = scal(rat(1) / c0, base.body());
            QSeries powered = scal(*croot, pow_rat(unit, e.exponent));
            return QPrefactored(base.t_exponent() * e.exponent,
                                base.omt_exponent() * e.exponent, powered);
        }
    }
    throw std::logic_error("unreachable expression kind");
}

}  // namespace lambda_ext
