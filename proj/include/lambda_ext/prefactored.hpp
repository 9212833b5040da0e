// Series with an explicit algebraic prefactor: t^a * (1-t)^b * body(t).
//
// The two exponents are exact rationals; the body is an ordinary truncated
// power series with nonzero constant term (after construction-time
// normalization). This is the canonical output form for closed-form catalog
// entries, whose natural expressions carry fractional powers of (1-t).
#pragma once

#include <stdexcept>
#include <string>

#include "lambda_ext/series.hpp"

namespace lambda_ext {

// (1+x)^r coefficientwise via the first-order ODE (1+x) u' = r u, truncated.
// Generalized here to any unit-constant-term series S in place of 1+x:
// u = S^r is the unique series with u(0) = S(0)^r when S(0) = 1.
template <typename R>
Series<R> pow_rat(const Series<R>& s, const Rational& r) {
    if (!(constant_value(s[0]) == 1)) {
        throw std::domain_error("pow_rat needs a series with constant term 1");
    }
    if (is_integer(r) && r >= 0 && r <= 4) {
        // Small integer powers exactly (slightly sharper truncation analysis).
        long e = r.get_num().get_si();
        Series<R> acc(s.order());
        acc.at(0) = R(1);
        for (long i = 0; i < e; ++i) acc = mul(acc, s).truncated(s.order());
        return acc;
    }
    int n = s.order();
    std::vector<R> u(static_cast<std::size_t>(n) + 1, R(0));
    u[0] = R(1);
    // S u' = r S' u, matched at t^{m-1} to solve for u_m.
    for (int m = 1; m <= n; ++m) {
        R acc = R(0);
        for (int j = 1; j <= m; ++j) {
            // r * j * S_j * u_{m-j}  -  (m-j) * S_j * u_{m-j}
            acc = acc + R(r * Rational(j) - Rational(m - j)) * s[j] * u[static_cast<std::size_t>(m - j)];
        }
        u[static_cast<std::size_t>(m)] = acc * R(Rational(1, m));
    }
    return Series<R>(std::move(u));
}

// (1-t)^b as a plain series to the requested order.
template <typename R = Rational>
Series<R> one_minus_t_pow(const Rational& b, int order) {
    Series<R> base(order);
    base.at(0) = R(1);
    if (order >= 1) base.at(1) = R(Rational(-1));
    return pow_rat(base, b);
}

template <typename R>
class Prefactored {
  public:
    Prefactored() = default;
    Prefactored(Rational t_exp, Rational omt_exp, Series<R> body)
        : t_exp_(std::move(t_exp)), omt_exp_(std::move(omt_exp)), body_(std::move(body)) {}

    const Rational& t_exponent() const { return t_exp_; }
    const Rational& omt_exponent() const { return omt_exp_; }
    const Series<R>& body() const { return body_; }

    // Folds the (1-t)^b factor into the body; valid for every rational b.
    // The t-exponent must be a nonnegative integer for a plain expansion.
    Series<R> as_plain(int order) const {
        if (!is_integer(t_exp_) || t_exp_ < 0) {
            throw std::domain_error("cannot expand: fractional or negative t-exponent " +
                                    lambda_ext::to_string(t_exp_));
        }
        int shift = static_cast<int>(t_exp_.get_num().get_si());
        int need = order - shift;
        if (need < 0) return Series<R>(order);
        if (need > body_.order()) {
            throw std::invalid_argument("body truncation too short for requested order");
        }
        Series<R> expanded = mul(body_.truncated(need), one_minus_t_pow<R>(omt_exp_, need));
        return shift_up(expanded.truncated(need), shift).truncated(order);
    }

    // Moves any t-valuation of the body into the t-exponent so that the body
    // has a nonzero constant term (when the body is not identically zero).
    Prefactored normalized() const {
        int v = body_.valuation();
        if (v == 0 || v > body_.order()) return *this;
        return Prefactored(t_exp_ + v, omt_exp_, shift_down(body_, v));
    }

    friend Prefactored mul(const Prefactored& x, const Prefactored& y) {
        return Prefactored(x.t_exp_ + y.t_exp_, x.omt_exp_ + y.omt_exp_, mul(x.body_, y.body_));
    }

    Prefactored scaled(const R& c) const {
        return Prefactored(t_exp_, omt_exp_, scal(c, body_));
    }

    // Exact comparison of the underlying functions. Both sides are aligned at
    // the lower of the two t-exponents (their difference must be an integer)
    // and the (1-t)-exponent difference is folded into one body; n+1
    // coefficients are compared from the alignment point. Distinct fractional
    // t-exponents denote genuinely different branches and compare unequal.
    friend bool eq_to_order_pref(const Prefactored& x, const Prefactored& y, int order) {
        Prefactored a = x.normalized(), b = y.normalized();
        if (a.body_.all_zero() && b.body_.all_zero()) return true;
        if (a.body_.all_zero() || b.body_.all_zero()) return false;
        Rational dt = a.t_exp_ - b.t_exp_;
        if (!is_integer(dt)) return false;
        if (dt < 0) return eq_to_order_pref(y, x, order);
        int sh = static_cast<int>(dt.get_num().get_si());  // a carries t^sh vs b
        Rational db = a.omt_exp_ - b.omt_exp_;
        int n = std::min({order, a.body_.order() + sh, b.body_.order()});
        if (n < 0) return false;
        int need = std::max(0, n - sh);
        Series<R> folded = mul(a.body_.truncated(std::min(a.body_.order(), need)),
                               one_minus_t_pow<R>(db, need));
        Series<R> lhs = shift_up(folded.truncated(need), sh);
        return eq_to_order(lhs.truncated(n), b.body_.truncated(n), n);
    }

    std::string to_string() const {
        std::string out;
        if (!is_zero(t_exp_)) out += "t^(" + lambda_ext::to_string(t_exp_) + ") * ";
        if (!is_zero(omt_exp_)) out += "(1-t)^(" + lambda_ext::to_string(omt_exp_) + ") * ";
        out += "[" + body_.to_string() + "]";
        return out;
    }

  private:
    Rational t_exp_ = 0;    // exponent of t
    Rational omt_exp_ = 0;  // exponent of (1-t)
    Series<R> body_;
};

using QPrefactored = Prefactored<Rational>;
using PPrefactored = Prefactored<ParamPoly>;

}  // namespace lambda_ext
