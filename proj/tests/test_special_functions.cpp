// Tests for hypergeometric series, elliptic-integral normalizations, and the
// algebraic expression-tree evaluator.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lambda_ext/special_functions.hpp>

using namespace lambda_ext;

namespace {

// ((1 + (1-t)^{1/2}) / 2) ^ r
AlgExpr half_sum_pow(const Rational& r) {
    return alg_pow(alg_sum({alg_const(rat(1, 2)),
                            alg_product({alg_const(rat(1, 2)),
                                         alg_pow(alg_one_minus_t(), rat(1, 2))})}),
                   r);
}

}  // namespace

TEST_CASE("hypergeometric series against the factorial formula") {
    // 2F1(1/2,1/2;1): coefficient ((1/2)_n / n!)^2 computed independently.
    QSeries k = hyp2f1_series({rat(1, 2), rat(1, 2), rat(1)}, 8);
    Rational poch = rat(1);
    for (int n = 0; n <= 8; ++n) {
        CHECK(k[n] == poch * poch);
        poch *= rat(2 * n + 1, 2) / rat(n + 1);
    }
    CHECK(k[1] == rat(1, 4));
    CHECK(k[2] == rat(9, 64));
    CHECK(k[3] == rat(25, 256));
}

TEST_CASE("elliptic E-normalization series") {
    QSeries e = elliptic_Etil(4);
    CHECK(e[0] == rat(1));
    CHECK(e[1] == rat(-1, 4));
    CHECK(e[2] == rat(-3, 64));
    CHECK(e[3] == rat(-5, 256));
    CHECK(e[4] == rat(-175, 16384));
}

TEST_CASE("vanishing upper parameter gives the constant series") {
    QSeries s = hyp2f1_series({rat(0), rat(7, 3), rat(2)}, 6);
    CHECK(s[0] == rat(1));
    for (int n = 1; n <= 6; ++n) CHECK(s[n] == rat(0));
}

TEST_CASE("non-positive integer lower parameter is rejected") {
    CHECK_THROWS(hyp2f1_series({rat(1, 2), rat(1, 2), rat(0)}, 4));
    CHECK_THROWS(hyp2f1_series({rat(1, 2), rat(1, 2), rat(-3)}, 4));
    // Negative non-integer c is fine.
    CHECK_NOTHROW(hyp2f1_series({rat(1, 2), rat(1, 2), rat(-1, 2)}, 4));
}

TEST_CASE("derivative relation between the two elliptic series holds to order 40") {
    QSeries e = elliptic_Etil(42);
    QSeries k = elliptic_Ktil(42);
    QSeries lhs = deriv(e).truncated(40);
    QSeries rhs = scal(rat(1, 2), shift_down(sub(e, k), 1)).truncated(40);
    CHECK(eq_to_order(lhs, rhs, 40));
}

TEST_CASE("shifted primitive and its square root") {
    QSeries s = shifted_series(30);
    CHECK(s[0] == rat(1));
    CHECK(s[1] == rat(1, 4));
    CHECK(s[2] == rat(1, 8));
    CHECK(s[3] == rat(5, 64));
    QSeries r = pow_rat(s, rat(1, 2));
    CHECK(eq_to_order(mul(r, r), s, 30));
}

TEST_CASE("exact rational powers of rationals") {
    CHECK(exact_rational_power(rat(8, 27), rat(1, 3)).value() == rat(2, 3));
    CHECK(exact_rational_power(rat(4), rat(3, 2)).value() == rat(8));
    CHECK(exact_rational_power(rat(-8), rat(1, 3)).value() == rat(-2));
    CHECK(exact_rational_power(rat(9, 4), rat(-1, 2)).value() == rat(2, 3));
    CHECK(exact_rational_power(rat(5), rat(2)).value() == rat(25));
    CHECK(exact_rational_power(rat(3, 2), rat(-2)).value() == rat(4, 9));
    CHECK(!exact_rational_power(rat(2), rat(1, 2)).has_value());
    CHECK(!exact_rational_power(rat(-4), rat(1, 2)).has_value());
    CHECK(!exact_rational_power(rat(0), rat(-1)).has_value());
    CHECK(exact_rational_power(rat(0), rat(1, 2)).value() == rat(0));
}

TEST_CASE("first algebraic factor closed form expands to its printed series") {
    // (3/2) t (1-t)^{1/16} ((1+(1-t)^{1/2})/2)^{5/4}
    AlgExpr f1 = alg_product({alg_const(rat(3, 2)), alg_t(),
                              alg_pow(alg_one_minus_t(), rat(1, 16)),
                              half_sum_pow(rat(5, 4))});
    QSeries plain = eval_alg_expr(f1, 8).as_plain(8);
    CHECK(plain[0] == rat(0));
    CHECK(plain[1] == rat(3, 2));
    CHECK(plain[2] == rat(-9, 16));
    CHECK(plain[3] == rat(-15, 128));
    CHECK(plain[4] == rat(-15, 256));
    CHECK(plain[5] == rat(-1215, 32768));
    CHECK(plain[6] == rat(-6903, 262144));
}

TEST_CASE("second algebraic factor picks up the extra branch exponent") {
    AlgExpr f2 = alg_product({alg_const(rat(3, 2)), alg_t(),
                              alg_pow(alg_one_minus_t(), rat(1, 16)),
                              alg_pow(alg_one_minus_t(), rat(-1, 4)),
                              half_sum_pow(rat(5, 4))});
    QSeries plain = eval_alg_expr(f2, 8).as_plain(8);
    CHECK(plain[1] == rat(3, 2));
    CHECK(plain[2] == rat(-3, 16));
    CHECK(plain[3] == rat(-3, 128));
    CHECK(plain[4] == rat(0));
    CHECK(plain[5] == rat(225, 32768));
    CHECK(plain[6] == rat(2451, 262144));
}

TEST_CASE("third and fourth algebraic factors use the shifted primitive") {
    AlgExpr f3 = alg_product({alg_const(rat(-3, 8)), alg_t(), alg_t(),
                              alg_pow(alg_one_minus_t(), rat(1, 16)),
                              half_sum_pow(rat(-3, 4)),
                              alg_pow(alg_shifted(), rat(1, 2))});
    QSeries p3 = eval_alg_expr(f3, 8).as_plain(8);
    CHECK(p3[2] == rat(-3, 8));
    CHECK(p3[3] == rat(-3, 32));
    CHECK(p3[4] == rat(-45, 1024));
    CHECK(p3[5] == rat(-105, 4096));
    CHECK(p3[6] == rat(-4395, 262144));
    AlgExpr f4 = alg_product({alg_const(rat(-3, 8)), alg_t(), alg_t(),
                              alg_pow(alg_one_minus_t(), rat(1, 16)),
                              alg_pow(alg_one_minus_t(), rat(-1, 4)),
                              half_sum_pow(rat(-3, 4)),
                              alg_pow(alg_shifted(), rat(1, 2))});
    QSeries p4 = eval_alg_expr(f4, 8).as_plain(8);
    CHECK(p4[2] == rat(-3, 8));
    CHECK(p4[3] == rat(-3, 16));
    CHECK(p4[4] == rat(-129, 1024));
    CHECK(p4[5] == rat(-195, 2048));
    CHECK(p4[6] == rat(-20115, 262144));
}

TEST_CASE("monomial with branch prefactor") {
    // -(45/16) t^3 (1-t)^{1/8}
    AlgExpr e = alg_product({alg_const(rat(-45, 16)), alg_t(), alg_t(), alg_t(),
                             alg_pow(alg_one_minus_t(), rat(1, 8))});
    QSeries p = eval_alg_expr(e, 6).as_plain(6);
    CHECK(p[3] == rat(-45, 16));
    CHECK(p[4] == rat(45, 128));
    CHECK(p[5] == rat(315, 2048));
}

TEST_CASE("square-root difference quotient equals the shifted square root") {
    // ((1+sqrt(t))^{1/2} - (1-sqrt(t))^{1/2}) / sqrt(t) expands in integer
    // powers of t with coefficient 2*binom(1/2, 2k+1) at t^k; compare with
    // the shifted^{1/2} node to order 20.
    const int N = 20;
    QSeries quotient(N);
    Rational binom = rat(1, 2);  // binom(1/2, 1)
    quotient.at(0) = rat(2) * binom;
    for (int m = 1; m <= 2 * N; ++m) {
        binom *= (rat(1, 2) - m) / rat(m + 1);  // binom(1/2, m+1)
        if ((m + 1) % 2 == 1 && (m + 1) / 2 <= N) {
            quotient.at((m + 1) / 2) = rat(2) * binom;
        }
    }
    QPrefactored lhs(rat(0), rat(0), quotient);
    QPrefactored rhs = eval_alg_expr(alg_pow(alg_shifted(), rat(1, 2)), N);
    CHECK(eq_to_order_pref(lhs, rhs, N));
}

TEST_CASE("products of the four algebraic factors collapse to monomials") {
    AlgExpr f1 = alg_product({alg_const(rat(3, 2)), alg_t(),
                              alg_pow(alg_one_minus_t(), rat(1, 16)),
                              half_sum_pow(rat(5, 4))});
    AlgExpr f2 = alg_product({alg_const(rat(3, 2)), alg_t(),
                              alg_pow(alg_one_minus_t(), rat(1, 16)),
                              alg_pow(alg_one_minus_t(), rat(-1, 4)),
                              half_sum_pow(rat(5, 4))});
    AlgExpr f3 = alg_product({alg_const(rat(-3, 8)), alg_t(), alg_t(),
                              alg_pow(alg_one_minus_t(), rat(1, 16)),
                              half_sum_pow(rat(-3, 4)),
                              alg_pow(alg_shifted(), rat(1, 2))});
    AlgExpr f4 = alg_product({alg_const(rat(-3, 8)), alg_t(), alg_t(),
                              alg_pow(alg_one_minus_t(), rat(1, 16)),
                              alg_pow(alg_one_minus_t(), rat(-1, 4)),
                              half_sum_pow(rat(-3, 4)),
                              alg_pow(alg_shifted(), rat(1, 2))});
    const int N = 16;
    QPrefactored p13 = mul(eval_alg_expr(f1, N), eval_alg_expr(f3, N));
    QPrefactored p24 = mul(eval_alg_expr(f2, N), eval_alg_expr(f4, N));
    QPrefactored p14 = mul(eval_alg_expr(f1, N), eval_alg_expr(f4, N));
    QPrefactored p23 = mul(eval_alg_expr(f2, N), eval_alg_expr(f3, N));
    QSeries c(N);
    c.at(0) = rat(-9, 16);
    QPrefactored mono18(rat(3), rat(1, 8), c);
    QPrefactored mono_m18(rat(3), rat(-1, 8), c);
    CHECK(eq_to_order_pref(p13, mono18, N));
    CHECK(eq_to_order_pref(p14, mono_m18, N));
    CHECK(eq_to_order_pref(p23, mono_m18, N));
    // f1 f3 = (1-t)^{1/2} f2 f4
    QPrefactored scaled24(p24.t_exponent(), p24.omt_exponent() + rat(1, 2), p24.body());
    CHECK(eq_to_order_pref(p13, scaled24, N));
}

TEST_CASE("rational power rejects bases without exact constant roots") {
    AlgExpr bad = alg_pow(alg_sum({alg_const(rat(2)), alg_t()}), rat(1, 2));
    CHECK_THROWS(eval_alg_expr(bad, 4));
    AlgExpr zero = alg_pow(alg_sum({alg_const(rat(1)), alg_const(rat(-1))}), rat(1, 2));
    CHECK_THROWS(eval_alg_expr(zero, 4));
    // Valuation extraction makes t^{1/2} of a polynomial legal.
    AlgExpr ok = alg_pow(alg_product({alg_t(), alg_sum({alg_const(rat(1)), alg_t()})}), rat(1, 2));
    QPrefactored p = eval_alg_expr(ok, 6);
    CHECK(p.t_exponent() == rat(1, 2));
    CHECK(p.body()[0] == rat(1));
}

TEST_CASE("sum with non-integer t-exponent gap is rejected") {
    AlgExpr bad = alg_sum({alg_pow(alg_t(), rat(1, 2)), alg_const(rat(1))});
    CHECK_THROWS(eval_alg_expr(bad, 4));
}
