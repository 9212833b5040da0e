// Tests for the exact power-series layer: rationals, parameter polynomials,
// truncated series arithmetic, prefactored series, the sigma transform, and
// the nonlinear ODE residual tables.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lambda_ext/odes.hpp>
#include <lambda_ext/prefactored.hpp>
#include <lambda_ext/sigma.hpp>

using namespace lambda_ext;

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rational("3/4").value() == rat(3, 4));
    CHECK(parse_rational("-15").value() == rat(-15));
    CHECK(parse_rational("6/8").value() == rat(3, 4));
    CHECK(!parse_rational("").has_value());
    CHECK(!parse_rational("1/0").has_value());
    CHECK(!parse_rational("x").has_value());
    CHECK(!parse_rational("1.5").has_value());
    CHECK(to_string(rat(-5, 10)) == "-1/2");
    CHECK(to_string(rat(7)) == "7");
}

TEST_CASE("exact square roots of rationals") {
    CHECK(exact_sqrt(rat(9, 16)).value() == rat(3, 4));
    CHECK(exact_sqrt(rat(0)).value() == rat(0));
    CHECK(!exact_sqrt(rat(2)).has_value());
    CHECK(!exact_sqrt(rat(-1)).has_value());
    CHECK(!exact_sqrt(rat(9, 17)).has_value());
}

TEST_CASE("parameter polynomial arithmetic") {
    ParamPoly x = ParamPoly::variable("alpha");
    ParamPoly q = x * x - ParamPoly(rat(1, 4));
    CHECK(q.degree() == 2);
    CHECK(q.eval(rat(1, 2)) == rat(0));
    CHECK(q.eval(rat(1)) == rat(3, 4));
    ParamPoly z = q - q;
    CHECK(z.is_zero());
    CHECK(z.degree() == -1);
    // Constants interoperate regardless of parameter name.
    CHECK((ParamPoly(rat(2)) * x).coeff(1) == rat(2));
    CHECK(to_string(q) == "-1/4 + alpha^2");
}

TEST_CASE("exact polynomial division") {
    ParamPoly x = ParamPoly::variable("p");
    ParamPoly prod = (x * 3 + rat(1, 2)) * (x * x - rat(2, 7));
    auto quot = divide_exact(prod, x * 3 + rat(1, 2));
    REQUIRE(quot.has_value());
    CHECK(*quot == x * x - rat(2, 7));
    CHECK(!divide_exact(prod + rat(1), x * 3 + rat(1, 2)).has_value());
    CHECK(!divide_exact(prod, ParamPoly(rat(0))).has_value());
}

TEST_CASE("exact polynomial square root") {
    ParamPoly x = ParamPoly::variable("p");
    ParamPoly s = x * rat(2, 3) - rat(5, 4);
    auto r = exact_sqrt_poly(s * s);
    REQUIRE(r.has_value());
    CHECK((*r == s || *r == s * rat(-1)));
    CHECK(!exact_sqrt_poly(x).has_value());
    CHECK(!exact_sqrt_poly(x * x + rat(1)).has_value());
    CHECK(exact_sqrt_poly(ParamPoly(rat(9, 4))).value() == ParamPoly(rat(3, 2)));
}

TEST_CASE("series arithmetic respects truncation orders") {
    QSeries a(4);  // 1 + t
    a.at(0) = rat(1);
    a.at(1) = rat(1);
    QSeries b(6);
    b.at(0) = rat(1);
    b.at(1) = rat(-1);
    QSeries s = mul(a, b);
    CHECK(s.order() == 4);
    CHECK(s[0] == rat(1));
    CHECK(s[1] == rat(0));
    CHECK(s[2] == rat(-1));
    // Valuation sharpening: t^3 * t^3 is reliable to t^6 even at low orders.
    QSeries c(4), d(4);
    c.at(3) = rat(1);
    d.at(3) = rat(2);
    QSeries p = mul(c, d);
    CHECK(p.order() == 7);
    CHECK(p[6] == rat(2));
}

TEST_CASE("series division and geometric series") {
    QSeries one_minus_t(8);
    one_minus_t.at(0) = rat(1);
    one_minus_t.at(1) = rat(-1);
    QSeries one(8);
    one.at(0) = rat(1);
    QSeries g = div(one, one_minus_t);
    for (int n = 0; n <= 8; ++n) CHECK(g[n] == rat(1));
    CHECK(eq_to_order(mul(g, one_minus_t), one, 8));
}

TEST_CASE("derivative and t-polynomial multiplication") {
    QSeries f(5);
    for (int n = 0; n <= 5; ++n) f.at(n) = rat(n * n + 1);
    QSeries fp = deriv(f);
    CHECK(fp.order() == 4);
    for (int n = 0; n <= 4; ++n) CHECK(fp[n] == rat((n + 1) * ((n + 1) * (n + 1) + 1)));
    // multiply by t^2 - t: exact, order grows by degree
    QSeries h = mul_tpoly(f, {rat(0), rat(-1), rat(1)});
    CHECK(h.order() == 7);
    CHECK(h[0] == rat(0));
    CHECK(h[1] == rat(-1));
    CHECK(h[3] == rat(2 - 5));  // f[1]*1 + f[2]*(-1)
}

TEST_CASE("parameter series specialize and lift") {
    PSeries f(3);
    ParamPoly x = ParamPoly::variable("mu");
    f.at(0) = ParamPoly(rat(1));
    f.at(1) = x * rat(2) + rat(1, 3);
    f.at(2) = x * x;
    QSeries g = specialize(f, rat(1, 2));
    CHECK(g[1] == rat(4, 3));
    CHECK(g[2] == rat(1, 4));
    PSeries lifted = lift(g);
    CHECK(lifted[1] == ParamPoly(rat(4, 3)));
}

TEST_CASE("fractional powers of unit series") {
    // (1-t)^(1/2) squared reproduces 1-t.
    QSeries base = one_minus_t_pow<Rational>(rat(1), 12);
    QSeries half = pow_rat(base, rat(1, 2));
    QSeries sq = mul(half, half);
    CHECK(eq_to_order(sq, base, 12));
    // Binomial coefficients of (1-t)^(-1/4)
    QSeries m4 = one_minus_t_pow<Rational>(rat(-1, 4), 6);
    CHECK(m4[1] == rat(1, 4));
    CHECK(m4[2] == rat(5, 32));
    // Integer fast path agrees with the ODE route.
    QSeries two = pow_rat(base, rat(2));
    CHECK(two[1] == rat(-2));
    CHECK(two[2] == rat(1));
}

TEST_CASE("prefactored series equality across shifted exponents") {
    // t^(3/2) * body  vs  t^(1/2) * (t * body): same function, different split.
    QSeries body(6);
    body.at(0) = rat(1);
    body.at(1) = rat(-3, 7);
    QPrefactored x(rat(3, 2), rat(0), body);
    QPrefactored y(rat(1, 2), rat(0), shift_up(body, 1));
    CHECK(eq_to_order_pref(x, y, 4));
    CHECK(eq_to_order_pref(y, x, 4));
    // and with (1-t)^1 folded in on one side
    QPrefactored z(rat(3, 2), rat(1), div(body, one_minus_t_pow<Rational>(rat(1), 6)));
    CHECK(eq_to_order_pref(x, z, 4));
    // a genuinely different function compares unequal
    QPrefactored w(rat(3, 2), rat(0), scal(rat(2), body));
    CHECK(!eq_to_order_pref(x, w, 4));
}

TEST_CASE("sigma transform of a pure power") {
    // body == 1, prefactor t^a (1-t)^b: sigma = -a + (a+b+kappa) t + ...
    QSeries one(8);
    one.at(0) = rat(1);
    auto sig = sigma_of_body(one, rat(3, 8), rat(-1, 16), rat(0));
    CHECK(sig[0] == rat(-3, 8));
    CHECK(sig[1] == rat(3, 8) + rat(-1, 16));
    for (int n = 2; n <= 7; ++n) CHECK(sig[n] == rat(0));
}

TEST_CASE("sigma transform picks up logarithmic derivative of the body") {
    // body = 1/(1-t): t(t-1) dln body = -t, so sigma gains -t at order 1.
    QSeries geo(10);
    for (int n = 0; n <= 10; ++n) geo.at(n) = rat(1);
    auto sig = sigma_of_body(geo, rat(0), rat(0), rat(-1, 4));
    CHECK(sig[0] == rat(0));
    CHECK(sig[1] == rat(-1, 4) + rat(-1));
    for (int n = 2; n <= 8; ++n) CHECK(sig[n] == rat(0));
}

TEST_CASE("ODE residual tables accept known exact solutions") {
    // sigma == 0 solves the (0,N) family of EQNMODD identically.
    QSeries zero(12);
    OdeSpec spec{OdeFamily::EQNMODD, 0, 5};
    QSeries res = ode_residual(spec, zero);
    CHECK(res.all_zero());
}

TEST_CASE("ODE residual of the diagonal Painleve VI equation at sigma for C==1") {
    // C == 1 corresponds to body == 1 with a=0,b=0: sigma = t/4... compute and
    // check that DIAG_PVI residual with N=1 of the Etilde-induced sigma vanishes.
    // Etilde = 2F1(1/2,-1/2;1;t): series 1 - t/4 - t^2/32 - t^3/128 - ...
    QSeries etil(14);
    etil.at(0) = rat(1);
    // Build by the hypergeometric recurrence a_k+1 = a_k * (k-1/2)(k+1/2)... use direct ratio:
    // c_{k+1} = c_k * ((k+1/2)(k-1/2)) / ((k+1)^2)
    Rational c = rat(1);
    for (int k = 0; k < 14; ++k) {
        c *= (rat(2 * k + 1, 2) * rat(2 * k - 1, 2)) / rat((k + 1) * (k + 1));
        etil.at(k + 1) = c;
    }
    CHECK(etil[1] == rat(-1, 4));
    CHECK(etil[2] == rat(-3, 64));
    auto sig = sigma_of_body(etil, rat(0), rat(0), rat(-1, 4));
    OdeSpec spec{OdeFamily::DIAG_PVI, 1, 1};
    QSeries res = ode_residual(spec, sig);
    CHECK(res.all_zero());
}

TEST_CASE("additive residual split matches total") {
    QSeries a(6), b(6);
    a.at(2) = rat(5);
    b.at(2) = rat(-5);
    b.at(3) = rat(1, 3);
    QSeries tot(6);
    tot.at(3) = rat(1, 3);
    CHECK(additive_split_mismatch(tot, {a, b}, 6) == -1);
    tot.at(4) = rat(1);
    CHECK(additive_split_mismatch(tot, {a, b}, 6) == 4);
}

TEST_CASE("ode spec validation") {
    CHECK_THROWS(OdeSpec{OdeFamily::EQNMODD, 1, 5}.validate());
    CHECK_THROWS(OdeSpec{OdeFamily::EQNMODD, 7, 5}.validate());
    OdeSpec ok{OdeFamily::NONLINEAREQ, 2, 5};
    ok.validate();
    CHECK(ok.label() == "NONLINEAREQ(2,5)");
}
