// Tests for the one-parameter family solver: degeneracy detection, frozen
// family coefficients, calibration of the adjoined parameter against the
// catalog reference series (exact reproduction of every stored coefficient),
// resolution of the ambiguous top coefficient of the fourth factor, the
// algebraic member of the pair family, normalization search, and the
// commutation of specialization with member-wise solving.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lambda_ext/catalog.hpp>
#include <lambda_ext/solver.hpp>

using namespace lambda_ext;

namespace {

const Catalog& cat() {
    static Catalog c = Catalog::load_default();
    return c;
}

ParamPoly PP(const std::string& name, std::vector<Rational> coeffs) {
    return ParamPoly(name, std::move(coeffs));
}

// Reference unit body implied by a catalog series under a decomposition.
PSeries ref_body(const std::string& id, int order, int valuation, const Rational& leading,
                 const Rational& omt_exp) {
    return unit_body_from_plain(cat().reference_series(id, order), valuation, leading, omt_exp);
}

// Root-selection jet from the catalog member at parameter value 0.
std::vector<Rational> jet_at_zero(const std::string& id, int order, int valuation,
                                  const Rational& leading, int upto) {
    return body_jet(specialize(cat().reference_series(id, order), rat(0)), valuation, leading,
                    upto);
}

// Reconstructs the calibrated object and compares its plain expansion with
// the catalog reference series, coefficient by coefficient.
bool reproduces_reference(const FamilySeries& fam, const ParameterMap& pm,
                          const std::string& ref_id, int order) {
    PSeries ref = cat().reference_series(ref_id, order);
    PPrefactored obj(rat(fam.seed.valuation), fam.seed.omt_exp,
                     scal(fam.seed.leading, compose_param(fam.body, pm.map)));
    return eq_to_order(obj.as_plain(order), ref, order);
}

SeedAnsatz row_correlation_seed() {
    SeedAnsatz s;
    s.valuation = 0;
    s.leading = 1;
    s.omt_exp = rat(1, 4);
    s.a = 0;
    s.b = rat(1, 4);
    s.kappa = rat(-1, 4);
    return s;
}

SeedAnsatz diagonal_seed() {
    SeedAnsatz s;
    s.valuation = 0;
    s.leading = 1;
    s.omt_exp = 0;
    s.a = 0;
    s.b = 0;
    s.kappa = rat(-1, 4);
    return s;
}

SeedAnsatz factor_seed(int valuation, const Rational& leading, const Rational& a,
                       const Rational& b, std::vector<Rational> hint) {
    SeedAnsatz s;
    s.valuation = valuation;
    s.leading = leading;
    s.omt_exp = 0;
    s.a = a;
    s.b = b;
    s.kappa = 0;
    s.hint = std::move(hint);
    return s;
}

}  // namespace

TEST_CASE("row correlation families: degeneracy at order six") {
    for (long M : {0L, 2L}) {
        OdeSpec spec{OdeFamily::EQNMODD, M, 5};
        FamilySeries fam = solve_family(spec, row_correlation_seed(), 10);
        REQUIRE(fam.degeneracy_orders == std::vector<int>{6});
        CHECK(fam.body[6] == ParamPoly::variable("p"));
        // below the degeneracy the body is trivial: the parameter-free part
        // of the correlation is exactly the quarter-power prefactor
        CHECK(fam.body[0] == ParamPoly(1));
        for (int k = 1; k <= 5; ++k) CHECK(fam.body[k] == ParamPoly(0));
    }
}

TEST_CASE("(0,5) correlation: lambda and mu calibrations reproduce the series") {
    OdeSpec spec{OdeFamily::EQNMODD, 0, 5};
    FamilySeries fam = solve_family(spec, row_correlation_seed(), 13);

    ParameterMap lam = calibrate_parameter(fam, ref_body("C05_lambda", 8, 0, 1, rat(1, 4)));
    CHECK(lam.map == PP("lambda_sq", {rat(0), rat(-25, 1048576)}));
    CHECK(lam.anchor_order == 6);
    CHECK(lam.verified_order == 8);
    CHECK(reproduces_reference(fam, lam, "C05_lambda", 8));

    ParameterMap mu = calibrate_parameter(fam, ref_body("C05_mu", 9, 0, 1, rat(1, 4)));
    CHECK(mu.map == PP("mu", {rat(-25, 1048576), rat(25, 1048576)}));
    CHECK(mu.verified_order == 9);
    CHECK(reproduces_reference(fam, mu, "C05_mu", 9));

    // the two calibrations agree under lambda^2 = 1 - mu
    CHECK(lam.map.compose(params::lambda_sq_of_mu()) == mu.map);
}

TEST_CASE("(2,5) correlation: lambda and mu calibrations reproduce the series") {
    OdeSpec spec{OdeFamily::EQNMODD, 2, 5};
    FamilySeries fam = solve_family(spec, row_correlation_seed(), 13);
    REQUIRE(fam.degeneracy_orders == std::vector<int>{6});

    ParameterMap lam = calibrate_parameter(fam, ref_body("C25_lambda", 8, 0, 1, rat(1, 4)));
    CHECK(lam.map == PP("lambda_sq", {rat(0), rat(-49, 1048576)}));
    CHECK(reproduces_reference(fam, lam, "C25_lambda", 8));

    ParameterMap mu = calibrate_parameter(fam, ref_body("C25_mu", 9, 0, 1, rat(1, 4)));
    CHECK(mu.map == PP("mu", {rat(-49, 1048576), rat(49, 1048576)}));
    CHECK(mu.verified_order == 9);
    CHECK(reproduces_reference(fam, mu, "C25_mu", 9));

    CHECK(lam.map.compose(params::lambda_sq_of_mu()) == mu.map);
}

TEST_CASE("diagonal family: frozen coefficients and deformation calibration") {
    OdeSpec spec{OdeFamily::DIAG_PVI, 0, 1};
    FamilySeries fam = solve_family(spec, diagonal_seed(), 10);
    REQUIRE(fam.degeneracy_orders == std::vector<int>{2});

    CHECK(fam.body[1] == ParamPoly(rat(-1, 4)));
    CHECK(fam.body[2] == ParamPoly::variable("p"));
    CHECK(fam.body[3] == PP("p", {rat(1, 64), rat(3, 4)}));
    CHECK(fam.body[4] == PP("p", {rat(133, 8192), rat(147, 256)}));
    CHECK(fam.body[5] == PP("p", {rat(483, 32768), rat(469, 1024)}));
    CHECK(fam.body[6] == PP("p", {rat(3429, 262144), rat(4643, 12288), rat(5, 2304)}));
    CHECK(fam.body[7] == PP("p", {rat(12177, 1048576), rat(7865, 24576), rat(55, 9216)}));
    CHECK(fam.body[8] ==
          PP("p", {rat(5570901, 536870912), rat(4642479, 16777216), rat(695, 65536)}));
    CHECK(fam.body[9] ==
          PP("p", {rat(20066939, 2147483648), rat(48971203, 201326592), rat(36625, 2359296)}));
    CHECK(fam.body[10] ==
          PP("p", {rat(145675631, 17179869184), rat(10907297, 50331648), rat(3079025, 150994944)}));

    ParameterMap dm = calibrate_parameter(fam, ref_body("C11_M", 6, 0, 1, rat(0)));
    CHECK(dm.map == PP("M_def", {rat(-3, 64), rat(-3, 256)}));
    CHECK(dm.anchor_order == 2);
    CHECK(dm.verified_order == 6);
    CHECK(reproduces_reference(fam, dm, "C11_M", 6));

    // re-centering the deformation variable at its physical value
    CHECK(dm.map.compose(params::m_def_of_rho()) == PP("rho_def", {rat(-9, 128), rat(-3, 256)}));
}

TEST_CASE("neighbor diagonal families: frozen coefficients") {
    // the N=0 family has a genuine branch point at order 2: one branch is the
    // chain-compatible family, the other the pure power (1-t)^(-p)
    OdeSpec s0{OdeFamily::DIAG_PVI, 0, 0};
    const std::map<int, ParamPoly> branch_a{{2, PP("p", {rat(0), rat(3, 8)})}};
    FamilySeries f0 = solve_family(s0, diagonal_seed(), 8, "p", 8, branch_a);
    REQUIRE(f0.degeneracy_orders == std::vector<int>{1});
    CHECK(f0.body[1] == ParamPoly::variable("p"));
    CHECK(f0.body[2] == PP("p", {rat(0), rat(3, 8)}));
    CHECK(f0.body[3] == PP("p", {rat(0), rat(7, 32)}));
    CHECK(f0.body[4] == PP("p", {rat(0), rat(155, 1024), rat(1, 256)}));
    CHECK(f0.body[5] == PP("p", {rat(0), rat(939, 8192), rat(15, 2048)}));
    CHECK(f0.body[6] == PP("p", {rat(0), rat(6013, 65536), rat(161, 16384)}));
    CHECK(f0.body[7] == PP("p", {rat(0), rat(19987, 262144), rat(759, 65536)}));
    CHECK(f0.body[8] == PP("p", {rat(0), rat(2183931, 33554432), rat(107307, 8388608)}));

    // without a pick the branch point must be refused, naming both roots
    CHECK_THROWS_AS(solve_family(s0, diagonal_seed(), 8), solve_error);

    // the other branch is binomial: u_n = p(p+1)...(p+n-1)/n!
    const std::map<int, ParamPoly> branch_b{{2, PP("p", {rat(0), rat(1, 2), rat(1, 2)})}};
    FamilySeries fb = solve_family(s0, diagonal_seed(), 6, "p", 8, branch_b);
    for (int n = 1; n <= 6; ++n) {
        ParamPoly expect(1);
        Rational fact = 1;
        for (int j = 0; j < n; ++j) {
            expect = expect * PP("p", {rat(j), rat(1)});
            fact *= rat(j + 1);
        }
        CHECK(fb.body[n] == expect / fact);
    }

    OdeSpec s2{OdeFamily::DIAG_PVI, 0, 2};
    FamilySeries f2 = solve_family(s2, diagonal_seed(), 8);
    REQUIRE(f2.degeneracy_orders == std::vector<int>{3});
    CHECK(f2.body[1] == ParamPoly(rat(-1, 4)));
    CHECK(f2.body[2] == ParamPoly(rat(-3, 32)));
    CHECK(f2.body[3] == ParamPoly::variable("p"));
    CHECK(f2.body[4] == PP("p", {rat(63, 4096), rat(31, 32)}));
    CHECK(f2.body[5] == PP("p", {rat(1491, 81920), rat(543, 640)}));
    CHECK(f2.body[6] == PP("p", {rat(11753, 655360), rat(3769, 5120)}));
    CHECK(f2.body[7] == PP("p", {rat(176473, 10485760), rat(52679, 81920)}));
    CHECK(f2.body[8] ==
          PP("p", {rat(4175583, 268435456), rat(5949753, 10485760), rat(21, 20480)}));
}

TEST_CASE("row factor families reproduce the printed expansions") {
    struct Case {
        const char* id;
        OdeSpec spec;
        int valuation;
        Rational leading;
        Rational a, b;
        int jet_upto;
        int nmax;
        int expected_degeneracy;
        ParamPoly expected_map;
    };
    const std::vector<Case> cases = {
        {"f1_alpha", {OdeFamily::FOURFACT, 0, 5}, 1, rat(3, 2), rat(-5, 8), rat(-1, 16), 4, 8, 3,
         PP("alpha", {rat(-35, 1024), rat(-5, 512)})},
        {"f2_alpha", {OdeFamily::FOURFACT, 0, 5}, 1, rat(3, 2), rat(-5, 8), rat(3, 16), 4, 8, 3,
         PP("alpha", {rat(-5, 1024), rat(5, 512)})},
        {"f3_alpha", {OdeFamily::FOURFACT, 0, 5}, 2, rat(-3, 8), rat(5, 8), rat(-1, 16), 4, 7, 4,
         PP("alpha", {rat(735, 16384), rat(-5, 16384)})},
        {"F1_25_alpha", {OdeFamily::NONLINEAREQ, 2, 5}, 3, rat(-45, 16), rat(0), rat(3, 8), 3, 6,
         3, PP("alpha", {rat(101, 512), rat(7, 512)})},
        {"F2_25_alpha", {OdeFamily::NONLINEAREQ, 2, 5}, 3, rat(-45, 16), rat(0), rat(-1, 8), 3, 6,
         3, PP("alpha", {rat(-7, 256), rat(-7, 512)})},
    };
    for (const Case& c : cases) {
        CAPTURE(c.id);
        SeedAnsatz seed = factor_seed(c.valuation, c.leading, c.a, c.b,
                                      jet_at_zero(c.id, 9, c.valuation, c.leading, c.jet_upto));
        FamilySeries fam = solve_family(c.spec, seed, c.nmax);
        REQUIRE(fam.degeneracy_orders == std::vector<int>{c.expected_degeneracy});
        ParameterMap pm = calibrate_parameter(fam, ref_body(c.id, 9, c.valuation, c.leading, 0));
        CHECK(pm.map == c.expected_map);
        CHECK(pm.verified_order == 9 - c.valuation);
        CHECK(reproduces_reference(fam, pm, c.id, 9));
    }
}

TEST_CASE("fourth factor: ambiguous top coefficient resolved by the family") {
    SeedAnsatz seed = factor_seed(2, rat(-3, 8), rat(5, 8), rat(3, 16),
                                  jet_at_zero("f4_alpha", 8, 2, rat(-3, 8), 4));
    FamilySeries fam = solve_family({OdeFamily::FOURFACT, 0, 5}, seed, 7);
    REQUIRE(fam.degeneracy_orders == std::vector<int>{4});

    // calibrate on the unambiguous coefficients only (through t^8)
    ParameterMap pm = calibrate_parameter(fam, ref_body("f4_alpha", 8, 2, rat(-3, 8), 0), 6);
    CHECK(pm.map == PP("alpha", {rat(1675, 8192), rat(5, 16384)}));
    CHECK(reproduces_reference(fam, pm, "f4_alpha", 8));

    // the family decides the top coefficient's parameter dependence
    ParamPoly top = rat(-3, 8) * fam.body[7].compose(pm.map);
    ParamPoly with_alpha = PP("alpha", {rat(-3260907, 67108864), rat(-11025, 16777216)});
    ParamPoly without_alpha = ParamPoly(rat(-3260907, 67108864) + rat(-11025, 16777216));
    CHECK(top == with_alpha);
    CHECK(top != without_alpha);
    // and agrees with the resolved value stored in the catalog
    CHECK(cat().at("f4_alpha").ambiguous);
    CHECK(top == cat().reference_series("f4_alpha", 9)[9]);
}

TEST_CASE("pair family: product of first and third factors") {
    PSeries f1 = cat().reference_series("f1_alpha", 9);
    PSeries f3 = cat().reference_series("f3_alpha", 9);
    PSeries pair = mul(f1, f3).truncated(9);

    SeedAnsatz seed = factor_seed(3, rat(-9, 16), rat(0), rat(-1, 8),
                                  body_jet(specialize(pair, rat(0)), 3, rat(-9, 16), 3));
    FamilySeries fam = solve_family({OdeFamily::NONLINEAREQ, 0, 5}, seed, 6);
    REQUIRE(fam.degeneracy_orders == std::vector<int>{3});

    ParameterMap pm =
        calibrate_parameter(fam, unit_body_from_plain(pair, 3, rat(-9, 16), rat(0)));
    CHECK(pm.map == PP("alpha", {rat(-15, 512), rat(-5, 512)}));
    CHECK(pm.verified_order == 6);

    // at the midpoint the body collapses to an algebraic function
    Rational p_half = pm.map.eval(rat(1, 2));
    CHECK(p_half == rat(-35, 1024));
    QSeries member = specialize(fam.body, p_half);
    CHECK(eq_to_order(member, one_minus_t_pow<Rational>(rat(1, 8), 6), 6));
}

TEST_CASE("normalization search recovers the sigma data") {
    // the quarter-power of (1-t) solves the (0,5) equation with offset -1/4
    QSeries quarter = one_minus_t_pow<Rational>(rat(1, 4), 14);
    auto matches = calibrate_normalization(quarter, {OdeFamily::EQNMODD, 0, 5}, 10);
    bool found = false;
    for (const auto& m : matches) {
        if (m.a == 0 && m.b == 0 && m.kappa == rat(-1, 4)) found = true;
    }
    CHECK(found);

    // the first factor's unit body at parameter zero
    QSeries f1_body = unit_body_from_plain(specialize(cat().reference_series("f1_alpha", 9), rat(0)),
                                           1, rat(3, 2), rat(0));
    auto fm = calibrate_normalization(f1_body, {OdeFamily::FOURFACT, 0, 5}, 5);
    REQUIRE(fm.size() >= 1);
    bool f1_found = false;
    for (const auto& m : fm) {
        if (m.a == rat(-5, 8) && m.b == rat(-1, 16) && m.kappa == 0) f1_found = true;
    }
    CHECK(f1_found);
}

TEST_CASE("specializing the family commutes with solving the member") {
    OdeSpec spec{OdeFamily::EQNMODD, 0, 5};
    FamilySeries fam = solve_family(spec, row_correlation_seed(), 12);
    for (const Rational& lambda_sq : {rat(1), rat(1, 3), rat(9, 4)}) {
        CAPTURE(to_string(lambda_sq));
        Rational p_val = rat(-25, 1048576) * lambda_sq;
        QSeries expected = specialize(fam.body, p_val);
        std::vector<Rational> jet(expected.coeffs().begin(), expected.coeffs().end());
        QSeries direct = solve_member(spec, fam.seed, 12, p_val, jet);
        CHECK(eq_to_order(direct, expected, 12));
    }

    OdeSpec dspec{OdeFamily::DIAG_PVI, 0, 1};
    FamilySeries dfam = solve_family(dspec, diagonal_seed(), 10);
    for (const Rational& m_def : {rat(1), rat(3), rat(1, 2)}) {
        CAPTURE(to_string(m_def));
        Rational p_val = rat(-3, 64) + rat(-3, 256) * m_def;
        QSeries expected = specialize(dfam.body, p_val);
        std::vector<Rational> jet(expected.coeffs().begin(), expected.coeffs().end());
        QSeries direct = solve_member(dspec, dfam.seed, 10, p_val, jet);
        CHECK(eq_to_order(direct, expected, 10));
    }
}

TEST_CASE("wrong seeds are rejected") {
    // wrong sigma data: the equation's constant term makes order 0 unsolvable
    SeedAnsatz bad;
    bad.a = 0;
    bad.b = 0;
    bad.kappa = 0;
    CHECK_THROWS_AS(solve_family({OdeFamily::FOURFACT, 0, 5}, bad, 6), solve_error);

    // split quadratic without a seed jet cannot choose a root
    SeedAnsatz nohint = factor_seed(1, rat(3, 2), rat(-5, 8), rat(-1, 16), {});
    CHECK_THROWS_AS(solve_family({OdeFamily::FOURFACT, 0, 5}, nohint, 8), solve_error);

    // mismatched reference: calibration must fail loudly
    OdeSpec spec{OdeFamily::EQNMODD, 0, 5};
    FamilySeries fam = solve_family(spec, row_correlation_seed(), 10);
    CHECK_THROWS_AS(calibrate_parameter(fam, ref_body("C25_lambda", 8, 0, 1, rat(1, 4))),
                    solve_error);
}
