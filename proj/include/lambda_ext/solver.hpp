// Order-by-order reconstruction of one-parameter solution families.
//
// Seed ansatz: the object is  t^v * c0 * (1-t)^w * B(t)  with B = 1 + sum
// u_n t^n, and the equation is imposed on  sigma = -a + (a+b+kappa) t +
// t(t-1) B'/B.  The linear sigma data (a, b, kappa) belong to the equation's
// normalization and need not coincide with the object's own exponents (v, w).
//
// Each unknown u_n is probed at sample values to locate the first residual
// order it moves. If that order also responds to u_{n+1}, the constraint
// cannot determine u_n: the step is degenerate and u_n is adjoined as a
// formal parameter; every later coefficient is then a polynomial in it.
// Non-degenerate steps are affine or quadratic in u_n; a quadratic with two
// distinct rational roots is resolved by a seed jet (expected low-order
// coefficients of one distinguished member).
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lambda_ext/odes.hpp"
#include "lambda_ext/param_poly.hpp"
#include "lambda_ext/prefactored.hpp"
#include "lambda_ext/series.hpp"
#include "lambda_ext/sigma.hpp"

namespace lambda_ext {

class solve_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SeedAnsatz {
    // Decomposition of the object itself: t^valuation * leading * (1-t)^omt_exp * body.
    int valuation = 0;
    Rational leading = 1;
    Rational omt_exp = 0;
    // Linear sigma data under which the equation annihilates the family.
    Rational a = 0;
    Rational b = 0;
    Rational kappa = 0;
    // Expected body coefficients of one member (hint[n] ~ u_n); consulted only
    // to choose between the two rational roots of a split quadratic step.
    std::vector<Rational> hint;
};

struct FamilySeries {
    OdeSpec spec;
    SeedAnsatz seed;
    std::string parameter;               // name of the adjoined free parameter
    PSeries body;                        // 1 + sum u_n t^n over Q[parameter]
    std::vector<int> degeneracy_orders;  // orders where a parameter was adjoined

    // The object this family describes, with its prefactor restored.
    PPrefactored object() const {
        return PPrefactored(rat(seed.valuation), seed.omt_exp, scal(seed.leading, body));
    }
    QPrefactored object_at(const Rational& value) const {
        return QPrefactored(rat(seed.valuation), seed.omt_exp,
                            scal(seed.leading, specialize(body, value)));
    }
    SigmaSeries<ParamPoly> sigma() const {
        SigmaSeries<ParamPoly> s;
        s.sigma = sigma_of_body(body, seed.a, seed.b, seed.kappa);
        s.provenance = SigmaProvenance{spec.label(), seed.a, seed.b, seed.kappa};
        return s;
    }
};

namespace detail {

template <typename R>
Series<R> seed_residual(const OdeSpec& spec, const std::vector<R>& coeffs, int H,
                        const Rational& a, const Rational& b, const Rational& kappa) {
    std::vector<R> c(static_cast<std::size_t>(H) + 1, R(0));
    for (std::size_t i = 0; i < coeffs.size() && i <= static_cast<std::size_t>(H); ++i) {
        c[i] = coeffs[i];
    }
    Series<R> body(std::move(c));
    return ode_residual(spec, sigma_of_body(body, a, b, kappa));
}

template <typename R>
struct ProbeMove {
    int m = -1;                  // first residual order the probes disagree at
    std::vector<R> values;       // residual coefficient at order m, per probe
    Series<R> base_residual;     // residual at the first probe value
};

// Places probe values into coefficient n of the padded body and reports the
// first residual order that distinguishes them within the guard window.
template <typename R>
ProbeMove<R> first_move(const OdeSpec& spec, const SeedAnsatz& seed,
                        const std::vector<R>& base, int n,
                        const std::vector<Rational>& probes, int guard) {
    const int H = n + guard;
    std::vector<Series<R>> rs;
    rs.reserve(probes.size());
    for (const Rational& u : probes) {
        std::vector<R> c = base;
        c.resize(static_cast<std::size_t>(H) + 1, R(0));
        c[static_cast<std::size_t>(n)] = R(u);
        rs.push_back(seed_residual(spec, c, H, seed.a, seed.b, seed.kappa));
    }
    int L = rs[0].order();
    for (const auto& r : rs) L = std::min(L, r.order());
    ProbeMove<R> out;
    out.base_residual = rs[0];
    for (int m = 0; m <= L; ++m) {
        bool moved = false;
        for (std::size_t i = 1; i < rs.size(); ++i) {
            if (!(rs[i][m] == rs[0][m])) {
                moved = true;
                break;
            }
        }
        if (moved) {
            out.m = m;
            for (const auto& r : rs) out.values.push_back(r[m]);
            return out;
        }
    }
    return out;
}

// r(u) sampled at u = 0, 1, 2, 3 fitted as c0 + c1 u + c2 u^2; the cubic
// finite difference must vanish or the constraint is not quadratic.
struct QuadraticFit {
    Rational c0, c1, c2;
};

inline std::optional<QuadraticFit> fit_quadratic(const std::vector<Rational>& r) {
    if (!is_zero(r[3] - rat(3) * r[2] + rat(3) * r[1] - r[0])) return std::nullopt;
    QuadraticFit f;
    f.c2 = (r[2] - rat(2) * r[1] + r[0]) / rat(2);
    f.c1 = r[1] - r[0] - f.c2;
    f.c0 = r[0];
    return f;
}

// Solves c0 + c1 u + c2 u^2 = 0 for a rational u, using the hint to pick
// between two distinct rational roots. Context strings label errors.
inline Rational solve_step_constraint(const QuadraticFit& f, const SeedAnsatz& seed, int n,
                                      int m, const std::string& where) {
    if (is_zero(f.c2)) {
        if (is_zero(f.c1)) {
            throw solve_error(where + ": probes moved order " + std::to_string(m) +
                              " but the fitted constraint is constant");
        }
        return -f.c0 / f.c1;
    }
    Rational disc = f.c1 * f.c1 - rat(4) * f.c2 * f.c0;
    if (is_zero(disc)) return -f.c1 / (rat(2) * f.c2);
    auto rt = exact_sqrt(disc);
    if (!rt) {
        throw solve_error(where + ": irrational split quadratic at order " + std::to_string(m));
    }
    Rational r1 = (-f.c1 + *rt) / (rat(2) * f.c2);
    Rational r2 = (-f.c1 - *rt) / (rat(2) * f.c2);
    if (n >= static_cast<int>(seed.hint.size())) {
        throw solve_error(where + ": split quadratic with roots " + to_string(r1) + ", " +
                          to_string(r2) + " and no seed jet to choose");
    }
    const Rational& want = seed.hint[static_cast<std::size_t>(n)];
    if (want != r1 && want != r2) {
        throw solve_error(where + ": seed jet value " + to_string(want) +
                          " is not a root (roots " + to_string(r1) + ", " + to_string(r2) + ")");
    }
    return want;
}

}  // namespace detail

// Solves the family over Q[parameter]: before the degenerate step every
// coefficient is a rational constant; afterwards each step is affine in u_n
// with an exact polynomial division, or — rarely — a quadratic whose two
// roots are themselves polynomials in the parameter. Such a polynomial split
// separates two genuinely distinct solution branches, so it must be decided
// explicitly via split_picks (step -> expected root); with no pick the solver
// refuses and reports both roots. A second degeneracy is an error (one
// formal parameter only).
inline FamilySeries solve_family(const OdeSpec& spec, const SeedAnsatz& seed, int nmax,
                                 const std::string& parameter = "p", int guard = 8,
                                 const std::map<int, ParamPoly>& split_picks = {}) {
    spec.validate();
    std::vector<ParamPoly> body{ParamPoly(1)};
    std::vector<int> degeneracy;
    for (int n = 1; n <= nmax; ++n) {
        const std::string where = "solve " + spec.label() + " step " + std::to_string(n);
        const bool pre = degeneracy.empty();
        const std::vector<Rational> probes =
            pre ? std::vector<Rational>{rat(0), rat(1), rat(2), rat(3)}
                : std::vector<Rational>{rat(0), rat(1), rat(2)};
        auto mv = detail::first_move<ParamPoly>(spec, seed, body, n, probes, guard);
        if (mv.m < 0) {
            throw solve_error(where + ": no residual order responds within guard " +
                              std::to_string(guard));
        }
        for (int k = 0; k < mv.m; ++k) {
            if (!is_zero(mv.base_residual[k])) {
                throw solve_error(where + ": unsolvable residual at order " + std::to_string(k) +
                                  ": " + to_string(mv.base_residual[k]));
            }
        }
        // Collision test: with u_n pinned, does u_{n+1} reach order m too?
        {
            std::vector<ParamPoly> bu = body;
            bu.resize(static_cast<std::size_t>(n) + 1, ParamPoly(0));
            bu[static_cast<std::size_t>(n)] = ParamPoly(1);
            auto mc = detail::first_move<ParamPoly>(spec, seed, bu, n + 1, {rat(0), rat(1)}, guard);
            if (mc.m >= 0 && mc.m <= mv.m) {
                if (!degeneracy.empty()) {
                    throw solve_error(where + ": second degeneracy (first at order " +
                                      std::to_string(degeneracy.front()) + ")");
                }
                degeneracy.push_back(n);
                body.resize(static_cast<std::size_t>(n) + 1, ParamPoly(0));
                body[static_cast<std::size_t>(n)] = ParamPoly::variable(parameter);
                continue;
            }
        }
        ParamPoly u;
        if (pre) {
            std::vector<Rational> r;
            r.reserve(mv.values.size());
            for (const auto& v : mv.values) {
                if (!v.is_constant()) {
                    throw solve_error(where + ": parameter appeared before adjunction");
                }
                r.push_back(v.constant_term());
            }
            auto fit = detail::fit_quadratic(r);
            if (!fit) {
                throw solve_error(where + ": constraint degree exceeds 2 at order " +
                                  std::to_string(mv.m));
            }
            u = ParamPoly(detail::solve_step_constraint(*fit, seed, n, mv.m, where));
        } else {
            const ParamPoly& r0 = mv.values[0];
            const ParamPoly& r1 = mv.values[1];
            const ParamPoly& r2 = mv.values[2];
            ParamPoly d2 = r2 - rat(2) * r1 + r0;
            if (is_zero(d2)) {
                ParamPoly A = r1 - r0;
                auto quo = divide_exact(r0, A);
                if (!quo) {
                    throw solve_error(where + ": non-exact parameter division at order " +
                                      std::to_string(mv.m));
                }
                u = -*quo;
            } else {
                // quadratic in u_n over Q[parameter]: admissible roots are the
                // exact polynomial solutions; two of them is a branch point
                ParamPoly c2 = d2 / rat(2);
                ParamPoly c1 = r1 - r0 - c2;
                const ParamPoly& c0 = r0;
                ParamPoly disc = c1 * c1 - rat(4) * (c2 * c0);
                auto rt = exact_sqrt_poly(disc);
                if (!rt) {
                    throw solve_error(where + ": quadratic discriminant at order " +
                                      std::to_string(mv.m) +
                                      " is not a square over the parameter ring");
                }
                std::vector<ParamPoly> roots;
                for (const ParamPoly& num : {-c1 + *rt, -c1 - *rt}) {
                    auto q = divide_exact(num, rat(2) * c2);
                    if (q && (roots.empty() || !(roots.front() == *q))) roots.push_back(*q);
                }
                if (roots.empty()) {
                    throw solve_error(where + ": quadratic without polynomial roots at order " +
                                      std::to_string(mv.m));
                }
                if (roots.size() == 1) {
                    u = roots.front();
                } else {
                    auto pick = split_picks.find(n);
                    if (pick == split_picks.end()) {
                        throw solve_error(where + ": branch point with roots " +
                                          to_string(roots[0]) + " and " + to_string(roots[1]) +
                                          "; a split pick is required");
                    }
                    if (!(pick->second == roots[0]) && !(pick->second == roots[1])) {
                        throw solve_error(where + ": split pick " + to_string(pick->second) +
                                          " is not a root (roots " + to_string(roots[0]) +
                                          ", " + to_string(roots[1]) + ")");
                    }
                    u = pick->second;
                }
            }
        }
        body.resize(static_cast<std::size_t>(n) + 1, ParamPoly(0));
        body[static_cast<std::size_t>(n)] = u;
    }
    FamilySeries fam;
    fam.spec = spec;
    fam.seed = seed;
    fam.parameter = parameter;
    fam.body = PSeries(std::move(body));
    fam.degeneracy_orders = std::move(degeneracy);
    return fam;
}

// Re-derives a single member at a fixed parameter value directly from the
// equation over plain rationals: at the degenerate step the coefficient is
// set to the given value, and split quadratics anywhere are resolved by the
// member's own jet. Confirms that solving at a specialized value commutes
// with specializing the solved family.
inline QSeries solve_member(const OdeSpec& spec, const SeedAnsatz& seed, int nmax,
                            const Rational& value, const std::vector<Rational>& member_jet = {},
                            int guard = 8) {
    spec.validate();
    SeedAnsatz local = seed;
    if (!member_jet.empty()) local.hint = member_jet;
    std::vector<Rational> body{rat(1)};
    bool adjoined = false;
    for (int n = 1; n <= nmax; ++n) {
        const std::string where =
            "solve " + spec.label() + " member step " + std::to_string(n);
        auto mv = detail::first_move<Rational>(spec, local, body, n,
                                               {rat(0), rat(1), rat(2), rat(3)}, guard);
        if (mv.m < 0) {
            throw solve_error(where + ": no residual order responds within guard " +
                              std::to_string(guard));
        }
        for (int k = 0; k < mv.m; ++k) {
            if (!is_zero(mv.base_residual[k])) {
                throw solve_error(where + ": unsolvable residual at order " + std::to_string(k));
            }
        }
        if (!adjoined) {
            std::vector<Rational> bu = body;
            bu.resize(static_cast<std::size_t>(n) + 1, rat(0));
            bu[static_cast<std::size_t>(n)] = rat(1);
            auto mc = detail::first_move<Rational>(spec, local, bu, n + 1, {rat(0), rat(1)}, guard);
            if (mc.m >= 0 && mc.m <= mv.m) {
                adjoined = true;
                body.resize(static_cast<std::size_t>(n) + 1, rat(0));
                body[static_cast<std::size_t>(n)] = value;
                continue;
            }
        }
        auto fit = detail::fit_quadratic(mv.values);
        if (!fit) {
            throw solve_error(where + ": constraint degree exceeds 2 at order " +
                              std::to_string(mv.m));
        }
        Rational u = detail::solve_step_constraint(*fit, local, n, mv.m, where);
        body.resize(static_cast<std::size_t>(n) + 1, rat(0));
        body[static_cast<std::size_t>(n)] = u;
    }
    return QSeries(std::move(body));
}

// --- calibration against reference series -----------------------------------

struct ParameterMap {
    std::string solver_parameter;     // adjoined name, e.g. "p"
    std::string reference_parameter;  // e.g. "alpha"; empty if the map is constant
    ParamPoly map;                    // solver parameter expressed in the reference one
    int anchor_order = -1;            // body order whose coefficient fixed the map
    int verified_order = -1;          // every body order through this one matches
};

// Fits the adjoined parameter from the first body coefficient of parameter
// degree one, then verifies every shared coefficient exactly.
inline ParameterMap calibrate_parameter(const FamilySeries& fam, const PSeries& reference_body,
                                        int max_order = -1) {
    int n = std::min(fam.body.order(), reference_body.order());
    if (max_order >= 0) n = std::min(n, max_order);
    int anchor = -1;
    ParamPoly map;
    for (int k = 0; k <= n; ++k) {
        const ParamPoly& c = fam.body[k];
        if (c.degree() == 1) {
            map = (reference_body[k] - ParamPoly(c.coeff(0))) / c.coeff(1);
            anchor = k;
            break;
        }
    }
    if (anchor < 0) {
        throw solve_error("calibrate " + fam.spec.label() +
                          ": no parameter-affine coefficient through order " + std::to_string(n));
    }
    for (int k = 0; k <= n; ++k) {
        ParamPoly got = fam.body[k].compose(map);
        if (!(got == reference_body[k])) {
            throw solve_error("calibrate " + fam.spec.label() + ": mismatch at order " +
                              std::to_string(k) + ": family gives " + to_string(got) +
                              ", reference is " + to_string(reference_body[k]));
        }
    }
    ParameterMap out;
    out.solver_parameter = fam.parameter;
    out.reference_parameter = map.parameter();
    out.map = map;
    out.anchor_order = anchor;
    out.verified_order = n;
    return out;
}

struct NormalizationMatch {
    Rational a, b, kappa;
    int verified_order;
};

// Searches the sigma linear data on a grid for triples under which the given
// unit body satisfies the equation to the full testable order. The default
// grid covers eighths in a, sixteenths in b and the two offsets 0, -1/4.
inline std::vector<NormalizationMatch> calibrate_normalization(
    const QSeries& unit_body, const OdeSpec& spec, int min_order = 10,
    std::vector<Rational> a_grid = {}, std::vector<Rational> b_grid = {},
    std::vector<Rational> kappa_grid = {}) {
    spec.validate();
    if (!(constant_value(unit_body[0]) == 1)) {
        throw std::invalid_argument("normalization search needs a body with constant term 1");
    }
    if (a_grid.empty()) {
        for (int j = -8; j <= 8; ++j) a_grid.push_back(rat(j, 8));
    }
    if (b_grid.empty()) {
        for (int j = -16; j <= 16; ++j) b_grid.push_back(rat(j, 16));
    }
    if (kappa_grid.empty()) kappa_grid = {rat(0), rat(-1, 4)};
    std::vector<NormalizationMatch> out;
    bool depth_checked = false;
    for (const Rational& a : a_grid) {
        for (const Rational& b : b_grid) {
            for (const Rational& k : kappa_grid) {
                QSeries res = ode_residual(spec, sigma_of_body(unit_body, a, b, k));
                if (!depth_checked) {
                    if (res.order() < min_order) {
                        throw std::invalid_argument(
                            "body truncation supports residual order " +
                            std::to_string(res.order()) + " < required " +
                            std::to_string(min_order));
                    }
                    depth_checked = true;
                }
                if (res.all_zero()) out.push_back({a, b, k, res.order()});
            }
        }
    }
    return out;
}

// --- object decompositions and jets ------------------------------------------

// Unit body implied by a plain series under an object decomposition:
// plain = t^v * leading * (1-t)^omt_exp * body with body(0) = 1.
template <typename R>
Series<R> unit_body_from_plain(const Series<R>& plain, int valuation, const Rational& leading,
                               const Rational& omt_exp) {
    if (is_zero(leading)) throw std::invalid_argument("zero leading coefficient");
    Series<R> shifted = shift_down(plain, valuation);
    Series<R> stripped =
        mul(shifted, one_minus_t_pow<R>(-omt_exp, shifted.order())).truncated(shifted.order());
    return scal(R(rat(1) / leading), stripped);
}

// Root-selection jet of one member: its first unit-body coefficients.
inline std::vector<Rational> body_jet(const QSeries& plain, int valuation,
                                      const Rational& leading, int upto,
                                      const Rational& omt_exp = rat(0)) {
    QSeries body = unit_body_from_plain(plain, valuation, leading, omt_exp);
    std::vector<Rational> jet;
    for (int k = 0; k <= std::min(upto, body.order()); ++k) jet.push_back(body[k]);
    return jet;
}

// --- conversions among the family parameters ---------------------------------

namespace params {

// lambda_sq = lambda^2 and mu sum to 1.
inline ParamPoly mu_of_lambda_sq() { return ParamPoly("lambda_sq", {rat(1), rat(-1)}); }
inline ParamPoly lambda_sq_of_mu() { return ParamPoly("mu", {rat(1), rat(-1)}); }
// The interpolation variable alpha: mu = 4 alpha (1 - alpha), lambda^2 = (2 alpha - 1)^2.
inline ParamPoly mu_of_alpha() { return ParamPoly("alpha", {rat(0), rat(4), rat(-4)}); }
inline ParamPoly lambda_sq_of_alpha() { return ParamPoly("alpha", {rat(1), rat(-4), rat(4)}); }
// The deformation variable of the diagonal family: M = 4 (1 - lambda^2), rho = M - 2.
inline ParamPoly m_def_of_lambda_sq() { return ParamPoly("lambda_sq", {rat(4), rat(-4)}); }
inline ParamPoly m_def_of_rho() { return ParamPoly("rho_def", {rat(2), rat(1)}); }
// alpha = (1 + branch * lambda) / 2; both branches share lambda^2.
inline Rational alpha_of_lambda(const Rational& lambda, int branch = +1) {
    return (rat(1) + rat(branch) * lambda) / rat(2);
}

}  // namespace params

}  // namespace lambda_ext
