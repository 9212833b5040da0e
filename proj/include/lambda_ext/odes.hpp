// Residual evaluators for the four nonlinear sigma-form ODEs.
//
// Each equation is held as data: a list of terms, each a polynomial in t
// (whose coefficients are exact rationals built from the lattice indices M,
// N) multiplying a monomial in the derived quantities
//
//   S  = sigma        S1 = sigma'        S2 = sigma''
//   P  = t S1 - S     Qf = (t-1) S1 - S  Q4 = Qf - 1/4
//
// The residual of a sigma series is the truncated series sum of all terms; a
// solution of the equation yields the zero series to the provable order.
// Keeping the equations as tables (rather than four hand-coded evaluators)
// localizes any transcription mistake to a single auditable row.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambda_ext/series.hpp"
#include "lambda_ext/sigma.hpp"

namespace lambda_ext {

enum class OdeFamily { EQNMODD, NONLINEAREQ, FOURFACT, DIAG_PVI };

inline std::string to_string(OdeFamily f) {
    switch (f) {
        case OdeFamily::EQNMODD: return "EQNMODD";
        case OdeFamily::NONLINEAREQ: return "NONLINEAREQ";
        case OdeFamily::FOURFACT: return "FOURFACT";
        case OdeFamily::DIAG_PVI: return "DIAG_PVI";
    }
    return "?";
}

inline std::optional<OdeFamily> ode_family_from_string(const std::string& s) {
    if (s == "EQNMODD") return OdeFamily::EQNMODD;
    if (s == "NONLINEAREQ") return OdeFamily::NONLINEAREQ;
    if (s == "FOURFACT") return OdeFamily::FOURFACT;
    if (s == "DIAG_PVI") return OdeFamily::DIAG_PVI;
    return std::nullopt;
}

// Which lattice indices a family uses: EQNMODD/NONLINEAREQ take (M, N) with
// M + N odd and M <= N; FOURFACT and DIAG_PVI take N only.
struct OdeSpec {
    OdeFamily family;
    long M = 0;
    long N = 0;

    void validate() const {
        if (family == OdeFamily::EQNMODD || family == OdeFamily::NONLINEAREQ) {
            if ((M + N) % 2 == 0) {
                throw std::invalid_argument(to_string(family) + " requires M+N odd");
            }
            if (M > N) throw std::invalid_argument(to_string(family) + " requires M <= N");
        }
    }

    std::string label() const {
        if (family == OdeFamily::EQNMODD || family == OdeFamily::NONLINEAREQ) {
            return to_string(family) + "(" + std::to_string(M) + "," + std::to_string(N) + ")";
        }
        return to_string(family) + "(" + std::to_string(N) + ")";
    }
};

enum class SigmaFactor { S, S1, S2, P, Qf, Q4 };

struct OdeTerm {
    std::vector<Rational> tpoly;        // polynomial coefficient in t
    std::vector<SigmaFactor> factors;   // monomial in the derived quantities
};

// The equation tables. m2 = M^2, n2 = N^2 as exact rationals.
inline std::vector<OdeTerm> ode_terms(const OdeSpec& spec) {
    spec.validate();
    const Rational m2 = rat(spec.M) * rat(spec.M);
    const Rational n2 = rat(spec.N) * rat(spec.N);
    using F = SigmaFactor;
    std::vector<OdeTerm> T;
    switch (spec.family) {
        case OdeFamily::EQNMODD:
            // t^2(t-1)^2 S2^2 + 4 S1 P Qf - M^2 P^2 - N^2 S1^2 + (M^2+N^2) S1 P
            T = {
                {{rat(0), rat(0), rat(1), rat(-2), rat(1)}, {F::S2, F::S2}},
                {{rat(4)}, {F::S1, F::P, F::Qf}},
                {{-m2}, {F::P, F::P}},
                {{-n2}, {F::S1, F::S1}},
                {{m2 + n2}, {F::S1, F::P}},
            };
            break;
        case OdeFamily::NONLINEAREQ: {
            // 32 t^3 (t-1)^2 S2^2
            // + 4 t^2 (t-1) (8 S - 8(t+1) S1 + M^2 - N^2) S2
            // - (8S - 16t S1 + M^2 t - N^2 + 1 - t)
            //   * (8t(t-1) S1^2 - 16t S S1 + 8 S^2 + (M^2-N^2) S)
            const Rational d = m2 - n2;
            // linear polynomial M^2 t - N^2 + 1 - t = (1-N^2) + (M^2-1) t
            const Rational l0 = rat(1) - n2, l1 = m2 - rat(1);
            T = {
                {{rat(0), rat(0), rat(0), rat(32), rat(-64), rat(32)}, {F::S2, F::S2}},
                {{rat(0), rat(0), rat(-32), rat(32)}, {F::S, F::S2}},
                // -32 t^2 (t-1)(t+1) = -32 (t^4 - t^2)
                {{rat(0), rat(0), rat(32), rat(0), rat(-32)}, {F::S1, F::S2}},
                {{rat(0), rat(0), -rat(4) * d, rat(4) * d}, {F::S2}},
                // expansion of the bracket product, term by term:
                {{rat(0), rat(64), rat(-64)}, {F::S, F::S1, F::S1}},       // -8 * 8t(t-1)
                {{rat(0), rat(128)}, {F::S, F::S, F::S1}},                 // -8 * (-16t)
                {{rat(-64)}, {F::S, F::S, F::S}},                          // -8 * 8
                {{-rat(8) * d}, {F::S, F::S}},                             // -8 * d
                {{rat(0), rat(0), rat(-128), rat(128)}, {F::S1, F::S1, F::S1}},  // 16t * 8t(t-1)
                {{rat(0), rat(0), rat(-256)}, {F::S, F::S1, F::S1}},       // 16t * (-16t), sign: +
                {{rat(0), rat(128)}, {F::S, F::S, F::S1}},                 // 16t * 8
                {{rat(0), rat(16) * d}, {F::S, F::S1}},                    // 16t * d
                // -(l0 + l1 t) * 8t(t-1) = -(8 l0 t^2 ... ) expanded below
                {{rat(0), rat(8) * l0, rat(8) * (l1 - l0), rat(-8) * l1}, {F::S1, F::S1}},
                {{rat(0), rat(16) * l0, rat(16) * l1}, {F::S, F::S1}},
                {{rat(-8) * l0, rat(-8) * l1}, {F::S, F::S}},
                {{-d * l0, -d * l1}, {F::S}},
            };
            break;
        }
        case OdeFamily::FOURFACT:
            // t^2(t-1)^2 S2^2 + 4 S1 P Qf + (1/4)((N^2+1)(t-1) - t^2) S1^2
            // - (1/64)(16(N^2+1-2t) S + N^2 t) S1 - (1/4) S^2 + (N^2/64) S
            // - N^2 (N^2-3)/1024
            T = {
                {{rat(0), rat(0), rat(1), rat(-2), rat(1)}, {F::S2, F::S2}},
                {{rat(4)}, {F::S1, F::P, F::Qf}},
                {{rat(-1, 4) * (n2 + 1), rat(1, 4) * (n2 + 1), rat(-1, 4)}, {F::S1, F::S1}},
                {{rat(-1, 4) * (n2 + 1), rat(1, 2)}, {F::S, F::S1}},
                {{rat(0), rat(-1, 64) * n2}, {F::S1}},
                {{rat(-1, 4)}, {F::S, F::S}},
                {{rat(1, 64) * n2}, {F::S}},
                {{rat(-1, 1024) * n2 * (n2 - 3)}, {}},
            };
            break;
        case OdeFamily::DIAG_PVI:
            // (t(t-1) S2)^2 = N^2 Qf^2 - 4 S1 (Qf - 1/4) P
            T = {
                {{rat(0), rat(0), rat(1), rat(-2), rat(1)}, {F::S2, F::S2}},
                {{-n2}, {F::Qf, F::Qf}},
                {{rat(4)}, {F::S1, F::Q4, F::P}},
            };
            break;
    }
    return T;
}

// Residual of a sigma series against the equation, as a truncated series.
// The input must support two derivatives; the honest output order follows
// from the truncation arithmetic of the series operations themselves.
template <typename R>
Series<R> ode_residual(const OdeSpec& spec, const Series<R>& sigma) {
    if (sigma.order() < 4) {
        throw std::invalid_argument("sigma order too small to form sigma'' meaningfully");
    }
    const Series<R> S = sigma;
    const Series<R> S1 = deriv(S);
    const Series<R> S2 = deriv(S1);
    const Series<R> P = sub(mul_tpoly(S1, {rat(0), rat(1)}).truncated(S1.order()), S);
    Series<R> Qf = sub(mul_tpoly(S1, {rat(-1), rat(1)}).truncated(S1.order()), S);
    Series<R> Q4 = Qf;
    Q4.at(0) = Q4[0] - R(rat(1, 4));
    auto factor = [&](SigmaFactor f) -> const Series<R>& {
        switch (f) {
            case SigmaFactor::S: return S;
            case SigmaFactor::S1: return S1;
            case SigmaFactor::S2: return S2;
            case SigmaFactor::P: return P;
            case SigmaFactor::Qf: return Qf;
            case SigmaFactor::Q4: return Q4;
        }
        throw std::logic_error("unreachable");
    };
    bool have = false;
    Series<R> res;
    for (const OdeTerm& term : ode_terms(spec)) {
        bool all_zero_poly = true;
        for (const auto& c : term.tpoly) {
            if (!is_zero(c)) all_zero_poly = false;
        }
        if (all_zero_poly) continue;
        Series<R> cur;
        bool first = true;
        for (SigmaFactor f : term.factors) {
            cur = first ? factor(f) : mul(cur, factor(f));
            first = false;
        }
        if (first) {
            // constant monomial: the term is just its t-polynomial
            cur = Series<R>(S2.order());
            cur.at(0) = R(1);
        }
        Series<R> contrib = mul_tpoly(cur, term.tpoly);
        res = have ? add(res, contrib) : contrib;
        have = true;
    }
    return res;
}

template <typename R>
Series<R> ode_residual(const OdeSpec& spec, const SigmaSeries<R>& s) {
    return ode_residual(spec, s.sigma);
}

// Exact additivity of sigma under factorizations: the sigma of a product is
// the sum of the sigmas of the factors once every prefactor term is carried
// explicitly as its own part. Returns the first failing order, or -1.
template <typename R>
int additive_split_mismatch(const Series<R>& total, const std::vector<Series<R>>& parts,
                            int order) {
    Series<R> sum(order);
    for (const auto& p : parts) sum = add(sum, p.truncated(std::min(order, p.order())));
    return first_mismatch(total.truncated(std::min(order, total.order())), sum,
                          std::min({order, total.order(), sum.order()}));
}

}  // namespace lambda_ext
