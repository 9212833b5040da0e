// The sigma transform: log-derivative coordinates for correlation series.
//
// For an object  t^a * (1-t)^b * B(t)  with B(0) = 1, the associated sigma is
//
//   sigma(t) = t(t-1) d/dt ln( t^a (1-t)^b B ) + kappa * t
//            = -a + (a + b + kappa) t + t(t-1) B'(t)/B(t).
//
// kappa = -1/4 for full correlation functions (whose sigma definition carries
// the extra -t/4), kappa = 0 for individual factors. All structure constants
// of the prefactor enter only through the two linear terms above.
#pragma once

#include <string>
#include <utility>

#include "lambda_ext/prefactored.hpp"
#include "lambda_ext/series.hpp"

namespace lambda_ext {

// Provenance of a sigma series: which object it came from and with which
// prefactor/offset conventions, so reports can state them.
struct SigmaProvenance {
    std::string source_id;   // catalog id or family label; may be empty
    Rational a = 0;          // t-exponent of the source object
    Rational b = 0;          // (1-t)-exponent of the source object
    Rational kappa = 0;      // linear offset coefficient (0 or -1/4 here)
};

template <typename R>
struct SigmaSeries {
    Series<R> sigma;
    SigmaProvenance provenance;
};

// sigma of t^a (1-t)^b B with B(0) a nonzero constant; order = body order.
template <typename R>
Series<R> sigma_of_body(const Series<R>& body, const Rational& a, const Rational& b,
                        const Rational& kappa) {
    Series<R> q = div(deriv(body), body.truncated(std::max(0, body.order() - 1)));
    // t(t-1) * q = (t^2 - t) * q
    Series<R> s = mul_tpoly(q, {rat(0), rat(-1), rat(1)}).truncated(body.order());
    s.at(0) = s[0] + R(-a);
    if (s.order() >= 1) s.at(1) = s[1] + R(a + b + kappa);
    return s;
}

template <typename R>
SigmaSeries<R> sigma_transform(const Prefactored<R>& obj, const Rational& kappa,
                               std::string source_id = "") {
    Prefactored<R> nrm = obj.normalized();
    Series<R> body = nrm.body();
    Rational c0 = constant_value(body[0]);
    if (is_zero(c0)) throw std::domain_error("sigma transform of the zero series");
    // The constant scale of the body drops out of the log-derivative.
    Series<R> unit = scal(R(Rational(1) / c0), body);
    SigmaSeries<R> out;
    out.sigma = sigma_of_body(unit, nrm.t_exponent(), nrm.omt_exponent(), kappa);
    out.provenance = SigmaProvenance{std::move(source_id), nrm.t_exponent(),
                                     nrm.omt_exponent(), kappa};
    return out;
}

}  // namespace lambda_ext
