// Univariate polynomials over the rationals in one named formal parameter.
//
// Series coefficients in this library are either plain rationals or values of
// this type: a polynomial in a single parameter (alpha, mu, lambda_sq, ...).
// Constant polynomials are parameter-agnostic so that numeric seeds combine
// freely with parameter-bearing data; combining two polynomials in *different*
// non-trivial parameters is a logic error and throws.
#pragma once

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lambda_ext/rational.hpp"

namespace lambda_ext {

class ParamPoly {
  public:
    ParamPoly() = default;
    ParamPoly(const Rational& c) { coeffs_.push_back(c); normalize(); }  // NOLINT: implicit
    ParamPoly(long c) { coeffs_.push_back(rat(c)); normalize(); }        // NOLINT: implicit
    ParamPoly(std::string parameter, std::vector<Rational> coeffs)
        : parameter_(std::move(parameter)), coeffs_(std::move(coeffs)) {
        normalize();
    }

    // The parameter itself, e.g. ParamPoly::variable("alpha").
    static ParamPoly variable(const std::string& name) {
        return ParamPoly(name, {rat(0), rat(1)});
    }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_constant() const { return coeffs_.size() <= 1; }
    // degree of the zero polynomial is reported as -1
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::string& parameter() const { return parameter_; }

    Rational coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(coeffs_.size())) return rat(0);
        return coeffs_[static_cast<std::size_t>(k)];
    }
    Rational constant_term() const { return coeff(0); }

    Rational eval(const Rational& x) const {
        Rational acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    // Substitutes the parameter by another polynomial (possibly in a new
    // parameter): used to re-express a solver parameter through a calibration
    // map such as p = c1*alpha + c0.
    ParamPoly compose(const ParamPoly& inner) const {
        ParamPoly acc;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * inner + ParamPoly(*it);
        }
        return acc;
    }

    friend ParamPoly operator+(const ParamPoly& a, const ParamPoly& b) {
        std::string name = joint_parameter(a, b);
        std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), rat(0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
        }
        return ParamPoly(std::move(name), std::move(c));
    }
    friend ParamPoly operator-(const ParamPoly& a, const ParamPoly& b) { return a + (-b); }
    ParamPoly operator-() const {
        ParamPoly r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
        std::string name = joint_parameter(a, b);
        if (a.is_zero() || b.is_zero()) return ParamPoly();
        std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, rat(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                c[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return ParamPoly(std::move(name), std::move(c));
    }
    ParamPoly& operator+=(const ParamPoly& b) { return *this = *this + b; }
    ParamPoly& operator-=(const ParamPoly& b) { return *this = *this - b; }
    ParamPoly& operator*=(const ParamPoly& b) { return *this = *this * b; }

    friend ParamPoly operator*(const Rational& s, const ParamPoly& a) {
        ParamPoly r = a;
        for (auto& c : r.coeffs_) c = c * s;
        r.normalize();
        return r;
    }
    friend ParamPoly operator/(const ParamPoly& a, const Rational& s) {
        if (lambda_ext::is_zero(s)) throw std::domain_error("division by zero rational");
        return Rational(1 / s) * a;
    }

    friend bool operator==(const ParamPoly& a, const ParamPoly& b) {
        if (a.coeffs_.size() != b.coeffs_.size()) return false;
        if (!a.is_constant() && !b.is_constant() && a.parameter_ != b.parameter_) return false;
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const ParamPoly& a, const ParamPoly& b) { return !(a == b); }

    // Exact division: returns quotient iff b divides a with zero remainder
    // (coefficient arithmetic over Q). Used when solving an affine constraint
    // A*u + C = 0 with polynomial A, C where u must stay polynomial.
    static std::optional<ParamPoly> divide_exact(const ParamPoly& a, const ParamPoly& b) {
        if (b.is_zero()) return std::nullopt;
        std::string name = joint_parameter(a, b);
        std::vector<Rational> rem = a.coeffs_;
        if (rem.size() < b.coeffs_.size()) {
            if (a.is_zero()) return ParamPoly();
            return std::nullopt;
        }
        std::vector<Rational> quot(rem.size() - b.coeffs_.size() + 1, rat(0));
        const Rational lead = b.coeffs_.back();
        for (int k = static_cast<int>(quot.size()) - 1; k >= 0; --k) {
            Rational q = rem[static_cast<std::size_t>(k) + b.coeffs_.size() - 1] / lead;
            quot[static_cast<std::size_t>(k)] = q;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                rem[static_cast<std::size_t>(k) + j] -= q * b.coeffs_[j];
            }
        }
        for (const auto& c : rem) {
            if (!lambda_ext::is_zero(c)) return std::nullopt;
        }
        return ParamPoly(std::move(name), std::move(quot));
    }

    // Square root of a perfect-square polynomial, if it exists.
    static std::optional<ParamPoly> exact_sqrt_poly(const ParamPoly& a) {
        if (a.is_zero()) return ParamPoly();
        if (a.degree() % 2 != 0) return std::nullopt;
        auto lead = exact_sqrt(a.coeffs_.back());
        if (!lead) return std::nullopt;
        // Solve s^2 = a coefficientwise from the top.
        int ds = a.degree() / 2;
        std::vector<Rational> s(static_cast<std::size_t>(ds) + 1, rat(0));
        s[static_cast<std::size_t>(ds)] = *lead;
        for (int k = ds - 1; k >= 0; --k) {
            // coefficient of x^{k+ds} in s^2 equals a's
            Rational acc = 0;
            for (int i = k + 1; i < ds; ++i) {
                int j = k + ds - i;
                if (j > ds || j < 0) continue;
                acc += s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
            }
            s[static_cast<std::size_t>(k)] =
                (a.coeff(k + ds) - acc) / (rat(2) * s[static_cast<std::size_t>(ds)]);
        }
        ParamPoly cand(a.parameter_, std::move(s));
        if (cand * cand == a) return cand;
        return std::nullopt;
    }

    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const Rational& c = coeffs_[k];
            if (lambda_ext::is_zero(c)) continue;
            Rational a = abs(c);
            if (first) {
                if (sgn(c) < 0) os << "-";
                first = false;
            } else {
                os << (sgn(c) < 0 ? " - " : " + ");
            }
            bool unit = (a == 1) && k > 0;
            if (!unit) os << lambda_ext::to_string(a);
            if (k >= 1) {
                if (!unit) os << "*";
                os << (parameter_.empty() ? "x" : parameter_);
                if (k >= 2) os << "^" << k;
            }
        }
        if (first) return "0";
        return os.str();
    }

  private:
    static std::string joint_parameter(const ParamPoly& a, const ParamPoly& b) {
        if (a.is_constant()) return b.parameter_;
        if (b.is_constant()) return a.parameter_;
        if (a.parameter_ != b.parameter_) {
            throw std::logic_error("parameter mismatch: '" + a.parameter_ + "' vs '" +
                                   b.parameter_ + "'");
        }
        return a.parameter_;
    }
    void normalize() {
        while (!coeffs_.empty() && lambda_ext::is_zero(coeffs_.back())) coeffs_.pop_back();
        if (coeffs_.size() <= 1) parameter_.clear();
    }

    std::string parameter_;            // empty for constants
    std::vector<Rational> coeffs_;     // coeffs_[k] multiplies parameter^k
};

inline bool is_zero(const ParamPoly& p) { return p.is_zero(); }
inline std::string to_string(const ParamPoly& p) { return p.to_string(); }

inline std::optional<ParamPoly> divide_exact(const ParamPoly& a, const ParamPoly& b) {
    return ParamPoly::divide_exact(a, b);
}
inline std::optional<ParamPoly> exact_sqrt_poly(const ParamPoly& a) {
    return ParamPoly::exact_sqrt_poly(a);
}

}  // namespace lambda_ext
