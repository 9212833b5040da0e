// Catalog of closed forms and printed reference series.
//
// The catalog is a checked-in text file so every coefficient can be audited
// line by line. Three entry kinds:
//   ek_polynomial    sum of E^i K^j terms with polynomial-in-t coefficients
//                    and an optional t^a (1-t)^b rational prefactor
//   alg_expr         an algebraic expression tree over t, E, K, 1-t and the
//                    shifted primitive, with rational powers
//   reference_series printed coefficients (possibly polynomial in one
//                    parameter), served verbatim as ground-truth fixtures
#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambda_ext/param_poly.hpp"
#include "lambda_ext/prefactored.hpp"
#include "lambda_ext/rational.hpp"
#include "lambda_ext/series.hpp"
#include "lambda_ext/special_functions.hpp"

#ifndef LAMBDA_EXT_CATALOG_DEFAULT
#define LAMBDA_EXT_CATALOG_DEFAULT "data/catalog.txt"
#endif

namespace lambda_ext {

struct catalog_error : std::runtime_error {
    explicit catalog_error(const std::string& m) : std::runtime_error(m) {}
};
struct unknown_id_error : std::runtime_error {
    explicit unknown_id_error(const std::string& id)
        : std::runtime_error("unknown catalog id: " + id) {}
};
// Requested order exceeds what the source prints; callers fall back to the solver.
struct reference_depth_error : std::runtime_error {
    explicit reference_depth_error(const std::string& m) : std::runtime_error(m) {}
};

enum class EntryKind { EkPolynomial, AlgExprTree, ReferenceSeries };

struct EkTerm {
    int e_deg = 0;
    int k_deg = 0;
    std::vector<Rational> tpoly;  // coefficient polynomial in t
};

// Fixed physical regime shared by every entry.
struct RegimeInfo {
    std::string temperature = "low";
    std::string nu_condition = "nu = -k";
    std::string t_def = "t = k^2";
};

struct CatalogEntry {
    std::string id;
    EntryKind kind = EntryKind::EkPolynomial;
    std::string parameter;  // "none" when the payload is purely rational
    std::string source;     // audit tag printed on mismatch (defaults to id)
    bool homogeneous = false;
    bool ambiguous = false;  // printed source is typographically ambiguous

    // ek_polynomial payload
    std::vector<EkTerm> ek_terms;
    Rational pref_t_exp = 0, pref_omt_exp = 0, pref_const = 1;

    // alg_expr payload
    std::string expr_text;

    // reference_series payload
    std::map<int, ParamPoly> ref_coeffs;
    int ref_max_order = -1;

    RegimeInfo regime;
};

// ---------------------------------------------------------------------------
// Expression grammar (for alg_expr payloads):
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ['^' exponent]
//   atom   := rational | 't' | 'E' | 'K' | 'omt' | 'shifted' | '(' expr ')'
//   exponent := rational | '(' ['-'] rational ')'
// where omt denotes 1-t and shifted denotes 2(1-(1-t)^{1/2})/t.
// ---------------------------------------------------------------------------
class AlgExprParser {
  public:
    explicit AlgExprParser(std::string text) : text_(std::move(text)) {}

    AlgExpr parse() {
        AlgExpr e = parse_expr();
        skip_space();
        if (pos_ != text_.size()) fail("trailing input");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& why) const {
        throw catalog_error("expression parse error at position " + std::to_string(pos_) +
                            " (" + why + "): " + text_);
    }
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    std::optional<Rational> try_number() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) return std::nullopt;
        if (pos_ < text_.size() && text_[pos_] == '/') {
            std::size_t mark = pos_++;
            std::size_t dstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == dstart) pos_ = mark;  // "/" not followed by digits: not ours
        }
        auto q = parse_rational(text_.substr(start, pos_ - start));
        if (!q) fail("bad rational");
        return *q;
    }

    std::string try_ident() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_')) {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    Rational parse_exponent() {
        if (eat('(')) {
            bool neg = eat('-');
            auto q = try_number();
            if (!q) fail("expected rational exponent");
            if (!eat(')')) fail("expected ')' after exponent");
            return neg ? Rational(-*q) : *q;
        }
        bool neg = eat('-');
        auto q = try_number();
        if (!q) fail("expected rational exponent");
        return neg ? Rational(-*q) : *q;
    }

    AlgExpr parse_atom() {
        if (eat('(')) {
            AlgExpr e = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (auto q = try_number()) return alg_const(*q);
        std::string id = try_ident();
        if (id == "t") return alg_t();
        if (id == "E") return alg_E();
        if (id == "K") return alg_K();
        if (id == "omt") return alg_one_minus_t();
        if (id == "shifted") return alg_shifted();
        fail(id.empty() ? "expected atom" : "unknown name '" + id + "'");
    }

    AlgExpr parse_factor() {
        AlgExpr base = parse_atom();
        if (eat('^')) return alg_pow(std::move(base), parse_exponent());
        return base;
    }

    AlgExpr parse_term() {
        std::vector<AlgExpr> factors{parse_factor()};
        while (eat('*')) factors.push_back(parse_factor());
        if (factors.size() == 1) return std::move(factors.front());
        return alg_product(std::move(factors));
    }

    AlgExpr parse_expr() {
        std::vector<AlgExpr> terms;
        bool neg = eat('-');
        AlgExpr first = parse_term();
        terms.push_back(neg ? alg_product({alg_const(rat(-1)), std::move(first)})
                            : std::move(first));
        for (;;) {
            if (eat('+')) {
                terms.push_back(parse_term());
            } else if (eat('-')) {
                terms.push_back(alg_product({alg_const(rat(-1)), parse_term()}));
            } else {
                break;
            }
        }
        if (terms.size() == 1) return std::move(terms.front());
        return alg_sum(std::move(terms));
    }

    std::string text_;
    std::size_t pos_ = 0;
};

inline AlgExpr parse_alg_expr(const std::string& text) { return AlgExprParser(text).parse(); }

// Parses "c0 + c1*x + c2*x^2" where x is the expected parameter name; bare
// "x" terms carry coefficient 1. Terms may appear in any order.
inline ParamPoly parse_param_poly(const std::string& text, const std::string& param) {
    std::vector<Rational> coeffs;
    auto bump = [&](int k, const Rational& c) {
        if (static_cast<int>(coeffs.size()) <= k) coeffs.resize(static_cast<std::size_t>(k) + 1, rat(0));
        coeffs[static_cast<std::size_t>(k)] += c;
    };
    std::size_t i = 0;
    auto skip = [&]() {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    bool first = true;
    while (true) {
        skip();
        if (i == text.size()) break;
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            throw catalog_error("expected '+' or '-' in coefficient: " + text);
        }
        first = false;
        skip();
        // coefficient (optional if the term is the bare parameter)
        Rational c = 1;
        std::size_t start = i;
        while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/')) ++i;
        if (i > start) {
            auto q = parse_rational(text.substr(start, i - start));
            if (!q) throw catalog_error("bad rational in coefficient: " + text);
            c = *q;
        }
        c *= sign;
        skip();
        int power = 0;
        if (i < text.size() && (text[i] == '*' || std::isalpha(static_cast<unsigned char>(text[i])))) {
            if (text[i] == '*') ++i;
            skip();
            std::size_t ns = i;
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
            std::string name = text.substr(ns, i - ns);
            if (name != param) {
                throw catalog_error("unexpected parameter '" + name + "', entry declares '" +
                                    param + "'");
            }
            power = 1;
            skip();
            if (i < text.size() && text[i] == '^') {
                ++i;
                skip();
                std::size_t ps = i;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
                if (i == ps) throw catalog_error("bad exponent in coefficient: " + text);
                power = std::stoi(text.substr(ps, i - ps));
            }
        }
        bump(power, c);
    }
    if (coeffs.empty()) coeffs.push_back(rat(0));
    if (coeffs.size() == 1) return ParamPoly(coeffs[0]);
    return ParamPoly(param, std::move(coeffs));
}

// ---------------------------------------------------------------------------
// Catalog: loading and evaluation.
// ---------------------------------------------------------------------------
class Catalog {
  public:
    static constexpr const char* kFormatVersion = "1";

    static Catalog load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw catalog_error("cannot open catalog file: " + path);
        Catalog cat;
        cat.parse_stream(in, path);
        return cat;
    }

    // Environment override first, then the build-time default location.
    static std::string default_path() {
        if (const char* env = std::getenv("LAMBDA_EXT_CATALOG")) return env;
        return LAMBDA_EXT_CATALOG_DEFAULT;
    }
    static Catalog load_default() { return load_file(default_path()); }

    bool contains(const std::string& id) const { return entries_.count(id) != 0; }
    const CatalogEntry& at(const std::string& id) const {
        auto it = entries_.find(id);
        if (it == entries_.end()) throw unknown_id_error(id);
        return it->second;
    }
    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        out.reserve(order_.size());
        for (const auto& id : order_) out.push_back(id);
        return out;
    }

    // Exact expansion of a closed form through special_functions.
    QPrefactored expand_entry(const std::string& id, int order) const {
        const CatalogEntry& e = at(id);
        if (e.kind == EntryKind::ReferenceSeries) {
            throw catalog_error("entry '" + id + "' is a reference series, not a closed form");
        }
        if (e.kind == EntryKind::AlgExprTree) {
            return eval_alg_expr(parse_alg_expr(e.expr_text), order);
        }
        int slack = order + 8;
        int emax = 0, kmax = 0;
        for (const auto& trm : e.ek_terms) {
            emax = std::max(emax, trm.e_deg);
            kmax = std::max(kmax, trm.k_deg);
        }
        QSeries unit(slack);
        unit.at(0) = rat(1);
        std::vector<QSeries> epow{unit};
        std::vector<QSeries> kpow{unit};
        if (emax > 0) {
            QSeries E = elliptic_Etil(slack);
            for (int i = 1; i <= emax; ++i) epow.push_back(mul(epow.back(), E).truncated(slack));
        }
        if (kmax > 0) {
            QSeries K = elliptic_Ktil(slack);
            for (int j = 1; j <= kmax; ++j) kpow.push_back(mul(kpow.back(), K).truncated(slack));
        }
        QSeries total(slack);
        for (const auto& trm : e.ek_terms) {
            QSeries prod = mul(epow[static_cast<std::size_t>(trm.e_deg)],
                               kpow[static_cast<std::size_t>(trm.k_deg)]);
            if (prod.order() > slack) prod = prod.truncated(slack);
            total = add(total, mul_tpoly(prod, trm.tpoly).truncated(slack));
        }
        return QPrefactored(e.pref_t_exp, e.pref_omt_exp, scal(e.pref_const, total));
    }

    // Printed coefficients, served verbatim. Requests beyond the printed
    // depth are a hard error so fixtures can never silently pad with zeros.
    PSeries reference_series(const std::string& id, int order) const {
        const CatalogEntry& e = at(id);
        if (e.kind != EntryKind::ReferenceSeries) {
            throw catalog_error("entry '" + id + "' is not a reference series");
        }
        if (order > e.ref_max_order) {
            throw reference_depth_error("entry '" + e.id + "' (source " + e.source +
                                        ") prints only " + std::to_string(e.ref_max_order) +
                                        " orders; requested " + std::to_string(order) +
                                        " -- use the solver for deeper orders");
        }
        std::vector<ParamPoly> c(static_cast<std::size_t>(order) + 1, ParamPoly(rat(0)));
        for (const auto& [n, poly] : e.ref_coeffs) {
            if (n <= order) c[static_cast<std::size_t>(n)] = poly;
        }
        return PSeries(std::move(c));
    }

  private:
    static std::string trim(const std::string& s) {
        std::size_t a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        std::size_t b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

    void parse_stream(std::istream& in, const std::string& path) {
        std::string line;
        CatalogEntry cur;
        bool open = false;
        int lineno = 0;
        auto flush = [&]() {
            if (!open) return;
            finalize(cur);
            if (entries_.count(cur.id)) throw catalog_error("duplicate catalog id: " + cur.id);
            order_.push_back(cur.id);
            entries_.emplace(cur.id, std::move(cur));
            cur = CatalogEntry{};
            open = false;
        };
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = trim(line);
            if (s.empty()) {
                flush();
                continue;
            }
            if (s[0] == '#') continue;
            try {
                if (!open) {
                    parse_header(s, cur);
                    open = true;
                } else {
                    parse_payload_line(s, cur);
                }
            } catch (const catalog_error&) {
                throw;
            } catch (const std::exception& ex) {
                throw catalog_error(path + ":" + std::to_string(lineno) + ": " + ex.what());
            }
        }
        flush();
    }

    static void parse_header(const std::string& s, CatalogEntry& e) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= s.size(); ++i) {
            if (i == s.size() || s[i] == '|') {
                parts.push_back(trim(s.substr(start, i - start)));
                start = i + 1;
            }
        }
        if (parts.size() != 3) throw catalog_error("bad header (want 'id | kind | parameter'): " + s);
        e.id = parts[0];
        e.source = parts[0];
        if (parts[1] == "ek_polynomial") {
            e.kind = EntryKind::EkPolynomial;
        } else if (parts[1] == "alg_expr") {
            e.kind = EntryKind::AlgExprTree;
        } else if (parts[1] == "reference_series") {
            e.kind = EntryKind::ReferenceSeries;
        } else {
            throw catalog_error("unknown entry kind: " + parts[1]);
        }
        e.parameter = parts[2];
    }

    static void parse_payload_line(const std::string& s, CatalogEntry& e) {
        std::size_t colon = s.find(':');
        if (colon == std::string::npos) throw catalog_error("bad payload line: " + s);
        std::string key = trim(s.substr(0, colon));
        std::string val = trim(s.substr(colon + 1));
        if (key == "homogeneous") {
            e.homogeneous = (val == "true");
        } else if (key == "ambiguous") {
            e.ambiguous = (val == "true");
        } else if (key == "source") {
            e.source = val;
        } else if (key == "prefactor") {
            std::istringstream is(val);
            std::string a, b, c;
            if (!(is >> a >> b >> c)) throw catalog_error("prefactor needs three rationals: " + s);
            auto qa = parse_rational(a), qb = parse_rational(b), qc = parse_rational(c);
            if (!qa || !qb || !qc) throw catalog_error("bad prefactor rational: " + s);
            e.pref_t_exp = *qa;
            e.pref_omt_exp = *qb;
            e.pref_const = *qc;
        } else if (key == "expr") {
            if (e.kind != EntryKind::AlgExprTree) throw catalog_error("expr outside alg_expr entry");
            e.expr_text = val;
            parse_alg_expr(val);  // validate now so load fails fast
        } else if (key.size() >= 3 && key[0] == 'E' && key[1] == '^') {
            if (e.kind != EntryKind::EkPolynomial) throw catalog_error("E/K term outside ek entry");
            EkTerm trm;
            std::size_t kpos = key.find('K');
            if (kpos == std::string::npos || key[kpos + 1] != '^') throw catalog_error("bad E/K key: " + key);
            trm.e_deg = std::stoi(trim(key.substr(2, kpos - 2)));
            trm.k_deg = std::stoi(trim(key.substr(kpos + 2)));
            std::istringstream is(val);
            std::string tok;
            while (is >> tok) {
                auto q = parse_rational(tok);
                if (!q) throw catalog_error("bad coefficient '" + tok + "' in: " + s);
                trm.tpoly.push_back(*q);
            }
            if (trm.tpoly.empty()) throw catalog_error("empty coefficient list: " + s);
            e.ek_terms.push_back(std::move(trm));
        } else if (key.size() >= 3 && key[0] == 't' && key[1] == '^') {
            if (e.kind != EntryKind::ReferenceSeries) throw catalog_error("t^n line outside reference entry");
            int n = std::stoi(key.substr(2));
            std::string param = e.parameter == "none" ? "" : e.parameter;
            ParamPoly p = parse_param_poly(val, param);
            if (e.ref_coeffs.count(n)) throw catalog_error("duplicate order t^" + std::to_string(n));
            e.ref_coeffs[n] = std::move(p);
            e.ref_max_order = std::max(e.ref_max_order, n);
        } else {
            throw catalog_error("unrecognized payload line: " + s);
        }
    }

    static void finalize(const CatalogEntry& e) {
        if (e.kind == EntryKind::EkPolynomial) {
            if (e.ek_terms.empty()) throw catalog_error("entry '" + e.id + "' has no E/K terms");
            if (e.homogeneous) {
                int deg = e.ek_terms.front().e_deg + e.ek_terms.front().k_deg;
                for (const auto& trm : e.ek_terms) {
                    if (trm.e_deg + trm.k_deg != deg) {
                        throw catalog_error("entry '" + e.id +
                                            "' flagged homogeneous but degrees differ");
                    }
                }
            }
        } else if (e.kind == EntryKind::AlgExprTree) {
            if (e.expr_text.empty()) throw catalog_error("entry '" + e.id + "' has no expr");
        } else {
            if (e.ref_coeffs.empty()) throw catalog_error("entry '" + e.id + "' has no coefficients");
        }
    }

    std::map<std::string, CatalogEntry> entries_;
    std::vector<std::string> order_;
};

}  // namespace lambda_ext
