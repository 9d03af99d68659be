#ifndef LACUNA_IO_JSON_HPP
#define LACUNA_IO_JSON_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <lacuna/algebra/roots.hpp>
#include <lacuna/continuation/connect.hpp>
#include <lacuna/critical/critical.hpp>
#include <lacuna/dfinite/frobenius.hpp>
#include <lacuna/dfinite/ode.hpp>
#include <lacuna/error.hpp>
#include <lacuna/ratfun/ratfun.hpp>
#include <lacuna/resolver/resolver.hpp>
#include <lacuna/transfer/transfer.hpp>

namespace lacuna::io
{

using json = nlohmann::ordered_json;

namespace detail
{

inline std::string upper_string(const Mag &m)
{
    if (m.is_zero()) {
        return "0";
    }
    mpfr_exp_t e = 0;
    char *raw = mpfr_get_str(nullptr, &e, 10, 17, m.value().get(), MPFR_RNDU);
    std::string s(raw);
    mpfr_free_str(raw);
    return "0." + s + "e" + std::to_string(static_cast<long>(e));
}

template <class T> T get(const json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ParseError(std::string("field '") + key + "': " + e.what());
    }
}

// Numbers may be given as JSON integers or strings.
inline Integer get_integer(const json &j, const char *key)
{
    if (!j.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    const json &v = j.at(key);
    if (v.is_number_integer()) {
        return Integer(std::to_string(v.get<long long>()), 10);
    }
    if (v.is_string()) {
        try {
            return Integer(v.get<std::string>(), 10);
        } catch (const std::invalid_argument &) {
        }
    }
    throw ParseError(std::string("field '") + key + "' is not an integer");
}

} // namespace detail

inline json to_json(const Ball &b)
{
    return {{"mid_re", b.mid().to_string()}, {"mid_im", "0"}, {"rad", detail::upper_string(b.rad())},
            {"prec_bits", b.prec()}};
}

inline json to_json(const ComplexBall &z)
{
    return {{"mid_re", z.re().mid().to_string()},
            {"mid_im", z.im().mid().to_string()},
            {"rad", detail::upper_string(Mag::max(z.re().rad(), z.im().rad()))},
            {"prec_bits", z.prec()}};
}

inline ComplexBall complex_ball_from_json(const json &j)
{
    const auto prec = static_cast<mpfr_prec_t>(detail::get<long>(j, "prec_bits"));
    if (prec < 2) {
        throw ParseError("prec_bits must be at least 2");
    }
    const std::string rad = detail::get<std::string>(j, "rad");
    return ComplexBall(Ball::from_decimal(detail::get<std::string>(j, "mid_re"), rad, prec),
                       Ball::from_decimal(detail::get<std::string>(j, "mid_im"), rad, prec));
}

inline json to_json(const LaurentPoly &p)
{
    json terms = json::array();
    for (const auto &[e, c] : p.terms()) {
        terms.push_back({{"exp", e}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
    }
    return {{"dim", p.dim()}, {"terms", terms}};
}

inline LaurentPoly laurent_from_json(const json &j)
{
    const auto dim = detail::get<long>(j, "dim");
    if (dim < 1) {
        throw ParseError("polynomial dimension must be positive");
    }
    LaurentPoly p(static_cast<std::size_t>(dim));
    const json terms = detail::get<json>(j, "terms");
    if (!terms.is_array()) {
        throw ParseError("'terms' must be an array");
    }
    for (const auto &t : terms) {
        const auto e = detail::get<std::vector<long>>(t, "exp");
        if (e.size() != static_cast<std::size_t>(dim)) {
            throw ParseError("exponent of length " + std::to_string(e.size()) + " in dimension " +
                             std::to_string(dim));
        }
        const Integer num = detail::get_integer(t, "num");
        const Integer den = t.contains("den") ? detail::get_integer(t, "den") : Integer(1);
        if (den == 0) {
            throw ParseError("zero denominator");
        }
        Rational c(num, den);
        c.canonicalize();
        p.add_term(Exponent(e.begin(), e.end()), c);
    }
    return p;
}

inline json to_json(const UPoly &u)
{
    return to_json(LaurentPoly::from_upoly(u));
}

inline UPoly upoly_from_json(const json &j)
{
    const LaurentPoly p = laurent_from_json(j);
    if (p.dim() != 1) {
        throw ParseError("expected a univariate polynomial");
    }
    for (const auto &[e, c] : p.terms()) {
        if (e[0] < 0) {
            throw ParseError("negative exponent in a univariate polynomial");
        }
    }
    return p.to_upoly();
}

inline json to_json(const RatFun &f)
{
    return {{"P", to_json(f.P)}, {"Q", to_json(f.Q)}, {"k", f.k}};
}

inline RatFun ratfun_from_json(const json &j)
{
    const long k = detail::get<long>(j, "k");
    if (k < 1) {
        throw ParseError("denominator power k must be positive");
    }
    return RatFun(laurent_from_json(detail::get<json>(j, "P")), laurent_from_json(detail::get<json>(j, "Q")),
                  static_cast<unsigned>(k));
}

inline json to_json(const ODE &ode)
{
    json c = json::array();
    for (const auto &p : ode.p) {
        c.push_back(to_json(p));
    }
    return {{"order", ode.order()}, {"coeffs", c}};
}

inline ODE ode_from_json(const json &j)
{
    const long r = detail::get<long>(j, "order");
    const json c = detail::get<json>(j, "coeffs");
    if (!c.is_array() || static_cast<long>(c.size()) != r + 1) {
        throw ParseError("ODE of order " + std::to_string(r) + " needs " + std::to_string(r + 1) + " coefficients");
    }
    std::vector<UPoly> p;
    for (const auto &q : c) {
        p.push_back(upoly_from_json(q));
    }
    return ODE(std::move(p));
}

inline json to_json(const AlgebraicNumber &a)
{
    return {{"min_poly", a.poly().to_string()}, {"enclosure", to_json(a.enclosure())}};
}

inline json to_json(const CriticalPoint &p)
{
    json coords = json::array();
    for (const auto &c : p.coords) {
        coords.push_back(to_json(c));
    }
    json j = {{"coords", coords}};
    if (p.exact) {
        json ex = json::array();
        for (const auto &a : *p.exact) {
            ex.push_back(to_json(a));
        }
        j["exact"] = ex;
    }
    j["lambda"] = to_json(p.lambda);
    j["kind"] = to_string(p.kind);
    j["height"] = to_json(p.height);
    if (p.signature) {
        j["signature"] = {p.signature->pos, p.signature->neg, p.signature->zero};
    }
    j["multiplicity"] = p.multiplicity;
    if (!p.warnings.empty()) {
        j["warnings"] = p.warnings;
    }
    return j;
}

inline json to_json(const SupportResult &s)
{
    json j = {{"status", to_string(s.status)}};
    j["sum_a_squared"] = s.infinite ? json("inf") : to_json(s.sum_a_squared);
    json a = json::array();
    for (const auto &v : s.a) {
        a.push_back(to_json(v));
    }
    j["a"] = a;
    return j;
}

inline json to_json(const CriticalReport &r)
{
    json pts = json::array();
    for (const auto &p : r.points) {
        pts.push_back(to_json(p));
    }
    json j = {{"method", r.method}, {"points", pts}, {"c1", to_json(r.c1)}};
    j["c2"] = r.c2 ? to_json(*r.c2) : json(nullptr);
    j["lacuna"] = r.lacuna;
    j["supporting"] = r.supporting;
    if (r.support) {
        j["support"] = to_json(*r.support);
    }
    j["unverified"] = {{"torus_uniqueness", !r.torus_uniqueness_verified},
                       {"no_points_at_infinity", !r.no_points_at_infinity_verified}};
    return j;
}

inline json to_json(const LocalSolution &s)
{
    json c = json::array();
    for (const auto &row : s.c) {
        json r = json::array();
        for (const auto &v : row) {
            r.push_back(to_json(v));
        }
        c.push_back(r);
    }
    json j = {{"alpha", to_string(s.alpha)}, {"log_power", s.log_power}, {"truncation", s.truncation()},
              {"radius", s.radius}};
    if (s.exact) {
        json e = json::array();
        for (const auto &row : *s.exact) {
            json r = json::array();
            for (const auto &v : row) {
                r.push_back(to_string(v));
            }
            e.push_back(r);
        }
        j["exact"] = e;
    }
    j["coeffs"] = c;
    return j;
}

inline json to_json(const ConnectionResult &r)
{
    json c = json::array(), p = json::array();
    for (const auto &v : r.constants) {
        c.push_back(to_json(v));
    }
    for (const auto &v : r.path.waypoints) {
        p.push_back(to_json(v));
    }
    return {{"constants", c},
            {"path", p},
            {"eta", r.path.eta},
            {"digits", r.digits},
            {"prec_bits", r.prec},
            {"residual_contains_zero", r.residual_contains_zero},
            {"tail_bound", r.tail_heuristic ? "heuristic" : "rigorous"}};
}

inline json to_json(const AsymptoticTerm &t)
{
    return {{"omega", to_json(t.omega)},
            {"growth", to_json(t.growth)},
            {"power", to_string(t.power)},
            {"log_pow", t.log_pow},
            {"constant", to_json(t.constant)}};
}

inline AsymptoticTerm asymptotic_term_from_json(const json &j)
{
    AsymptoticTerm t;
    t.growth = complex_ball_from_json(detail::get<json>(j, "growth"));
    t.power = lacuna::parse_rational(detail::get<std::string>(j, "power"));
    t.log_pow = detail::get<int>(j, "log_pow");
    t.constant = complex_ball_from_json(detail::get<json>(j, "constant"));
    return t;
}

inline json to_json(const RealAsymptoticForm &f)
{
    return {{"modulus", to_json(f.modulus)},     {"power", to_string(f.power)},
            {"log_pow", f.log_pow},              {"amplitude", to_json(f.amplitude)},
            {"frequency", to_json(f.frequency)}, {"phase", to_json(f.phase)}};
}

inline json to_json(const MultiplicityResult &m)
{
    return {{"m", m.m},
            {"residual", to_json(m.residual)},
            {"unit_constant", to_json(m.unit_constant)},
            {"numeric_constant", to_json(m.numeric_constant)}};
}

inline json to_json(const DropReport &r)
{
    json w = json::array();
    for (const auto &x : r.windows) {
        w.push_back({{"eps", x.eps}, {"sup_log", x.sup_log}, {"argmax", x.argmax}, {"bounded", x.bounded}});
    }
    return {{"n_max", r.n_max},       {"rate", to_json(r.rate)},         {"gap_c1", to_json(r.gap_c1)},
            {"gap_c2", to_json(r.gap_c2)}, {"rate_min_upper_half", r.rate_min}, {"rate_max_upper_half", r.rate_max},
            {"windows", w}};
}

// 64-bit FNV-1a, hex.
inline std::string fnv1a(const std::string &s)
{
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline json read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

inline void write_file(const std::string &path, const json &j)
{
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write '" + path + "'");
    }
    out << j.dump(2) << "\n";
}

} // namespace lacuna::io

#endif
