#ifndef LACUNA_NUMERIC_RATIONAL_HPP
#define LACUNA_NUMERIC_RATIONAL_HPP

#include <optional>
#include <string>

#include <lacuna/error.hpp>
#include <lacuna/numeric/ball.hpp>
#include <lacuna/numeric/complex_ball.hpp>

namespace lacuna
{

inline Rational make_rational(const Integer &num, const Integer &den)
{
    if (den == 0) {
        throw DomainError("zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "p", "p/q" and "-p/q" with arbitrary-size integers.
inline Rational parse_rational(const std::string &s)
{
    Rational q;
    std::string t;
    for (char c : s) {
        if (c != ' ' && c != '+') {
            t += c;
        }
    }
    if (t.empty() || q.set_str(t, 10) != 0) {
        throw ParseError("invalid rational '" + s + "'");
    }
    if (q.get_den() == 0) {
        throw ParseError("zero denominator in '" + s + "'");
    }
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational &q)
{
    return q.get_str(10);
}

// Best rational approximation p/q with q <= max_den lying inside the ball,
// by continued fractions of the midpoint. Returns nothing if none is found.
inline std::optional<Rational> reconstruct_rational(const Ball &x, const Integer &max_den = Integer(1000000))
{
    Rational target = x.mid().to_rational();
    // convergents h/k of target
    Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    Rational rest = target;
    for (int it = 0; it < 200; ++it) {
        Integer a;
        mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
        const Integer h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > max_den) {
            break;
        }
        const Rational cand = make_rational(h2, k2);
        if (x.contains(cand)) {
            return cand;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const Rational frac = rest - Rational(a);
        if (frac == 0) {
            break;
        }
        rest = 1 / frac;
    }
    return std::nullopt;
}

} // namespace lacuna

#endif
