#ifndef LACUNA_RATFUN_RATFUN_HPP
#define LACUNA_RATFUN_RATFUN_HPP

#include <sstream>
#include <string>
#include <vector>

#include <lacuna/error.hpp>
#include <lacuna/numeric/ball.hpp>
#include <lacuna/ratfun/laurent.hpp>

namespace lacuna
{

// F = P / Q^k.
struct RatFun {
    LaurentPoly P{1}, Q{1};
    unsigned k = 1;

    RatFun() = default;
    RatFun(LaurentPoly p, LaurentPoly q, unsigned power) : P(std::move(p)), Q(std::move(q)), k(power)
    {
        validate();
    }

    void validate() const
    {
        if (P.dim() != Q.dim()) {
            throw ParseError("RatFun: P and Q have different dimensions");
        }
        if (k < 1) {
            throw ParseError("RatFun: k must be at least 1");
        }
        if (Q.is_zero()) {
            throw ParseError("RatFun: Q is identically zero");
        }
    }
    std::size_t dim() const noexcept
    {
        return Q.dim();
    }
    // Q(0) > 0 when the origin is in the domain (Q has a nonzero constant term).
    bool origin_sign_positive() const
    {
        return Q.constant_term() > 0;
    }
};

// Lattice direction r with its normalization rhat = r / max_j |r_j|.
struct Direction {
    std::vector<Rational> r;

    Direction() = default;
    explicit Direction(std::vector<Rational> v) : r(std::move(v))
    {
        bool nonzero = false;
        for (const auto &x : r) {
            nonzero = nonzero || x != 0;
        }
        if (r.empty() || !nonzero) {
            throw ParseError("direction must be a nonzero vector");
        }
    }
    static Direction diagonal(std::size_t d)
    {
        return Direction(std::vector<Rational>(d, Rational(1)));
    }
    static Direction parse(const std::string &text)
    {
        std::vector<Rational> v;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            v.push_back(parse_rational(item));
        }
        return Direction(std::move(v));
    }

    std::size_t dim() const noexcept
    {
        return r.size();
    }
    Rational scale() const
    {
        Rational m = 0;
        for (const auto &x : r) {
            if (abs(x) > m) {
                m = abs(x);
            }
        }
        return m;
    }
    std::vector<Rational> rhat_exact() const
    {
        const Rational s = scale();
        std::vector<Rational> out;
        for (const auto &x : r) {
            out.push_back(x / s);
        }
        return out;
    }
    std::vector<Ball> rhat(mpfr_prec_t prec) const
    {
        std::vector<Ball> out;
        for (const auto &x : rhat_exact()) {
            out.push_back(Ball::from_rational(x, prec));
        }
        return out;
    }
    bool is_integral() const
    {
        for (const auto &x : r) {
            if (x.get_den() != 1) {
                return false;
            }
        }
        return true;
    }
    std::string to_string() const
    {
        std::string s;
        for (const auto &x : r) {
            s += (s.empty() ? "" : ",") + x.get_str();
        }
        return s;
    }
};

} // namespace lacuna

#endif
