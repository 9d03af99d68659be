#ifndef LACUNA_POLY_UPOLY_HPP
#define LACUNA_POLY_UPOLY_HPP

#include <string>
#include <utility>
#include <vector>

#include <lacuna/error.hpp>
#include <lacuna/numeric/complex_ball.hpp>
#include <lacuna/numeric/rational.hpp>

namespace lacuna
{

// Dense univariate polynomial over the rationals, coefficients in ascending
// order of degree. The zero polynomial has no coefficients.
class UPoly
{
public:
    UPoly() = default;
    explicit UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs))
    {
        trim();
    }
    UPoly(std::initializer_list<Rational> coeffs) : c_(coeffs)
    {
        trim();
    }
    static UPoly constant(const Rational &a)
    {
        return UPoly(std::vector<Rational>{a});
    }
    static UPoly monomial(const Rational &a, std::size_t k)
    {
        std::vector<Rational> c(k + 1);
        c[k] = a;
        return UPoly(std::move(c));
    }
    // x - a
    static UPoly linear_root(const Rational &a)
    {
        return UPoly{-a, Rational(1)};
    }

    int degree() const noexcept
    {
        return static_cast<int>(c_.size()) - 1;
    }
    bool is_zero() const noexcept
    {
        return c_.empty();
    }
    bool is_constant() const noexcept
    {
        return c_.size() <= 1;
    }
    const std::vector<Rational> &coeffs() const noexcept
    {
        return c_;
    }
    Rational coeff(std::size_t k) const
    {
        return k < c_.size() ? c_[k] : Rational(0);
    }
    Rational leading() const
    {
        return c_.empty() ? Rational(0) : c_.back();
    }
    // Multiplicity of 0 as a root (the x-adic valuation); -1 for the zero polynomial.
    int valuation() const
    {
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] != 0) {
                return static_cast<int>(k);
            }
        }
        return -1;
    }

    Rational operator()(const Rational &x) const
    {
        Rational s = 0;
        for (std::size_t k = c_.size(); k-- > 0;) {
            s = s * x + c_[k];
        }
        return s;
    }
    ComplexBall operator()(const ComplexBall &x) const
    {
        const mpfr_prec_t p = x.prec();
        ComplexBall s(p);
        for (std::size_t k = c_.size(); k-- > 0;) {
            s = s * x + ComplexBall::from_rational(c_[k], p);
        }
        return s;
    }

    UPoly derivative() const
    {
        std::vector<Rational> d;
        for (std::size_t k = 1; k < c_.size(); ++k) {
            d.push_back(c_[k] * Rational(static_cast<long>(k)));
        }
        return UPoly(std::move(d));
    }
    UPoly monic() const
    {
        if (is_zero()) {
            return *this;
        }
        UPoly r(*this);
        const Rational lc = leading();
        for (auto &a : r.c_) {
            a /= lc;
        }
        return r;
    }
    // p(x + a)
    UPoly taylor_shift(const Rational &a) const
    {
        std::vector<Rational> c = c_;
        const std::size_t n = c.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t k = n - 1; k > i; --k) {
                c[k - 1] += a * c[k];
            }
        }
        return UPoly(std::move(c));
    }
    // p(s x)
    UPoly scale(const Rational &s) const
    {
        std::vector<Rational> c = c_;
        Rational f = 1;
        for (auto &a : c) {
            a *= f;
            f *= s;
        }
        return UPoly(std::move(c));
    }

    UPoly &operator+=(const UPoly &o)
    {
        if (o.c_.size() > c_.size()) {
            c_.resize(o.c_.size());
        }
        for (std::size_t k = 0; k < o.c_.size(); ++k) {
            c_[k] += o.c_[k];
        }
        trim();
        return *this;
    }
    UPoly &operator-=(const UPoly &o)
    {
        if (o.c_.size() > c_.size()) {
            c_.resize(o.c_.size());
        }
        for (std::size_t k = 0; k < o.c_.size(); ++k) {
            c_[k] -= o.c_[k];
        }
        trim();
        return *this;
    }
    friend UPoly operator+(UPoly a, const UPoly &b)
    {
        return a += b;
    }
    friend UPoly operator-(UPoly a, const UPoly &b)
    {
        return a -= b;
    }
    UPoly operator-() const
    {
        UPoly r(*this);
        for (auto &a : r.c_) {
            a = -a;
        }
        return r;
    }
    friend UPoly operator*(const UPoly &a, const UPoly &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return UPoly();
        }
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                c[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return UPoly(std::move(c));
    }
    friend UPoly operator*(UPoly a, const Rational &s)
    {
        for (auto &x : a.c_) {
            x *= s;
        }
        a.trim();
        return a;
    }
    friend bool operator==(const UPoly &a, const UPoly &b)
    {
        return a.c_ == b.c_;
    }
    friend bool operator!=(const UPoly &a, const UPoly &b)
    {
        return !(a == b);
    }

    UPoly pow(unsigned k) const
    {
        UPoly r = constant(1), b = *this;
        while (k) {
            if (k & 1) {
                r = r * b;
            }
            k >>= 1;
            if (k) {
                b = b * b;
            }
        }
        return r;
    }

    // Euclidean division: returns (q, r) with a = q b + r, deg r < deg b.
    static std::pair<UPoly, UPoly> divmod(const UPoly &a, const UPoly &b)
    {
        if (b.is_zero()) {
            throw DomainError("polynomial division by zero");
        }
        std::vector<Rational> r = a.c_;
        const int db = b.degree();
        if (a.degree() < db) {
            return {UPoly(), a};
        }
        std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db + 1));
        const Rational lb = b.leading();
        for (int k = a.degree(); k >= db; --k) {
            const Rational f = r[static_cast<std::size_t>(k)] / lb;
            q[static_cast<std::size_t>(k - db)] = f;
            if (f == 0) {
                continue;
            }
            for (int j = 0; j <= db; ++j) {
                r[static_cast<std::size_t>(k - db + j)] -= f * b.c_[static_cast<std::size_t>(j)];
            }
        }
        return {UPoly(std::move(q)), UPoly(std::move(r))};
    }
    friend UPoly operator/(const UPoly &a, const UPoly &b)
    {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero()) {
            throw DomainError("inexact polynomial division");
        }
        return q;
    }
    friend UPoly operator%(const UPoly &a, const UPoly &b)
    {
        return divmod(a, b).second;
    }

    // Monic gcd (zero if both are zero).
    static UPoly gcd(UPoly a, UPoly b)
    {
        while (!b.is_zero()) {
            UPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    std::string to_string(const std::string &var = "z") const
    {
        if (is_zero()) {
            return "0";
        }
        std::string out;
        for (std::size_t k = c_.size(); k-- > 0;) {
            const Rational &a = c_[k];
            if (a == 0) {
                continue;
            }
            std::string coef = Rational(abs(a)).get_str();
            if (coef.find('/') != std::string::npos) {
                coef = "(" + coef + ")";
            }
            if (!out.empty()) {
                out += a < 0 ? "-" : "+";
            } else if (a < 0) {
                out += "-";
            }
            if (k == 0) {
                out += coef;
            } else {
                if (abs(a) != 1) {
                    out += coef + "*";
                }
                out += var;
                if (k > 1) {
                    out += "^" + std::to_string(k);
                }
            }
        }
        return out;
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0) {
            c_.pop_back();
        }
    }

    std::vector<Rational> c_;
};

// Square-free decomposition p = lc * prod_i f_i^i (Yun). Entry i-1 holds the
// monic factor f_i; constant factors are returned as the unit polynomial.
inline std::vector<UPoly> squarefree_decomposition(const UPoly &p)
{
    if (p.is_zero()) {
        throw DomainError("square-free decomposition of the zero polynomial");
    }
    std::vector<UPoly> out;
    if (p.degree() == 0) {
        return out;
    }
    const UPoly f = p.monic();
    const UPoly df = f.derivative();
    const UPoly b = UPoly::gcd(f, df);
    UPoly c = f / b;
    UPoly d = df / b - c.derivative();
    while (c.degree() > 0) {
        const UPoly a = UPoly::gcd(c, d);
        out.push_back(a);
        c = c / a;
        d = d / a - c.derivative();
    }
    while (!out.empty() && out.back().degree() == 0) {
        out.pop_back();
    }
    return out;
}

// Polynomial with complex-ball coefficients, ascending degree.
struct BallPoly {
    std::vector<ComplexBall> c;

    static BallPoly from(const UPoly &p, mpfr_prec_t prec)
    {
        BallPoly b;
        for (const auto &a : p.coeffs()) {
            b.c.push_back(ComplexBall::from_rational(a, prec));
        }
        return b;
    }
    int degree() const noexcept
    {
        return static_cast<int>(c.size()) - 1;
    }
    ComplexBall operator()(const ComplexBall &x) const
    {
        ComplexBall s(x.prec());
        for (std::size_t k = c.size(); k-- > 0;) {
            s = s * x + c[k];
        }
        return s;
    }
    BallPoly derivative() const
    {
        BallPoly d;
        for (std::size_t k = 1; k < c.size(); ++k) {
            d.c.push_back(c[k] * Rational(static_cast<long>(k)));
        }
        return d;
    }
};

} // namespace lacuna

#endif
