#ifndef LACUNA_RATFUN_LAURENT_HPP
#define LACUNA_RATFUN_LAURENT_HPP

#include <map>
#include <string>
#include <vector>

#include <lacuna/error.hpp>
#include <lacuna/numeric/complex_ball.hpp>
#include <lacuna/numeric/rational.hpp>
#include <lacuna/poly/upoly.hpp>

namespace lacuna
{

using Exponent = std::vector<long>;

// Sparse Laurent polynomial in `dim` variables with rational coefficients.
// Zero coefficients are never stored.
class LaurentPoly
{
public:
    explicit LaurentPoly(std::size_t dim = 1) : dim_(dim)
    {
        if (dim == 0) {
            throw DomainError("LaurentPoly: dimension must be positive");
        }
    }
    static LaurentPoly constant(std::size_t dim, const Rational &c)
    {
        LaurentPoly p(dim);
        p.add_term(Exponent(dim, 0), c);
        return p;
    }
    static LaurentPoly variable(std::size_t dim, std::size_t j)
    {
        Exponent e(dim, 0);
        e.at(j) = 1;
        return monomial(e, 1);
    }
    static LaurentPoly monomial(const Exponent &e, const Rational &c)
    {
        LaurentPoly p(e.size());
        p.add_term(e, c);
        return p;
    }
    static LaurentPoly from_upoly(const UPoly &u)
    {
        LaurentPoly p(1);
        for (std::size_t k = 0; k < u.coeffs().size(); ++k) {
            p.add_term(Exponent{static_cast<long>(k)}, u.coeffs()[k]);
        }
        return p;
    }

    std::size_t dim() const noexcept
    {
        return dim_;
    }
    const std::map<Exponent, Rational> &terms() const noexcept
    {
        return terms_;
    }
    bool is_zero() const noexcept
    {
        return terms_.empty();
    }
    std::size_t size() const noexcept
    {
        return terms_.size();
    }
    Rational coeff(const Exponent &e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    Rational constant_term() const
    {
        return coeff(Exponent(dim_, 0));
    }
    bool is_polynomial() const
    {
        for (const auto &[e, c] : terms_) {
            for (long v : e) {
                if (v < 0) {
                    return false;
                }
            }
        }
        return true;
    }

    void add_term(const Exponent &e, const Rational &c)
    {
        if (e.size() != dim_) {
            throw DomainError("LaurentPoly: exponent of length " + std::to_string(e.size()) + " in dimension " +
                              std::to_string(dim_));
        }
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    LaurentPoly &operator+=(const LaurentPoly &o)
    {
        check_dim(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }
    LaurentPoly &operator-=(const LaurentPoly &o)
    {
        check_dim(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, -c);
        }
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly &b)
    {
        return a += b;
    }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly &b)
    {
        return a -= b;
    }
    friend LaurentPoly operator*(const LaurentPoly &a, const LaurentPoly &b)
    {
        a.check_dim(b);
        LaurentPoly r(a.dim_);
        for (const auto &[ea, ca] : a.terms_) {
            for (const auto &[eb, cb] : b.terms_) {
                Exponent e(ea);
                for (std::size_t j = 0; j < e.size(); ++j) {
                    e[j] += eb[j];
                }
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }
    friend LaurentPoly operator*(LaurentPoly a, const Rational &s)
    {
        if (s == 0) {
            return LaurentPoly(a.dim_);
        }
        for (auto &[e, c] : a.terms_) {
            c *= s;
        }
        return a;
    }
    friend bool operator==(const LaurentPoly &a, const LaurentPoly &b)
    {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }
    LaurentPoly pow(unsigned k) const
    {
        LaurentPoly r = constant(dim_, 1);
        for (unsigned i = 0; i < k; ++i) {
            r = r * *this;
        }
        return r;
    }
    LaurentPoly shift(const Exponent &m) const
    {
        LaurentPoly r(dim_);
        for (const auto &[e, c] : terms_) {
            Exponent f(e);
            for (std::size_t j = 0; j < dim_; ++j) {
                f[j] += m.at(j);
            }
            r.terms_.emplace(std::move(f), c);
        }
        return r;
    }

    Rational eval(const std::vector<Rational> &z) const
    {
        check_point(z.size());
        Rational s = 0;
        for (const auto &[e, c] : terms_) {
            Rational t = c;
            for (std::size_t j = 0; j < dim_; ++j) {
                if (e[j] == 0) {
                    continue;
                }
                if (z[j] == 0) {
                    if (e[j] < 0) {
                        throw DomainError("eval: zero coordinate with negative exponent");
                    }
                    t = 0;
                    break;
                }
                Rational f;
                mpz_pow_ui(f.get_num_mpz_t(), z[j].get_num_mpz_t(), static_cast<unsigned long>(std::labs(e[j])));
                mpz_pow_ui(f.get_den_mpz_t(), z[j].get_den_mpz_t(), static_cast<unsigned long>(std::labs(e[j])));
                f.canonicalize();
                t = e[j] > 0 ? Rational(t * f) : Rational(t / f);
            }
            s += t;
        }
        return s;
    }
    ComplexBall eval(const std::vector<ComplexBall> &z) const
    {
        check_point(z.size());
        const mpfr_prec_t p = z.empty() ? 53 : z[0].prec();
        ComplexBall s(p);
        for (const auto &[e, c] : terms_) {
            ComplexBall t = ComplexBall::from_rational(c, p);
            for (std::size_t j = 0; j < dim_; ++j) {
                if (e[j] == 0) {
                    continue;
                }
                if (e[j] < 0 && z[j].contains_zero()) {
                    throw DomainError("eval: coordinate ball contains 0 under a negative exponent");
                }
                t *= lacuna::pow(z[j], e[j]);
            }
            s += t;
        }
        return s;
    }

    LaurentPoly derivative(std::size_t j) const
    {
        LaurentPoly r(dim_);
        for (const auto &[e, c] : terms_) {
            if (e.at(j) == 0) {
                continue;
            }
            Exponent f(e);
            f[j] -= 1;
            r.add_term(f, c * Rational(e[j]));
        }
        return r;
    }
    std::vector<LaurentPoly> gradient() const
    {
        std::vector<LaurentPoly> g;
        for (std::size_t j = 0; j < dim_; ++j) {
            g.push_back(derivative(j));
        }
        return g;
    }
    // z_j * dp/dz_j
    LaurentPoly log_derivative(std::size_t j) const
    {
        LaurentPoly r(dim_);
        for (const auto &[e, c] : terms_) {
            r.add_term(e, c * Rational(e.at(j)));
        }
        return r;
    }

    // Substitutes z_j := t_{cls[j]}; the result lives in `classes` variables.
    LaurentPoly restrict_classes(const std::vector<std::size_t> &cls, std::size_t classes) const
    {
        if (cls.size() != dim_) {
            throw DomainError("restrict: partition covers " + std::to_string(cls.size()) + " of " +
                              std::to_string(dim_) + " variables");
        }
        LaurentPoly r(classes);
        for (const auto &[e, c] : terms_) {
            Exponent f(classes, 0);
            for (std::size_t j = 0; j < dim_; ++j) {
                f.at(cls[j]) += e[j];
            }
            r.add_term(f, c);
        }
        return r;
    }

    // Univariate view; requires dim 1 and nonnegative exponents.
    UPoly to_upoly() const
    {
        if (dim_ != 1 || !is_polynomial()) {
            throw DomainError("to_upoly: not a univariate polynomial");
        }
        std::vector<Rational> c;
        for (const auto &[e, a] : terms_) {
            const auto k = static_cast<std::size_t>(e[0]);
            if (c.size() <= k) {
                c.resize(k + 1);
            }
            c[k] = a;
        }
        return UPoly(std::move(c));
    }

    std::string to_string() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string s;
        for (const auto &[e, c] : terms_) {
            if (!s.empty()) {
                s += c < 0 ? " - " : " + ";
            } else if (c < 0) {
                s += "-";
            }
            const Rational a = abs(c);
            bool mono = false;
            std::string m;
            for (std::size_t j = 0; j < dim_; ++j) {
                if (e[j] == 0) {
                    continue;
                }
                if (!m.empty()) {
                    m += "*";
                }
                m += "z" + std::to_string(j + 1);
                if (e[j] != 1) {
                    m += "^" + std::to_string(e[j]);
                }
                mono = true;
            }
            if (!mono) {
                s += a.get_str();
            } else if (a == 1) {
                s += m;
            } else {
                s += a.get_str() + "*" + m;
            }
        }
        return s;
    }

private:
    void check_dim(const LaurentPoly &o) const
    {
        if (o.dim_ != dim_) {
            throw DomainError("LaurentPoly: dimension mismatch");
        }
    }
    void check_point(std::size_t n) const
    {
        if (n != dim_) {
            throw DomainError("eval: point of length " + std::to_string(n) + " in dimension " +
                              std::to_string(dim_));
        }
    }

    std::size_t dim_;
    std::map<Exponent, Rational> terms_;
};

inline std::vector<ComplexBall> eval(const std::vector<LaurentPoly> &ps, const std::vector<ComplexBall> &z)
{
    std::vector<ComplexBall> out;
    for (const auto &p : ps) {
        out.push_back(p.eval(z));
    }
    return out;
}

// Partition of d variables into classes, as a class index per variable.
struct Partition {
    std::vector<std::size_t> cls;
    std::size_t classes = 0;

    static Partition identity(std::size_t d)
    {
        Partition p;
        for (std::size_t j = 0; j < d; ++j) {
            p.cls.push_back(j);
        }
        p.classes = d;
        return p;
    }
    static Partition single(std::size_t d)
    {
        return Partition{std::vector<std::size_t>(d, 0), 1};
    }
    // Groups equal entries of r (in order of first appearance).
    static Partition by_values(const std::vector<Rational> &r)
    {
        Partition p;
        std::vector<Rational> seen;
        for (const auto &v : r) {
            std::size_t k = 0;
            while (k < seen.size() && seen[k] != v) {
                ++k;
            }
            if (k == seen.size()) {
                seen.push_back(v);
            }
            p.cls.push_back(k);
        }
        p.classes = seen.size();
        return p;
    }
    std::size_t class_size(std::size_t c) const
    {
        std::size_t n = 0;
        for (auto k : cls) {
            n += k == c;
        }
        return n;
    }
    template <class T>
    std::vector<T> lift(const std::vector<T> &t) const
    {
        std::vector<T> z;
        for (auto k : cls) {
            z.push_back(t.at(k));
        }
        return z;
    }
};

inline LaurentPoly restrict_symmetric(const LaurentPoly &p, const Partition &part)
{
    return p.restrict_classes(part.cls, part.classes);
}

} // namespace lacuna

#endif
