#ifndef LACUNA_DFINITE_ODE_HPP
#define LACUNA_DFINITE_ODE_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <lacuna/algebra/roots.hpp>
#include <lacuna/error.hpp>
#include <lacuna/poly/upoly.hpp>

namespace lacuna
{

// p_r(z) f^(r) + ... + p_1(z) f' + p_0(z) f = 0
struct ODE {
    std::vector<UPoly> p;

    ODE() = default;
    explicit ODE(std::vector<UPoly> coeffs) : p(std::move(coeffs))
    {
        if (p.size() < 2) {
            throw ParseError("ODE must have order at least 1");
        }
        if (p.back().is_zero()) {
            throw ParseError("ODE leading coefficient is identically zero");
        }
    }
    std::size_t order() const noexcept
    {
        return p.size() - 1;
    }
    const UPoly &leading() const
    {
        return p.back();
    }
    int max_degree() const
    {
        int d = 0;
        for (const auto &c : p) {
            d = std::max(d, c.degree());
        }
        return d;
    }
    // Distinct roots of the leading coefficient.
    std::vector<AlgebraicNumber> singular_points(mpfr_prec_t prec) const
    {
        std::vector<AlgebraicNumber> out;
        if (leading().degree() <= 0) {
            return out;
        }
        for (auto &r : isolate_roots(leading(), prec)) {
            out.push_back(std::move(r.value));
        }
        return out;
    }
};

// sum_{k=0}^{s} q_k(n) c_{n+k} = 0 for all n >= start, with c_m = 0 for m < 0.
struct Recurrence {
    std::vector<UPoly> q;
    long start = 0;

    std::size_t order() const noexcept
    {
        return q.empty() ? 0 : q.size() - 1;
    }
    // Residual of the relation at n (terms with negative index count as 0).
    Rational residual(const std::vector<Rational> &c, long n) const
    {
        Rational s = 0;
        for (std::size_t k = 0; k < q.size(); ++k) {
            const long m = n + static_cast<long>(k);
            if (m < 0) {
                continue;
            }
            s += q[k](Rational(n)) * c.at(static_cast<std::size_t>(m));
        }
        return s;
    }
};

namespace detail
{

// x(x-1)...(x-i+1) shifted: (n + a)(n + a - 1)...(n + a - i + 1) as a polynomial in n.
inline UPoly falling_factorial(long a, std::size_t i)
{
    UPoly f = UPoly::constant(1);
    for (std::size_t t = 0; t < i; ++t) {
        f = f * UPoly{Rational(a - static_cast<long>(t)), Rational(1)};
    }
    return f;
}

} // namespace detail

// Coefficient recurrence for power series solutions at 0: the term
// a z^j f^(i) sends c_m to a m(m-1)..(m-i+1) at z^{m-i+j}.
inline Recurrence ode_to_recurrence(const ODE &ode)
{
    long smin = 0, smax = 0;
    bool first = true;
    for (std::size_t i = 0; i < ode.p.size(); ++i) {
        const auto &c = ode.p[i].coeffs();
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (c[j] == 0) {
                continue;
            }
            const long s = static_cast<long>(i) - static_cast<long>(j);
            if (first) {
                smin = smax = s;
                first = false;
            }
            smin = std::min(smin, s);
            smax = std::max(smax, s);
        }
    }
    Recurrence rec;
    rec.start = smin;
    rec.q.assign(static_cast<std::size_t>(smax - smin + 1), UPoly());
    // equation at z^N with N = n - smin involves c_{N+s} = c_{n + (s - smin)}
    for (std::size_t i = 0; i < ode.p.size(); ++i) {
        const auto &c = ode.p[i].coeffs();
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (c[j] == 0) {
                continue;
            }
            const long s = static_cast<long>(i) - static_cast<long>(j);
            // m = N + s = n - smin + s
            rec.q[static_cast<std::size_t>(s - smin)] += detail::falling_factorial(s - smin, i) * c[j];
        }
    }
    while (rec.q.size() > 1 && rec.q.back().is_zero()) {
        rec.q.pop_back();
    }
    return rec;
}

// Extends the initial terms to indices 0..n.
inline std::vector<Rational> recurrence_extend(const Recurrence &rec, std::vector<Rational> c, std::size_t n)
{
    const long s = static_cast<long>(rec.order());
    const UPoly &lead = rec.q.back();
    for (std::size_t m = c.size(); m <= n; ++m) {
        const long base = static_cast<long>(m) - s;
        const Rational l = base >= rec.start ? lead(Rational(base)) : Rational(0);
        if (l == 0) {
            throw DomainError("recurrence_extend: leading coefficient vanishes at index " + std::to_string(m) +
                              "; supply initial terms through that index");
        }
        Rational acc = 0;
        for (long k = 0; k < s; ++k) {
            const long idx = base + k;
            if (idx < 0) {
                continue;
            }
            acc += rec.q[static_cast<std::size_t>(k)](Rational(base)) * c[static_cast<std::size_t>(idx)];
        }
        c.push_back(-acc / l);
    }
    c.resize(std::min(c.size(), n + 1));
    return c;
}

// Exact check that the series satisfies the coefficient recurrence of the ODE
// on every relation the window fully determines.
inline bool verify_annihilation(const ODE &ode, const std::vector<Rational> &series)
{
    const std::size_t need = ode.order() + static_cast<std::size_t>(std::max(ode.max_degree(), 0)) + 1;
    if (series.size() < need) {
        throw DomainError("verify_annihilation: window of " + std::to_string(series.size()) +
                          " terms is too short to be conclusive (need " + std::to_string(need) + ")");
    }
    const Recurrence rec = ode_to_recurrence(ode);
    const long last = static_cast<long>(series.size()) - 1 - static_cast<long>(rec.order());
    for (long n = rec.start; n <= last; ++n) {
        if (rec.residual(series, n) != 0) {
            return false;
        }
    }
    return true;
}

} // namespace lacuna

#endif
