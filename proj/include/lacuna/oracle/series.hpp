#ifndef LACUNA_ORACLE_SERIES_HPP
#define LACUNA_ORACLE_SERIES_HPP

#include <cmath>
#include <optional>
#include <vector>

#include <lacuna/error.hpp>
#include <lacuna/numeric/ball.hpp>
#include <lacuna/numeric/complex_ball.hpp>
#include <lacuna/ratfun/ratfun.hpp>

namespace lacuna
{

// Dense box of exact Taylor coefficients a_r, 0 <= r_j <= bound.
class CoeffBox
{
public:
    CoeffBox(std::size_t dim, std::size_t bound) : dim_(dim), bound_(bound)
    {
        std::size_t n = 1;
        for (std::size_t j = 0; j < dim; ++j) {
            n *= bound + 1;
        }
        data_.assign(n, Rational(0));
    }

    std::size_t dim() const noexcept
    {
        return dim_;
    }
    std::size_t bound() const noexcept
    {
        return bound_;
    }
    std::size_t size() const noexcept
    {
        return data_.size();
    }
    bool in_box(const Exponent &r) const
    {
        if (r.size() != dim_) {
            return false;
        }
        for (long v : r) {
            if (v < 0 || static_cast<std::size_t>(v) > bound_) {
                return false;
            }
        }
        return true;
    }
    std::size_t index(const Exponent &r) const
    {
        if (!in_box(r)) {
            throw DomainError("coefficient index outside the box");
        }
        std::size_t i = 0;
        for (long v : r) {
            i = i * (bound_ + 1) + static_cast<std::size_t>(v);
        }
        return i;
    }
    Exponent exponent(std::size_t i) const
    {
        Exponent r(dim_);
        for (std::size_t j = dim_; j-- > 0;) {
            r[j] = static_cast<long>(i % (bound_ + 1));
            i /= bound_ + 1;
        }
        return r;
    }
    const Rational &at(const Exponent &r) const
    {
        return data_[index(r)];
    }
    Rational &at(const Exponent &r)
    {
        return data_[index(r)];
    }
    const std::vector<Rational> &data() const noexcept
    {
        return data_;
    }
    std::vector<Rational> &data() noexcept
    {
        return data_;
    }

private:
    std::size_t dim_, bound_;
    std::vector<Rational> data_;
};

inline constexpr double default_box_cap = 1e8;

// Exact Taylor coefficients of P/Q^k at the origin, truncated to the box
// [0, N]^d. Writes Q = Q(0)(1 - u) and divides k times by (1 - u), each time
// solving h = g + u h coefficientwise in row-major order.
inline CoeffBox expand(const RatFun &f, std::size_t n, double cap = default_box_cap)
{
    const std::size_t d = f.dim();
    if (std::pow(static_cast<double>(n + 1), static_cast<double>(d)) > cap) {
        throw DomainError("expand: box of " + std::to_string(n + 1) + "^" + std::to_string(d) +
                          " coefficients exceeds the safety cap");
    }
    if (!f.P.is_polynomial() || !f.Q.is_polynomial()) {
        throw DomainError("expand: P and Q must be polynomials for an expansion at the origin");
    }
    const Rational q0 = f.Q.constant_term();
    if (q0 == 0) {
        throw DomainError("expand: Q(0) = 0, no power series expansion at the origin");
    }
    // u = 1 - Q/Q(0), supported off the origin
    std::vector<std::pair<Exponent, Rational>> u;
    for (const auto &[e, c] : f.Q.terms()) {
        bool zero = true;
        for (long v : e) {
            zero = zero && v == 0;
        }
        if (!zero) {
            u.emplace_back(e, -c / q0);
        }
    }
    CoeffBox h(d, n);
    h.data()[0] = 1;
    for (unsigned pass = 0; pass < f.k; ++pass) {
        for (std::size_t i = 0; i < h.size(); ++i) {
            const Exponent r = h.exponent(i);
            Rational s = h.data()[i];
            for (const auto &[m, c] : u) {
                Exponent t(r);
                bool ok = true;
                for (std::size_t j = 0; j < d; ++j) {
                    t[j] -= m[j];
                    ok = ok && t[j] >= 0;
                }
                if (ok) {
                    s += c * h.at(t);
                }
            }
            h.data()[i] = s;
        }
    }
    Rational scale = 1;
    for (unsigned pass = 0; pass < f.k; ++pass) {
        scale /= q0;
    }
    CoeffBox out(d, n);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Exponent r = out.exponent(i);
        Rational s = 0;
        for (const auto &[m, c] : f.P.terms()) {
            Exponent t(r);
            bool ok = true;
            for (std::size_t j = 0; j < d; ++j) {
                t[j] -= m[j];
                ok = ok && t[j] >= 0;
            }
            if (ok) {
                s += c * h.at(t);
            }
        }
        out.data()[i] = s * scale;
    }
    return out;
}

// a_{n r}, n = 0 .. floor(N / max r_j), for a nonnegative integer direction.
inline std::vector<Rational> diagonal(const CoeffBox &box, const std::vector<long> &r, std::size_t count = SIZE_MAX)
{
    if (r.size() != box.dim()) {
        throw DomainError("diagonal: direction dimension mismatch");
    }
    long top = 0;
    for (long v : r) {
        if (v < 0) {
            throw DomainError("diagonal: negative direction entries are not supported");
        }
        top = std::max(top, v);
    }
    if (top == 0) {
        throw DomainError("diagonal: zero direction");
    }
    const std::size_t avail = box.bound() / static_cast<std::size_t>(top) + 1;
    if (count != SIZE_MAX && count > avail) {
        throw DomainError("diagonal: index " + std::to_string(count - 1) + " lies outside the box");
    }
    const std::size_t m = count == SIZE_MAX ? avail : count;
    std::vector<Rational> out;
    for (std::size_t n = 0; n < m; ++n) {
        Exponent e(r.size());
        for (std::size_t j = 0; j < r.size(); ++j) {
            e[j] = r[j] * static_cast<long>(n);
        }
        out.push_back(box.at(e));
    }
    return out;
}

struct GrowthEstimate {
    std::size_t n = 0;
    Ball root;       // |a_n|^(1/n) at the last index
    Ball window_max; // max over the last `window` indices of |a_j|^(1/j)
};

namespace detail
{

inline Ball log_abs(const Rational &q, mpfr_prec_t prec)
{
    auto mpz_log = [prec](const Integer &z) {
        Float lo(prec + 16), hi(prec + 16);
        Float zl(prec + 16), zh(prec + 16);
        mpfr_set_z(zl.get(), z.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(zh.get(), z.get_mpz_t(), MPFR_RNDU);
        mpfr_log(lo.get(), zl.get(), MPFR_RNDD);
        mpfr_log(hi.get(), zh.get(), MPFR_RNDU);
        return Ball::from_endpoints(lo, hi, prec);
    };
    return mpz_log(abs(q.get_num())) - mpz_log(q.get_den());
}

inline GrowthEstimate growth_from_logs(const std::vector<std::optional<Ball>> &logs, std::size_t window)
{
    if (logs.size() < 2) {
        throw DomainError("growth_estimate: sequence too short");
    }
    const std::size_t n = logs.size() - 1;
    if (window == 0 || window > n) {
        window = n;
    }
    GrowthEstimate g;
    g.n = n;
    bool any = false;
    for (std::size_t j = n + 1 - window; j <= n; ++j) {
        if (!logs[j]) {
            continue;
        }
        const Ball v = exp(*logs[j] / Ball::from_int(static_cast<long>(j), logs[j]->prec()));
        if (!any || mpfr_greater_p(v.mid().get(), g.window_max.mid().get())) {
            g.window_max = v;
        }
        any = true;
    }
    if (!any) {
        throw DomainError("growth_estimate: all terms in the window are zero");
    }
    g.root = logs[n] ? exp(*logs[n] / Ball::from_int(static_cast<long>(n), logs[n]->prec())) : Ball::from_int(0, 53);
    return g;
}

} // namespace detail

// Diagnostic exponential growth estimate; no rigour is claimed for the limit.
inline GrowthEstimate growth_estimate(const std::vector<Rational> &seq, std::size_t window, mpfr_prec_t prec = 128)
{
    std::vector<std::optional<Ball>> logs;
    for (const auto &a : seq) {
        logs.push_back(a == 0 ? std::nullopt : std::optional<Ball>(detail::log_abs(a, prec)));
    }
    return detail::growth_from_logs(logs, window);
}

inline GrowthEstimate growth_estimate(const std::vector<ComplexBall> &seq, std::size_t window)
{
    std::vector<std::optional<Ball>> logs;
    for (const auto &a : seq) {
        logs.push_back(a.contains_zero() ? std::nullopt : std::optional<Ball>(log(abs(a))));
    }
    return detail::growth_from_logs(logs, window);
}

} // namespace lacuna

#endif
