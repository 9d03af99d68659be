#ifndef LACUNA_NUMERIC_BALL_HPP
#define LACUNA_NUMERIC_BALL_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include <lacuna/error.hpp>
#include <lacuna/numeric/float.hpp>

namespace lacuna
{

// Real midpoint-radius enclosure [mid - rad, mid + rad]. The midpoint carries
// the working precision; all radius updates round upward so that every
// operation returns a ball containing the exact image of its inputs.
class Ball
{
public:
    explicit Ball(mpfr_prec_t prec = 53) : mid_(prec) {}
    Ball(Float mid, Mag rad) : mid_(std::move(mid)), rad_(std::move(rad)) {}

    static Ball from_rational(const Rational &q, mpfr_prec_t prec)
    {
        Float m(prec);
        const int t = mpfr_set_q(m.get(), q.get_mpq_t(), MPFR_RNDN);
        Mag r = Mag::rounding(m, t);
        return Ball(std::move(m), std::move(r));
    }
    static Ball from_int(long v, mpfr_prec_t prec)
    {
        Float m(prec);
        const int t = mpfr_set_si(m.get(), v, MPFR_RNDN);
        Mag r = Mag::rounding(m, t);
        return Ball(std::move(m), std::move(r));
    }
    static Ball from_float(const Float &f, mpfr_prec_t prec)
    {
        Float m(prec);
        const int t = mpfr_set(m.get(), f.get(), MPFR_RNDN);
        Mag r = Mag::rounding(m, t);
        return Ball(std::move(m), std::move(r));
    }
    // Smallest ball at `prec` containing [lo, hi].
    static Ball from_endpoints(const Float &lo, const Float &hi, mpfr_prec_t prec)
    {
        Float m(prec);
        Float s(std::max(lo.prec(), hi.prec()) + 2);
        mpfr_add(s.get(), lo.get(), hi.get(), MPFR_RNDN);
        mpfr_div_2ui(m.get(), s.get(), 1, MPFR_RNDN);
        Mag a, b;
        Float t(Mag::precision);
        mpfr_sub(t.get(), hi.get(), m.get(), MPFR_RNDU);
        a = Mag::abs_upper(t);
        mpfr_sub(t.get(), m.get(), lo.get(), MPFR_RNDU);
        b = Mag::abs_upper(t);
        return Ball(std::move(m), Mag::max(a, b));
    }
    // Parses a decimal midpoint string; one ulp of conversion error is added to rad.
    static Ball from_decimal(const std::string &mid, const std::string &rad, mpfr_prec_t prec)
    {
        Float m(prec);
        if (mpfr_set_str(m.get(), mid.c_str(), 10, MPFR_RNDN) != 0) {
            throw ParseError("invalid decimal '" + mid + "'");
        }
        Float r(Mag::precision);
        if (mpfr_set_str(r.get(), rad.c_str(), 10, MPFR_RNDU) != 0 || r.sign() < 0) {
            throw ParseError("invalid radius '" + rad + "'");
        }
        Mag u = Mag::ulp(m);
        return Ball(std::move(m), u + Mag::abs_upper(r));
    }

    const Float &mid() const noexcept
    {
        return mid_;
    }
    const Mag &rad() const noexcept
    {
        return rad_;
    }
    mpfr_prec_t prec() const noexcept
    {
        return mid_.prec();
    }
    bool is_exact() const noexcept
    {
        return rad_.is_zero();
    }
    bool is_finite() const noexcept
    {
        return mid_.is_finite() && rad_.is_finite();
    }

    Float lower() const
    {
        Float f(prec() + 2);
        mpfr_sub(f.get(), mid_.get(), rad_.value().get(), MPFR_RNDD);
        return f;
    }
    Float upper() const
    {
        Float f(prec() + 2);
        mpfr_add(f.get(), mid_.get(), rad_.value().get(), MPFR_RNDU);
        return f;
    }
    bool is_positive() const
    {
        return lower().sign() > 0;
    }
    bool is_negative() const
    {
        return upper().sign() < 0;
    }
    bool is_nonnegative() const
    {
        return lower().sign() >= 0;
    }
    bool contains_zero() const
    {
        return !is_positive() && !is_negative();
    }
    // Upper bound of |x| over the ball.
    Mag abs_upper() const
    {
        return Mag::abs_upper(mid_) + rad_;
    }
    // Lower bound of |x| over the ball (zero when the ball contains zero).
    Float abs_lower() const
    {
        Float f(Mag::precision);
        if (contains_zero()) {
            return f;
        }
        mpfr_abs(f.get(), mid_.get(), MPFR_RNDD);
        mpfr_sub(f.get(), f.get(), rad_.value().get(), MPFR_RNDD);
        if (f.sign() < 0) {
            mpfr_set_zero(f.get(), 1);
        }
        return f;
    }
    bool contains(const Rational &q) const
    {
        Float lo(prec() + 64), hi(prec() + 64);
        mpfr_sub_q(lo.get(), mid_.get(), q.get_mpq_t(), MPFR_RNDD);
        mpfr_sub_q(hi.get(), mid_.get(), q.get_mpq_t(), MPFR_RNDU);
        // need -rad <= mid - q <= rad
        return mpfr_lessequal_p(hi.get(), rad_.value().get()) && [&] {
            Float neg(Mag::precision);
            mpfr_neg(neg.get(), rad_.value().get(), MPFR_RNDD);
            return mpfr_greaterequal_p(lo.get(), neg.get()) != 0;
        }();
    }
    bool contains(const Ball &o) const
    {
        return mpfr_lessequal_p(lower().get(), o.lower().get()) && mpfr_greaterequal_p(upper().get(), o.upper().get());
    }
    bool overlaps(const Ball &o) const
    {
        return mpfr_lessequal_p(lower().get(), o.upper().get()) && mpfr_lessequal_p(o.lower().get(), upper().get());
    }
    // Ball with the same midpoint and zero radius.
    Ball mid_ball() const
    {
        return Ball(mid_, Mag());
    }
    Ball with_prec(mpfr_prec_t p) const
    {
        Float m(p);
        const int t = mpfr_set(m.get(), mid_.get(), MPFR_RNDN);
        return Ball(std::move(m), rad_ + Mag::rounding(m, t));
    }
    Ball add_error(const Mag &e) const
    {
        return Ball(mid_, rad_ + e);
    }
    // Number of correct decimal digits relative to the magnitude (0 if undetermined).
    double relative_accuracy_digits() const
    {
        if (rad_.is_zero()) {
            return static_cast<double>(prec()) * 0.30103;
        }
        if (contains_zero()) {
            return 0.0;
        }
        long er = 0, em = 0;
        const double fr = mpfr_get_d_2exp(&er, rad_.value().get(), MPFR_RNDN);
        const double fm = std::abs(mpfr_get_d_2exp(&em, mid_.get(), MPFR_RNDN));
        const double bits = (static_cast<double>(em - er)) + std::log2(fm / fr);
        return std::max(0.0, bits * 0.30103);
    }
    std::string to_string(std::size_t digits = 20) const
    {
        return "[" + mid_.to_string(digits) + " +/- " + rad_.to_string() + "]";
    }

    Ball operator-() const
    {
        Ball r(*this);
        mpfr_neg(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
        if (mpfr_zero_p(r.mid_.get())) {
            mpfr_set_zero(r.mid_.get(), 1);
        }
        return r;
    }
    Ball &operator+=(const Ball &o)
    {
        return *this = *this + o;
    }
    Ball &operator-=(const Ball &o)
    {
        return *this = *this - o;
    }
    Ball &operator*=(const Ball &o)
    {
        return *this = *this * o;
    }
    Ball &operator/=(const Ball &o)
    {
        return *this = *this / o;
    }

    friend Ball operator+(const Ball &a, const Ball &b)
    {
        Float m(std::max(a.prec(), b.prec()));
        const int t = mpfr_add(m.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
        Mag r = a.rad_ + b.rad_ + Mag::rounding(m, t);
        return Ball(std::move(m), std::move(r));
    }
    friend Ball operator-(const Ball &a, const Ball &b)
    {
        Float m(std::max(a.prec(), b.prec()));
        const int t = mpfr_sub(m.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
        Mag r = a.rad_ + b.rad_ + Mag::rounding(m, t);
        return Ball(std::move(m), std::move(r));
    }
    friend Ball operator*(const Ball &a, const Ball &b)
    {
        Float m(std::max(a.prec(), b.prec()));
        const int t = mpfr_mul(m.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
        Mag r = Mag::rounding(m, t);
        if (!a.rad_.is_zero() || !b.rad_.is_zero()) {
            r += Mag::abs_upper(a.mid_) * b.rad_ + Mag::abs_upper(b.mid_) * a.rad_ + a.rad_ * b.rad_;
        }
        return Ball(std::move(m), std::move(r));
    }
    friend Ball operator/(const Ball &a, const Ball &b)
    {
        const Float blow = b.abs_lower();
        if (blow.sign() <= 0) {
            throw DomainError("division by a ball containing zero");
        }
        Float m(std::max(a.prec(), b.prec()));
        const int t = mpfr_div(m.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
        Mag r = Mag::rounding(m, t);
        if (!a.rad_.is_zero() || !b.rad_.is_zero()) {
            // |a/b - am/bm| <= (|bm| ra + |am| rb) / (|bm| * min|b|)
            const Mag num = Mag::abs_upper(b.mid_) * a.rad_ + Mag::abs_upper(a.mid_) * b.rad_;
            Float den(Mag::precision);
            mpfr_abs(den.get(), b.mid_.get(), MPFR_RNDD);
            mpfr_mul(den.get(), den.get(), blow.get(), MPFR_RNDD);
            r += Mag::div_lower(num, den);
        }
        return Ball(std::move(m), std::move(r));
    }
    friend Ball operator*(const Ball &a, const Rational &q)
    {
        return a * Ball::from_rational(q, a.prec());
    }
    Ball mul_2exp(long e) const
    {
        Ball r(*this);
        mpfr_mul_2si(r.mid_.get(), r.mid_.get(), e, MPFR_RNDN);
        r.rad_ = r.rad_.mul_2exp(e);
        return r;
    }

private:
    Float mid_;
    Mag rad_;
};

namespace detail
{

// Applies a monotone MPFR function to the endpoints of x.
template <typename Fn>
Ball monotone(const Ball &x, Fn fn, bool increasing)
{
    const mpfr_prec_t p = x.prec();
    const Float lo = x.lower(), hi = x.upper();
    Float flo(p + 8), fhi(p + 8);
    if (increasing) {
        fn(flo.get(), lo.get(), MPFR_RNDD);
        fn(fhi.get(), hi.get(), MPFR_RNDU);
    } else {
        fn(flo.get(), hi.get(), MPFR_RNDD);
        fn(fhi.get(), lo.get(), MPFR_RNDU);
    }
    return Ball::from_endpoints(flo, fhi, p);
}

// f(mid) with its rounding error plus a Lipschitz term lip * rad.
template <typename Fn>
Ball lipschitz(const Ball &x, Fn fn, const Mag &lip)
{
    Float m(x.prec());
    const int t = fn(m.get(), x.mid().get(), MPFR_RNDN);
    Mag r = Mag::rounding(m, t);
    if (!x.rad().is_zero()) {
        r += lip * x.rad();
    }
    return Ball(std::move(m), std::move(r));
}

} // namespace detail

inline Ball ball_pi(mpfr_prec_t prec)
{
    Float lo(prec + 8), hi(prec + 8);
    mpfr_const_pi(lo.get(), MPFR_RNDD);
    mpfr_const_pi(hi.get(), MPFR_RNDU);
    return Ball::from_endpoints(lo, hi, prec);
}

inline Ball ball_log2(mpfr_prec_t prec)
{
    Float lo(prec + 8), hi(prec + 8);
    mpfr_const_log2(lo.get(), MPFR_RNDD);
    mpfr_const_log2(hi.get(), MPFR_RNDU);
    return Ball::from_endpoints(lo, hi, prec);
}

inline Ball sqrt(const Ball &x)
{
    if (x.is_exact() && x.mid().is_zero()) {
        return x;
    }
    if (!x.is_nonnegative()) {
        throw DomainError("sqrt of a ball with negative part");
    }
    return detail::monotone(x, mpfr_sqrt, true);
}

inline Ball exp(const Ball &x)
{
    return detail::monotone(x, mpfr_exp, true);
}

inline Ball log(const Ball &x)
{
    if (!x.is_positive()) {
        throw DomainError("log of a ball not contained in (0, inf)");
    }
    return detail::monotone(x, mpfr_log, true);
}

inline Ball atan(const Ball &x)
{
    return detail::monotone(x, mpfr_atan, true);
}

inline Ball sinh(const Ball &x)
{
    return detail::monotone(x, mpfr_sinh, true);
}

inline Ball sin(const Ball &x)
{
    return detail::lipschitz(x, mpfr_sin, Mag::from_double(1.0));
}

inline Ball cos(const Ball &x)
{
    return detail::lipschitz(x, mpfr_cos, Mag::from_double(1.0));
}

inline Ball cosh(const Ball &x)
{
    // |sinh| <= cosh(|x|max) bounds the derivative on the ball.
    Float top(Mag::precision);
    mpfr_cosh(top.get(), x.abs_upper().value().get(), MPFR_RNDU);
    return detail::lipschitz(x, mpfr_cosh, Mag::abs_upper(top));
}

inline Ball abs(const Ball &x)
{
    if (x.contains_zero()) {
        const Mag u = x.abs_upper();
        Float lo(Mag::precision);
        return Ball::from_endpoints(lo, u.value(), x.prec());
    }
    return x.is_negative() ? -x : x;
}

// Argument of the point (x, y) in (-pi, pi]; the cut is the negative x axis.
inline Ball atan2(const Ball &y, const Ball &x)
{
    const mpfr_prec_t p = std::max(x.prec(), y.prec());
    if (x.is_exact() && y.is_exact()) {
        if (x.mid().is_zero() && y.mid().is_zero()) {
            throw DomainError("atan2(0, 0) is undefined");
        }
        Float lo(p + 8), hi(p + 8);
        mpfr_atan2(lo.get(), y.mid().get(), x.mid().get(), MPFR_RNDD);
        mpfr_atan2(hi.get(), y.mid().get(), x.mid().get(), MPFR_RNDU);
        return Ball::from_endpoints(lo, hi, p);
    }
    if (y.contains_zero() && !x.is_positive()) {
        throw DomainError("argument ball straddles the branch cut on the negative real axis");
    }
    // |grad atan2| = 1/|(x,y)|; the displacement is at most rx + ry.
    Float rho(Mag::precision);
    mpfr_hypot(rho.get(), x.mid().get(), y.mid().get(), MPFR_RNDD);
    const Mag disp = x.rad() + y.rad();
    mpfr_sub(rho.get(), rho.get(), disp.value().get(), MPFR_RNDD);
    if (rho.sign() <= 0) {
        throw DomainError("argument of a ball containing zero");
    }
    Float lo(p + 8), hi(p + 8);
    mpfr_atan2(lo.get(), y.mid().get(), x.mid().get(), MPFR_RNDD);
    mpfr_atan2(hi.get(), y.mid().get(), x.mid().get(), MPFR_RNDU);
    return Ball::from_endpoints(lo, hi, p).add_error(Mag::div_lower(disp, rho));
}

// x^q for x > 0 and rational q.
inline Ball pow(const Ball &x, const Rational &q)
{
    if (q == 0) {
        return Ball::from_int(1, x.prec());
    }
    if (x.is_exact() && x.mid().is_zero() && q > 0) {
        return x;
    }
    return exp(log(x) * q);
}

inline Ball sqr(const Ball &x)
{
    if (!x.contains_zero()) {
        return x * x;
    }
    const Mag u = x.abs_upper();
    return Ball::from_endpoints(Float(x.prec()), (u * u).value(), x.prec());
}

inline Ball hypot(const Ball &x, const Ball &y)
{
    if (x.contains_zero() && y.contains_zero()) {
        const Mag ux = x.abs_upper(), uy = y.abs_upper();
        return Ball::from_endpoints(Float(x.prec()), (ux * ux + uy * uy).sqrt().value(), std::max(x.prec(), y.prec()));
    }
    return sqrt(sqr(x) + sqr(y));
}

} // namespace lacuna

#endif
