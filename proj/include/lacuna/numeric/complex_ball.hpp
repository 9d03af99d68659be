#ifndef LACUNA_NUMERIC_COMPLEX_BALL_HPP
#define LACUNA_NUMERIC_COMPLEX_BALL_HPP

#include <string>
#include <utility>

#include <lacuna/numeric/ball.hpp>

namespace lacuna
{

// Rectangular complex enclosure: a real ball for each component. The
// single-radius view rad() is the max-metric radius used in serialization.
class ComplexBall
{
public:
    explicit ComplexBall(mpfr_prec_t prec = 53) : re_(prec), im_(prec) {}
    ComplexBall(Ball re, Ball im) : re_(std::move(re)), im_(std::move(im)) {}
    explicit ComplexBall(const Ball &re) : re_(re), im_(re.prec()) {}

    static ComplexBall from_rational(const Rational &re, const Rational &im, mpfr_prec_t prec)
    {
        return ComplexBall(Ball::from_rational(re, prec), Ball::from_rational(im, prec));
    }
    static ComplexBall from_rational(const Rational &re, mpfr_prec_t prec)
    {
        return ComplexBall(Ball::from_rational(re, prec), Ball(prec));
    }
    static ComplexBall from_int(long v, mpfr_prec_t prec)
    {
        return ComplexBall(Ball::from_int(v, prec), Ball(prec));
    }
    static ComplexBall imaginary_unit(mpfr_prec_t prec)
    {
        return ComplexBall(Ball(prec), Ball::from_int(1, prec));
    }

    const Ball &re() const noexcept
    {
        return re_;
    }
    const Ball &im() const noexcept
    {
        return im_;
    }
    mpfr_prec_t prec() const noexcept
    {
        return std::max(re_.prec(), im_.prec());
    }
    Mag rad() const
    {
        return Mag::max(re_.rad(), im_.rad());
    }
    bool is_exact() const noexcept
    {
        return re_.is_exact() && im_.is_exact();
    }
    bool is_finite() const noexcept
    {
        return re_.is_finite() && im_.is_finite();
    }
    bool is_real() const
    {
        return im_.is_exact() && im_.mid().is_zero();
    }
    bool contains_zero() const
    {
        return re_.contains_zero() && im_.contains_zero();
    }
    bool excludes_zero() const
    {
        return !contains_zero();
    }
    bool contains(const ComplexBall &o) const
    {
        return re_.contains(o.re_) && im_.contains(o.im_);
    }
    bool contains(const Rational &re, const Rational &im = 0) const
    {
        return re_.contains(re) && im_.contains(im);
    }
    bool overlaps(const ComplexBall &o) const
    {
        return re_.overlaps(o.re_) && im_.overlaps(o.im_);
    }
    // Upper bound of |z| over the enclosure.
    Mag abs_upper() const
    {
        const Mag a = re_.abs_upper(), b = im_.abs_upper();
        return (a * a + b * b).sqrt();
    }
    // Lower bound of |z| over the enclosure.
    Float abs_lower() const
    {
        const Float a = re_.abs_lower(), b = im_.abs_lower();
        Float h(Mag::precision);
        mpfr_hypot(h.get(), a.get(), b.get(), MPFR_RNDD);
        return h;
    }
    // Euclidean radius bound of the enclosing disk around the midpoint.
    Mag disk_radius() const
    {
        return re_.rad() + im_.rad();
    }
    ComplexBall mid_ball() const
    {
        return ComplexBall(re_.mid_ball(), im_.mid_ball());
    }
    ComplexBall with_prec(mpfr_prec_t p) const
    {
        return ComplexBall(re_.with_prec(p), im_.with_prec(p));
    }
    ComplexBall add_error(const Mag &e) const
    {
        return ComplexBall(re_.add_error(e), im_.add_error(e));
    }
    ComplexBall conj() const
    {
        return ComplexBall(re_, -im_);
    }
    double relative_accuracy_digits() const
    {
        if (contains_zero()) {
            return 0.0;
        }
        // relative to |z|: log10(|z| / rad)
        const Mag r = rad();
        if (r.is_zero()) {
            return static_cast<double>(prec()) * 0.30103;
        }
        const double lo = abs_lower().to_double();
        if (lo <= 0) {
            return 0.0;
        }
        long er = 0;
        const double fr = mpfr_get_d_2exp(&er, r.value().get(), MPFR_RNDU);
        long el = 0;
        const double fl = mpfr_get_d_2exp(&el, abs_lower().get(), MPFR_RNDD);
        const double bits = static_cast<double>(el - er) + std::log2(fl / fr);
        return std::max(0.0, bits * 0.30103);
    }
    std::string to_string(std::size_t digits = 20) const
    {
        return "(" + re_.to_string(digits) + " + " + im_.to_string(digits) + "i)";
    }

    ComplexBall operator-() const
    {
        return ComplexBall(-re_, -im_);
    }
    ComplexBall &operator+=(const ComplexBall &o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    ComplexBall &operator-=(const ComplexBall &o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    ComplexBall &operator*=(const ComplexBall &o)
    {
        return *this = *this * o;
    }
    ComplexBall &operator/=(const ComplexBall &o)
    {
        return *this = *this / o;
    }

    friend ComplexBall operator+(const ComplexBall &a, const ComplexBall &b)
    {
        return ComplexBall(a.re_ + b.re_, a.im_ + b.im_);
    }
    friend ComplexBall operator-(const ComplexBall &a, const ComplexBall &b)
    {
        return ComplexBall(a.re_ - b.re_, a.im_ - b.im_);
    }
    friend ComplexBall operator*(const ComplexBall &a, const ComplexBall &b)
    {
        if (b.is_real()) {
            return ComplexBall(a.re_ * b.re_, a.im_ * b.re_);
        }
        if (a.is_real()) {
            return ComplexBall(a.re_ * b.re_, a.re_ * b.im_);
        }
        return ComplexBall(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
    }
    friend ComplexBall operator*(const ComplexBall &a, const Ball &b)
    {
        return ComplexBall(a.re_ * b, a.im_ * b);
    }
    friend ComplexBall operator*(const ComplexBall &a, const Rational &q)
    {
        const Ball b = Ball::from_rational(q, a.prec());
        return a * b;
    }
    friend ComplexBall operator/(const ComplexBall &a, const ComplexBall &b)
    {
        if (b.is_real()) {
            return ComplexBall(a.re_ / b.re_, a.im_ / b.re_);
        }
        if (b.contains_zero()) {
            throw DomainError("complex division by a ball containing zero");
        }
        const Ball den = b.re_ * b.re_ + b.im_ * b.im_;
        const Ball nre = a.re_ * b.re_ + a.im_ * b.im_;
        const Ball nim = a.im_ * b.re_ - a.re_ * b.im_;
        return ComplexBall(nre / den, nim / den);
    }
    friend ComplexBall operator/(const ComplexBall &a, const Ball &b)
    {
        return ComplexBall(a.re_ / b, a.im_ / b);
    }
    ComplexBall mul_2exp(long e) const
    {
        return ComplexBall(re_.mul_2exp(e), im_.mul_2exp(e));
    }

private:
    Ball re_;
    Ball im_;
};

inline ComplexBall conj(const ComplexBall &z)
{
    return z.conj();
}

inline Ball abs(const ComplexBall &z)
{
    if (z.is_real()) {
        return abs(z.re());
    }
    return hypot(z.re(), z.im());
}

// Principal argument in (-pi, pi].
inline Ball arg(const ComplexBall &z)
{
    // an exact zero imaginary part may carry a negative sign bit
    if (z.im().mid().is_zero() && z.im().rad().is_zero()) {
        return atan2(Ball::from_int(0, z.im().prec()), z.re());
    }
    return atan2(z.im(), z.re());
}

namespace detail
{

// Throws when the enclosure touches the cut (-inf, 0] of the principal branch,
// unless it is an exact point on the negative axis (arg = pi there).
inline void require_off_cut(const ComplexBall &z, const char *what)
{
    if (z.is_exact()) {
        if (z.re().mid().is_zero() && z.im().mid().is_zero()) {
            throw DomainError(std::string(what) + " at zero");
        }
        return;
    }
    if (z.im().contains_zero() && !z.re().is_positive()) {
        throw DomainError(std::string(what) + ": ball straddles the branch cut on the negative real axis");
    }
}

// Adds r * lip to both components, where r bounds |z - mid(z)|.
inline ComplexBall widen(ComplexBall v, const Mag &r, const Mag &lip)
{
    if (r.is_zero()) {
        return v;
    }
    return v.add_error(r * lip);
}

// Lower bound for |w| over the disk of radius r around the midpoint of z.
inline Float disk_abs_lower(const ComplexBall &z, const Mag &r)
{
    Float h(Mag::precision);
    mpfr_hypot(h.get(), z.re().mid().get(), z.im().mid().get(), MPFR_RNDD);
    mpfr_sub(h.get(), h.get(), r.value().get(), MPFR_RNDD);
    return h;
}

} // namespace detail

// Principal square root, cut along the negative real axis.
inline ComplexBall sqrt(const ComplexBall &z)
{
    if (z.is_real() && z.re().is_nonnegative()) {
        return ComplexBall(sqrt(z.re()));
    }
    detail::require_off_cut(z, "sqrt");
    const ComplexBall c = z.mid_ball();
    const mpfr_prec_t p = z.prec();
    const Ball &x = c.re(), &y = c.im();
    const Ball m = abs(c);
    ComplexBall v(p);
    if (x.mid().sign() >= 0) {
        const Ball t = sqrt((m + x).mul_2exp(-1));
        v = ComplexBall(t, y / t.mul_2exp(1));
    } else {
        const Ball t = sqrt((m - x).mul_2exp(-1));
        const Ball ay = abs(y);
        const Ball s = y.mid().sign() < 0 ? -t : t;
        v = ComplexBall(ay / t.mul_2exp(1), s);
    }
    const Mag r = z.disk_radius();
    if (r.is_zero()) {
        return v;
    }
    // |sqrt'(w)| = 1 / (2 sqrt|w|)
    const Float lo = detail::disk_abs_lower(z, r);
    if (lo.sign() <= 0) {
        throw DomainError("sqrt of a ball containing zero");
    }
    Float s(Mag::precision);
    mpfr_sqrt(s.get(), lo.get(), MPFR_RNDD);
    mpfr_mul_2ui(s.get(), s.get(), 1, MPFR_RNDD);
    return detail::widen(v, r, Mag::div_lower(Mag::from_double(1.0), s));
}

// Principal logarithm, imaginary part in (-pi, pi].
inline ComplexBall log(const ComplexBall &z)
{
    if (z.is_real() && z.re().is_positive()) {
        return ComplexBall(log(z.re()));
    }
    detail::require_off_cut(z, "log");
    const ComplexBall c = z.mid_ball();
    ComplexBall v(log(abs(c)), arg(c));
    const Mag r = z.disk_radius();
    if (r.is_zero()) {
        return v;
    }
    const Float lo = detail::disk_abs_lower(z, r);
    if (lo.sign() <= 0) {
        throw DomainError("log of a ball containing zero");
    }
    return detail::widen(v, r, Mag::div_lower(Mag::from_double(1.0), lo));
}

inline ComplexBall exp(const ComplexBall &z)
{
    if (z.is_real()) {
        return ComplexBall(exp(z.re()));
    }
    const ComplexBall c = z.mid_ball();
    const Ball e = exp(c.re());
    ComplexBall v(e * cos(c.im()), e * sin(c.im()));
    const Mag r = z.disk_radius();
    if (r.is_zero()) {
        return v;
    }
    // |exp'| <= exp(Re(mid) + r) on the disk
    const Ball bound = exp(c.re().add_error(r));
    return detail::widen(v, r, bound.abs_upper());
}

inline ComplexBall cos(const ComplexBall &z)
{
    if (z.is_real()) {
        return ComplexBall(cos(z.re()));
    }
    const ComplexBall c = z.mid_ball();
    ComplexBall v(cos(c.re()) * cosh(c.im()), -(sin(c.re()) * sinh(c.im())));
    const Mag r = z.disk_radius();
    if (r.is_zero()) {
        return v;
    }
    // |sin w| <= cosh(|Im w|) <= cosh(|Im mid| + r)
    const Ball bound = cosh(Ball(Mag::abs_upper(c.im().mid()).value(), Mag()).add_error(r));
    return detail::widen(v, r, bound.abs_upper());
}

inline ComplexBall sin(const ComplexBall &z)
{
    if (z.is_real()) {
        return ComplexBall(sin(z.re()));
    }
    const ComplexBall c = z.mid_ball();
    ComplexBall v(sin(c.re()) * cosh(c.im()), cos(c.re()) * sinh(c.im()));
    const Mag r = z.disk_radius();
    if (r.is_zero()) {
        return v;
    }
    const Ball bound = cosh(Ball(Mag::abs_upper(c.im().mid()).value(), Mag()).add_error(r));
    return detail::widen(v, r, bound.abs_upper());
}

// Principal power z^q = exp(q log z) for rational q; 0^q = 0 for q > 0.
inline ComplexBall pow(const ComplexBall &z, const Rational &q)
{
    if (q == 0) {
        return ComplexBall::from_int(1, z.prec());
    }
    if (z.is_exact() && z.re().mid().is_zero() && z.im().mid().is_zero()) {
        if (q > 0) {
            return z;
        }
        throw DomainError("negative power of zero");
    }
    if (q.get_den() == 1 && mpz_fits_slong_p(q.get_num_mpz_t())) {
        long k = q.get_num().get_si();
        const bool inv = k < 0;
        if (inv) {
            k = -k;
        }
        ComplexBall acc = ComplexBall::from_int(1, z.prec()), base = z;
        while (k > 0) {
            if (k & 1) {
                acc *= base;
            }
            k >>= 1;
            if (k > 0) {
                base *= base;
            }
        }
        return inv ? ComplexBall::from_int(1, z.prec()) / acc : acc;
    }
    if (z.is_real() && z.re().is_positive()) {
        return ComplexBall(pow(z.re(), q));
    }
    return exp(log(z) * q);
}

inline ComplexBall pow(const ComplexBall &z, long k)
{
    return pow(z, Rational(k));
}

inline ComplexBall sqr(const ComplexBall &z)
{
    return z * z;
}

// Enclosure of the set {a + t : |t|_max <= r}; used to build search boxes.
inline ComplexBall inflate(const ComplexBall &z, const Mag &r)
{
    return z.add_error(r);
}

} // namespace lacuna

#endif
