#ifndef LACUNA_NUMERIC_FLOAT_HPP
#define LACUNA_NUMERIC_FLOAT_HPP

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

namespace lacuna
{

using Integer = mpz_class;
using Rational = mpq_class;

// RAII owner of an mpfr_t with value semantics. Copies keep the source precision.
class Float
{
public:
    explicit Float(mpfr_prec_t prec = 53)
    {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Float(const Float &o)
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Float(Float &&o) noexcept
    {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    Float &operator=(const Float &o)
    {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Float &operator=(Float &&o) noexcept
    {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Float()
    {
        mpfr_clear(v_);
    }

    static Float from_double(double x, mpfr_prec_t prec = 53)
    {
        Float f(prec);
        mpfr_set_d(f.v_, x, MPFR_RNDN);
        return f;
    }

    mpfr_ptr get() noexcept
    {
        return v_;
    }
    mpfr_srcptr get() const noexcept
    {
        return v_;
    }
    mpfr_prec_t prec() const noexcept
    {
        return mpfr_get_prec(v_);
    }
    bool is_zero() const noexcept
    {
        return mpfr_zero_p(v_) != 0;
    }
    bool is_finite() const noexcept
    {
        return mpfr_number_p(v_) != 0;
    }
    int sign() const noexcept
    {
        return mpfr_sgn(v_);
    }
    double to_double() const noexcept
    {
        return mpfr_get_d(v_, MPFR_RNDN);
    }
    // Binary exponent e with 0.5 <= |x| / 2^e < 1; meaningless for zero.
    mpfr_exp_t exponent() const noexcept
    {
        return mpfr_get_exp(v_);
    }

    // Exact conversion (every finite binary float is rational).
    Rational to_rational() const
    {
        Rational q;
        if (is_zero()) {
            return q;
        }
        mpz_class m;
        const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
        q = m;
        if (e >= 0) {
            mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
        } else {
            mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
        }
        return q;
    }

    // Decimal representation with the given number of significant digits
    // (0 lets MPFR choose enough digits to round-trip).
    std::string to_string(std::size_t digits = 0) const
    {
        if (is_zero()) {
            return "0";
        }
        if (!is_finite()) {
            return mpfr_nan_p(v_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
        }
        mpfr_exp_t exp = 0;
        char *raw = mpfr_get_str(nullptr, &exp, 10, digits, v_, MPFR_RNDN);
        std::string s(raw);
        mpfr_free_str(raw);
        std::string sign;
        if (s.front() == '-') {
            sign = "-";
            s.erase(0, 1);
        }
        while (s.size() > 1 && s.back() == '0') {
            s.pop_back();
        }
        std::string out = sign + s.substr(0, 1);
        if (s.size() > 1) {
            out += "." + s.substr(1);
        }
        if (exp - 1 != 0) {
            out += "e" + std::to_string(static_cast<long>(exp - 1));
        }
        return out;
    }

private:
    mpfr_t v_;
};

// Nonnegative error magnitude. Every operation rounds upward, so a Mag is
// always an upper bound for the quantity it tracks.
class Mag
{
public:
    static constexpr mpfr_prec_t precision = 64;

    Mag() : v_(precision) {}

    static Mag zero()
    {
        return Mag();
    }
    static Mag from_double(double x)
    {
        Mag m;
        mpfr_set_d(m.v_.get(), std::abs(x), MPFR_RNDU);
        return m;
    }
    // Upper bound for |x|.
    static Mag abs_upper(const Float &x)
    {
        Mag m;
        mpfr_abs(m.v_.get(), x.get(), MPFR_RNDU);
        return m;
    }
    // Lower bound for |x| (returned as a Float, since it is not an upper bound).
    static Float abs_lower(const Float &x)
    {
        Float f(precision);
        mpfr_abs(f.get(), x.get(), MPFR_RNDD);
        return f;
    }
    static Mag from_rational(const Rational &q)
    {
        Mag m;
        mpfr_set_q(m.v_.get(), q.get_mpq_t(), MPFR_RNDU);
        mpfr_abs(m.v_.get(), m.v_.get(), MPFR_RNDU);
        return m;
    }
    // 2^e
    static Mag pow2(long e)
    {
        Mag m;
        mpfr_set_ui_2exp(m.v_.get(), 1, e, MPFR_RNDU);
        return m;
    }
    // One unit in the last place of x (zero for x == 0).
    static Mag ulp(const Float &x)
    {
        if (x.is_zero() || !x.is_finite()) {
            return Mag();
        }
        return pow2(static_cast<long>(x.exponent()) - static_cast<long>(x.prec()));
    }
    // Rounding error committed when an MPFR call returned `ternary` into x.
    static Mag rounding(const Float &x, int ternary)
    {
        return ternary == 0 ? Mag() : ulp(x);
    }

    const Float &value() const noexcept
    {
        return v_;
    }
    bool is_zero() const noexcept
    {
        return v_.is_zero();
    }
    bool is_finite() const noexcept
    {
        return v_.is_finite();
    }
    double to_double() const noexcept
    {
        return mpfr_get_d(v_.get(), MPFR_RNDU);
    }
    std::string to_string() const
    {
        return v_.to_string(10);
    }

    Mag &operator+=(const Mag &o)
    {
        mpfr_add(v_.get(), v_.get(), o.v_.get(), MPFR_RNDU);
        return *this;
    }
    Mag &operator*=(const Mag &o)
    {
        mpfr_mul(v_.get(), v_.get(), o.v_.get(), MPFR_RNDU);
        return *this;
    }
    friend Mag operator+(Mag a, const Mag &b)
    {
        return a += b;
    }
    friend Mag operator*(Mag a, const Mag &b)
    {
        return a *= b;
    }
    // Upper bound for a / b where b is a lower bound of a positive quantity.
    static Mag div_lower(const Mag &a, const Float &b_lower)
    {
        Mag m;
        mpfr_div(m.v_.get(), a.v_.get(), b_lower.get(), MPFR_RNDU);
        return m;
    }
    Mag mul_2exp(long e) const
    {
        Mag m;
        mpfr_mul_2si(m.v_.get(), v_.get(), e, MPFR_RNDU);
        return m;
    }
    Mag sqrt() const
    {
        Mag m;
        mpfr_sqrt(m.v_.get(), v_.get(), MPFR_RNDU);
        return m;
    }
    // Upper bound for x^k, k >= 0.
    Mag pow(unsigned long k) const
    {
        Mag m;
        mpfr_pow_ui(m.v_.get(), v_.get(), k, MPFR_RNDU);
        return m;
    }

    friend bool operator<(const Mag &a, const Mag &b)
    {
        return mpfr_less_p(a.v_.get(), b.v_.get()) != 0;
    }
    friend bool operator<=(const Mag &a, const Mag &b)
    {
        return mpfr_lessequal_p(a.v_.get(), b.v_.get()) != 0;
    }
    static Mag max(const Mag &a, const Mag &b)
    {
        return a < b ? b : a;
    }

private:
    Float v_;
};

} // namespace lacuna

#endif
