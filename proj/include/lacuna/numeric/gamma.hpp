#ifndef LACUNA_NUMERIC_GAMMA_HPP
#define LACUNA_NUMERIC_GAMMA_HPP

#include <mutex>
#include <vector>

#include <lacuna/error.hpp>
#include <lacuna/numeric/complex_ball.hpp>
#include <lacuna/numeric/rational.hpp>

namespace lacuna
{

namespace detail
{

// B_0, B_2, B_4, ... (even-index Bernoulli numbers), grown on demand.
inline const std::vector<Rational> &even_bernoulli(std::size_t count)
{
    static std::mutex mutex;
    static std::vector<Rational> all_b{Rational(1), Rational(-1, 2)}; // B_0, B_1
    static std::vector<Rational> even{Rational(1)};
    std::lock_guard<std::mutex> lock(mutex);
    while (even.size() < count) {
        // B_m = -1/(m+1) sum_{j<m} binom(m+1, j) B_j
        const std::size_t m = all_b.size();
        Rational s = 0;
        Integer binom = 1; // binom(m+1, 0)
        for (std::size_t j = 0; j < m; ++j) {
            s += Rational(binom) * all_b[j];
            binom = binom * Integer(static_cast<unsigned long>(m + 1 - j)) / Integer(static_cast<unsigned long>(j + 1));
        }
        Rational b = -s / Rational(static_cast<long>(m + 1));
        b.canonicalize();
        all_b.push_back(b);
        if (m % 2 == 0) {
            even.push_back(b);
        }
    }
    return even;
}

// log Gamma(w) by the Stirling series for Re(w) large and positive. The
// remainder after K terms is bounded by the first omitted term times
// sec(arg(w)/2)^(2K+2).
inline ComplexBall stirling_log_gamma(const ComplexBall &w, const Ball &abs_w, const Ball &sec_half_arg)
{
    const mpfr_prec_t p = w.prec();
    const Ball half_log_2pi = log(ball_pi(p).mul_2exp(1)).mul_2exp(-1);
    ComplexBall s = (w - ComplexBall::from_rational(Rational(1, 2), p)) * log(w) - w + ComplexBall(half_log_2pi);
    const ComplexBall inv_w = ComplexBall::from_int(1, p) / w;
    const ComplexBall inv_w2 = inv_w * inv_w;
    ComplexBall pw = inv_w; // w^{-(2k-1)}
    // target: remainder below 2^-(p+8) relative to O(1)
    const Mag target = Mag::pow2(-static_cast<long>(p) - 8);
    for (std::size_t k = 1;; ++k) {
        const auto &b = even_bernoulli(k + 2);
        const Rational c = b[k] / Rational(static_cast<long>(2 * k * (2 * k - 1)));
        s += pw * c;
        // bound on the next term
        const Rational cn = abs(b[k + 1]) / Rational(static_cast<long>((2 * k + 2) * (2 * k + 1)));
        const Ball bound = Ball::from_rational(cn, p) * pow(sec_half_arg, Rational(static_cast<long>(2 * k + 2))) /
                           pow(abs_w, Rational(static_cast<long>(2 * k + 1)));
        const Mag bu = bound.abs_upper();
        if (bu <= target) {
            return s.add_error(bu);
        }
        if (k > 100000) {
            throw PrecisionError("Stirling series did not converge");
        }
        pw = pw * inv_w2;
    }
}

} // namespace detail

// Gamma(z) for a complex ball z away from the poles {0, -1, -2, ...}:
// recurrence shift to large real part, then the Stirling series.
inline ComplexBall gamma(const ComplexBall &z)
{
    const mpfr_prec_t out_prec = z.prec();
    if (z.im().contains_zero()) {
        Float r(out_prec);
        mpfr_round(r.get(), z.re().mid().get());
        if (r.sign() <= 0 && (z.re() - Ball(r, Mag())).contains_zero()) {
            throw DomainError("gamma: argument at or near a pole");
        }
    }
    const mpfr_prec_t p = out_prec + 32;
    // shift so that Re(w) >= max(20, p)
    const double target = std::max(20.0, static_cast<double>(p));
    const double re = z.re().mid().to_double();
    const long shift = re >= target ? 0 : static_cast<long>(std::ceil(target - re));
    ComplexBall w = z.with_prec(p);
    ComplexBall denom = ComplexBall::from_int(1, p);
    for (long j = 0; j < shift; ++j) {
        denom *= w;
        w += ComplexBall::from_int(1, p);
    }
    const Ball aw = abs(w);
    // sec(arg/2) = sqrt(2 |w| / (|w| + Re w))
    const Ball sec_half = sqrt((aw + aw) / (aw + w.re()));
    const ComplexBall lg = detail::stirling_log_gamma(w, aw, sec_half);
    return (exp(lg) / denom).with_prec(out_prec);
}

inline ComplexBall gamma(const Rational &a, mpfr_prec_t prec)
{
    if (a.get_den() == 1 && a <= 0) {
        throw DomainError("gamma: pole at nonpositive integer " + a.get_str());
    }
    return gamma(ComplexBall::from_rational(a, prec));
}

} // namespace lacuna

#endif
