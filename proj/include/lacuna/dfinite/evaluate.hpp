#ifndef LACUNA_DFINITE_EVALUATE_HPP
#define LACUNA_DFINITE_EVALUATE_HPP

#include <vector>

#include <lacuna/dfinite/frobenius.hpp>
#include <lacuna/error.hpp>
#include <lacuna/numeric/complex_ball.hpp>

namespace lacuna
{

// Safety factor applied to the geometric tail estimate.
inline constexpr long tail_safety_log2 = 10;

// sum_{j,l} c[j][l] x^{alpha+j} log(x)^l/l!
struct LogSeries {
    Rational alpha;
    std::vector<std::vector<ComplexBall>> c;

    LogSeries derivative() const
    {
        LogSeries d;
        d.alpha = alpha - 1;
        for (std::size_t j = 0; j < c.size(); ++j) {
            std::vector<ComplexBall> row;
            const Rational s = alpha + Rational(static_cast<long>(j));
            for (std::size_t l = 0; l < c[j].size(); ++l) {
                ComplexBall v = c[j][l] * s;
                if (l + 1 < c[j].size()) {
                    v += c[j][l + 1];
                }
                row.push_back(std::move(v));
            }
            d.c.push_back(std::move(row));
        }
        return d;
    }
    bool has_logs() const
    {
        for (const auto &row : c) {
            for (std::size_t l = 1; l < row.size(); ++l) {
                if (!detail::is_exact_zero(row[l])) {
                    return true;
                }
            }
        }
        return false;
    }
};

inline LogSeries to_log_series(const LocalSolution &s)
{
    return LogSeries{s.alpha, s.c};
}

// Value of the series at x (principal branches), with the truncation error
// bounded by the heuristic max_{N/2<=j<=N} |c_j| rho^j q^{N+1}/(1-q) 2^10,
// q = |x|/rho. Requires q <= 0.9.
inline ComplexBall evaluate_series(const LogSeries &s, const ComplexBall &x, double radius)
{
    const mpfr_prec_t p = x.prec();
    if (s.c.empty()) {
        return ComplexBall(p);
    }
    const bool logs = s.has_logs();
    if (detail::is_exact_zero(x)) {
        if (s.alpha > 0) {
            return ComplexBall(p);
        }
        if (s.alpha < 0 || logs) {
            throw DomainError("evaluate: series is singular at its base point");
        }
        return s.c[0][0];
    }
    const double xu = x.abs_upper().to_double();
    const double q = xu / radius;
    if (!(q <= 0.9)) {
        throw DomainError("evaluate: point lies outside the certified radius of the expansion");
    }
    const std::size_t L = s.c[0].size();
    std::vector<ComplexBall> Ls;
    ComplexBall lx(p);
    if (logs) {
        lx = log(x);
    }
    ComplexBall pw = ComplexBall::from_int(1, p);
    Rational fact = 1;
    for (std::size_t l = 0; l < L; ++l) {
        if (l > 0) {
            pw *= lx;
            fact *= Rational(static_cast<long>(l));
        }
        Ls.push_back(pw * Rational(1 / fact));
    }
    ComplexBall sum(p);
    for (std::size_t l = 0; l < L; ++l) {
        if (l > 0 && !logs) {
            break;
        }
        ComplexBall h(p);
        for (std::size_t j = s.c.size(); j-- > 0;) {
            h = h * x + s.c[j][l];
        }
        sum += h * Ls[l];
    }
    // tail
    const std::size_t N = s.c.size() - 1;
    Float rl(Mag::precision);
    mpfr_set_d(rl.get(), radius, MPFR_RNDD);
    Mag rho;
    rho = Mag::from_double(radius);
    Mag M;
    for (std::size_t j = N / 2; j <= N; ++j) {
        Mag b;
        for (std::size_t l = 0; l < L; ++l) {
            if (l > 0 && !logs) {
                break;
            }
            b = b + s.c[j][l].abs_upper() * Ls[l].abs_upper();
        }
        M = Mag::max(M, b * rho.pow(j));
    }
    const Mag qm = Mag::div_lower(x.abs_upper(), rl);
    Float one_minus_q(Mag::precision);
    mpfr_ui_sub(one_minus_q.get(), 1, qm.value().get(), MPFR_RNDD);
    const Mag tail = Mag::div_lower(M * qm.pow(N + 1), one_minus_q).mul_2exp(tail_safety_log2);
    sum = sum.add_error(tail);
    if (s.alpha == 0) {
        return sum;
    }
    if (s.alpha.get_den() == 1) {
        return sum * pow(x, s.alpha.get_num().get_si());
    }
    return sum * pow(x, s.alpha);
}

// f, f', ..., f^(count-1) of a local solution at z.
inline std::vector<ComplexBall> evaluate_local(const LocalSolution &sol, const ComplexBall &z, std::size_t count = 1)
{
    const mpfr_prec_t p = z.prec();
    const ComplexBall x = z - sol.omega.value(p);
    std::vector<ComplexBall> out;
    LogSeries s = to_log_series(sol);
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(evaluate_series(s, x, sol.radius));
        if (k + 1 < count) {
            s = s.derivative();
        }
    }
    return out;
}

// Coefficients of L(y) for the truncated local solution y, grouped by power
// x^{alpha+e} (e from mu); entries through e = N + mu are unaffected by the
// truncation and must contain zero.
inline std::vector<std::vector<ComplexBall>> ode_residual(const ODE &ode, const LocalSolution &sol)
{
    const mpfr_prec_t p = sol.prec;
    const ComplexBall w = sol.omega.value(p);
    const long mu = detail::theta_shift(ode, sol.omega);
    const std::size_t N = sol.truncation();
    const std::size_t L = sol.logs();
    std::vector<std::vector<ComplexBall>> res(N + 1, std::vector<ComplexBall>(L, ComplexBall(p)));
    LogSeries d = to_log_series(sol);
    for (std::size_t i = 0; i <= ode.order(); ++i) {
        if (i > 0) {
            d = d.derivative();
        }
        // p_i(omega + x) = sum_m a_m x^m; term lands at exponent alpha - i + m + j
        const auto q = detail::taylor_coefficient_polys(ode.p[i]);
        for (std::size_t m = 0; m < q.size(); ++m) {
            const ComplexBall a = q[m](w);
            for (std::size_t j = 0; j < d.c.size(); ++j) {
                const long e = static_cast<long>(m) + static_cast<long>(j) - static_cast<long>(i) - mu;
                if (e < 0 || e > static_cast<long>(N)) {
                    continue;
                }
                for (std::size_t l = 0; l < L; ++l) {
                    res[static_cast<std::size_t>(e)][l] += a * d.c[j][l];
                }
            }
        }
    }
    return res;
}

} // namespace lacuna

#endif
