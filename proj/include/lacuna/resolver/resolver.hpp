#ifndef LACUNA_RESOLVER_RESOLVER_HPP
#define LACUNA_RESOLVER_RESOLVER_HPP

#include <cmath>
#include <string>
#include <vector>

#include <lacuna/error.hpp>
#include <lacuna/numeric/complex_ball.hpp>
#include <lacuna/oracle/series.hpp>
#include <lacuna/resolver/expr.hpp>

namespace lacuna
{

struct MultiplicityResult {
    long m = 0;
    Ball residual; // |numeric / unit - m|
    ComplexBall unit_constant;
    ComplexBall numeric_constant;
};

inline constexpr double default_multiplicity_tolerance = 1e-9;

// Nearest nonnegative integer to numeric / unit, accepted only when the
// whole ratio ball lies within `tolerance` of it.
inline MultiplicityResult resolve_multiplicity(const ComplexBall &numeric, const ComplexBall &unit,
                                               double tolerance = default_multiplicity_tolerance)
{
    if (unit.contains_zero()) {
        throw DomainError("resolve_multiplicity: unit constant may vanish");
    }
    const ComplexBall ratio = numeric / unit;
    if (!(ratio.re().rad().to_double() < 0.25 && ratio.im().rad().to_double() < 0.25)) {
        throw PrecisionError("resolve_multiplicity: insufficient precision, ratio " + ratio.to_string(10));
    }
    const double x = ratio.re().mid().to_double();
    if (!std::isfinite(x)) {
        throw PrecisionError("resolve_multiplicity: insufficient precision, ratio " + ratio.to_string(10));
    }
    MultiplicityResult res;
    res.m = std::lround(x);
    res.residual = abs(ratio - ComplexBall::from_int(res.m, ratio.prec()));
    res.unit_constant = unit;
    res.numeric_constant = numeric;
    const double up = mpfr_get_d(res.residual.upper().get(), MPFR_RNDU);
    if (res.m < 0 || !(up < 0.5) || !(up < tolerance)) {
        throw HypothesisError("resolve_multiplicity: template mismatch, ratio " + ratio.to_string(15) +
                              " is not close to a nonnegative integer");
    }
    return res;
}

struct DropWindow {
    double eps = 0;
    double sup_log = 0;     // max_n log|a_n| - n (c2 + eps)
    std::size_t argmax = 0;
    bool bounded = false;   // supremum not attained in the last quarter of the range
};

struct DropReport {
    std::size_t n_max = 0;
    Ball rate;              // log|a_n| / n at n_max
    Ball gap_c1;            // c1 - rate
    Ball gap_c2;            // rate - c2
    double rate_min = 0;    // over n in [n_max/2, n_max]
    double rate_max = 0;
    std::vector<DropWindow> windows;
};

// Exponential-rate diagnostic for an exact sequence against the heights c1 > c2.
inline DropReport drop_report(const std::vector<Rational> &seq, const Ball &c1, const Ball &c2, std::size_t n_max,
                              const std::vector<double> &eps = {0.1, 0.01}, mpfr_prec_t prec = 128)
{
    if (n_max == 0 || n_max >= seq.size()) {
        throw DomainError("drop_report: sequence has " + std::to_string(seq.size()) + " terms, need " +
                          std::to_string(n_max + 1));
    }
    if (n_max < 8) {
        throw DomainError("drop_report: sequence too short");
    }
    if (seq[n_max] == 0) {
        throw DomainError("drop_report: last term vanishes");
    }
    std::vector<double> logs(n_max + 1, -INFINITY);
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (seq[n] != 0) {
            logs[n] = detail::log_abs(seq[n], 64).mid().to_double();
        }
    }
    DropReport rep;
    rep.n_max = n_max;
    rep.rate = detail::log_abs(seq[n_max], prec) / Ball::from_int(static_cast<long>(n_max), prec);
    rep.gap_c1 = c1 - rep.rate;
    rep.gap_c2 = rep.rate - c2;
    rep.rate_min = INFINITY;
    rep.rate_max = -INFINITY;
    for (std::size_t n = std::max<std::size_t>(1, n_max / 2); n <= n_max; ++n) {
        if (std::isfinite(logs[n])) {
            const double r = logs[n] / static_cast<double>(n);
            rep.rate_min = std::min(rep.rate_min, r);
            rep.rate_max = std::max(rep.rate_max, r);
        }
    }
    const double base = c2.mid().to_double();
    for (const double e : eps) {
        DropWindow w;
        w.eps = e;
        w.sup_log = -INFINITY;
        double head = -INFINITY;
        const std::size_t cut = n_max - n_max / 4;
        for (std::size_t n = 0; n <= n_max; ++n) {
            const double v = logs[n] - static_cast<double>(n) * (base + e);
            if (v > w.sup_log) {
                w.sup_log = v;
                w.argmax = n;
            }
            if (n < cut) {
                head = std::max(head, v);
            }
        }
        w.bounded = w.argmax < cut || w.sup_log <= head;
        rep.windows.push_back(w);
    }
    return rep;
}

} // namespace lacuna

#endif
