#ifndef LACUNA_CONTINUATION_TRANSITION_HPP
#define LACUNA_CONTINUATION_TRANSITION_HPP

#include <cmath>
#include <string>
#include <vector>

#include <lacuna/dfinite/evaluate.hpp>
#include <lacuna/dfinite/frobenius.hpp>
#include <lacuna/dfinite/ode.hpp>
#include <lacuna/error.hpp>
#include <lacuna/numeric/matrix.hpp>

namespace lacuna
{

struct Path {
    std::vector<ComplexBall> waypoints;
    double eta = 0.5; // max |step| / distance to the nearest singular point
};

// (f, f', ..., f^(r-1)) at a point.
struct Frame {
    ComplexBall point;
    std::string kind = "derivatives";
};

struct TransitionMatrix {
    BallMatrix matrix;
    Frame from, to;
    std::vector<ComplexBall> steps; // expansion centres actually used, plus the endpoint
};

namespace detail
{

struct SingularSet {
    std::vector<ComplexBall> points;

    explicit SingularSet(std::vector<ComplexBall> pts) : points(std::move(pts)) {}
    SingularSet(const ODE &ode, mpfr_prec_t prec)
    {
        for (const auto &s : ode.singular_points(prec)) {
            points.push_back(s.value(prec));
        }
    }
    // Lower bound for the distance from z to the nearest singular point; 0 if
    // z may coincide with one.
    double distance(const ComplexBall &z) const
    {
        double best = 1e300;
        for (const auto &s : points) {
            const ComplexBall d = s - z;
            if (d.contains_zero()) {
                return 0;
            }
            best = std::min(best, mpfr_get_d(d.abs_lower().get(), MPFR_RNDD));
        }
        return best * (1 - 1e-12);
    }
    // Approximate distance from the segment [a, b] to the nearest singular point.
    double segment_distance(const ComplexBall &a, const ComplexBall &b) const
    {
        const double ax = a.re().mid().to_double(), ay = a.im().mid().to_double();
        const double bx = b.re().mid().to_double(), by = b.im().mid().to_double();
        double best = 1e300;
        for (const auto &s : points) {
            const double sx = s.re().mid().to_double(), sy = s.im().mid().to_double();
            const double dx = bx - ax, dy = by - ay;
            const double len2 = dx * dx + dy * dy;
            double t = len2 > 0 ? ((sx - ax) * dx + (sy - ay) * dy) / len2 : 0;
            t = std::clamp(t, 0.0, 1.0);
            best = std::min(best, std::hypot(ax + t * dx - sx, ay + t * dy - sy));
        }
        return best;
    }
};

// Series of the derivative-frame basis at an ordinary point c: f_i^(j)(c) = delta_ij.
inline std::vector<LogSeries> ordinary_basis(const ODE &ode, const ThetaForm &tf, const ComplexBall &c,
                                             std::size_t N, mpfr_prec_t prec)
{
    const std::size_t r = ode.order();
    const mpfr_prec_t wp = prec + 32;
    if (ode.leading()(c.with_prec(wp)).contains_zero()) {
        throw DomainError("transition: expansion point " + c.to_string(10) + " may be singular");
    }
    std::vector<std::pair<std::size_t, int>> slots;
    for (std::size_t i = 0; i < r; ++i) {
        slots.emplace_back(i, 0);
    }
    const auto cs = frobenius_group_adaptive([&](mpfr_prec_t w) { return theta_values(tf, c.with_prec(w), w); },
                                             Rational(0), std::vector<int>(r, 1), slots, 1, N, prec);
    std::vector<LogSeries> out;
    Rational fact = 1;
    for (std::size_t i = 0; i < r; ++i) {
        if (i > 1) {
            fact *= Rational(static_cast<long>(i));
        }
        LogSeries s;
        s.alpha = 0;
        const Rational scale = 1 / fact;
        for (std::size_t n = 0; n <= N; ++n) {
            s.c.push_back({(cs[i][n][0] * scale).with_prec(prec)});
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline std::size_t terms_for(mpfr_prec_t prec, double q)
{
    const double lg = -std::log2(std::max(q, 1e-6));
    return static_cast<std::size_t>(std::ceil((static_cast<double>(prec) + 24) / lg)) + 8;
}

// M[j][i] = f_i^(j)(c + h) for the derivative-frame basis at c.
inline BallMatrix step_matrix(const ODE &ode, const ThetaForm &tf, const ComplexBall &c, const ComplexBall &h,
                              double radius, std::size_t N, mpfr_prec_t prec)
{
    const std::size_t r = ode.order();
    const auto basis = ordinary_basis(ode, tf, c, N, prec);
    BallMatrix m(r, r, prec);
    for (std::size_t i = 0; i < r; ++i) {
        LogSeries s = basis[i];
        for (std::size_t j = 0; j < r; ++j) {
            m(j, i) = evaluate_series(s, h, radius);
            if (j + 1 < r) {
                s = s.derivative();
            }
        }
    }
    return m;
}

} // namespace detail

// Transition matrix in the derivative frame along a path of ordinary points.
// Segments are subdivided so each Taylor step satisfies |h| <= eta * rho.
// N = 0 picks the truncation order from the precision.
inline TransitionMatrix transition(const ODE &ode, const Path &path, mpfr_prec_t prec, std::size_t N = 0)
{
    if (path.waypoints.size() < 2) {
        throw DomainError("transition: a path needs at least two waypoints");
    }
    if (!(path.eta > 0 && path.eta < 1)) {
        throw DomainError("transition: step ratio eta must lie in (0, 1)");
    }
    const std::size_t r = ode.order();
    const detail::SingularSet sing(ode, prec);
    const detail::ThetaForm tf = detail::theta_form(ode, -static_cast<long>(r));
    TransitionMatrix tm;
    tm.matrix = BallMatrix::identity(r, prec);
    tm.from.point = path.waypoints.front();
    tm.to.point = path.waypoints.back();
    for (const auto &w : path.waypoints) {
        if (sing.distance(w) <= 0) {
            throw DomainError("transition: waypoint " + w.to_string(10) + " meets a singular point");
        }
    }
    for (std::size_t s = 0; s + 1 < path.waypoints.size(); ++s) {
        const ComplexBall a = path.waypoints[s].mid_ball().with_prec(prec);
        const ComplexBall b = path.waypoints[s + 1].mid_ball().with_prec(prec);
        if (sing.segment_distance(a, b) < 1e-300 || sing.distance(b) <= 0) {
            throw DomainError("transition: segment passes through a singular point");
        }
        ComplexBall cur = a;
        for (int guard = 0;; ++guard) {
            if (guard > 100000) {
                throw DomainError("transition: too many steps on a segment");
            }
            tm.steps.push_back(cur);
            double rho = sing.distance(cur);
            if (rho <= 0) {
                throw DomainError("transition: path meets a singular point");
            }
            const ComplexBall diff = b - cur;
            const double d = diff.abs_upper().to_double();
            if (d == 0) {
                break;
            }
            // far from every singularity the tail estimate needs a finite radius
            rho = std::min(rho, std::max(2 * d, d / path.eta));
            ComplexBall next = b;
            bool last = true;
            if (d > path.eta * rho) {
                const double t = path.eta * rho * 0.999 / d;
                next = (cur + diff * ComplexBall::from_rational(Rational(t), prec)).mid_ball();
                last = false;
            }
            const ComplexBall h = next - cur;
            const double q = h.abs_upper().to_double() / rho;
            if (q > path.eta) {
                throw DomainError("transition: step ratio " + std::to_string(q) + " exceeds eta");
            }
            const std::size_t n = N > 0 ? N : detail::terms_for(prec, q);
            tm.matrix = detail::step_matrix(ode, tf, cur, h, rho, n, prec) * tm.matrix;
            cur = next;
            if (last) {
                break;
            }
        }
    }
    tm.steps.push_back(path.waypoints.back());
    return tm;
}

} // namespace lacuna

#endif
