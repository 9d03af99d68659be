#ifndef LACUNA_CONTINUATION_CONNECT_HPP
#define LACUNA_CONTINUATION_CONNECT_HPP

#include <cmath>
#include <optional>
#include <vector>

#include <lacuna/continuation/transition.hpp>
#include <lacuna/dfinite/evaluate.hpp>
#include <lacuna/dfinite/frobenius.hpp>
#include <lacuna/error.hpp>

namespace lacuna
{

struct ConnectionResult {
    std::vector<ComplexBall> constants; // target = sum_i C_i b_i
    BallMatrix matrix;                  // near-basis coordinates -> far-basis coordinates
    Path path;                          // from the start point near `from` to the matching point near `to`
    double digits = 0;                  // decimal digits stable across two precisions
    mpfr_prec_t prec = 0;
    bool residual_contains_zero = false;
    bool tail_heuristic = true;
};

struct ConnectOptions {
    long digits = 50;
    mpfr_prec_t start_prec = 256;
    mpfr_prec_t max_prec = 8192;
    double eta = 0.5;
    std::vector<ComplexBall> via; // interior waypoints; empty selects the default path
};

namespace detail
{

inline BallMatrix frame_matrix(const std::vector<LocalSolution> &basis, const ComplexBall &z, std::size_t r)
{
    BallMatrix m(r, basis.size(), z.prec());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto v = evaluate_local(basis[i], z, r);
        for (std::size_t j = 0; j < r; ++j) {
            m(j, i) = v[j];
        }
    }
    return m;
}

// p + t (q - p) / |q - p|, rounded to a floating-point midpoint.
inline ComplexBall toward(const ComplexBall &p, const ComplexBall &q, double t, mpfr_prec_t prec)
{
    const ComplexBall d = q - p;
    const double len = std::hypot(d.re().mid().to_double(), d.im().mid().to_double());
    return (p + d * ComplexBall::from_rational(Rational(t / len), prec)).mid_ball();
}

} // namespace detail

// Start point at distance rho(from)/4 toward `to`, matching point at distance
// rho(to)/4 from `to` on the same segment. The straight segment is kept when
// every other singular point stays at least twice the matching distance away
// from it; otherwise one perpendicular detour waypoint is inserted.
inline Path default_path(const ODE &ode, const AlgebraicNumber &from, const AlgebraicNumber &to,
                         const std::vector<ComplexBall> &via, double eta, mpfr_prec_t prec)
{
    const ComplexBall wf = from.value(prec), wt = to.value(prec);
    const detail::SingularSet sing(ode, prec);
    const double rf = detail::nearest_other_singularity(ode, wf, prec);
    const double rt = detail::nearest_other_singularity(ode, wt, prec);
    if (wf.overlaps(wt)) {
        throw DomainError("connect: source and target points coincide");
    }
    Path path;
    path.eta = eta;
    const ComplexBall first = via.empty() ? wt : via.front();
    const ComplexBall last = via.empty() ? wf : via.back();
    const ComplexBall za = detail::toward(wf, first, rf / 4, prec);
    const ComplexBall zm = detail::toward(wt, last, rt / 4, prec);
    path.waypoints.push_back(za);
    for (const auto &v : via) {
        path.waypoints.push_back(v.mid_ball().with_prec(prec));
    }
    if (via.empty()) {
        const double need = rt / 2;
        std::optional<ComplexBall> bad;
        for (const auto &s : sing.points) {
            if (s.overlaps(wf) || s.overlaps(wt)) {
                continue;
            }
            if (detail::SingularSet(std::vector<ComplexBall>{s}).segment_distance(za, zm) < need) {
                bad = s;
            }
        }
        if (bad) {
            const ComplexBall mid = (za + zm) * Rational(1, 2);
            const ComplexBall d = zm - za;
            const ComplexBall perp = d * ComplexBall::imaginary_unit(prec) * Rational(1, 2);
            const ComplexBall c1 = (mid + perp).mid_ball(), c2 = (mid - perp).mid_ball();
            const double d1 = (c1 - *bad).abs_lower().to_double(), d2 = (c2 - *bad).abs_lower().to_double();
            path.waypoints.push_back(d1 >= d2 ? c1 : c2);
        }
    }
    path.waypoints.push_back(zm);
    return path;
}

// Connection constants at a fixed precision along a given path whose first
// waypoint lies in the convergence disk of the near basis and whose last lies
// in that of the far basis.
inline ConnectionResult connect_at(const ODE &ode, const std::vector<LocalSolution> &near,
                                   const std::vector<LocalSolution> &far, const std::vector<ComplexBall> &target,
                                   const Path &path, mpfr_prec_t prec)
{
    const std::size_t r = ode.order();
    if (near.size() != r || far.size() != r || target.size() != r) {
        throw DomainError("connect: bases and target must have " + std::to_string(r) + " entries");
    }
    const ComplexBall za = path.waypoints.front().with_prec(prec);
    const ComplexBall zm = path.waypoints.back().with_prec(prec);
    const BallMatrix A = detail::frame_matrix(near, za, r);
    const BallMatrix B = detail::frame_matrix(far, zm, r);
    const TransitionMatrix T = transition(ode, path, prec);
    const BallMatrix TA = T.matrix * A;
    ConnectionResult res;
    res.matrix = solve(B, TA);
    res.constants = res.matrix.apply(target);
    res.path = path;
    res.prec = prec;
    const auto lhs = B.apply(res.constants);
    const auto rhs = TA.apply(target);
    res.residual_contains_zero = true;
    for (std::size_t i = 0; i < r; ++i) {
        res.residual_contains_zero = res.residual_contains_zero && (lhs[i] - rhs[i]).contains_zero();
    }
    return res;
}

namespace detail
{

// Digits of agreement between two enclosures of the same number, capped by
// the accuracy of each.
inline double stable_digits(const ComplexBall &lo, const ComplexBall &hi)
{
    if (!lo.overlaps(hi)) {
        return 0;
    }
    auto acc = [](const ComplexBall &z) {
        if (z.contains_zero()) {
            const double r = z.rad().to_double();
            return r == 0 ? 1e9 : -std::log10(r);
        }
        return z.relative_accuracy_digits();
    };
    return std::min(acc(lo), acc(hi));
}

inline std::size_t basis_terms(mpfr_prec_t prec)
{
    return terms_for(prec, 0.25);
}

} // namespace detail

// Connection problem with precision doubling: runs at p and 2p from
// start_prec upward and accepts once every constant agrees to the requested
// number of digits.
inline ConnectionResult connect(const ODE &ode, const AlgebraicNumber &from, const AlgebraicNumber &to,
                                const std::vector<ComplexBall> &target, const ConnectOptions &opt = {})
{
    mpfr_prec_t p = std::max<mpfr_prec_t>(opt.start_prec, static_cast<mpfr_prec_t>(opt.digits * 3.33) + 64);
    auto run = [&](mpfr_prec_t prec) {
        const auto near = frobenius_basis(ode, from, detail::basis_terms(prec), prec);
        const auto far = frobenius_basis(ode, to, detail::basis_terms(prec), prec);
        const Path path = default_path(ode, from, to, opt.via, opt.eta, prec);
        std::vector<ComplexBall> t;
        for (const auto &v : target) {
            t.push_back(v.with_prec(prec));
        }
        return connect_at(ode, near, far, t, path, prec);
    };
    std::optional<ConnectionResult> lo;
    while (true) {
        if (!lo) {
            try {
                lo = run(p);
            } catch (const PrecisionError &) {
                lo.reset();
            }
        }
        const mpfr_prec_t q = 2 * p;
        if (q > opt.max_prec) {
            break;
        }
        std::optional<ConnectionResult> hi;
        try {
            hi = run(q);
        } catch (const PrecisionError &) {
        }
        if (lo && hi) {
            double d = 1e9;
            for (std::size_t i = 0; i < hi->constants.size(); ++i) {
                d = std::min(d, detail::stable_digits(lo->constants[i], hi->constants[i]));
            }
            hi->digits = d;
            if (d >= static_cast<double>(opt.digits)) {
                return *hi;
            }
        }
        lo = std::move(hi);
        p = q;
    }
    throw PrecisionError("connect: constants did not stabilise to " + std::to_string(opt.digits) +
                         " digits within " + std::to_string(opt.max_prec) + " bits");
}

} // namespace lacuna

#endif
