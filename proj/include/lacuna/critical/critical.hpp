#ifndef LACUNA_CRITICAL_CRITICAL_HPP
#define LACUNA_CRITICAL_CRITICAL_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <lacuna/algebra/roots.hpp>
#include <lacuna/critical/point.hpp>
#include <lacuna/critical/system.hpp>
#include <lacuna/error.hpp>
#include <lacuna/ratfun/laurent.hpp>
#include <lacuna/ratfun/ratfun.hpp>

namespace lacuna
{

namespace detail
{

// t^m u(t) with the smallest m >= 0 that removes negative powers.
inline UPoly clear_negative_powers(const LaurentPoly &u)
{
    long lo = 0;
    for (const auto &[e, c] : u.terms()) {
        lo = std::min(lo, e[0]);
    }
    return u.shift(Exponent{-lo}).to_upoly();
}

inline bool invariant_under(const LaurentPoly &Q, const Partition &part)
{
    const std::size_t d = Q.dim();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            if (part.cls[i] != part.cls[j]) {
                continue;
            }
            LaurentPoly s(d);
            for (const auto &[e, c] : Q.terms()) {
                Exponent f(e);
                std::swap(f[i], f[j]);
                s.add_term(f, c);
            }
            if (!(s == Q)) {
                return false;
            }
        }
    }
    return true;
}

inline bool residual_ok(const PolySystem &s, const std::vector<ComplexBall> &x)
{
    for (const auto &v : s.eval(x)) {
        if (!v.contains_zero()) {
            return false;
        }
    }
    return true;
}

} // namespace detail

struct SolveOptions {
    mpfr_prec_t prec = 256;
    MultistartOptions multistart;
};

namespace detail
{

// Certifies a root of the gradient system (singular points of Q = 0), then
// checks Q and sets lambda = 0.
inline std::optional<std::vector<ComplexBall>> certify_singular(const LaurentPoly &Q, const std::vector<cdouble> &x,
                                                                std::size_t nz, mpfr_prec_t prec)
{
    const PolySystem g(nz, Q.gradient());
    std::vector<ComplexBall> z;
    for (std::size_t j = 0; j < nz; ++j) {
        z.push_back(to_ball(x[j], prec));
    }
    auto k = krawczyk_certify(g, z, prec);
    if (!k || !Q.eval(*k).contains_zero()) {
        return std::nullopt;
    }
    k->push_back(ComplexBall(prec));
    return k;
}

// Rational point inside the enclosures that solves the critical equations
// exactly, if one with small denominators exists.
inline std::optional<std::vector<Rational>> recognize_rational(const LaurentPoly &Q, const Direction &r,
                                                               const std::vector<ComplexBall> &z)
{
    std::vector<Rational> q;
    for (const auto &v : z) {
        if (!v.im().contains_zero()) {
            return std::nullopt;
        }
        auto c = reconstruct_rational(v.re());
        if (!c) {
            return std::nullopt;
        }
        q.push_back(*c);
    }
    if (Q.eval(q) != 0) {
        return std::nullopt;
    }
    std::vector<Rational> e;
    for (std::size_t j = 0; j < Q.dim(); ++j) {
        e.push_back(Q.log_derivative(j).eval(q));
    }
    for (std::size_t j = 0; j < e.size(); ++j) {
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[j] * r.r[k] != e[k] * r.r[j]) {
                return std::nullopt;
            }
        }
    }
    return q;
}

inline std::vector<CriticalPoint> lift_solutions(const LaurentPoly &Q, const Direction &r, const Partition &part,
                                                 const std::vector<SystemSolution> &sols, mpfr_prec_t prec)
{
    const PolySystem full = critical_system(Q, r);
    std::vector<CriticalPoint> out;
    for (const auto &s : sols) {
        if (!s.certified) {
            continue;
        }
        CriticalPoint pt;
        std::vector<ComplexBall> t(s.x.begin(), s.x.end() - 1);
        pt.coords = part.lift(t);
        pt.lambda = s.x.back();
        bool zero = false;
        for (const auto &z : pt.coords) {
            zero = zero || z.contains_zero();
        }
        if (zero) {
            continue;
        }
        std::vector<ComplexBall> xl = pt.coords;
        xl.push_back(pt.lambda);
        if (!residual_ok(full, xl)) {
            continue;
        }
        if (auto q = recognize_rational(Q, r, pt.coords)) {
            std::vector<AlgebraicNumber> ex;
            for (const auto &v : *q) {
                ex.emplace_back(v, prec);
            }
            pt.exact = std::move(ex);
        }
        pt.height = height(pt.coords, r);
        classify(Q, pt, prec);
        out.push_back(std::move(pt));
    }
    return out;
}

} // namespace detail

// Critical points by multistart Newton on critical_system (restricted to the
// partition classes when one is given), with Krawczyk certification; singular
// points of Q = 0 are certified on the gradient system instead.
inline std::vector<CriticalPoint> solve_critical_multistart(const LaurentPoly &Q, const Direction &r,
                                                            const SolveOptions &opt = {},
                                                            std::optional<Partition> part = std::nullopt)
{
    const Partition P = part ? *part : Partition::identity(Q.dim());
    std::vector<Rational> rc(P.classes);
    for (std::size_t j = 0; j < Q.dim(); ++j) {
        rc[P.cls[j]] = r.r[j];
    }
    const LaurentPoly Qr = restrict_symmetric(Q, P);
    // log-derivative of a representative variable of each class
    std::vector<LaurentPoly> E(P.classes, LaurentPoly(P.classes));
    std::vector<bool> have(P.classes, false);
    for (std::size_t j = 0; j < Q.dim(); ++j) {
        if (!have[P.cls[j]]) {
            E[P.cls[j]] = Q.log_derivative(j).restrict_classes(P.cls, P.classes);
            have[P.cls[j]] = true;
        }
    }
    const std::size_t n = P.classes;
    std::vector<LaurentPoly> eqs{extend_dim(Qr, n + 1)};
    const LaurentPoly lambda = LaurentPoly::variable(n + 1, n);
    for (std::size_t c = 0; c < n; ++c) {
        eqs.push_back(extend_dim(E[c], n + 1) - lambda * rc[c]);
    }
    const PolySystem sys(n + 1, eqs);
    auto keep = [n](const std::vector<cdouble> &x) {
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(x[j]) < 1e-8) {
                return false;
            }
        }
        return true;
    };
    auto fallback = [&](const std::vector<cdouble> &x) { return detail::certify_singular(Qr, x, n, opt.prec); };
    const auto sols = solve_newton_multistart(sys, opt.multistart, opt.prec, keep, fallback);
    return detail::lift_solutions(Q, r, P, sols, opt.prec);
}

// Symmetric reduction: with one class the criticality equations hold
// identically on the diagonal, so the points are the nonzero roots of
// Q(t, ..., t); with more classes the reduced system goes to the multistart
// solver.
inline std::vector<CriticalPoint> solve_symmetric(const LaurentPoly &Q, const Direction &r, const Partition &part,
                                                  const SolveOptions &opt = {})
{
    if (part.cls.size() != Q.dim() || r.dim() != Q.dim()) {
        throw DomainError("solve_symmetric: partition and direction must match the dimension");
    }
    for (std::size_t j = 0; j < Q.dim(); ++j) {
        for (std::size_t k = 0; k < Q.dim(); ++k) {
            if (part.cls[j] == part.cls[k] && r.r[j] != r.r[k]) {
                throw DomainError("solve_symmetric: direction is not constant on partition classes");
            }
        }
    }
    if (!detail::invariant_under(Q, part)) {
        throw DomainError("solve_symmetric: Q is not invariant under the partition symmetry");
    }
    if (part.classes != 1) {
        return solve_critical_multistart(Q, r, opt, part);
    }
    const UPoly u = detail::clear_negative_powers(restrict_symmetric(Q, part));
    if (u.degree() < 1) {
        return {};
    }
    std::vector<CriticalPoint> out;
    const PolySystem full = critical_system(Q, r);
    for (const auto &root : isolate_roots(u, opt.prec)) {
        if (root.value.is_zero()) {
            continue;
        }
        CriticalPoint pt;
        pt.exact = std::vector<AlgebraicNumber>(Q.dim(), root.value);
        pt.multiplicity = root.multiplicity;
        pt.refine(opt.prec);
        // lambda = z_1 dQ/dz_1 / r_1 for any class member with r_j != 0
        std::size_t j = 0;
        while (j < Q.dim() && r.r[j] == 0) {
            ++j;
        }
        pt.lambda = Q.log_derivative(j).eval(pt.coords) * Rational(1 / r.r[j]);
        std::vector<ComplexBall> xl = pt.coords;
        xl.push_back(pt.lambda);
        if (!detail::residual_ok(full, xl)) {
            throw PrecisionError("solve_symmetric: critical system residual excludes zero");
        }
        pt.height = height(pt.coords, r);
        classify(Q, pt, opt.prec);
        out.push_back(std::move(pt));
    }
    return out;
}

// Elimination polynomial of the one-class reduction, Q(t, ..., t).
inline UPoly symmetric_elimination(const LaurentPoly &Q)
{
    return detail::clear_negative_powers(restrict_symmetric(Q, Partition::single(Q.dim())));
}

struct CriticalReport {
    std::vector<CriticalPoint> points; // by decreasing height
    Ball c1;
    std::optional<Ball> c2;
    bool lacuna = false;
    std::optional<SupportResult> support;
    bool supporting = false;
    std::string method;
    // hypotheses the report does not verify
    bool torus_uniqueness_verified = false;
    bool no_points_at_infinity_verified = false;
};

// Collects the points, orders by height and evaluates the lacuna hypotheses
// at the highest point.
inline CriticalReport critical_report(const RatFun &f, const Direction &r, bool symmetric, const SolveOptions &opt = {})
{
    CriticalReport rep;
    if (symmetric) {
        rep.points = solve_symmetric(f.Q, r, Partition::by_values(r.r), opt);
        rep.method = Partition::by_values(r.r).classes == 1 ? "symmetric-elimination" : "symmetric-multistart";
    } else {
        rep.points = solve_critical_multistart(f.Q, r, opt);
        rep.method = "multistart";
    }
    if (rep.points.empty()) {
        throw DomainError("critical_report: no critical points found");
    }
    std::stable_sort(rep.points.begin(), rep.points.end(), [](const CriticalPoint &a, const CriticalPoint &b) {
        return mpfr_greater_p(a.height.mid().get(), b.height.mid().get());
    });
    rep.c1 = rep.points.front().height;
    for (const auto &p : rep.points) {
        if (!p.height.overlaps(rep.c1)) {
            rep.c2 = p.height;
            break;
        }
    }
    const CriticalPoint *top_quadric = nullptr;
    for (const auto &p : rep.points) {
        if (p.height.overlaps(rep.c1) && p.kind == PointKind::quadric_singular) {
            top_quadric = &p;
            break;
        }
    }
    rep.lacuna = top_quadric && lacuna_predicate(static_cast<long>(f.dim()), f.k);
    if (top_quadric) {
        rep.support = supporting_test(f.Q, *top_quadric, r, opt.prec);
        rep.supporting = rep.support->status == Support::supporting;
    }
    return rep;
}

} // namespace lacuna

#endif
