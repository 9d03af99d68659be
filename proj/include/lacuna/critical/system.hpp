#ifndef LACUNA_CRITICAL_SYSTEM_HPP
#define LACUNA_CRITICAL_SYSTEM_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <lacuna/error.hpp>
#include <lacuna/numeric/matrix.hpp>
#include <lacuna/ratfun/laurent.hpp>
#include <lacuna/ratfun/ratfun.hpp>

namespace lacuna
{

using cdouble = std::complex<double>;

// Square or overdetermined polynomial system with its Jacobian.
struct PolySystem {
    std::size_t nvars = 0;
    std::vector<LaurentPoly> eqs;
    std::vector<std::vector<LaurentPoly>> jac;

    PolySystem() = default;
    PolySystem(std::size_t n, std::vector<LaurentPoly> e) : nvars(n), eqs(std::move(e))
    {
        for (const auto &p : eqs) {
            if (p.dim() != nvars) {
                throw DomainError("PolySystem: equation dimension mismatch");
            }
            jac.push_back(p.gradient());
        }
    }
    std::vector<ComplexBall> eval(const std::vector<ComplexBall> &x) const
    {
        return lacuna::eval(eqs, x);
    }
    BallMatrix jacobian(const std::vector<ComplexBall> &x) const
    {
        BallMatrix m(eqs.size(), nvars, x.at(0).prec());
        for (std::size_t i = 0; i < eqs.size(); ++i) {
            for (std::size_t j = 0; j < nvars; ++j) {
                m(i, j) = jac[i][j].eval(x);
            }
        }
        return m;
    }
};

// Adds trailing variables that do not occur.
inline LaurentPoly extend_dim(const LaurentPoly &p, std::size_t dim)
{
    LaurentPoly r(dim);
    for (const auto &[e, c] : p.terms()) {
        Exponent f(e);
        f.resize(dim, 0);
        r.add_term(f, c);
    }
    return r;
}

// Q = 0 and z_j dQ/dz_j = lambda r_j, in the variables (z_1..z_d, lambda).
inline PolySystem critical_system(const LaurentPoly &Q, const Direction &r)
{
    const std::size_t d = Q.dim();
    if (r.dim() != d) {
        throw DomainError("critical_system: direction has " + std::to_string(r.dim()) + " entries for " +
                          std::to_string(d) + " variables");
    }
    std::vector<LaurentPoly> eqs{extend_dim(Q, d + 1)};
    const LaurentPoly lambda = LaurentPoly::variable(d + 1, d);
    for (std::size_t j = 0; j < d; ++j) {
        eqs.push_back(extend_dim(Q.log_derivative(j), d + 1) - lambda * r.r[j]);
    }
    return PolySystem(d + 1, std::move(eqs));
}

namespace detail
{

struct DoubleTerms {
    std::vector<std::pair<Exponent, double>> terms;

    explicit DoubleTerms(const LaurentPoly &p)
    {
        for (const auto &[e, c] : p.terms()) {
            terms.emplace_back(e, c.get_d());
        }
    }
    cdouble operator()(const std::vector<cdouble> &x) const
    {
        cdouble s = 0;
        for (const auto &[e, c] : terms) {
            cdouble t = c;
            for (std::size_t j = 0; j < e.size(); ++j) {
                if (e[j] != 0) {
                    t *= std::pow(x[j], static_cast<int>(e[j]));
                }
            }
            s += t;
        }
        return s;
    }
};

struct DoubleSystem {
    std::vector<DoubleTerms> f;
    std::vector<std::vector<DoubleTerms>> j;

    explicit DoubleSystem(const PolySystem &s)
    {
        for (std::size_t i = 0; i < s.eqs.size(); ++i) {
            f.emplace_back(s.eqs[i]);
            std::vector<DoubleTerms> row;
            for (const auto &g : s.jac[i]) {
                row.emplace_back(g);
            }
            j.push_back(std::move(row));
        }
    }
};

// Least-squares-free Gaussian elimination for small square complex systems.
inline bool solve_small(std::vector<std::vector<cdouble>> a, std::vector<cdouble> &b)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t i = c + 1; i < n; ++i) {
            if (std::abs(a[i][c]) > std::abs(a[p][c])) {
                p = i;
            }
        }
        if (std::abs(a[p][c]) < 1e-300) {
            return false;
        }
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t i = c + 1; i < n; ++i) {
            const cdouble m = a[i][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) {
                a[i][k] -= m * a[c][k];
            }
            b[i] -= m * b[c];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) {
            b[i] -= a[i][k] * b[k];
        }
        b[i] /= a[i][i];
    }
    return true;
}

// Plain Newton in double precision; returns the final iterate when the
// residual became small.
inline std::optional<std::vector<cdouble>> newton_double(const DoubleSystem &s, std::vector<cdouble> x,
                                                         int iterations = 200)
{
    const std::size_t n = x.size();
    for (int it = 0; it < iterations; ++it) {
        std::vector<cdouble> fx(n);
        std::vector<std::vector<cdouble>> J(n, std::vector<cdouble>(n));
        double scale = 0;
        for (std::size_t i = 0; i < n; ++i) {
            fx[i] = s.f[i](x);
            for (std::size_t k = 0; k < n; ++k) {
                J[i][k] = s.j[i][k](x);
            }
        }
        for (const auto &v : x) {
            scale = std::max(scale, std::abs(v));
        }
        if (!solve_small(J, fx)) {
            return std::nullopt;
        }
        double step = 0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] -= fx[i];
            step = std::max(step, std::abs(fx[i]));
        }
        if (!std::isfinite(step) || scale > 1e8) {
            return std::nullopt;
        }
        if (step < 1e-14 * std::max(1.0, scale)) {
            return x;
        }
    }
    // singular roots converge only linearly; accept a small residual
    double res = 0;
    for (const auto &g : s.f) {
        res = std::max(res, std::abs(g(x)));
    }
    if (res < 1e-10) {
        return x;
    }
    return std::nullopt;
}

inline ComplexBall to_ball(const cdouble &z, mpfr_prec_t prec)
{
    return ComplexBall(Ball::from_float(Float::from_double(z.real(), prec), prec),
                       Ball::from_float(Float::from_double(z.imag(), prec), prec));
}

} // namespace detail

// Newton refinement at working precision followed by a Krawczyk test
// K(X) = x - Y F(x) + (I - Y J(X))(X - x) inside X. Returns the certified box.
inline std::optional<std::vector<ComplexBall>> krawczyk_certify(const PolySystem &s, std::vector<ComplexBall> x,
                                                                mpfr_prec_t prec)
{
    const std::size_t n = s.nvars;
    if (s.eqs.size() != n) {
        throw DomainError("krawczyk_certify: system must be square");
    }
    for (auto &v : x) {
        v = v.mid_ball().with_prec(prec);
    }
    try {
        for (int it = 0; it < 60; ++it) {
            const BallMatrix J = s.jacobian(x).mid();
            const auto fx = s.eval(x);
            std::vector<ComplexBall> fm;
            for (const auto &v : fx) {
                fm.push_back(v.mid_ball());
            }
            const auto dx = solve(J, fm);
            double step = 0, scale = 1;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = (x[i] - dx[i]).mid_ball();
                step = std::max(step, dx[i].abs_upper().to_double());
                scale = std::max(scale, x[i].abs_upper().to_double());
            }
            if (step <= std::ldexp(scale, -static_cast<int>(prec) + 8)) {
                break;
            }
        }
    } catch (const PrecisionError &) {
        return std::nullopt;
    }
    BallMatrix Y;
    try {
        Y = inverse(s.jacobian(x).mid()).mid();
    } catch (const PrecisionError &) {
        return std::nullopt;
    }
    const auto fx = s.eval(x);
    for (int k = 0; k < 6; ++k) {
        const Mag r = Mag::pow2(-static_cast<long>(prec) + 24 + 12 * k);
        std::vector<ComplexBall> X, D;
        for (const auto &v : x) {
            X.push_back(v.add_error(r));
            D.push_back(ComplexBall(prec).add_error(r));
        }
        const BallMatrix JX = s.jacobian(X);
        const BallMatrix YJ = Y * JX;
        const auto yf = Y.apply(fx);
        bool ok = true;
        std::vector<ComplexBall> K;
        for (std::size_t i = 0; i < n && ok; ++i) {
            ComplexBall v = x[i] - yf[i];
            for (std::size_t j = 0; j < n; ++j) {
                ComplexBall m = -YJ(i, j);
                if (i == j) {
                    m += ComplexBall::from_int(1, prec);
                }
                v += m * D[j];
            }
            ok = X[i].contains(v);
            K.push_back(std::move(v));
        }
        if (ok) {
            return K;
        }
    }
    return std::nullopt;
}

struct MultistartOptions {
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    double box = 2.0; // starting coordinates uniform in [-box, box]^2 per variable
};

struct SystemSolution {
    std::vector<ComplexBall> x;
    bool certified = false;
};

namespace detail
{

inline bool same_point(const std::vector<cdouble> &a, const std::vector<cdouble> &b, double tol)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > tol * std::max(1.0, std::abs(a[i]))) {
            return false;
        }
    }
    return true;
}

} // namespace detail

// Multistart Newton from seeded random complex starts, deduplicated, each
// candidate then certified by krawczyk_certify (or by `fallback` for roots
// where the Jacobian is singular). `keep` filters double-precision candidates.
inline std::vector<SystemSolution> solve_newton_multistart(
    const PolySystem &s, const MultistartOptions &opt, mpfr_prec_t prec,
    const std::function<bool(const std::vector<cdouble> &)> &keep = nullptr,
    const std::function<std::optional<std::vector<ComplexBall>>(const std::vector<cdouble> &)> &fallback = nullptr)
{
    const detail::DoubleSystem ds(s);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U(-opt.box, opt.box);
    std::vector<std::vector<cdouble>> found;
    for (std::size_t t = 0; t < opt.trials; ++t) {
        std::vector<cdouble> x0(s.nvars);
        for (auto &v : x0) {
            const double re = U(rng), im = U(rng);
            v = cdouble(re, im);
        }
        const auto x = detail::newton_double(ds, x0);
        if (!x || (keep && !keep(*x))) {
            continue;
        }
        bool dup = false;
        for (const auto &f : found) {
            dup = dup || detail::same_point(f, *x, 1e-6);
        }
        if (!dup) {
            found.push_back(*x);
        }
    }
    std::vector<SystemSolution> out;
    for (const auto &f : found) {
        std::vector<ComplexBall> x;
        for (const auto &v : f) {
            x.push_back(detail::to_ball(v, prec));
        }
        SystemSolution sol;
        if (auto k = krawczyk_certify(s, x, prec)) {
            sol.x = *k;
            sol.certified = true;
        } else if (fallback) {
            if (auto g = fallback(f)) {
                sol.x = *g;
                sol.certified = true;
            }
        }
        if (!sol.certified) {
            sol.x = x;
        }
        // enclosures of the same root found from different approximations
        bool dup = false;
        for (const auto &o : out) {
            bool all = o.certified && sol.certified;
            for (std::size_t i = 0; all && i < x.size(); ++i) {
                all = o.x[i].overlaps(sol.x[i]);
            }
            dup = dup || all;
        }
        if (!dup) {
            out.push_back(std::move(sol));
        }
    }
    return out;
}

} // namespace lacuna

#endif
