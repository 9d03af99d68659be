#ifndef LACUNA_CRITICAL_POINT_HPP
#define LACUNA_CRITICAL_POINT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <lacuna/algebra/roots.hpp>
#include <lacuna/error.hpp>
#include <lacuna/numeric/ball.hpp>
#include <lacuna/numeric/complex_ball.hpp>
#include <lacuna/ratfun/laurent.hpp>
#include <lacuna/ratfun/ratfun.hpp>

namespace lacuna
{

enum class PointKind { smooth, quadric_singular, degenerate_singular };

inline const char *to_string(PointKind k)
{
    switch (k) {
    case PointKind::smooth:
        return "smooth";
    case PointKind::quadric_singular:
        return "quadric_singular";
    default:
        return "degenerate_singular";
    }
}

struct Signature {
    int pos = 0, neg = 0, zero = 0;
};

struct CriticalPoint {
    std::vector<ComplexBall> coords;
    std::optional<std::vector<AlgebraicNumber>> exact;
    ComplexBall lambda;
    PointKind kind = PointKind::smooth;
    Ball height;
    std::optional<Signature> signature;
    int multiplicity = 1; // multiplicity in the elimination polynomial
    std::vector<std::string> warnings;

    bool is_rational() const
    {
        if (!exact) {
            return false;
        }
        for (const auto &a : *exact) {
            if (!a.is_rational()) {
                return false;
            }
        }
        return true;
    }
    std::vector<Rational> rational_coords() const
    {
        std::vector<Rational> q;
        for (const auto &a : exact.value()) {
            q.push_back(a.rational());
        }
        return q;
    }
    bool is_real() const
    {
        if (exact) {
            for (const auto &a : *exact) {
                if (!a.is_real()) {
                    return false;
                }
            }
            return true;
        }
        for (const auto &z : coords) {
            if (!z.im().contains_zero()) {
                return false;
            }
        }
        return true;
    }
    void refine(mpfr_prec_t prec)
    {
        if (!exact) {
            return;
        }
        coords.clear();
        for (const auto &a : *exact) {
            coords.push_back(a.value(prec));
        }
    }
};

namespace detail
{

inline int sign_of(const Rational &q)
{
    return sgn(q);
}
inline int sign_of(const Ball &b)
{
    if (b.is_positive()) {
        return 1;
    }
    if (b.is_negative()) {
        return -1;
    }
    throw PrecisionError("sign of a ball containing zero is undecided");
}

template <class T>
using Mat = std::vector<std::vector<T>>;

// Symmetric congruence T A T^t = diag(d) by elimination with diagonal
// pivoting; a vanishing trailing diagonal with a nonzero off-diagonal entry
// is fixed by adding row/column j to i first.
template <class T>
void ldlt(Mat<T> A, std::vector<T> &d, Mat<T> &Tm, const T &zero, const T &one)
{
    const std::size_t n = A.size();
    Tm.assign(n, std::vector<T>(n, zero));
    for (std::size_t i = 0; i < n; ++i) {
        Tm[i][i] = one;
    }
    d.clear();
    // usable pivot: sign decided; a ball containing zero is never used
    auto nz = [](const T &x) {
        if constexpr (std::is_same_v<T, Rational>) {
            return x != 0;
        } else {
            return !x.contains_zero();
        }
    };
    auto exact_zero = [](const T &x) {
        if constexpr (std::is_same_v<T, Rational>) {
            return x == 0;
        } else {
            return x.mid().is_zero() && x.rad().is_zero();
        }
    };
    auto add_row_col = [&](std::size_t i, std::size_t j) {
        // e_i <- e_i + e_j
        for (std::size_t k = 0; k < n; ++k) {
            A[i][k] = A[i][k] + A[j][k];
            Tm[i][k] = Tm[i][k] + Tm[j][k];
        }
        for (std::size_t k = 0; k < n; ++k) {
            A[k][i] = A[k][i] + A[k][j];
        }
    };
    auto swap_rc = [&](std::size_t i, std::size_t j) {
        std::swap(A[i], A[j]);
        std::swap(Tm[i], Tm[j]);
        for (std::size_t k = 0; k < n; ++k) {
            std::swap(A[k][i], A[k][j]);
        }
    };
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = n;
        for (std::size_t i = c; i < n && p == n; ++i) {
            if (nz(A[i][i])) {
                p = i;
            }
        }
        if (p == n) {
            bool fixed = false;
            for (std::size_t i = c; i < n && !fixed; ++i) {
                for (std::size_t j = c; j < n && !fixed; ++j) {
                    if (i != j && nz(A[i][j])) {
                        add_row_col(i, j);
                        p = i;
                        fixed = true;
                    }
                }
            }
            if (!fixed) {
                for (std::size_t i = c; i < n; ++i) {
                    for (std::size_t j = c; j < n; ++j) {
                        if (!exact_zero(A[i][j])) {
                            throw PrecisionError("ldlt: trailing block is neither zero nor usable");
                        }
                    }
                    d.push_back(zero);
                }
                return;
            }
            if (!nz(A[p][p])) {
                throw PrecisionError("ldlt: pivot sign undecided");
            }
        }
        swap_rc(c, p);
        const T piv = A[c][c];
        std::vector<T> m(n, zero);
        for (std::size_t i = c + 1; i < n; ++i) {
            m[i] = A[i][c] / piv;
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            for (std::size_t j = c + 1; j < n; ++j) {
                A[i][j] = A[i][j] - m[i] * A[c][j];
            }
            for (std::size_t k = 0; k < n; ++k) {
                Tm[i][k] = Tm[i][k] - m[i] * Tm[c][k];
            }
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            A[i][c] = zero;
            A[c][i] = zero;
        }
        d.push_back(piv);
    }
}

template <class T>
Signature inertia_of(const Mat<T> &A, const T &zero, const T &one)
{
    std::vector<T> d;
    Mat<T> Tm;
    ldlt(A, d, Tm, zero, one);
    Signature s;
    for (const auto &v : d) {
        bool z;
        if constexpr (std::is_same_v<T, Rational>) {
            z = v == 0;
        } else {
            z = v.mid().is_zero() && v.rad().is_zero();
        }
        if (z) {
            ++s.zero;
        } else if (sign_of(v) > 0) {
            ++s.pos;
        } else {
            ++s.neg;
        }
    }
    return s;
}

// Hessian of Q (second partials) at a point.
template <class T>
Mat<T> hessian(const LaurentPoly &Q, const std::vector<T> &z)
{
    const std::size_t d = Q.dim();
    Mat<T> H(d);
    for (std::size_t i = 0; i < d; ++i) {
        const LaurentPoly gi = Q.derivative(i);
        for (std::size_t j = 0; j < d; ++j) {
            H[i].push_back(gi.derivative(j).eval(z));
        }
    }
    return H;
}

inline Mat<Ball> real_part(const Mat<ComplexBall> &A)
{
    Mat<Ball> R;
    for (const auto &row : A) {
        std::vector<Ball> r;
        for (const auto &x : row) {
            r.push_back(x.re());
        }
        R.push_back(std::move(r));
    }
    return R;
}

// Cyclic Jacobi eigenvectors of a real symmetric matrix, columns sorted by
// decreasing eigenvalue.
inline std::vector<std::vector<double>> jacobi_eigenvectors(std::vector<std::vector<double>> a)
{
    const std::size_t n = a.size();
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        v[i][i] = 1;
    }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += a[p][q] * a[p][q];
            }
        }
        if (off < 1e-30) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) {
                    continue;
                }
                const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                const double t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
    std::vector<std::vector<double>> out(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out[i][j] = v[i][order[j]];
        }
    }
    return out;
}

// Exact zero test for g at a point: rational arithmetic, or for points whose
// coordinates all equal one algebraic number, a root test of the restriction.
// Returns nullopt when undecided.
inline std::optional<bool> vanishes_exactly(const LaurentPoly &g, const CriticalPoint &pt)
{
    if (pt.is_rational()) {
        return g.eval(pt.rational_coords()) == 0;
    }
    if (!pt.exact) {
        return std::nullopt;
    }
    const auto &ex = *pt.exact;
    for (const auto &a : ex) {
        if (!(a == ex[0])) {
            return std::nullopt;
        }
    }
    LaurentPoly u = g.restrict_classes(std::vector<std::size_t>(g.dim(), 0), 1);
    long lo = 0;
    for (const auto &[e, c] : u.terms()) {
        lo = std::min(lo, e[0]);
    }
    u = u.shift(Exponent{-lo});
    return ex[0].is_root_of(u.to_upoly());
}

} // namespace detail

// Inertia of the Hessian for rational points, exactly.
inline Signature hessian_signature(const LaurentPoly &Q, const std::vector<Rational> &z)
{
    return detail::inertia_of<Rational>(detail::hessian(Q, z), Rational(0), Rational(1));
}

inline bool lacuna_predicate(long d, long k)
{
    if (d < 1 || k < 1) {
        throw DomainError("lacuna_predicate: d and k must be positive");
    }
    return d % 2 == 0 && 2 * k < d;
}

// Sets kind and signature. Smooth when some partial derivative is certified
// nonzero; otherwise the Hessian inertia decides, exactly for rational points
// and in ball arithmetic (with precision doubling) for other real points.
inline void classify(const LaurentPoly &Q, CriticalPoint &pt, mpfr_prec_t prec = 256)
{
    const std::size_t d = Q.dim();
    bool all_zero = true;
    for (std::size_t j = 0; j < d && all_zero; ++j) {
        const LaurentPoly g = Q.derivative(j);
        if (auto ex = detail::vanishes_exactly(g, pt)) {
            all_zero = *ex;
        } else {
            all_zero = g.eval(pt.coords).contains_zero();
        }
    }
    if (!all_zero) {
        pt.kind = PointKind::smooth;
        pt.signature.reset();
        return;
    }
    auto lorentz = [d](const Signature &s) {
        return s.zero == 0 && ((s.pos == 1 && s.neg == static_cast<int>(d) - 1) ||
                               (s.neg == 1 && s.pos == static_cast<int>(d) - 1));
    };
    if (pt.is_rational()) {
        pt.signature = hessian_signature(Q, pt.rational_coords());
        pt.kind = lorentz(*pt.signature) ? PointKind::quadric_singular : PointKind::degenerate_singular;
        return;
    }
    if (!pt.is_real()) {
        pt.kind = PointKind::degenerate_singular;
        pt.warnings.push_back("singular point is not real; no real quadratic form");
        return;
    }
    CriticalPoint work = pt;
    for (mpfr_prec_t p = prec; p <= 8 * prec; p *= 2) {
        work.refine(p);
        try {
            const auto H = detail::real_part(detail::hessian(Q, work.coords));
            pt.signature = detail::inertia_of<Ball>(H, Ball::from_int(0, p), Ball::from_int(1, p));
            pt.kind = lorentz(*pt.signature) ? PointKind::quadric_singular : PointKind::degenerate_singular;
            return;
        } catch (const PrecisionError &) {
            if (!work.exact) {
                break;
            }
        }
    }
    pt.kind = PointKind::degenerate_singular;
    pt.warnings.push_back("Hessian inertia undecided in ball arithmetic");
}

// h = -sum_j rhat_j log|z_j|
inline Ball height(const std::vector<ComplexBall> &z, const Direction &r)
{
    if (z.size() != r.dim()) {
        throw DomainError("height: point and direction dimensions differ");
    }
    const mpfr_prec_t p = z.empty() ? 53 : z[0].prec();
    const auto rh = r.rhat(p);
    Ball h = Ball::from_int(0, p);
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (z[j].contains_zero()) {
            throw DomainError("height: coordinate " + std::to_string(j + 1) + " may vanish");
        }
        h = h - rh[j] * log(abs(z[j]));
    }
    return h;
}

enum class Support { supporting, not_supporting, boundary };

inline const char *to_string(Support s)
{
    switch (s) {
    case Support::supporting:
        return "supporting";
    case Support::not_supporting:
        return "not_supporting";
    default:
        return "boundary";
    }
}

struct SupportResult {
    Support status = Support::boundary;
    std::vector<Ball> a;  // coefficients of dh after normalising the u_1 coefficient to 1
    Ball sum_a_squared;
    bool infinite = false; // dh has no u_1 component
};

namespace detail
{

// Nearby rational with a small denominator, so exact eigenvectors stay exact.
inline double snap(double x)
{
    for (long den = 1; den <= 4096; den *= 2) {
        for (long dd : {den, 3 * den, 5 * den, 7 * den}) {
            const double v = std::round(x * static_cast<double>(dd)) / static_cast<double>(dd);
            if (std::abs(v - x) < 1e-13) {
                return v;
            }
        }
    }
    return x;
}

template <class T>
SupportResult support_from(const Mat<T> &G0, const std::vector<T> &rh, const T &zero, const T &one,
                           const std::function<T(double)> &lift, mpfr_prec_t prec)
{
    const std::size_t d = G0.size();
    Mat<T> G = G0;
    const Signature sg = inertia_of(G, zero, one);
    if (sg.zero != 0 || !((sg.pos == 1 && sg.neg == static_cast<int>(d) - 1) ||
                          (sg.neg == 1 && sg.pos == static_cast<int>(d) - 1))) {
        throw HypothesisError("supporting_test: quadratic part does not have signature (1, d-1)");
    }
    if (sg.pos != 1) {
        for (auto &row : G) {
            for (auto &x : row) {
                x = zero - x;
            }
        }
    }
    // approximate eigenbasis as a congruence, positive direction first
    std::vector<std::vector<double>> gd(d, std::vector<double>(d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if constexpr (std::is_same_v<T, Rational>) {
                gd[i][j] = G[i][j].get_d();
            } else {
                gd[i][j] = G[i][j].mid().to_double();
            }
        }
    }
    const auto V = jacobi_eigenvectors(gd);
    Mat<T> Vt(d, std::vector<T>(d, zero));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            Vt[j][i] = lift(snap(V[i][j]));
        }
    }
    // G' = V^t G V
    Mat<T> Gp(d, std::vector<T>(d, zero));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            T s = zero;
            for (std::size_t k = 0; k < d; ++k) {
                for (std::size_t l = 0; l < d; ++l) {
                    s = s + Vt[i][k] * G[k][l] * Vt[j][l];
                }
            }
            Gp[i][j] = s;
        }
    }
    std::vector<T> dd;
    Mat<T> Tm;
    ldlt(Gp, dd, Tm, zero, one);
    // w = T V^t rhat; dh = -(w . v) with quadratic sum dd_i v_i^2
    std::vector<T> vr(d, zero), w(d, zero);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            vr[i] = vr[i] + Vt[i][k] * rh[k];
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            w[i] = w[i] + Tm[i][k] * vr[k];
        }
    }
    std::size_t ipos = d;
    for (std::size_t i = 0; i < d; ++i) {
        if (sign_of(dd[i]) > 0) {
            ipos = i;
        }
    }
    // q = rhat^t G^{-1} rhat = sum w_i^2 / dd_i is congruence invariant
    T q = zero;
    for (std::size_t i = 0; i < d; ++i) {
        q = q + w[i] * w[i] / dd[i];
    }
    Support status;
    if constexpr (std::is_same_v<T, Rational>) {
        status = q > 0 ? Support::supporting : q < 0 ? Support::not_supporting : Support::boundary;
    } else {
        status = q.is_positive() ? Support::supporting : q.is_negative() ? Support::not_supporting : Support::boundary;
    }
    SupportResult res;
    res.status = status;
    auto to_ball = [prec](const T &x) {
        if constexpr (std::is_same_v<T, Rational>) {
            return Ball::from_rational(x, prec);
        } else {
            return x;
        }
    };
    bool w1_zero;
    if constexpr (std::is_same_v<T, Rational>) {
        w1_zero = w[ipos] == 0;
    } else {
        w1_zero = w[ipos].contains_zero();
    }
    if (w1_zero) {
        // no timelike component: sum a_k^2 is infinite
        res.infinite = true;
        return res;
    }
    // u_i = sqrt|dd_i| v_i, so a_i = (w_i / sqrt|dd_i|) / (w_pos / sqrt dd_pos)
    T sum = zero;
    const Ball scale = to_ball(w[ipos]) / sqrt(to_ball(dd[ipos]));
    for (std::size_t i = 0; i < d; ++i) {
        if (i == ipos) {
            continue;
        }
        sum = sum + w[i] * w[i] * dd[ipos] / (zero - dd[i]);
        res.a.push_back(to_ball(w[i]) / sqrt(abs(to_ball(dd[i]))) / scale);
    }
    sum = sum / (w[ipos] * w[ipos]);
    res.sum_a_squared = to_ball(sum);
    return res;
}

} // namespace detail

// Writes the log-space quadratic part D H D of Q at the point (D = diag z) in
// Lorentzian coordinates u_1^2 - sum u_k^2 through an approximate eigenbasis
// followed by an exact (or ball) LDL^t congruence, expresses -dh_r as
// c (u_1 + sum a_k u_k), and compares sum a_k^2 with 1.
inline SupportResult supporting_test(const LaurentPoly &Q, const CriticalPoint &pt, const Direction &r,
                                     mpfr_prec_t prec = 256)
{
    if (pt.kind != PointKind::quadric_singular) {
        throw HypothesisError("supporting_test: point is not a quadric singularity");
    }
    const std::size_t d = Q.dim();
    if (pt.is_rational()) {
        const auto z = pt.rational_coords();
        auto H = detail::hessian(Q, z);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                H[i][j] *= z[i] * z[j];
            }
        }
        return detail::support_from<Rational>(H, r.rhat_exact(), Rational(0), Rational(1),
                                              [](double x) { return Rational(x); }, prec);
    }
    CriticalPoint work = pt;
    for (mpfr_prec_t p = prec; p <= 8 * prec; p *= 2) {
        work.refine(p);
        try {
            auto H = detail::real_part(detail::hessian(Q, work.coords));
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    H[i][j] = H[i][j] * work.coords[i].re() * work.coords[j].re();
                }
            }
            auto res = detail::support_from<Ball>(
                H, r.rhat(p), Ball::from_int(0, p), Ball::from_int(1, p),
                [p](double x) { return Ball::from_rational(Rational(x), p); }, p);
            if (res.status != Support::boundary || !work.exact) {
                return res;
            }
        } catch (const PrecisionError &) {
            if (!work.exact) {
                break;
            }
        }
    }
    SupportResult res;
    res.status = Support::boundary;
    return res;
}

} // namespace lacuna

#endif
