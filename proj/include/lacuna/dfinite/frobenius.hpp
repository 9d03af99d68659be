#ifndef LACUNA_DFINITE_FROBENIUS_HPP
#define LACUNA_DFINITE_FROBENIUS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include <lacuna/algebra/roots.hpp>
#include <lacuna/dfinite/ode.hpp>
#include <lacuna/error.hpp>
#include <lacuna/numeric/complex_ball.hpp>

namespace lacuna
{

namespace detail
{

template <class T>
T scalar(const Rational &q, mpfr_prec_t prec);
template <>
inline Rational scalar<Rational>(const Rational &q, mpfr_prec_t)
{
    return q;
}
template <>
inline ComplexBall scalar<ComplexBall>(const Rational &q, mpfr_prec_t prec)
{
    return ComplexBall::from_rational(q, prec);
}

inline bool is_exact_zero(const Rational &q)
{
    return q == 0;
}
inline bool is_exact_zero(const ComplexBall &z)
{
    return z.is_exact() && z.re().mid().is_zero() && z.im().mid().is_zero();
}

// Taylor coefficients of p at y: p^(m)(y)/m! as polynomials in y.
inline std::vector<UPoly> taylor_coefficient_polys(const UPoly &p)
{
    std::vector<UPoly> out;
    UPoly d = p;
    Rational fact = 1;
    for (int m = 0; m <= p.degree(); ++m) {
        out.push_back(d * Rational(1 / fact));
        d = d.derivative();
        fact *= m + 1;
    }
    return out;
}

// Coefficients of the falling factorial theta(theta-1)...(theta-i+1).
inline std::vector<Rational> falling_theta(std::size_t i)
{
    const UPoly f = falling_factorial(0, i);
    std::vector<Rational> c = f.coeffs();
    c.resize(i + 1);
    return c;
}

// theta-form of x^{-mu} L at a point: L = sum_k x^k P_k(theta), x = z - omega.
// A[k][t] is the coefficient of theta^t in P_k, as a polynomial in omega.
struct ThetaForm {
    long mu = 0;
    std::vector<std::vector<UPoly>> A;
};

inline ThetaForm theta_form(const ODE &ode, long mu)
{
    const std::size_t r = ode.order();
    ThetaForm tf;
    tf.mu = mu;
    long kmax = 0;
    std::vector<std::vector<UPoly>> q(r + 1);
    for (std::size_t i = 0; i <= r; ++i) {
        q[i] = taylor_coefficient_polys(ode.p[i]);
        if (!ode.p[i].is_zero()) {
            kmax = std::max(kmax, static_cast<long>(ode.p[i].degree()) - static_cast<long>(i) - mu);
        }
    }
    tf.A.assign(static_cast<std::size_t>(kmax + 1), std::vector<UPoly>(r + 1));
    for (long k = 0; k <= kmax; ++k) {
        for (std::size_t i = 0; i <= r; ++i) {
            const long m = k + static_cast<long>(i) + mu;
            if (m < 0 || m >= static_cast<long>(q[i].size())) {
                continue;
            }
            const auto s = falling_theta(i);
            for (std::size_t t = 0; t <= i; ++t) {
                if (s[t] != 0) {
                    tf.A[static_cast<std::size_t>(k)][t] += q[i][static_cast<std::size_t>(m)] * s[t];
                }
            }
        }
    }
    return tf;
}

// mu = min_i (val_omega(p_i) - i), decided exactly.
inline long theta_shift(const ODE &ode, const AlgebraicNumber &omega)
{
    std::optional<long> mu;
    for (std::size_t i = 0; i < ode.p.size(); ++i) {
        if (ode.p[i].is_zero()) {
            continue;
        }
        const auto q = taylor_coefficient_polys(ode.p[i]);
        long v = 0;
        while (omega.is_root_of(q[static_cast<std::size_t>(v)])) {
            ++v;
        }
        const long cand = v - static_cast<long>(i);
        mu = mu ? std::min(*mu, cand) : cand;
    }
    return *mu;
}

template <class T>
T eval_at(const UPoly &p, const T &x, mpfr_prec_t prec)
{
    T s = scalar<T>(0, prec);
    for (std::size_t k = p.coeffs().size(); k-- > 0;) {
        s = s * x + scalar<T>(p.coeffs()[k], prec);
    }
    return s;
}

// Numeric theta-form coefficients at a point value w.
template <class T>
std::vector<std::vector<T>> theta_values(const ThetaForm &tf, const T &w, mpfr_prec_t prec)
{
    std::vector<std::vector<T>> P;
    for (const auto &row : tf.A) {
        std::vector<T> v;
        for (const auto &a : row) {
            v.push_back(eval_at(a, w, prec));
        }
        P.push_back(std::move(v));
    }
    return P;
}

// b_t = P^(t)(s)/t!, t < count, for P with coefficients a (ascending).
template <class T>
std::vector<T> taylor_at(const std::vector<T> &a, const T &s, std::size_t count, mpfr_prec_t prec)
{
    std::vector<T> b = a;
    const std::size_t n = b.size();
    for (std::size_t i = 0; i + 1 < n && i < count; ++i) {
        for (std::size_t k = n - 1; k > i; --k) {
            b[k - 1] += s * b[k];
        }
    }
    b.resize(std::max(count, n), scalar<T>(0, prec));
    b.resize(count);
    return b;
}

// Frobenius recurrence for one group of exponents lambda + Z_{>=0}.
// mult[n] is the multiplicity of lambda + n as a root of P_0; each slot
// (n0, k0) gives the solution whose free value c[n0][k0] is 1 and all other
// free values vanish. Returns c[slot][n][k] for n <= nmax, k < L, where k
// indexes log^k/k!.
template <class T>
std::vector<std::vector<std::vector<T>>> frobenius_group(const std::vector<std::vector<T>> &P, const Rational &lambda,
                                                         const std::vector<int> &mult,
                                                         const std::vector<std::pair<std::size_t, int>> &slots,
                                                         std::size_t L, std::size_t nmax, mpfr_prec_t prec)
{
    const std::size_t K = P.size() - 1;
    const T zero = scalar<T>(0, prec);
    std::vector<std::vector<std::vector<T>>> c(slots.size(),
                                               std::vector<std::vector<T>>(nmax + 1, std::vector<T>(L, zero)));
    for (std::size_t n = 0; n <= nmax; ++n) {
        // Taylor data of P_j at lambda + n - j
        std::vector<std::vector<T>> tj(std::min(n, K) + 1);
        for (std::size_t j = 0; j < tj.size(); ++j) {
            const Rational s = lambda + Rational(static_cast<long>(n) - static_cast<long>(j));
            tj[j] = taylor_at(P[j], scalar<T>(s, prec), L + 1, prec);
        }
        const int mu = n < mult.size() ? mult[n] : 0;
        const std::size_t mun = static_cast<std::size_t>(mu);
        for (std::size_t sl = 0; sl < slots.size(); ++sl) {
            auto &cs = c[sl];
            std::vector<T> R(L, zero);
            for (std::size_t j = 1; j < tj.size(); ++j) {
                for (std::size_t k = 0; k < L; ++k) {
                    for (std::size_t t = 0; k + t < L; ++t) {
                        if (!is_exact_zero(cs[n - j][k + t])) {
                            R[k] -= tj[j][t] * cs[n - j][k + t];
                        }
                    }
                }
            }
            for (std::size_t k = 0; k < std::min(mun, L); ++k) {
                cs[n][k] = (slots[sl].first == n && static_cast<std::size_t>(slots[sl].second) == k)
                               ? scalar<T>(1, prec)
                               : zero;
            }
            if (mun >= L) {
                continue;
            }
            const T piv = tj[0][mun];
            if constexpr (std::is_same_v<T, ComplexBall>) {
                if (piv.contains_zero()) {
                    throw PrecisionError("Frobenius recurrence: pivot enclosure contains zero");
                }
            }
            for (std::size_t kk = L - mun; kk-- > 0;) {
                T v = R[kk];
                for (std::size_t t = mun + 1; kk + t < L; ++t) {
                    v -= tj[0][t] * cs[n][kk + t];
                }
                cs[n][kk + mun] = v / piv;
            }
        }
    }
    return c;
}

// Bits lost below `prec` by the worst coefficient that excludes zero; the
// ball recurrence overestimates radii roughly geometrically in n.
inline long precision_deficit(const std::vector<std::vector<std::vector<ComplexBall>>> &c, mpfr_prec_t prec)
{
    double worst = 0;
    for (const auto &sol : c) {
        for (const auto &row : sol) {
            for (const auto &v : row) {
                if (v.contains_zero()) {
                    continue;
                }
                worst = std::max(worst, static_cast<double>(prec) - v.relative_accuracy_digits() * 3.3219280948873623);
            }
        }
    }
    return static_cast<long>(std::ceil(worst));
}

// frobenius_group in ball arithmetic, raising the working precision until the
// coefficients carry at least `prec` bits.
inline std::vector<std::vector<std::vector<ComplexBall>>>
frobenius_group_adaptive(const std::function<std::vector<std::vector<ComplexBall>>(mpfr_prec_t)> &theta,
                         const Rational &lambda, const std::vector<int> &mult,
                         const std::vector<std::pair<std::size_t, int>> &slots, std::size_t L, std::size_t nmax,
                         mpfr_prec_t prec)
{
    mpfr_prec_t wp = prec + 32;
    for (int attempt = 0;; ++attempt) {
        auto c = frobenius_group<ComplexBall>(theta(wp), lambda, mult, slots, L, nmax, wp);
        const long deficit = precision_deficit(c, prec);
        if (deficit <= 0 || attempt == 4) {
            return c;
        }
        wp += static_cast<mpfr_prec_t>(deficit) + 32;
    }
}

} // namespace detail

struct IndicialResult {
    long mu = 0;
    std::vector<ComplexBall> coeffs;               // ascending powers of theta
    std::vector<std::pair<Rational, int>> roots;   // exact rational roots with multiplicity
    int unresolved = 0;                            // roots not certified rational
};

// Indicial polynomial P_0 at omega; throws if omega is an irregular singular point.
inline IndicialResult indicial_polynomial(const ODE &ode, const AlgebraicNumber &omega, mpfr_prec_t prec = 128)
{
    const std::size_t r = ode.order();
    IndicialResult res;
    res.mu = detail::theta_shift(ode, omega);
    const detail::ThetaForm tf = detail::theta_form(ode, res.mu);
    const auto &A0 = tf.A.at(0);
    if (omega.is_root_of(A0[r])) {
        throw DomainError("indicial_polynomial: irregular singular point at " + omega.to_string() +
                          " (Fuchs criterion fails)");
    }
    const ComplexBall w = omega.value(prec);
    for (const auto &a : A0) {
        res.coeffs.push_back(a(w));
    }
    // P_0(theta) = sum_j omega^j B_j(theta) after reduction mod the defining polynomial;
    // common rational roots of the B_j are roots of P_0.
    const UPoly &f = omega.poly();
    std::vector<std::vector<Rational>> b;
    for (std::size_t t = 0; t < A0.size(); ++t) {
        const UPoly red = A0[t] % f;
        for (std::size_t j = 0; j < red.coeffs().size(); ++j) {
            if (b.size() <= j) {
                b.resize(j + 1, std::vector<Rational>(A0.size()));
            }
            b[j][t] = red.coeffs()[j];
        }
    }
    UPoly g;
    for (const auto &bj : b) {
        g = UPoly::gcd(g, UPoly(bj));
    }
    int total = 0;
    if (g.degree() > 0) {
        for (const auto &root : isolate_roots(g, prec)) {
            if (!root.value.is_rational()) {
                continue;
            }
            const Rational lam = root.value.rational();
            // multiplicity in P_0 over Q(omega): derivatives vanish exactly
            int m = 0;
            for (std::size_t t = 0; t <= r; ++t) {
                UPoly e;
                for (std::size_t u = t; u < A0.size(); ++u) {
                    Rational ff = 1;
                    for (std::size_t v = 0; v < t; ++v) {
                        ff *= Rational(static_cast<long>(u - v));
                    }
                    Rational pw = 1;
                    for (std::size_t v = t; v < u; ++v) {
                        pw *= lam;
                    }
                    e += A0[u] * Rational(ff * pw);
                }
                if (!omega.is_root_of(e)) {
                    break;
                }
                ++m;
            }
            if (m > 0) {
                res.roots.emplace_back(lam, m);
                total += m;
            }
        }
    }
    std::sort(res.roots.begin(), res.roots.end());
    res.unresolved = static_cast<int>(r) - total;
    return res;
}

// Solution sum_{j,l} c[j][l] x^{alpha+j} log(x)^l / l!, x = z - omega.
struct LocalSolution {
    AlgebraicNumber omega;
    Rational alpha;
    int log_power = 0; // log power of the leading term
    std::vector<std::vector<ComplexBall>> c;
    std::optional<std::vector<std::vector<Rational>>> exact;
    double radius = 0; // lower bound for the distance to the nearest other singular point
    mpfr_prec_t prec = 0;

    std::size_t truncation() const noexcept
    {
        return c.empty() ? 0 : c.size() - 1;
    }
    std::size_t logs() const noexcept
    {
        return c.empty() ? 0 : c[0].size();
    }
    ComplexBall coeff(std::size_t j, std::size_t l) const
    {
        if (j < c.size() && l < c[j].size()) {
            return c[j][l];
        }
        return ComplexBall(prec);
    }
    // Highest log power with a coefficient not known to vanish.
    int max_log_power() const
    {
        int m = 0;
        for (const auto &row : c) {
            for (std::size_t l = 0; l < row.size(); ++l) {
                if (!detail::is_exact_zero(row[l])) {
                    m = std::max(m, static_cast<int>(l));
                }
            }
        }
        return m;
    }
};

namespace detail
{

inline double nearest_other_singularity(const ODE &ode, const ComplexBall &w, mpfr_prec_t prec)
{
    double best = -1;
    for (const auto &s : ode.singular_points(prec)) {
        const ComplexBall d = s.value(prec) - w;
        if (d.contains_zero()) {
            continue;
        }
        const double v = mpfr_get_d(d.abs_lower().get(), MPFR_RNDD);
        if (best < 0 || v < best) {
            best = v;
        }
    }
    return best < 0 ? 1e300 : best * (1 - 1e-12);
}

template <class T>
std::vector<std::vector<T>> numeric_theta(const detail::ThetaForm &tf, const AlgebraicNumber &omega,
                                          mpfr_prec_t prec);
template <>
inline std::vector<std::vector<Rational>> numeric_theta<Rational>(const detail::ThetaForm &tf,
                                                                  const AlgebraicNumber &omega, mpfr_prec_t)
{
    std::vector<std::vector<Rational>> P;
    for (const auto &row : tf.A) {
        std::vector<Rational> v;
        for (const auto &a : row) {
            v.push_back(a(omega.rational()));
        }
        P.push_back(std::move(v));
    }
    return P;
}
template <>
inline std::vector<std::vector<ComplexBall>> numeric_theta<ComplexBall>(const detail::ThetaForm &tf,
                                                                        const AlgebraicNumber &omega,
                                                                        mpfr_prec_t prec)
{
    return theta_values(tf, omega.value(prec), prec);
}

struct Slot {
    Rational lambda; // group base exponent
    std::size_t n;   // offset within the group
    int k;           // log power
};

template <class T>
std::vector<LocalSolution> build_basis(const ODE &ode, const AlgebraicNumber &omega, const IndicialResult &ind,
                                       std::size_t N, mpfr_prec_t prec)
{
    const std::size_t r = ode.order();
    const mpfr_prec_t wp = prec + 32;
    const detail::ThetaForm tf = detail::theta_form(ode, ind.mu);
    const auto P = numeric_theta<T>(tf, omega, wp);
    const bool ordinary = !omega.is_root_of(ode.leading());
    const double rad = nearest_other_singularity(ode, omega.value(prec), prec);

    // group exponents by class mod 1
    std::map<Rational, std::vector<std::pair<Rational, int>>> groups;
    for (const auto &[lam, m] : ind.roots) {
        bool placed = false;
        for (auto &[base, members] : groups) {
            const Rational diff = lam - base;
            if (diff.get_den() == 1) {
                members.emplace_back(lam, m);
                placed = true;
                break;
            }
        }
        if (!placed) {
            groups[lam].emplace_back(lam, m);
        }
    }
    std::vector<LocalSolution> out;
    for (auto &[base0, members] : groups) {
        Rational base = members[0].first;
        for (const auto &mm : members) {
            base = std::min(base, mm.first);
        }
        std::size_t top = 0;
        std::vector<int> mult;
        std::vector<std::pair<std::size_t, int>> slots;
        for (const auto &[lam, m] : members) {
            const auto off = static_cast<std::size_t>(Rational(lam - base).get_num().get_ui());
            top = std::max(top, off);
            if (mult.size() <= off) {
                mult.resize(off + 1, 0);
            }
            mult[off] = m;
            for (int k = m - 1; k >= 0; --k) {
                slots.emplace_back(off, k);
            }
        }
        const std::size_t L = r;
        std::vector<std::vector<std::vector<T>>> cs;
        if constexpr (std::is_same_v<T, ComplexBall>) {
            cs = frobenius_group_adaptive([&](mpfr_prec_t w) { return numeric_theta<T>(tf, omega, w); }, base, mult,
                                          slots, L, N + top, prec);
        } else {
            cs = frobenius_group<T>(P, base, mult, slots, L, N + top, wp);
        }
        for (std::size_t s = 0; s < slots.size(); ++s) {
            const auto [off, k0] = slots[s];
            LocalSolution sol;
            sol.omega = omega;
            sol.alpha = base + Rational(static_cast<long>(off));
            sol.log_power = k0;
            sol.radius = rad;
            sol.prec = prec;
            Rational scale = 1;
            if (ordinary) {
                for (std::size_t i = 2; i <= off; ++i) {
                    scale /= Rational(static_cast<long>(i));
                }
            }
            std::vector<std::vector<T>> rows;
            for (std::size_t j = 0; j <= N; ++j) {
                std::vector<T> row = cs[s][off + j];
                for (auto &v : row) {
                    v = v * scalar<T>(scale, wp);
                }
                rows.push_back(std::move(row));
            }
            if constexpr (std::is_same_v<T, Rational>) {
                sol.exact = rows;
                for (const auto &row : rows) {
                    std::vector<ComplexBall> b;
                    for (const auto &v : row) {
                        b.push_back(ComplexBall::from_rational(v, prec));
                    }
                    sol.c.push_back(std::move(b));
                }
            } else {
                for (auto &row : rows) {
                    for (auto &v : row) {
                        v = v.with_prec(prec);
                    }
                    sol.c.push_back(std::move(row));
                }
            }
            out.push_back(std::move(sol));
        }
    }
    std::sort(out.begin(), out.end(), [](const LocalSolution &a, const LocalSolution &b) {
        if (a.alpha != b.alpha) {
            return a.alpha < b.alpha;
        }
        return a.log_power > b.log_power;
    });
    return out;
}

} // namespace detail

// Echelonized local basis at omega: solution i has leading term
// x^{alpha_i} log(x)^{l_i}/l_i! with coefficient 1 and zero coefficient at the
// other solutions' leading pairs; ordered by exponent, then decreasing log
// power. At an ordinary point the basis is x^i/i! + O(x^r).
inline std::vector<LocalSolution> frobenius_basis(const ODE &ode, const AlgebraicNumber &omega, std::size_t N,
                                                  mpfr_prec_t prec)
{
    const IndicialResult ind = indicial_polynomial(ode, omega, prec);
    if (ind.unresolved != 0) {
        throw DomainError("frobenius_basis: indicial polynomial at " + omega.to_string() +
                          " has roots that are not rational");
    }
    if (omega.is_rational()) {
        return detail::build_basis<Rational>(ode, omega, ind, N, prec);
    }
    return detail::build_basis<ComplexBall>(ode, omega, ind, N, prec);
}

} // namespace lacuna

#endif
