#ifndef LACUNA_RATFUN_POLYTOPE_HPP
#define LACUNA_RATFUN_POLYTOPE_HPP

#include <algorithm>
#include <vector>

#include <lacuna/error.hpp>
#include <lacuna/ratfun/laurent.hpp>

namespace lacuna
{

namespace detail
{

// Exact phase-one simplex (Bland's rule): is {x >= 0 : A x = b} nonempty?
inline bool lp_feasible(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0) {
            for (auto &x : a[i]) {
                x = -x;
            }
            b[i] = -b[i];
        }
    }
    // tableau columns: n structural, m artificial, then rhs
    const std::size_t cols = n + m + 1;
    std::vector<std::vector<Rational>> t(m + 1, std::vector<Rational>(cols));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            t[i][j] = a[i][j];
        }
        t[i][n + i] = 1;
        t[i][cols - 1] = b[i];
        basis[i] = n + i;
    }
    // objective row: minimize sum of artificials, expressed in nonbasics
    for (std::size_t j = 0; j < cols; ++j) {
        Rational s = 0;
        for (std::size_t i = 0; i < m; ++i) {
            s += t[i][j];
        }
        t[m][j] = (j >= n && j < n + m) ? Rational(0) : Rational(-s);
    }
    for (;;) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j + 1 < cols; ++j) {
            if (t[m][j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == cols) {
            break;
        }
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] > 0) {
                const Rational r = t[i][cols - 1] / t[i][enter];
                if (leave == m || r < best || (r == best && basis[i] < basis[leave])) {
                    best = r;
                    leave = i;
                }
            }
        }
        if (leave == m) {
            break; // unbounded direction cannot occur in phase one
        }
        const Rational piv = t[leave][enter];
        for (auto &x : t[leave]) {
            x /= piv;
        }
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave || t[i][enter] == 0) {
                continue;
            }
            const Rational f = t[i][enter];
            for (std::size_t j = 0; j < cols; ++j) {
                t[i][j] -= f * t[leave][j];
            }
        }
        basis[leave] = enter;
    }
    return t[m][cols - 1] == 0;
}

} // namespace detail

// Vertices of the Newton polytope conv{m : p_m != 0}, lexicographically
// sorted. A support point is a vertex iff it is not a convex combination of
// the other support points (exact LP per point).
inline std::vector<Exponent> newton_polytope(const LaurentPoly &p)
{
    if (p.is_zero()) {
        throw DomainError("newton_polytope: zero polynomial");
    }
    std::vector<Exponent> pts;
    for (const auto &[e, c] : p.terms()) {
        pts.push_back(e);
    }
    const std::size_t d = p.dim();
    std::vector<Exponent> verts;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        std::vector<std::vector<Rational>> a(d + 1);
        std::vector<Rational> b(d + 1);
        for (std::size_t i = 0; i < d; ++i) {
            b[i] = pts[k][i];
        }
        b[d] = 1;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j == k) {
                continue;
            }
            for (std::size_t i = 0; i < d; ++i) {
                a[i].push_back(pts[j][i]);
            }
            a[d].push_back(1);
        }
        if (pts.size() == 1 || !detail::lp_feasible(a, b)) {
            verts.push_back(pts[k]);
        }
    }
    std::sort(verts.begin(), verts.end());
    return verts;
}

} // namespace lacuna

#endif
