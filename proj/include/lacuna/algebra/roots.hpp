#ifndef LACUNA_ALGEBRA_ROOTS_HPP
#define LACUNA_ALGEBRA_ROOTS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <lacuna/error.hpp>
#include <lacuna/numeric/complex_ball.hpp>
#include <lacuna/numeric/rational.hpp>
#include <lacuna/poly/parse.hpp>
#include <lacuna/poly/upoly.hpp>

namespace lacuna
{

namespace detail
{

// Aberth-Ehrlich iteration in double precision; only a starting point for
// the multiprecision polish below.
inline std::vector<std::complex<double>> aberth(const UPoly &f)
{
    using C = std::complex<double>;
    const int n = f.degree();
    std::vector<C> a;
    const UPoly m = f.monic();
    for (const auto &c : m.coeffs()) {
        a.emplace_back(c.get_d(), 0.0);
    }
    double bound = 0;
    for (int k = 0; k < n; ++k) {
        bound = std::max(bound, std::pow(std::abs(a[static_cast<std::size_t>(k)]), 1.0 / (n - k)));
    }
    bound = 2 * bound + 1e-3;
    std::vector<C> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        z[static_cast<std::size_t>(k)] = std::polar(bound * 0.5, 2 * M_PI * k / n + 0.4);
    }
    auto eval = [&](C x, C &d) {
        C p = 0;
        d = 0;
        for (std::size_t k = a.size(); k-- > 0;) {
            d = d * x + p;
            p = p * x + a[k];
        }
        return p;
    };
    for (int it = 0; it < 500; ++it) {
        double worst = 0;
        for (int i = 0; i < n; ++i) {
            C d;
            const C p = eval(z[static_cast<std::size_t>(i)], d);
            if (p == C(0)) {
                continue;
            }
            const C ratio = p / d;
            C s = 0;
            for (int j = 0; j < n; ++j) {
                if (j != i) {
                    s += 1.0 / (z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
                }
            }
            const C w = ratio / (1.0 - ratio * s);
            z[static_cast<std::size_t>(i)] -= w;
            worst = std::max(worst, std::abs(w) / (1 + std::abs(z[static_cast<std::size_t>(i)])));
        }
        if (worst < 1e-15) {
            break;
        }
    }
    return z;
}

inline ComplexBall from_complex_double(std::complex<double> z, mpfr_prec_t prec)
{
    Float re(prec), im(prec);
    mpfr_set_d(re.get(), z.real(), MPFR_RNDN);
    mpfr_set_d(im.get(), z.imag(), MPFR_RNDN);
    return ComplexBall(Ball(std::move(re), Mag()), Ball(std::move(im), Mag()));
}

// Newton refinement of a simple root approximation; returns a bare midpoint.
inline ComplexBall newton_polish(const UPoly &f, ComplexBall z, mpfr_prec_t prec, int extra_steps = 4)
{
    const UPoly df = f.derivative();
    z = z.with_prec(prec).mid_ball();
    int steps = extra_steps;
    for (mpfr_prec_t p = 50; p < prec; p *= 2) {
        ++steps;
    }
    for (int it = 0; it < steps; ++it) {
        const ComplexBall d = df(z);
        if (d.contains_zero()) {
            break;
        }
        z = (z - f(z) / d).mid_ball();
    }
    return z;
}

inline ComplexBall square_ball(const ComplexBall &mid, const Mag &r)
{
    return ComplexBall(Ball(mid.re().mid(), r), Ball(mid.im().mid(), r));
}

// Lower bound for the distance between the squares' centres minus radii
// (max metric); negative when they overlap.
inline bool squares_disjoint(const ComplexBall &a, const ComplexBall &b)
{
    return !a.overlaps(b);
}

} // namespace detail

// A number given by a square-free defining polynomial over Q and a complex
// ball containing exactly one of its roots. Rational numbers carry the exact
// value and the linear polynomial x - q.
class AlgebraicNumber
{
public:
    AlgebraicNumber() : AlgebraicNumber(Rational(0)) {}
    explicit AlgebraicNumber(const Rational &q, mpfr_prec_t prec = 128)
        : poly_(UPoly::linear_root(q)), enc_(ComplexBall::from_rational(q, prec)), rational_(q)
    {
    }
    AlgebraicNumber(UPoly poly, ComplexBall enclosure) : poly_(std::move(poly).monic()), enc_(std::move(enclosure))
    {
        if (poly_.degree() == 1) {
            rational_ = -poly_.coeff(0);
        }
    }

    const UPoly &poly() const noexcept
    {
        return poly_;
    }
    const ComplexBall &enclosure() const noexcept
    {
        return enc_;
    }
    bool is_rational() const noexcept
    {
        return rational_.has_value();
    }
    const Rational &rational() const
    {
        if (!rational_) {
            throw DomainError("algebraic number is not rational");
        }
        return *rational_;
    }
    bool is_zero() const
    {
        return rational_ && *rational_ == 0;
    }
    // Real when rational, or when the isolating square is centred on the real
    // axis (a real polynomial's lone root in a conjugation-symmetric region).
    bool is_real() const
    {
        return rational_ || enc_.im().mid().is_zero();
    }

    // Enclosure of the value at (at least) the requested precision.
    ComplexBall value(mpfr_prec_t prec) const
    {
        if (rational_) {
            return ComplexBall::from_rational(*rational_, prec);
        }
        if (enc_.prec() >= prec && enc_.relative_accuracy_digits() >= 0.3 * static_cast<double>(prec) - 3) {
            return enc_.with_prec(prec);
        }
        for (int attempt = 0; attempt < 3; ++attempt) {
            const mpfr_prec_t wp = prec + 16 + 32 * attempt;
            ComplexBall z = detail::newton_polish(poly_, enc_.mid_ball(), wp, 4 + 4 * attempt);
            if (is_real()) {
                z = ComplexBall(z.re(), Ball(wp));
            }
            // a degree-n polynomial has a root within n |f/f'| of any point
            const ComplexBall fz = poly_(z), dz = poly_.derivative()(z);
            if (dz.contains_zero()) {
                continue;
            }
            const Mag r = Mag::div_lower(fz.abs_upper() * Mag::from_rational(poly_.degree()), dz.abs_lower());
            const ComplexBall cand = is_real() ? ComplexBall(Ball(z.re().mid(), r), Ball(wp))
                                               : detail::square_ball(z, r);
            if (enc_.contains(cand)) {
                return cand.with_prec(prec);
            }
        }
        throw PrecisionError("cannot refine algebraic number enclosure of root of " + poly_.to_string());
    }

    AlgebraicNumber conj() const
    {
        if (is_real()) {
            return *this;
        }
        return AlgebraicNumber(poly_, enc_.conj());
    }

    // Exact test p(this) == 0.
    bool is_root_of(const UPoly &p) const
    {
        if (p.is_zero()) {
            return true;
        }
        if (rational_) {
            return p(*rational_) == 0;
        }
        const UPoly g = UPoly::gcd(p, poly_);
        if (g.degree() <= 0) {
            return false;
        }
        if (g.degree() == poly_.degree()) {
            return true;
        }
        return contains_root_of(g);
    }

    friend bool operator==(const AlgebraicNumber &a, const AlgebraicNumber &b)
    {
        if (a.rational_ && b.rational_) {
            return *a.rational_ == *b.rational_;
        }
        if (a.rational_ || b.rational_) {
            return false; // poly_ is square-free with no rational factor
        }
        if (!a.enc_.overlaps(b.enc_)) {
            return false;
        }
        const UPoly g = UPoly::gcd(a.poly_, b.poly_);
        if (g.degree() <= 0) {
            return false;
        }
        return a.contains_root_of(g) && b.contains_root_of(g);
    }
    friend bool operator!=(const AlgebraicNumber &a, const AlgebraicNumber &b)
    {
        return !(a == b);
    }

    std::string to_string(std::size_t digits = 20) const
    {
        if (rational_) {
            return rational_->get_str();
        }
        return "root of " + poly_.to_string() + " near " + enc_.to_string(digits);
    }

private:
    // Whether one of g's roots (g divides poly_) is the root isolated by enc_.
    bool contains_root_of(const UPoly &g) const;

    UPoly poly_;
    ComplexBall enc_;
    std::optional<Rational> rational_;
};

struct Root {
    AlgebraicNumber value;
    int multiplicity = 1;
};

namespace detail
{

// Certified isolation of the roots of a square-free polynomial with no
// rational roots, by Weierstrass inclusion disks D(z_i, n |W_i|).
inline std::optional<std::vector<ComplexBall>> weierstrass_isolate(const UPoly &h,
                                                                   const std::vector<ComplexBall> &approx,
                                                                   mpfr_prec_t prec)
{
    const UPoly m = h.monic();
    const std::size_t n = approx.size();
    std::vector<ComplexBall> out;
    for (std::size_t i = 0; i < n; ++i) {
        ComplexBall prod = ComplexBall::from_int(1, prec);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                prod *= approx[i] - approx[j];
            }
        }
        if (prod.contains_zero()) {
            return std::nullopt;
        }
        const Mag r = Mag::div_lower(m(approx[i]).abs_upper() * Mag::from_rational(static_cast<long>(n)),
                                     prod.abs_lower());
        out.push_back(square_ball(approx[i], r));
    }
    // a disk meeting the real axis is replaced by a real-centred one
    for (auto &b : out) {
        if (b.im().contains_zero()) {
            const Mag r = b.rad() + Mag::abs_upper(b.im().mid());
            b = ComplexBall(Ball(b.re().mid(), r), Ball(Float(b.prec()), r));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!squares_disjoint(out[i], out[j])) {
                return std::nullopt;
            }
        }
    }
    return out;
}

// Order used for root indices: real part ascending, then imaginary part.
// Real parts whose balls overlap count as equal (conjugate pairs).
inline bool root_less(const ComplexBall &a, const ComplexBall &b)
{
    if (!a.re().overlaps(b.re())) {
        return mpfr_less_p(a.re().mid().get(), b.re().mid().get()) != 0;
    }
    return mpfr_less_p(a.im().mid().get(), b.im().mid().get()) != 0;
}

// Distinct roots of a square-free polynomial f.
inline std::vector<AlgebraicNumber> isolate_squarefree(const UPoly &f, mpfr_prec_t prec)
{
    std::vector<AlgebraicNumber> out;
    if (f.degree() <= 0) {
        return out;
    }
    // bound on denominators of rational roots: leading coeff of the integer form
    Integer den_lcm = 1;
    for (const auto &c : f.coeffs()) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    }
    Integer lc_int = abs(Integer(f.leading() * Rational(den_lcm)));
    const auto seeds = aberth(f);
    for (mpfr_prec_t wp = std::max<mpfr_prec_t>(prec, 128);; wp *= 2) {
        std::vector<ComplexBall> approx;
        for (const auto &s : seeds) {
            approx.push_back(newton_polish(f, from_complex_double(s, wp), wp));
        }
        // rational roots are split off exactly
        UPoly h = f;
        std::vector<ComplexBall> rest;
        std::vector<Rational> rats;
        for (const auto &z : approx) {
            std::optional<Rational> q;
            if (mpfr_cmpabs(z.im().mid().get(), Float::from_double(1e-20).get()) < 0 ||
                z.im().mid().is_zero()) {
                Ball re = z.re();
                re = re.add_error(Mag::pow2(-static_cast<long>(wp) / 2) * (Mag::from_double(1) + re.abs_upper()));
                q = reconstruct_rational(re, std::max(lc_int, Integer(1)));
            }
            if (q && h(*q) == 0 && std::find(rats.begin(), rats.end(), *q) == rats.end()) {
                rats.push_back(*q);
                h = h / UPoly::linear_root(*q);
            } else {
                rest.push_back(z);
            }
        }
        if (static_cast<int>(rest.size()) != h.degree()) {
            if (wp > 16 * std::max<mpfr_prec_t>(prec, 128)) {
                throw PrecisionError("root isolation failed for " + f.to_string());
            }
            continue;
        }
        auto iso = rest.empty() ? std::optional<std::vector<ComplexBall>>(std::vector<ComplexBall>{})
                                : weierstrass_isolate(h, rest, wp);
        if (!iso) {
            if (wp > 16 * std::max<mpfr_prec_t>(prec, 128)) {
                throw PrecisionError("root enclosures overlap for " + f.to_string());
            }
            continue;
        }
        for (const auto &q : rats) {
            out.emplace_back(q, prec);
        }
        for (auto &b : *iso) {
            out.emplace_back(h, b);
        }
        return out;
    }
}

} // namespace detail

inline bool AlgebraicNumber::contains_root_of(const UPoly &g) const
{
    for (mpfr_prec_t p = std::max<mpfr_prec_t>(enc_.prec(), 128); p <= 8192; p *= 2) {
        const auto roots = detail::isolate_squarefree(g, p);
        bool undecided = false;
        for (const auto &r : roots) {
            const ComplexBall v = r.value(p);
            if (enc_.contains(v)) {
                return true;
            }
            if (enc_.overlaps(v)) {
                undecided = true;
            }
        }
        if (!undecided) {
            return false;
        }
    }
    throw PrecisionError("cannot decide algebraic number identity");
}

// All complex roots of p with multiplicities, ordered by (real, imaginary)
// part. Enclosures of distinct roots are pairwise disjoint.
inline std::vector<Root> isolate_roots(const UPoly &p, mpfr_prec_t prec)
{
    if (p.is_zero()) {
        throw DomainError("isolate_roots: zero polynomial");
    }
    std::vector<Root> out;
    const auto sqf = squarefree_decomposition(p);
    for (std::size_t i = 0; i < sqf.size(); ++i) {
        for (auto &a : detail::isolate_squarefree(sqf[i], prec)) {
            out.push_back(Root{std::move(a), static_cast<int>(i + 1)});
        }
    }
    std::sort(out.begin(), out.end(), [prec](const Root &a, const Root &b) {
        return detail::root_less(a.value.value(prec), b.value.value(prec));
    });
    return out;
}

// "0", "-1/3" or "root-of:<poly>:<index>" with the index into the ordered
// distinct roots of the polynomial.
inline AlgebraicNumber parse_point(const std::string &text, mpfr_prec_t prec = 256)
{
    const std::string prefix = "root-of:";
    if (text.rfind(prefix, 0) != 0) {
        return AlgebraicNumber(parse_rational(text), prec);
    }
    const std::string rest = text.substr(prefix.size());
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) {
        throw ParseError("expected root-of:<poly>:<index>, got '" + text + "'");
    }
    char var = 'z';
    for (char c : rest.substr(0, colon)) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            var = c;
            break;
        }
    }
    const UPoly p = parse_upoly(rest.substr(0, colon), var);
    std::size_t idx = 0;
    try {
        idx = std::stoul(rest.substr(colon + 1));
    } catch (const std::exception &) {
        throw ParseError("bad root index in '" + text + "'");
    }
    const auto roots = isolate_roots(p, prec);
    if (idx >= roots.size()) {
        throw ParseError("root index " + std::to_string(idx) + " out of range for " + p.to_string());
    }
    return roots[idx].value;
}

} // namespace lacuna

#endif
