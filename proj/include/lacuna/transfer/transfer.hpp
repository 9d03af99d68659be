#ifndef LACUNA_TRANSFER_TRANSFER_HPP
#define LACUNA_TRANSFER_TRANSFER_HPP

#include <optional>
#include <vector>

#include <lacuna/algebra/roots.hpp>
#include <lacuna/error.hpp>
#include <lacuna/numeric/complex_ball.hpp>
#include <lacuna/numeric/gamma.hpp>
#include <lacuna/numeric/rational.hpp>

namespace lacuna
{

// C (z - omega)^alpha log^r (z - omega)
struct LocalTerm {
    AlgebraicNumber omega;
    Rational alpha;
    int log_pow = 0;
    ComplexBall C;
};

// C (1 - z/omega)^alpha log^r (1 - z/omega)
struct SingularTerm {
    AlgebraicNumber omega;
    Rational alpha;
    int log_pow = 0;
    ComplexBall C;
};

// constant * growth^n * n^power * log^r n
struct AsymptoticTerm {
    AlgebraicNumber omega;
    ComplexBall growth;
    Rational power;
    int log_pow = 0;
    ComplexBall constant;
};

// modulus^n n^power log^r n amplitude cos(n frequency + phase)
struct RealAsymptoticForm {
    Ball modulus;
    Rational power;
    int log_pow = 0;
    Ball amplitude;
    Ball frequency;
    Ball phase;
};

struct AsymptoticExpansion {
    std::vector<AsymptoticTerm> terms;
    std::optional<Ball> modulus;         // common |growth|
    std::optional<Rational> error_power; // O(modulus^n n^error_power)
};

inline bool is_natural(const Rational &a)
{
    return a >= 0 && a.get_den() == 1;
}

// All terms of the expansion in the (1 - z/omega) convention, highest log
// power first:
// (z-w)^a log^r(z-w) = (-w)^a (1-z/w)^a sum_k binom(r,k) log^k(1-z/w) log^(r-k)(-w).
inline std::vector<SingularTerm> to_one_minus_form_all(const LocalTerm &t, mpfr_prec_t prec)
{
    if (t.log_pow < 0) {
        throw DomainError("to_one_minus_form: negative log power");
    }
    const ComplexBall w = t.omega.value(prec);
    if (w.contains_zero()) {
        throw DomainError("to_one_minus_form: singularity may be at the origin");
    }
    const ComplexBall mw = -w;
    const ComplexBall scale = t.alpha == 0 ? ComplexBall::from_int(1, prec) : pow(mw, t.alpha);
    const ComplexBall L = t.log_pow > 0 ? log(mw) : ComplexBall::from_int(1, prec);
    std::vector<SingularTerm> out;
    Integer binom = 1;
    ComplexBall lp = ComplexBall::from_int(1, prec);
    for (int k = t.log_pow; k >= 0; --k) {
        // binom(r, k) L^(r-k)
        out.push_back({t.omega, t.alpha, k, t.C * scale * lp * Rational(binom)});
        binom = binom * k / (t.log_pow - k + 1);
        lp = lp * L;
    }
    return out;
}

// Leading (highest log power) term only.
inline SingularTerm to_one_minus_form(const LocalTerm &t, mpfr_prec_t prec)
{
    return to_one_minus_form_all(t, prec).front();
}

// [z^n] C (1-z/w)^a log^r(1-z/w) ~ (-1)^r C / Gamma(-a) w^-n n^(-a-1) log^r n.
// Nonnegative integer exponents without logarithm are analytic: no term.
inline std::optional<AsymptoticTerm> term_asymptotics(const SingularTerm &t)
{
    const mpfr_prec_t prec = t.C.prec();
    if (is_natural(t.alpha)) {
        if (t.log_pow == 0) {
            return std::nullopt;
        }
        throw DomainError("term_asymptotics: logarithmic term with integer exponent is not supported");
    }
    const ComplexBall w = t.omega.value(prec);
    if (w.contains_zero()) {
        throw DomainError("term_asymptotics: singularity may be at the origin");
    }
    AsymptoticTerm a;
    a.omega = t.omega;
    a.growth = ComplexBall::from_int(1, prec) / w;
    a.power = -t.alpha - 1;
    a.log_pow = t.log_pow;
    a.constant = t.C / gamma(Rational(-t.alpha), prec);
    if (t.log_pow % 2 != 0) {
        a.constant = -a.constant;
    }
    return a;
}

// Sum over singularities on one circle. The error exponent is one below the
// largest power present.
inline AsymptoticExpansion combine(const std::vector<AsymptoticTerm> &terms)
{
    AsymptoticExpansion e;
    e.terms = terms;
    if (terms.empty()) {
        return e;
    }
    const Ball m = abs(terms.front().growth);
    Rational top = terms.front().power;
    for (const auto &t : terms) {
        if (!abs(t.growth).overlaps(m)) {
            throw DomainError("combine: terms come from singularities of different moduli");
        }
        top = std::max(top, t.power);
    }
    e.modulus = m;
    e.error_power = top - 1;
    return e;
}

inline RealAsymptoticForm realify(const AsymptoticTerm &a, const AsymptoticTerm &b)
{
    if (a.growth.im().contains_zero()) {
        throw DomainError("realify: growth is not certifiably non-real; not a pair of distinct points");
    }
    if (a.power != b.power || a.log_pow != b.log_pow || !a.growth.overlaps(b.growth.conj()) ||
        !a.constant.overlaps(b.constant.conj())) {
        throw DomainError("realify: terms are not complex conjugates");
    }
    RealAsymptoticForm r;
    r.modulus = abs(a.growth);
    r.power = a.power;
    r.log_pow = a.log_pow;
    r.amplitude = abs(a.constant).mul_2exp(1);
    r.frequency = arg(a.growth);
    // the phase is only defined mod 2 pi; near the negative axis measure it from -K
    if (a.constant.im().contains_zero() && a.constant.re().is_negative()) {
        r.phase = arg(-a.constant) + ball_pi(a.constant.prec());
    } else {
        r.phase = arg(a.constant);
    }
    return r;
}

// The two conjugate terms a realified form stands for.
inline std::pair<AsymptoticTerm, AsymptoticTerm> expand(const RealAsymptoticForm &f)
{
    auto polar = [](const Ball &m, const Ball &t) { return ComplexBall(m * cos(t), m * sin(t)); };
    AsymptoticTerm a;
    a.growth = polar(f.modulus, f.frequency);
    a.power = f.power;
    a.log_pow = f.log_pow;
    a.constant = polar(f.amplitude.mul_2exp(-1), f.phase);
    AsymptoticTerm b = a;
    b.growth = a.growth.conj();
    b.constant = a.constant.conj();
    return {a, b};
}

// Real part of the expansion's sum at each n.
inline std::vector<Ball> predict_terms(const AsymptoticExpansion &e, const std::vector<long> &ns,
                                       mpfr_prec_t prec = 128)
{
    std::vector<Ball> out;
    for (const long n : ns) {
        if (n < 1) {
            throw DomainError("predict_terms: n must be positive");
        }
        ComplexBall s(prec);
        const Ball nb = Ball::from_int(n, prec);
        for (const auto &t : e.terms) {
            ComplexBall v = t.constant.with_prec(prec) * pow(t.growth.with_prec(prec), n) * pow(nb, t.power);
            if (t.log_pow > 0) {
                Ball l = log(nb), lp = Ball::from_int(1, prec);
                for (int k = 0; k < t.log_pow; ++k) {
                    lp = lp * l;
                }
                v = v * lp;
            }
            s += v;
        }
        out.push_back(s.re());
    }
    return out;
}

} // namespace lacuna

#endif
