#ifndef LACUNA_PIPELINE_PIPELINE_HPP
#define LACUNA_PIPELINE_PIPELINE_HPP

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <lacuna/continuation/connect.hpp>
#include <lacuna/critical/critical.hpp>
#include <lacuna/dfinite/frobenius.hpp>
#include <lacuna/dfinite/ode.hpp>
#include <lacuna/error.hpp>
#include <lacuna/io/json.hpp>
#include <lacuna/oracle/series.hpp>
#include <lacuna/resolver/expr.hpp>
#include <lacuna/resolver/resolver.hpp>
#include <lacuna/transfer/transfer.hpp>

namespace lacuna
{

// Error raised by a pipeline stage; keeps the code of the underlying failure.
class StageError : public Error
{
public:
    StageError(const std::string &stage, const Error &e)
        : Error(e.code(), "stage " + stage + ": " + e.what()), stage_(stage)
    {
    }
    const std::string &stage() const noexcept
    {
        return stage_;
    }

private:
    std::string stage_;
};

struct PipelineConfig {
    std::string function_file;
    std::string ode_file; // empty: stop after the critical stage
    std::string direction = "1,1,1,1";
    std::string target = "a3";    // origin basis element the diagonal series equals
    std::string singularity = ""; // empty: first dominant nonzero singular point
    std::string unit_expr;        // closed-form unit constant; empty skips the multiplicity stage
    long digits = 50;
    std::size_t box = 12;
    std::size_t n_max = 200;
    std::vector<long> predict_at{50, 100, 200};
    std::vector<std::string> path; // waypoint expressions overriding the default path
    bool symmetric = true;
    std::uint64_t seed = 1;
    std::string out_dir = "pipeline_out";
};

inline PipelineConfig pipeline_config_from_json(const io::json &j, const std::filesystem::path &base = {})
{
    auto resolve = [&](const std::string &p) {
        std::filesystem::path q(p);
        return (q.is_relative() && !base.empty() ? base / q : q).string();
    };
    PipelineConfig c;
    c.function_file = resolve(io::detail::get<std::string>(j, "function"));
    if (j.contains("ode")) {
        c.ode_file = resolve(io::detail::get<std::string>(j, "ode"));
    }
    c.direction = j.value("direction", c.direction);
    c.target = j.value("target", c.target);
    c.singularity = j.value("singularity", c.singularity);
    c.unit_expr = j.value("unit_expr", c.unit_expr);
    c.digits = j.value("digits", c.digits);
    c.box = j.value("box", c.box);
    c.n_max = j.value("n_max", c.n_max);
    c.predict_at = j.value("predict_at", c.predict_at);
    c.path = j.value("path", c.path);
    c.symmetric = j.value("symmetric", c.symmetric);
    c.seed = j.value("seed", c.seed);
    if (j.contains("out")) {
        c.out_dir = resolve(j.at("out").get<std::string>());
    }
    if (c.digits < 10) {
        throw ParseError("pipeline: digits must be at least 10");
    }
    if (c.box < 1 || c.box > 64) {
        throw ParseError("pipeline: oracle box size must lie in [1, 64]");
    }
    return c;
}

inline std::size_t target_index(const std::string &t, std::size_t order)
{
    if (t.size() < 2 || t[0] != 'a') {
        throw ParseError("target must look like a1, a2, ...; got '" + t + "'");
    }
    std::size_t k = 0;
    try {
        k = std::stoul(t.substr(1));
    } catch (const std::exception &) {
        throw ParseError("target must look like a1, a2, ...; got '" + t + "'");
    }
    if (k < 1 || k > order) {
        throw ParseError("target " + t + " out of range for an ODE of order " + std::to_string(order));
    }
    return k - 1;
}

inline std::vector<ComplexBall> unit_target(std::size_t index, std::size_t order, mpfr_prec_t prec)
{
    std::vector<ComplexBall> t(order, ComplexBall(prec));
    t.at(index) = ComplexBall::from_int(1, prec);
    return t;
}

// Nonzero singular points of least modulus (ties kept).
inline std::vector<AlgebraicNumber> dominant_singularities(const ODE &ode, mpfr_prec_t prec)
{
    std::vector<AlgebraicNumber> pts;
    for (const auto &s : ode.singular_points(prec)) {
        if (!s.is_zero()) {
            pts.push_back(s);
        }
    }
    if (pts.empty()) {
        return {};
    }
    Ball best = abs(pts.front().value(prec));
    for (const auto &s : pts) {
        const Ball a = abs(s.value(prec));
        if (mpfr_less_p(a.upper().get(), best.lower().get())) {
            best = a;
        }
    }
    std::vector<AlgebraicNumber> out;
    for (const auto &s : pts) {
        if (abs(s.value(prec)).overlaps(best)) {
            out.push_back(s);
        }
    }
    return out;
}

// Leading singular local terms of sum_i C_i b_i at omega: the smallest
// non-integral exponent (or any exponent carrying a logarithm), one term per
// log power.
inline std::vector<LocalTerm> leading_local_terms(const std::vector<LocalSolution> &basis,
                                                  const std::vector<ComplexBall> &C)
{
    std::vector<LocalTerm> all;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto &s = basis[i];
        if (s.c.empty() || C[i].contains_zero()) {
            continue;
        }
        Rational fact = 1;
        for (std::size_t l = 0; l < s.c[0].size(); ++l) {
            if (l > 1) {
                fact *= Rational(static_cast<long>(l));
            }
            if (detail::is_exact_zero(s.c[0][l]) || (is_natural(s.alpha) && l == 0)) {
                continue;
            }
            LocalTerm t{s.omega, s.alpha, static_cast<int>(l), C[i] * s.c[0][l] * Rational(1 / fact)};
            auto same = std::find_if(all.begin(), all.end(), [&](const LocalTerm &u) {
                return u.alpha == t.alpha && u.log_pow == t.log_pow;
            });
            if (same != all.end()) {
                same->C += t.C;
            } else {
                all.push_back(std::move(t));
            }
        }
    }
    if (all.empty()) {
        return {};
    }
    Rational lo = all.front().alpha;
    for (const auto &t : all) {
        lo = std::min(lo, t.alpha);
    }
    std::vector<LocalTerm> out;
    for (const auto &t : all) {
        if (t.alpha == lo) {
            out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end(), [](const LocalTerm &a, const LocalTerm &b) { return a.log_pow > b.log_pow; });
    return out;
}

struct PipelineReport {
    io::json summary;
    std::vector<std::pair<std::string, io::json>> stages;
};

namespace detail
{

inline mpfr_prec_t digits_to_bits(long digits)
{
    return static_cast<mpfr_prec_t>(static_cast<double>(digits) * 3.3219280948873623) + 16;
}

template <class F> auto run_stage(const std::string &name, F &&f)
{
    try {
        return f();
    } catch (const StageError &) {
        throw;
    } catch (const Error &e) {
        throw StageError(name, e);
    }
}

} // namespace detail

// Oracle, critical analysis, connection, transfer, multiplicity and drop
// diagnostics. Stage reports carry the hash of the inputs and the precision.
inline PipelineReport run_pipeline(const PipelineConfig &cfg)
{
    PipelineReport rep;
    const mpfr_prec_t prec = detail::digits_to_bits(cfg.digits);
    std::string inputs;
    const RatFun f = detail::run_stage("input", [&] {
        const io::json j = io::read_file(cfg.function_file);
        inputs += j.dump();
        return io::ratfun_from_json(j);
    });
    std::optional<ODE> ode;
    if (!cfg.ode_file.empty()) {
        ode = detail::run_stage("input", [&] {
            const io::json j = io::read_file(cfg.ode_file);
            inputs += j.dump();
            return io::ode_from_json(j);
        });
    }
    const Direction dir = detail::run_stage("input", [&] { return Direction::parse(cfg.direction); });
    inputs += dir.to_string() + cfg.target + cfg.singularity + cfg.unit_expr + std::to_string(cfg.digits);
    const std::string hash = io::fnv1a(inputs);
    auto stage = [&](const std::string &name, io::json body, io::json trunc = nullptr) {
        io::json j = {{"stage", name}, {"inputs_hash", hash}, {"prec_bits", prec}};
        if (!trunc.is_null()) {
            j["truncation"] = trunc;
        }
        j["result"] = std::move(body);
        rep.stages.emplace_back(name, std::move(j));
    };
    io::json &sum = rep.summary;
    sum["inputs_hash"] = hash;
    sum["prec_bits"] = prec;

    // oracle
    std::vector<long> r;
    for (const auto &q : dir.r) {
        if (q.get_den() != 1) {
            throw StageError("oracle", ParseError("direction must be integral for the series oracle"));
        }
        r.push_back(q.get_num().get_si());
    }
    const std::vector<Rational> diag = detail::run_stage("oracle", [&] {
        const long m = *std::max_element(r.begin(), r.end());
        return diagonal(expand(f, cfg.box * static_cast<std::size_t>(m)), r);
    });
    {
        io::json d = io::json::array();
        for (const auto &v : diag) {
            d.push_back(to_string(v));
        }
        io::json body = {{"direction", dir.to_string()}, {"coefficients", d}};
        if (ode) {
            body["annihilated"] = detail::run_stage("oracle", [&] { return verify_annihilation(*ode, diag); });
            sum["annihilated"] = body["annihilated"];
        }
        stage("oracle", body, {{"box", cfg.box}});
    }

    // critical points
    SolveOptions so;
    so.prec = std::max<mpfr_prec_t>(prec, 128);
    so.multistart.seed = cfg.seed;
    const CriticalReport crit = detail::run_stage("crit", [&] { return critical_report(f, dir, cfg.symmetric, so); });
    stage("crit", io::to_json(crit));
    sum["c1"] = io::to_json(crit.c1);
    sum["c2"] = crit.c2 ? io::to_json(*crit.c2) : io::json(nullptr);
    sum["lacuna"] = crit.lacuna;
    sum["supporting"] = crit.supporting;
    if (!ode) {
        return rep;
    }

    // local bases and connection
    const std::size_t ti = detail::run_stage("connect", [&] { return target_index(cfg.target, ode->order()); });
    std::vector<AlgebraicNumber> targets = detail::run_stage("connect", [&] {
        std::vector<AlgebraicNumber> t;
        if (!cfg.singularity.empty()) {
            t.push_back(parse_point(cfg.singularity, prec));
        } else {
            const auto dom = dominant_singularities(*ode, prec);
            if (dom.empty()) {
                throw DomainError("the ODE has no nonzero singular point");
            }
            t.push_back(dom.front());
        }
        if (!t.front().is_real()) {
            t.push_back(t.front().conj());
        }
        return t;
    });
    ConnectOptions co;
    co.digits = cfg.digits;
    for (const auto &w : cfg.path) {
        co.via.push_back(Expr::parse(w).eval(prec));
    }
    std::vector<AsymptoticTerm> terms;
    io::json conn = io::json::array();
    io::json trans = io::json::array();
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto &w = targets[k];
        ConnectOptions ck = co;
        if (k > 0 && !co.via.empty()) {
            for (auto &v : ck.via) {
                v = v.conj();
            }
        }
        const ConnectionResult cr = detail::run_stage("connect", [&] {
            return connect(*ode, AlgebraicNumber(Rational(0)), w, unit_target(ti, ode->order(), 64), ck);
        });
        const auto far = detail::run_stage("dfinite", [&] {
            return frobenius_basis(*ode, w, detail::basis_terms(cr.prec), cr.prec);
        });
        io::json b = io::json::array();
        for (const auto &s : far) {
            b.push_back({{"alpha", to_string(s.alpha)}, {"log_power", s.log_power}});
        }
        io::json cj = io::to_json(cr);
        cj["at"] = io::to_json(w);
        cj["basis"] = b;
        conn.push_back(cj);
        if (k == 0) {
            sum["connection_constants"] = cj["constants"];
            sum["connection_digits"] = cr.digits;
        }
        detail::run_stage("transfer", [&] {
            for (const auto &lt : leading_local_terms(far, cr.constants)) {
                for (const auto &st : to_one_minus_form_all(lt, cr.prec)) {
                    if (auto at = term_asymptotics(st)) {
                        trans.push_back(io::to_json(*at));
                        if (st.log_pow == lt.log_pow) {
                            terms.push_back(*at);
                        }
                    }
                }
                break; // leading log power only
            }
            return 0;
        });
    }
    stage("connect", conn, {{"basis_terms", detail::basis_terms(prec)}});

    // transfer
    const AsymptoticExpansion ex = detail::run_stage("transfer", [&] { return combine(terms); });
    io::json tj = {{"terms", trans}};
    if (ex.error_power) {
        tj["error"] = {{"modulus", io::to_json(*ex.modulus)}, {"power", to_string(*ex.error_power)}};
    }
    if (terms.size() == 2) {
        const RealAsymptoticForm rf = detail::run_stage("transfer", [&] { return realify(terms[0], terms[1]); });
        tj["real_form"] = io::to_json(rf);
        sum["real_form"] = tj["real_form"];
    }
    if (!terms.empty()) {
        sum["leading_term"] = io::to_json(terms.front());
    }

    // exact sequence and prediction
    const std::vector<Rational> seq = detail::run_stage("drop", [&] {
        std::size_t n = std::max(cfg.n_max, diag.size() - 1);
        for (const long m : cfg.predict_at) {
            n = std::max(n, static_cast<std::size_t>(std::max(m, 0L)));
        }
        return recurrence_extend(ode_to_recurrence(*ode), diag, n);
    });
    io::json pred = io::json::array();
    {
        std::vector<long> ns;
        for (long n : cfg.predict_at) {
            if (n >= 1 && static_cast<std::size_t>(n) < seq.size()) {
                ns.push_back(n);
            }
        }
        const auto p = predict_terms(ex, ns, prec);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const Ball exact = Ball::from_rational(seq[static_cast<std::size_t>(ns[i])], prec);
            io::json e = {{"n", ns[i]}, {"predicted", io::to_json(p[i])}};
            if (!exact.contains_zero()) {
                const Ball rel = abs(p[i] / exact - Ball::from_int(1, prec));
                e["relative_error"] = rel.mid().to_double();
            }
            pred.push_back(e);
        }
    }
    tj["predictions"] = pred;
    sum["predictions"] = pred;
    stage("transfer", tj);

    // multiplicity
    if (!cfg.unit_expr.empty() && !terms.empty()) {
        detail::run_stage("resolve", [&] {
            const ComplexBall unit = Expr::parse(cfg.unit_expr).eval(prec);
            io::json rj = io::json::array();
            for (std::size_t k = 0; k < terms.size(); ++k) {
                const MultiplicityResult m =
                    resolve_multiplicity(terms[k].constant, k == 0 ? unit : unit.conj());
                rj.push_back(io::to_json(m));
                if (k == 0) {
                    sum["multiplicity"] = m.m;
                    sum["multiplicity_residual"] = io::to_json(m.residual);
                }
            }
            stage("resolve", rj);
            return 0;
        });
    }

    // exponential drop
    if (crit.c2 && seq.size() > cfg.n_max) {
        const DropReport d = detail::run_stage("drop", [&] { return drop_report(seq, crit.c1, *crit.c2, cfg.n_max); });
        stage("drop", io::to_json(d), {{"n_max", cfg.n_max}});
        sum["drop_rate"] = io::to_json(d.rate);
    }
    return rep;
}

inline void write_pipeline_report(const PipelineReport &rep, const std::string &dir)
{
    std::filesystem::create_directories(dir);
    for (const auto &[name, j] : rep.stages) {
        io::write_file((std::filesystem::path(dir) / (name + ".json")).string(), j);
    }
    io::write_file((std::filesystem::path(dir) / "summary.json").string(), rep.summary);
}

} // namespace lacuna

#endif
