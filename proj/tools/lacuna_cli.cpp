#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <lacuna/pipeline/pipeline.hpp>

using namespace lacuna;
using io::json;

namespace
{

struct Globals {
    long digits = 50;
    long prec_bits = 0; // 0: derived from digits
    std::uint64_t seed = 1;
    std::string out;

    mpfr_prec_t prec() const
    {
        return prec_bits > 0 ? static_cast<mpfr_prec_t>(prec_bits) : lacuna::detail::digits_to_bits(digits);
    }
};

void emit(const Globals &g, const json &j)
{
    if (g.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        io::write_file(g.out, j);
    }
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::vector<long> integral_direction(const Direction &d)
{
    std::vector<long> r;
    for (const auto &q : d.r) {
        if (q.get_den() != 1 || q < 0) {
            throw ParseError("direction must have nonnegative integer entries");
        }
        r.push_back(q.get_num().get_si());
    }
    return r;
}

json rationals(const std::vector<Rational> &v)
{
    json a = json::array();
    for (const auto &q : v) {
        a.push_back(to_string(q));
    }
    return a;
}

// Connection, transfer and realification for one origin basis element.
json asymptotics(const ODE &ode, std::size_t ti, const std::vector<AlgebraicNumber> &targets, const ConnectOptions &co,
                 std::vector<AsymptoticTerm> &terms)
{
    json conn = json::array(), all = json::array();
    for (std::size_t k = 0; k < targets.size(); ++k) {
        ConnectOptions ck = co;
        if (k > 0) {
            for (auto &v : ck.via) {
                v = v.conj();
            }
        }
        const auto cr = connect(ode, AlgebraicNumber(Rational(0)), targets[k], unit_target(ti, ode.order(), 64), ck);
        const auto far = frobenius_basis(ode, targets[k], lacuna::detail::basis_terms(cr.prec), cr.prec);
        json cj = io::to_json(cr);
        cj["at"] = io::to_json(targets[k]);
        conn.push_back(cj);
        const auto lt = leading_local_terms(far, cr.constants);
        if (lt.empty()) {
            continue;
        }
        for (const auto &st : to_one_minus_form_all(lt.front(), cr.prec)) {
            if (auto at = term_asymptotics(st)) {
                all.push_back(io::to_json(*at));
                if (st.log_pow == lt.front().log_pow) {
                    terms.push_back(*at);
                }
            }
        }
    }
    json j = {{"connections", conn}, {"terms", all}};
    const auto ex = combine(terms);
    if (ex.error_power) {
        j["error"] = {{"modulus", io::to_json(*ex.modulus)}, {"power", to_string(*ex.error_power)}};
    }
    if (terms.size() == 2) {
        j["real_form"] = io::to_json(realify(terms[0], terms[1]));
    }
    return j;
}

std::vector<AlgebraicNumber> targets_for(const ODE &ode, const std::string &to, mpfr_prec_t prec)
{
    std::vector<AlgebraicNumber> t;
    if (!to.empty()) {
        t.push_back(parse_point(to, prec));
    } else {
        const auto dom = dominant_singularities(ode, prec);
        if (dom.empty()) {
            throw DomainError("the ODE has no nonzero singular point");
        }
        t.push_back(dom.front());
    }
    if (!t.front().is_real()) {
        t.push_back(t.front().conj());
    }
    return t;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"lacuna: coefficient asymptotics of rational generating functions"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand
    Globals g;
    app.add_option("--digits", g.digits, "target decimal digits")->check(CLI::PositiveNumber);
    app.add_option("--prec-bits", g.prec_bits, "working precision in bits (overrides --digits)");
    app.add_option("--seed", g.seed, "seed for multistart root finding");
    app.add_option("--out", g.out, "output file (pipeline: output directory)");

    // oracle
    auto *oracle = app.add_subcommand("oracle", "exact Taylor coefficients");
    oracle->require_subcommand(1);
    std::string fun, dir = "1,1,1,1", ode_file;
    std::size_t box = 12;
    auto *expand_cmd = oracle->add_subcommand("expand", "coefficients in the box [0, N]^d");
    expand_cmd->add_option("--fun", fun)->required();
    expand_cmd->add_option("--box", box);
    auto *diag_cmd = oracle->add_subcommand("diag", "coefficients along an integer direction");
    diag_cmd->add_option("--fun", fun)->required();
    diag_cmd->add_option("--dir", dir);
    diag_cmd->add_option("--box", box);
    diag_cmd->add_option("--ode", ode_file, "check the result against this ODE's recurrence");

    // crit
    auto *crit = app.add_subcommand("crit", "critical points, heights and lacuna hypotheses");
    bool symmetric = false, require = false;
    crit->add_option("--fun", fun)->required();
    crit->add_option("--dir", dir);
    crit->add_flag("--symmetric", symmetric, "use the permutation symmetry of the direction");
    crit->add_flag("--require-lacuna", require, "exit 4 unless the lacuna and supporting tests both pass");

    // dfinite
    auto *dfin = app.add_subcommand("dfinite", "local solutions of the ODE");
    dfin->require_subcommand(1);
    std::string at = "0";
    std::size_t order = 20;
    auto *basis_cmd = dfin->add_subcommand("basis", "Frobenius basis at a point");
    basis_cmd->add_option("--ode", ode_file)->required();
    basis_cmd->add_option("--at", at, "0, a rational, or root-of:<poly>:<index>");
    basis_cmd->add_option("--order", order, "truncation order");
    auto *sing_cmd = dfin->add_subcommand("singular", "singular points of the ODE");
    sing_cmd->add_option("--ode", ode_file)->required();
    std::size_t terms_n = 20;
    auto *rec_cmd = dfin->add_subcommand("recurrence", "coefficient recurrence and extension of a sequence");
    rec_cmd->add_option("--ode", ode_file)->required();
    rec_cmd->add_option("--terms", terms_n, "extend the analytic origin solution to this index");

    // connect
    auto *conn = app.add_subcommand("connect", "connection constants between the origin and a singular point");
    std::string target = "a3", to, path;
    conn->add_option("--ode", ode_file)->required();
    conn->add_option("--target", target, "origin basis element a1, a2, ...");
    conn->add_option("--to", to, "singular point, root-of:<poly>:<index>");
    conn->add_option("--path", path, "interior waypoints, comma separated expressions");

    // asympt
    auto *asympt = app.add_subcommand("asympt", "connection plus transfer to coefficient asymptotics");
    std::string ns = "50,100,200";
    asympt->add_option("--ode", ode_file)->required();
    asympt->add_option("--target", target);
    asympt->add_option("--to", to, "dominant singular point (default: first of least modulus)");
    asympt->add_option("--path", path);
    asympt->add_option("--n", ns, "indices for predicted-vs-exact comparison");

    // resolve
    auto *resolve = app.add_subcommand("resolve", "integer multiplicity against a closed-form unit constant");
    std::string numeric_from, numeric_expr, unit_expr;
    double tol = default_multiplicity_tolerance;
    resolve->add_option("--numeric-from", numeric_from, "asympt JSON output; uses its first term");
    resolve->add_option("--numeric", numeric_expr, "numeric constant as an expression");
    resolve->add_option("--unit-expr", unit_expr)->required();
    resolve->add_option("--tolerance", tol);

    // pipeline
    auto *pipe = app.add_subcommand("pipeline", "all stages from a config file");
    std::string config;
    pipe->add_option("--config", config)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return static_cast<int>(ErrorCode::parse);
    }

    try {
        const mpfr_prec_t prec = g.prec();
        if (*oracle) {
            const RatFun f = io::ratfun_from_json(io::read_file(fun));
            if (*expand_cmd) {
                const CoeffBox b = expand(f, box);
                json c = json::array();
                for (std::size_t i = 0; i < b.size(); ++i) {
                    if (b.data()[i] != 0) {
                        c.push_back({{"exp", b.exponent(i)}, {"value", to_string(b.data()[i])}});
                    }
                }
                emit(g, {{"dim", b.dim()}, {"box", b.bound()}, {"coeffs", c}});
            } else {
                const Direction d = Direction::parse(dir);
                const auto r = integral_direction(d);
                const long m = *std::max_element(r.begin(), r.end());
                const auto seq = diagonal(expand(f, box * static_cast<std::size_t>(std::max(m, 1L))), r);
                json j = {{"direction", d.to_string()}, {"coefficients", rationals(seq)}};
                if (!ode_file.empty()) {
                    j["annihilated"] = verify_annihilation(io::ode_from_json(io::read_file(ode_file)), seq);
                }
                emit(g, j);
            }
        } else if (*crit) {
            const RatFun f = io::ratfun_from_json(io::read_file(fun));
            SolveOptions so;
            so.prec = std::max<mpfr_prec_t>(prec, 128);
            so.multistart.seed = g.seed;
            const auto rep = critical_report(f, Direction::parse(dir), symmetric, so);
            json j = io::to_json(rep);
            j["prec_bits"] = so.prec;
            emit(g, j);
            if (require && !(rep.lacuna && rep.supporting)) {
                std::cerr << "lacuna hypotheses do not hold\n";
                return static_cast<int>(ErrorCode::hypothesis);
            }
        } else if (*dfin) {
            const ODE ode = io::ode_from_json(io::read_file(ode_file));
            if (*basis_cmd) {
                const AlgebraicNumber w = parse_point(at, prec);
                json b = json::array();
                for (const auto &s : frobenius_basis(ode, w, order, prec)) {
                    b.push_back(io::to_json(s));
                }
                emit(g, {{"at", io::to_json(w)}, {"order", order}, {"prec_bits", prec}, {"basis", b}});
            } else if (*sing_cmd) {
                json s = json::array();
                for (const auto &p : ode.singular_points(prec)) {
                    s.push_back(io::to_json(p));
                }
                emit(g, {{"singular_points", s}});
            } else {
                const Recurrence rec = ode_to_recurrence(ode);
                json q = json::array();
                for (const auto &p : rec.q) {
                    q.push_back(p.to_string("n"));
                }
                const auto b = frobenius_basis(ode, AlgebraicNumber(Rational(0)), ode.order() + 2, 64);
                json j = {{"start", rec.start}, {"coeffs", q}};
                for (const auto &s : b) {
                    if (s.log_power == 0 && s.exact && is_natural(s.alpha) && s.alpha == 0) {
                        std::vector<Rational> init;
                        for (const auto &row : *s.exact) {
                            init.push_back(row.empty() ? Rational(0) : row[0]);
                        }
                        j["analytic_solution"] = rationals(recurrence_extend(rec, init, terms_n));
                    }
                }
                emit(g, j);
            }
        } else if (*conn) {
            const ODE ode = io::ode_from_json(io::read_file(ode_file));
            ConnectOptions co;
            co.digits = g.digits;
            for (const auto &w : split(path, ',')) {
                co.via.push_back(Expr::parse(w).eval(prec));
            }
            const std::size_t ti = target_index(target, ode.order());
            const auto ts = targets_for(ode, to, prec);
            const auto cr = connect(ode, AlgebraicNumber(Rational(0)), ts.front(), unit_target(ti, ode.order(), 64), co);
            json j = io::to_json(cr);
            j["target"] = target;
            j["at"] = io::to_json(ts.front());
            emit(g, j);
        } else if (*asympt) {
            const ODE ode = io::ode_from_json(io::read_file(ode_file));
            ConnectOptions co;
            co.digits = g.digits;
            for (const auto &w : split(path, ',')) {
                co.via.push_back(Expr::parse(w).eval(prec));
            }
            const std::size_t ti = target_index(target, ode.order());
            std::vector<AsymptoticTerm> terms;
            json j = asymptotics(ode, ti, targets_for(ode, to, prec), co, terms);
            std::vector<long> idx;
            for (const auto &s : split(ns, ',')) {
                idx.push_back(std::stol(s));
            }
            // exact coefficients of the target when it is a power series
            const auto b = frobenius_basis(ode, AlgebraicNumber(Rational(0)), ode.order() + 2, 64);
            const auto &s = b.at(ti);
            json pred = json::array();
            const auto p = predict_terms(combine(terms), idx, prec);
            std::optional<std::vector<Rational>> seq;
            if (s.exact && s.alpha == 0 && !to_log_series(s).has_logs()) {
                std::vector<Rational> init;
                for (const auto &row : *s.exact) {
                    init.push_back(row[0]);
                }
                const long top = idx.empty() ? 0 : *std::max_element(idx.begin(), idx.end());
                seq = recurrence_extend(ode_to_recurrence(ode), init, static_cast<std::size_t>(std::max(top, 0L)));
            }
            for (std::size_t i = 0; i < idx.size(); ++i) {
                json e = {{"n", idx[i]}, {"predicted", io::to_json(p[i])}};
                if (seq) {
                    const Ball ex = Ball::from_rational((*seq)[static_cast<std::size_t>(idx[i])], prec);
                    if (!ex.contains_zero()) {
                        e["relative_error"] = abs(p[i] / ex - Ball::from_int(1, prec)).mid().to_double();
                    }
                }
                pred.push_back(e);
            }
            j["predictions"] = pred;
            j["target"] = target;
            emit(g, j);
        } else if (*resolve) {
            ComplexBall numeric;
            if (!numeric_from.empty()) {
                const json a = io::read_file(numeric_from);
                if (!a.contains("terms") || a["terms"].empty()) {
                    throw ParseError("'" + numeric_from + "' has no asymptotic terms");
                }
                numeric = io::asymptotic_term_from_json(a["terms"][0]).constant;
            } else if (!numeric_expr.empty()) {
                numeric = Expr::parse(numeric_expr).eval(prec);
            } else {
                throw ParseError("resolve needs --numeric-from or --numeric");
            }
            const ComplexBall unit = Expr::parse(unit_expr).eval(std::max(prec, numeric.prec()));
            emit(g, io::to_json(resolve_multiplicity(numeric, unit, tol)));
        } else if (*pipe) {
            const std::filesystem::path cp(config);
            PipelineConfig cfg = pipeline_config_from_json(io::read_file(config), cp.parent_path());
            if (app.get_option("--digits")->count() > 0) {
                cfg.digits = g.digits;
            }
            if (app.get_option("--seed")->count() > 0) {
                cfg.seed = g.seed;
            }
            if (!g.out.empty()) {
                cfg.out_dir = g.out;
            }
            const auto rep = run_pipeline(cfg);
            write_pipeline_report(rep, cfg.out_dir);
            std::cout << rep.summary.dump(2) << "\n";
        }
    } catch (const StageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << json{{"error", {{"stage", e.stage()}, {"code", static_cast<int>(e.code())}, {"message", e.what()}}}}.dump()
                  << "\n";
        return static_cast<int>(e.code());
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const json::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorCode::parse);
    }
    return 0;
}
