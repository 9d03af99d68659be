#ifndef LACUNA_RESOLVER_EXPR_HPP
#define LACUNA_RESOLVER_EXPR_HPP

#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <lacuna/error.hpp>
#include <lacuna/numeric/complex_ball.hpp>
#include <lacuna/numeric/rational.hpp>

namespace lacuna
{

// Closed-form constants: rationals, decimals, I, pi, sqrt(.), + - * / and ^
// with exact rational exponents.
class Expr
{
public:
    enum class Kind { number, imag, pi, neg, add, sub, mul, div, pow, sqrt };

    static Expr parse(const std::string &text)
    {
        Parser p{text};
        auto node = p.expr();
        p.skip();
        if (p.pos != text.size()) {
            p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
        }
        return Expr(std::move(node));
    }

    ComplexBall eval(mpfr_prec_t prec) const
    {
        return eval(*root_, prec);
    }
    std::optional<Rational> exact() const
    {
        return exact(*root_);
    }

private:
    struct Node {
        Kind kind;
        Rational value;
        std::vector<std::shared_ptr<Node>> args;
    };
    using Ptr = std::shared_ptr<Node>;

    explicit Expr(Ptr root) : root_(std::move(root)) {}

    static Ptr make(Kind k, std::vector<Ptr> args = {}, Rational v = 0)
    {
        return std::make_shared<Node>(Node{k, std::move(v), std::move(args)});
    }

    struct Parser {
        const std::string &s;
        std::size_t pos = 0;

        [[noreturn]] void fail(const std::string &msg) const
        {
            throw ParseError("expression: " + msg + " at offset " + std::to_string(pos));
        }
        void skip()
        {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) {
                ++pos;
            }
        }
        bool eat(char c)
        {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        Ptr expr()
        {
            Ptr a = term();
            while (true) {
                if (eat('+')) {
                    a = make(Kind::add, {a, term()});
                } else if (eat('-')) {
                    a = make(Kind::sub, {a, term()});
                } else {
                    return a;
                }
            }
        }
        Ptr term()
        {
            Ptr a = unary();
            while (true) {
                if (eat('*')) {
                    a = make(Kind::mul, {a, unary()});
                } else if (eat('/')) {
                    a = make(Kind::div, {a, unary()});
                } else {
                    return a;
                }
            }
        }
        Ptr unary()
        {
            if (eat('-')) {
                return make(Kind::neg, {unary()});
            }
            if (eat('+')) {
                return unary();
            }
            Ptr b = primary();
            if (eat('^')) {
                Ptr e = unary();
                if (!exact(*e)) {
                    fail("exponent must be an exact rational");
                }
                return make(Kind::pow, {b, e});
            }
            return b;
        }
        Ptr primary()
        {
            skip();
            if (pos >= s.size()) {
                fail("unexpected end of input");
            }
            const char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                return number();
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t e = pos;
                while (e < s.size() && std::isalnum(static_cast<unsigned char>(s[e]))) {
                    ++e;
                }
                const std::string id = s.substr(pos, e - pos);
                pos = e;
                if (id == "I" || id == "i") {
                    return make(Kind::imag);
                }
                if (id == "pi") {
                    return make(Kind::pi);
                }
                if (id == "sqrt") {
                    if (!eat('(')) {
                        fail("expected '(' after sqrt");
                    }
                    Ptr a = expr();
                    if (!eat(')')) {
                        fail("expected ')'");
                    }
                    return make(Kind::sqrt, {a});
                }
                pos -= id.size();
                fail("unknown identifier '" + id + "'");
            }
            if (eat('(')) {
                Ptr a = expr();
                if (!eat(')')) {
                    fail("expected ')'");
                }
                return a;
            }
            fail("unexpected '" + std::string(1, c) + "'");
        }
        Ptr number()
        {
            std::string digits;
            long frac = -1;
            while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) {
                if (s[pos] == '.') {
                    if (frac >= 0) {
                        fail("malformed number");
                    }
                    frac = 0;
                } else {
                    digits += s[pos];
                    if (frac >= 0) {
                        ++frac;
                    }
                }
                ++pos;
            }
            if (digits.empty()) {
                fail("malformed number");
            }
            Rational v(Integer(digits, 10), 1);
            if (frac > 0) {
                Integer den;
                mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac));
                v /= Rational(den);
            }
            v.canonicalize();
            return make(Kind::number, {}, v);
        }
    };

    static std::optional<Rational> exact(const Node &n)
    {
        auto two = [&]() -> std::optional<std::pair<Rational, Rational>> {
            auto a = exact(*n.args[0]), b = exact(*n.args[1]);
            if (!a || !b) {
                return std::nullopt;
            }
            return std::make_pair(*a, *b);
        };
        switch (n.kind) {
        case Kind::number:
            return n.value;
        case Kind::neg: {
            auto a = exact(*n.args[0]);
            return a ? std::optional<Rational>(-*a) : std::nullopt;
        }
        case Kind::add:
        case Kind::sub:
        case Kind::mul:
        case Kind::div: {
            auto p = two();
            if (!p) {
                return std::nullopt;
            }
            auto [a, b] = *p;
            if (n.kind == Kind::add) {
                return Rational(a + b);
            }
            if (n.kind == Kind::sub) {
                return Rational(a - b);
            }
            if (n.kind == Kind::mul) {
                return Rational(a * b);
            }
            if (b == 0) {
                return std::nullopt;
            }
            return Rational(a / b);
        }
        case Kind::pow: {
            auto p = two();
            if (!p || p->second.get_den() != 1 || !p->second.get_num().fits_slong_p()) {
                return std::nullopt;
            }
            const long k = p->second.get_num().get_si();
            if (p->first == 0 && k < 0) {
                return std::nullopt;
            }
            Rational r = 1;
            for (long i = 0; i < std::abs(k); ++i) {
                r *= p->first;
            }
            return k < 0 ? Rational(1 / r) : r;
        }
        default:
            return std::nullopt;
        }
    }

    static ComplexBall eval(const Node &n, mpfr_prec_t prec)
    {
        switch (n.kind) {
        case Kind::number:
            return ComplexBall::from_rational(n.value, prec);
        case Kind::imag:
            return ComplexBall::imaginary_unit(prec);
        case Kind::pi:
            return ComplexBall(ball_pi(prec));
        case Kind::neg:
            return -eval(*n.args[0], prec);
        case Kind::add:
            return eval(*n.args[0], prec) + eval(*n.args[1], prec);
        case Kind::sub:
            return eval(*n.args[0], prec) - eval(*n.args[1], prec);
        case Kind::mul:
            return eval(*n.args[0], prec) * eval(*n.args[1], prec);
        case Kind::div: {
            const ComplexBall d = eval(*n.args[1], prec);
            if (d.contains_zero()) {
                throw DomainError("expression: division by a ball containing zero");
            }
            return eval(*n.args[0], prec) / d;
        }
        case Kind::pow:
            return pow(eval(*n.args[0], prec), *exact(*n.args[1]));
        case Kind::sqrt:
            return sqrt(eval(*n.args[0], prec));
        }
        throw DomainError("expression: bad node");
    }

    Ptr root_;
};

} // namespace lacuna

#endif
