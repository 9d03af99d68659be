#ifndef LACUNA_POLY_PARSE_HPP
#define LACUNA_POLY_PARSE_HPP

#include <cctype>
#include <string>

#include <lacuna/error.hpp>
#include <lacuna/poly/upoly.hpp>

namespace lacuna
{

namespace detail
{

// Recursive descent over  expr := term (('+'|'-') term)*,
// term := factor (('*')? factor)*,  factor := atom ('^' int)?,
// atom := integer | var | '(' expr ')'. Implicit products like 81z^2 work.
class UPolyParser
{
public:
    UPolyParser(const std::string &text, char var) : s_(text), var_(var) {}

    UPoly parse()
    {
        UPoly p = expr();
        skip();
        if (pos_ != s_.size()) {
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        }
        return p;
    }

private:
    [[noreturn]] void fail(const std::string &msg) const
    {
        throw ParseError("polynomial '" + s_ + "': " + msg + " at offset " + std::to_string(pos_));
    }
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }
    bool peek(char c)
    {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool starts_atom()
    {
        skip();
        if (pos_ >= s_.size()) {
            return false;
        }
        const char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == var_ || c == '(';
    }

    UPoly expr()
    {
        UPoly acc;
        bool neg = false;
        if (peek('-')) {
            neg = true;
            ++pos_;
        } else if (peek('+')) {
            ++pos_;
        }
        acc = term();
        if (neg) {
            acc = -acc;
        }
        for (;;) {
            if (peek('+')) {
                ++pos_;
                acc += term();
            } else if (peek('-')) {
                ++pos_;
                acc -= term();
            } else {
                return acc;
            }
        }
    }
    UPoly term()
    {
        UPoly acc = factor();
        for (;;) {
            if (peek('*')) {
                ++pos_;
                acc = acc * factor();
            } else if (peek('/')) {
                ++pos_;
                const UPoly d = factor();
                if (d.degree() != 0) {
                    fail("division by a non-constant");
                }
                acc = acc * Rational(1 / d.leading());
            } else if (starts_atom()) {
                acc = acc * factor();
            } else {
                return acc;
            }
        }
    }
    UPoly factor()
    {
        UPoly base = atom();
        if (peek('^')) {
            ++pos_;
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
            if (start == pos_) {
                fail("expected exponent");
            }
            base = base.pow(static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
        }
        return base;
    }
    UPoly atom()
    {
        skip();
        if (pos_ >= s_.size()) {
            fail("unexpected end");
        }
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            UPoly p = expr();
            if (!peek(')')) {
                fail("expected ')'");
            }
            ++pos_;
            return p;
        }
        if (c == var_) {
            ++pos_;
            return UPoly::monomial(1, 1);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
            return UPoly::constant(Rational(Integer(s_.substr(start, pos_ - start))));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string s_;
    char var_;
    std::size_t pos_ = 0;
};

} // namespace detail

// Parses a univariate polynomial in a one-letter variable, e.g. "81z^2+14z+1"
// or "(3t-1)^2*(3t^2+2t+1)".
inline UPoly parse_upoly(const std::string &text, char var = 'z')
{
    return detail::UPolyParser(text, var).parse();
}

} // namespace lacuna

#endif
