#pragma once

#include "qfun/expression.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

namespace qfun {

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(std::size_t pos, const std::string& msg)
        : std::runtime_error("parse error at offset " + std::to_string(pos) + ": " + msg),
          position(pos) {}
};

// Recursive-descent parser for the expression grammar:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' exponent)?
//   atom   := rational | name | name '(' args ')' | '(' expr (',' expr)* ')'
// Implicit multiplication is rejected unless `mma` mode is on, which also
// accepts square-bracket application for pasting expressions.
class Parser {
public:
    explicit Parser(std::string text, bool mma = false) : text_(std::move(text)), mma_(mma) {}

    ExprPtr parse() {
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string text_;
    bool mma_ = false;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) { throw ParseError(pos_, expected); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_])) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    bool starts_atom() {
        char c = peek();
        return std::isdigit((unsigned char)c) || std::isalpha((unsigned char)c) || c == '(' ||
               c == '_';
    }

    ExprPtr parse_expr() {
        std::vector<ExprPtr> children;
        std::vector<int> signs;
        int sign = 1;
        if (eat('-'))
            sign = -1;
        else
            eat('+');
        children.push_back(parse_term());
        signs.push_back(sign);
        while (true) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                children.push_back(parse_term());
                signs.push_back(c == '+' ? 1 : -1);
            } else {
                break;
            }
        }
        if (children.size() == 1 && signs[0] == 1) return children[0];
        return Expr::make_sum(std::move(children), std::move(signs));
    }

    ExprPtr parse_term() {
        std::vector<ExprPtr> factors;
        factors.push_back(parse_factor());
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                factors.push_back(parse_factor());
            } else if (c == '/') {
                ++pos_;
                ExprPtr d = parse_factor();
                factors.push_back(Expr::make_power(d, Expr::make_number(Rational(-1))));
            } else if (mma_ && starts_atom()) {
                // juxtaposition in compatibility mode
                factors.push_back(parse_factor());
            } else {
                break;
            }
        }
        if (factors.size() == 1) return factors[0];
        return Expr::make_product(std::move(factors));
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_atom();
        if (peek() == '^') {
            ++pos_;
            ExprPtr e = parse_exponent();
            return Expr::make_power(base, e);
        }
        return base;
    }

    ExprPtr parse_exponent() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_expr();
            expect(')');
            return e;
        }
        if (c == '-') {
            ++pos_;
            ExprPtr n = parse_number();
            return Expr::make_sum({n}, {-1});
        }
        if (std::isdigit((unsigned char)c)) return parse_number();
        if (std::isalpha((unsigned char)c) && mma_) return parse_atom();
        fail("expected exponent");
    }

    ExprPtr parse_number() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
        if (start == pos_) fail("expected number");
        Integer numerator(text_.substr(start, pos_ - start));
        if (pos_ < text_.size() && text_[pos_] == '/') {
            // lookahead: denominator digits (else it is a division operator)
            std::size_t save = pos_;
            ++pos_;
            std::size_t dstart = pos_;
            while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
            if (dstart == pos_) {
                pos_ = save;
            } else {
                Integer denominator(text_.substr(dstart, pos_ - dstart));
                if (denominator == 0) fail("zero denominator");
                return Expr::make_number(Rational(numerator, denominator));
            }
        }
        return Expr::make_number(Rational(numerator));
    }

    ExprPtr parse_atom() {
        char c = peek();
        if (std::isdigit((unsigned char)c)) return parse_number();
        if (c == '(') {
            ++pos_;
            std::vector<ExprPtr> items;
            items.push_back(parse_expr());
            while (eat(',')) items.push_back(parse_expr());
            expect(')');
            if (items.size() == 1) return items[0];
            return Expr::make_tuple(std::move(items));
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            std::size_t start = pos_;
            ++pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_' ||
                    text_[pos_] == '.'))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            skip_ws();
            char open = pos_ < text_.size() ? text_[pos_] : '\0';
            if (open == '(' || (mma_ && open == '[')) {
                char close = open == '(' ? ')' : ']';
                // series calls like F(q^2*x) vs grouping: a name followed by
                // '(' is always an application in this grammar
                ++pos_;
                std::vector<ExprPtr> args;
                if (peek() != close) {
                    args.push_back(parse_expr());
                    while (eat(',')) args.push_back(parse_expr());
                }
                if (!eat(close)) fail(std::string("expected '") + close + "'");
                return Expr::make_call(name, std::move(args));
            }
            return Expr::make_symbol(name);
        }
        fail("expected number, symbol or '('");
    }
};

inline ExprPtr parse_expression(const std::string& text, bool mma = false) {
    return Parser(text, mma).parse();
}

} // namespace qfun
