#pragma once

#include "complex_jet.hpp"

#include <cctype>
#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>

namespace ssforge {

/// Parse failure with the character index it occurred at.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, const std::string& message)
        : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
          position_(position), message_(message) {}

    std::size_t position() const { return position_; }
    const std::string& message() const { return message_; }

private:
    std::size_t position_;
    std::string message_;
};

enum class ExprKind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class ExprFunc { Exp, Log, Sin, Cos };

/// Immutable AST of a holomorphic expression in one variable z.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind;
    Complex value{};      // Const
    ExprFunc func{};      // Call
    ExprPtr lhs, rhs;     // unary ops use lhs only

    static ExprPtr make_const(Complex c) {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Const;
        e->value = c;
        return e;
    }
    static ExprPtr make_var() {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Var;
        return e;
    }
    static ExprPtr make_unary(ExprKind k, ExprPtr a) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->lhs = std::move(a);
        return e;
    }
    static ExprPtr make_binary(ExprKind k, ExprPtr a, ExprPtr b) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->lhs = std::move(a);
        e->rhs = std::move(b);
        return e;
    }
    static ExprPtr make_call(ExprFunc f, ExprPtr a) {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Call;
        e->func = f;
        e->lhs = std::move(a);
        return e;
    }
};

inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
    case ExprKind::Const: return a->value == b->value;
    case ExprKind::Var: return true;
    case ExprKind::Neg: return expr_equal(a->lhs, b->lhs);
    case ExprKind::Call:
        return a->func == b->func && expr_equal(a->lhs, b->lhs);
    default:
        return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    }
}

namespace detail {

/// Fold pure-constant arithmetic (not function calls, not powers) so that
/// e.g. "1+2*i" becomes a single constant node.
inline ExprPtr fold(ExprPtr e) {
    const bool lconst = e->lhs && e->lhs->kind == ExprKind::Const;
    const bool rconst = e->rhs && e->rhs->kind == ExprKind::Const;
    switch (e->kind) {
    case ExprKind::Neg:
        if (lconst) return Expr::make_const(-e->lhs->value);
        break;
    case ExprKind::Add:
        if (lconst && rconst) return Expr::make_const(e->lhs->value + e->rhs->value);
        break;
    case ExprKind::Sub:
        if (lconst && rconst) return Expr::make_const(e->lhs->value - e->rhs->value);
        break;
    case ExprKind::Mul:
        if (lconst && rconst) return Expr::make_const(e->lhs->value * e->rhs->value);
        break;
    case ExprKind::Div:
        if (lconst && rconst && abs2(e->rhs->value) != 0.0)
            return Expr::make_const(e->lhs->value / e->rhs->value);
        break;
    default:
        break;
    }
    return e;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr parse() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError(0, "empty input");
        ExprPtr e = additive();
        skip_ws();
        if (pos_ < src_.size())
            throw ParseError(pos_, std::string("unexpected character '") + src_[pos_] + "'");
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) { ++pos_; return true; }
        return false;
    }

    ExprPtr additive() {
        ExprPtr e = multiplicative();
        for (;;) {
            if (accept('+')) e = fold(Expr::make_binary(ExprKind::Add, e, multiplicative()));
            else if (accept('-')) e = fold(Expr::make_binary(ExprKind::Sub, e, multiplicative()));
            else return e;
        }
    }

    ExprPtr multiplicative() {
        ExprPtr e = unary();
        for (;;) {
            if (accept('*')) e = fold(Expr::make_binary(ExprKind::Mul, e, unary()));
            else if (accept('/')) e = fold(Expr::make_binary(ExprKind::Div, e, unary()));
            else return e;
        }
    }

    ExprPtr unary() {
        if (accept('-')) return fold(Expr::make_unary(ExprKind::Neg, unary()));
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (accept('^')) return Expr::make_binary(ExprKind::Pow, base, unary());
        return base;
    }

    ExprPtr atom() {
        const char c = peek();
        if (c == '\0') throw ParseError(pos_, "unexpected end of input");
        if (c == '(') {
            const std::size_t open = pos_;
            ++pos_;
            ExprPtr e = additive();
            if (!accept(')')) throw ParseError(open, "unbalanced parenthesis");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }

    ExprPtr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' belongs to a following identifier, not the literal
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        if (text == ".") throw ParseError(start, "malformed number");
        // Reject implicit multiplication like "2z".
        if (pos_ < src_.size() &&
            (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            throw ParseError(pos_, "implicit multiplication is not supported");
        return Expr::make_const(std::stod(text));
    }

    ExprPtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name(src_.substr(start, pos_ - start));
        if (name == "z") return Expr::make_var();
        if (name == "i") return Expr::make_const(Complex(0.0, 1.0));
        ExprFunc f;
        if (name == "exp") f = ExprFunc::Exp;
        else if (name == "log") f = ExprFunc::Log;
        else if (name == "sin") f = ExprFunc::Sin;
        else if (name == "cos") f = ExprFunc::Cos;
        else throw ParseError(start, "unknown identifier '" + name + "'");
        if (!accept('(')) throw ParseError(pos_, "expected '(' after function name");
        ExprPtr arg = additive();
        if (!accept(')')) throw ParseError(pos_, "unbalanced parenthesis");
        return Expr::make_call(f, arg);
    }
};

inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// Precedence levels: additive 1, multiplicative 2, unary 3, power 4, atom 5.
inline int precedence(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    case ExprKind::Const: {
        // Constants that do not print as a single token carry the precedence
        // of the expression they print as.
        const Complex c = e.value;
        if (c.imag() == 0.0) return c.real() >= 0.0 ? 5 : 3;
        if (c.real() == 0.0) {
            if (c.imag() == 1.0) return 5;
            if (c.imag() == -1.0) return 3;
            return 2;  // prints as "<im>*i"
        }
        return 1;
    }
    default: return 5;
    }
}

inline void print_expr(const Expr& e, std::string& out, int min_prec) {
    const int prec = precedence(e);
    const bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (e.kind) {
    case ExprKind::Var:
        out += 'z';
        break;
    case ExprKind::Const: {
        const double re = e.value.real(), im = e.value.imag();
        if (im == 0.0) {
            out += format_real(re);
        } else if (re == 0.0) {
            if (im == 1.0) out += 'i';
            else if (im == -1.0) out += "-i";
            else { out += format_real(im); out += "*i"; }
        } else {
            out += format_real(re);
            const double a = std::fabs(im);
            out += im >= 0.0 ? '+' : '-';
            if (a == 1.0) out += 'i';
            else { out += format_real(a); out += "*i"; }
        }
        break;
    }
    case ExprKind::Neg:
        out += '-';
        print_expr(*e.lhs, out, 3);
        break;
    case ExprKind::Add:
    case ExprKind::Sub:
        print_expr(*e.lhs, out, 1);
        out += e.kind == ExprKind::Add ? '+' : '-';
        print_expr(*e.rhs, out, 2);
        break;
    case ExprKind::Mul:
    case ExprKind::Div:
        print_expr(*e.lhs, out, 2);
        out += e.kind == ExprKind::Mul ? '*' : '/';
        print_expr(*e.rhs, out, 3);
        break;
    case ExprKind::Pow:
        print_expr(*e.lhs, out, 5);
        out += '^';
        print_expr(*e.rhs, out, 3);
        break;
    case ExprKind::Call:
        switch (e.func) {
        case ExprFunc::Exp: out += "exp("; break;
        case ExprFunc::Log: out += "log("; break;
        case ExprFunc::Sin: out += "sin("; break;
        case ExprFunc::Cos: out += "cos("; break;
        }
        print_expr(*e.lhs, out, 0);
        out += ')';
        break;
    }
    if (parens) out += ')';
}

inline Jet2 eval_node(const Expr& e, Complex z) {
    switch (e.kind) {
    case ExprKind::Const: return Jet2::constant(e.value);
    case ExprKind::Var: return Jet2::variable(z);
    case ExprKind::Neg: return jet_neg(eval_node(*e.lhs, z));
    case ExprKind::Add: return jet_add(eval_node(*e.lhs, z), eval_node(*e.rhs, z));
    case ExprKind::Sub: return jet_sub(eval_node(*e.lhs, z), eval_node(*e.rhs, z));
    case ExprKind::Mul: return jet_mul(eval_node(*e.lhs, z), eval_node(*e.rhs, z));
    case ExprKind::Div: return jet_div(eval_node(*e.lhs, z), eval_node(*e.rhs, z));
    case ExprKind::Pow: {
        // Integer-constant exponents stay exact via repeated multiplication.
        if (e.rhs->kind == ExprKind::Const && e.rhs->value.imag() == 0.0) {
            const double n = e.rhs->value.real();
            if (n == std::floor(n) && std::fabs(n) <= 1e9)
                return jet_pow_int(eval_node(*e.lhs, z), static_cast<long>(n));
        }
        return jet_pow(eval_node(*e.lhs, z), eval_node(*e.rhs, z));
    }
    case ExprKind::Call: {
        Jet2 a = eval_node(*e.lhs, z);
        switch (e.func) {
        case ExprFunc::Exp: return jet_exp(a);
        case ExprFunc::Log: return jet_log(a);
        case ExprFunc::Sin: return jet_sin(a);
        case ExprFunc::Cos: return jet_cos(a);
        }
        throw std::logic_error("unreachable");
    }
    }
    throw std::logic_error("unreachable");
}

} // namespace detail

/// Parse a holomorphic expression in z.  Throws ParseError on bad input.
inline ExprPtr parse(std::string_view src) { return detail::Parser(src).parse(); }

inline std::string print(const ExprPtr& e) {
    std::string out;
    detail::print_expr(*e, out, 0);
    return out;
}

/// Evaluate an expression to its second-order jet at z.  Singularities along
/// the evaluation (poles, log 0) rethrow with the offending point attached.
inline Jet2 eval_jet(const ExprPtr& e, Complex z) {
    try {
        return detail::eval_node(*e, z);
    } catch (const SingularityError& err) {
        std::ostringstream os;
        os << err.what() << " at z = (" << z.real() << ", " << z.imag() << ")";
        throw SingularityError(os.str());
    }
}

} // namespace ssforge
