#include <ssforge/expr.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace ssforge;

TEST_CASE("parsing z^2 builds a power node") {
    const ExprPtr e = parse("z^2");
    REQUIRE(e->kind == ExprKind::Pow);
    CHECK(e->lhs->kind == ExprKind::Var);
    REQUIRE(e->rhs->kind == ExprKind::Const);
    CHECK(e->rhs->value == Complex(2.0));
}

TEST_CASE("parsing exp(z) builds a call node") {
    const ExprPtr e = parse("exp(z)");
    REQUIRE(e->kind == ExprKind::Call);
    CHECK(e->func == ExprFunc::Exp);
    CHECK(e->lhs->kind == ExprKind::Var);
}

TEST_CASE("complex constants fold and the tree evaluates") {
    const ExprPtr e = parse("(1+2*i)*z + 3");
    REQUIRE(e->kind == ExprKind::Add);
    REQUIRE(e->lhs->kind == ExprKind::Mul);
    REQUIRE(e->lhs->lhs->kind == ExprKind::Const);
    CHECK(e->lhs->lhs->value == Complex(1, 2));
    CHECK(e->lhs->rhs->kind == ExprKind::Var);
    REQUIRE(e->rhs->kind == ExprKind::Const);
    CHECK(e->rhs->value == Complex(3, 0));

    const Jet2 j = eval_jet(e, Complex(1, 0));
    CHECK(std::abs(j.v - Complex(4, 2)) <= 1e-15);
    CHECK(std::abs(j.d1 - Complex(1, 2)) <= 1e-15);
    CHECK(std::abs(j.d2) <= 1e-15);
}

TEST_CASE("jet of z^3 at 1+i") {
    const Jet2 j = eval_jet(parse("z^3"), Complex(1, 1));
    CHECK(std::abs(j.v - Complex(-2, 2)) <= 1e-14);
    CHECK(std::abs(j.d1 - Complex(0, 6)) <= 1e-14);
    CHECK(std::abs(j.d2 - Complex(6, 6)) <= 1e-14);
}

TEST_CASE("parse errors carry positions") {
    auto pos_of = [](const char* src) {
        try {
            parse(src);
        } catch (const ParseError& e) {
            return e.position();
        }
        FAIL("expected ParseError");
        return std::size_t(0);
    };
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("   "), ParseError);
    CHECK(pos_of("2z") == 1);               // implicit multiplication
    CHECK(pos_of("(z+1") == 0);             // unbalanced open paren
    CHECK(pos_of("z+)") == 2);
    CHECK(pos_of("z + w") == 4);            // unknown identifier
    CHECK(pos_of("foo(z)") == 0);
    CHECK(pos_of("exp z") == 4);            // missing '('
    CHECK(pos_of("z*") == 2);
}

TEST_CASE("evaluation singularities name the point") {
    const ExprPtr e = parse("1/z");
    CHECK_THROWS_AS(eval_jet(e, Complex(0, 0)), SingularityError);
    try {
        eval_jet(e, Complex(0, 0));
    } catch (const SingularityError& err) {
        CHECK(std::string(err.what()).find("z = (0, 0)") != std::string::npos);
    }
    CHECK_THROWS_AS(eval_jet(parse("log(z-1)"), Complex(1, 0)), SingularityError);
}

TEST_CASE("printing uses minimal parentheses") {
    CHECK(print(parse("z^2")) == "z^2");
    CHECK(print(parse("(z+1)*z")) == "(z+1)*z");
    CHECK(print(parse("z*(1/z)")) == "z*(1/z)");
    CHECK(print(parse("-(z+1)")) == "-(z+1)");
    CHECK(print(parse("exp(z+1)")) == "exp(z+1)");
}

namespace {

// Random ASTs for round-trip checks.  The parser constant-folds pure
// arithmetic on constants, so the generator never emits a binary arithmetic
// node with two constant children, Neg of a constant, or a bare constant as
// the whole expression.
class AstGen {
public:
    explicit AstGen(unsigned seed) : rng_(seed) {}

    ExprPtr expr() { return gen(3, true); }

private:
    std::mt19937 rng_;

    double real() {
        std::uniform_real_distribution<double> d(-10.0, 10.0);
        return d(rng_);
    }

    Complex constant() {
        switch (rng_() % 5) {
        case 0: return Complex(real(), 0);
        case 1: return Complex(0, real());
        case 2: return Complex(real(), real());
        case 3: return Complex(0, 1);
        default: return Complex(double(int(rng_() % 9) - 4), 0);
        }
    }

    bool is_const(const ExprPtr& e) { return e->kind == ExprKind::Const; }

    ExprPtr gen(int depth, bool need_var) {
        const int pick = depth == 0 ? int(rng_() % 2) : int(rng_() % 8);
        switch (pick) {
        case 0:
            return Expr::make_var();
        case 1:
            if (need_var) return Expr::make_var();
            return Expr::make_const(constant());
        case 2: {
            ExprPtr a = gen(depth - 1, need_var);
            if (is_const(a)) a = Expr::make_var();
            return Expr::make_unary(ExprKind::Neg, a);
        }
        case 3:
        case 4: {
            const ExprKind k = pick == 3 ? ExprKind::Add : ExprKind::Sub;
            ExprPtr a = gen(depth - 1, false);
            ExprPtr b = gen(depth - 1, false);
            if (is_const(a) && is_const(b)) b = Expr::make_var();
            return Expr::make_binary(k, a, b);
        }
        case 5:
        case 6: {
            const ExprKind k = pick == 5 ? ExprKind::Mul : ExprKind::Div;
            ExprPtr a = gen(depth - 1, false);
            ExprPtr b = gen(depth - 1, false);
            if (is_const(a) && is_const(b)) b = Expr::make_var();
            return Expr::make_binary(k, a, b);
        }
        case 7:
            if (rng_() % 2) {
                ExprPtr base = gen(depth - 1, need_var);
                const long n = long(rng_() % 7) - 3;
                return Expr::make_binary(ExprKind::Pow, base,
                                         Expr::make_const(Complex(double(n), 0)));
            }
            return Expr::make_call(static_cast<ExprFunc>(rng_() % 4),
                                   gen(depth - 1, need_var));
        }
        return Expr::make_var();
    }
};

} // namespace

TEST_CASE("print then parse restores the AST") {
    AstGen gen(20240902);
    for (int k = 0; k < 500; ++k) {
        const ExprPtr e = gen.expr();
        const std::string text = print(e);
        INFO("case " << k << ": " << text);
        ExprPtr back;
        REQUIRE_NOTHROW(back = parse(text));
        REQUIRE(expr_equal(e, back));
        CHECK(print(back) == text);
    }
}

TEST_CASE("parsed jets agree with finite differences of values") {
    const char* sources[] = {
        "z^3 - 2*z + 1",
        "exp(z)*sin(z)",
        "cos(z)/(z+3)",
        "log(z+5)",
        "(1+i)*z^2 + exp(-z)",
        "z^-2 + z",
    };
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double delta = 1e-5;
    for (const char* src : sources) {
        INFO(src);
        const ExprPtr e = parse(src);
        for (int k = 0; k < 100; ++k) {
            Complex z(dist(rng), dist(rng));
            if (std::abs(z) < 0.3) z += Complex(0.5, 0.5);
            const Jet2 j = eval_jet(e, z);
            const Complex vp = eval_jet(e, z + delta).v;
            const Complex vm = eval_jet(e, z - delta).v;
            REQUIRE(std::abs(j.d1 - (vp - vm) / (2.0 * delta)) <= 1e-6);
            const Complex d2_fd = (vp + vm - 2.0 * j.v) / (delta * delta);
            REQUIRE(std::abs(j.d2 - d2_fd) <= 1e-5 * std::fmax(1.0, std::abs(j.d2)));
        }
    }
}
