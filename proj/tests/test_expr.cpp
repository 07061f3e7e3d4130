#include <doctest.h>

#include "voltau/expr.hpp"
#include "voltau/special.hpp"

#include <functional>
#include <random>

using namespace voltau;
using namespace voltau::exprlang;

namespace {

void check_close(const Real& got, const Real& want, const Real& tol) {
    Real scale = abs(want) > 1 ? abs(want) : Real(1);
    CAPTURE(static_cast<double>(got));
    CAPTURE(static_cast<double>(want));
    CHECK(abs(got - want) <= tol * scale);
}

// Test-only oracle: a one-pass parse-and-evaluate interpreter, no AST.
// Structured independently from the library's parser-then-eval pipeline.
class DirectInterp {
  public:
    DirectInterp(std::string_view text, Real t, Real s) : text_(text), t_(t), s_(s) {}

    Real run() {
        Real v = expr();
        ws();
        if (pos_ != text_.size()) throw std::runtime_error("trailing input");
        return v;
    }

  private:
    std::string_view text_;
    Real t_, s_;
    std::size_t pos_ = 0;

    void ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() {
        ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Real expr() {
        Real v = term();
        for (;;) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                v += term();
            } else if (c == '-') {
                ++pos_;
                v -= term();
            } else {
                return v;
            }
        }
    }
    Real term() {
        Real v = unary();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                v *= unary();
            } else if (c == '/') {
                ++pos_;
                v /= unary();
            } else {
                return v;
            }
        }
    }
    Real unary() {
        if (peek() == '-') {
            ++pos_;
            return -unary();
        }
        return power();
    }
    Real power() {
        Real base = primary();
        if (peek() == '^') {
            ++pos_;
            Real e = unary();
            if (base == 0) return e == 0 ? Real(1) : Real(0);
            // exact when e is integral, otherwise principal branch
            if (e == floor(e) && abs(e) < 1000) return voltau::pow_int(base, static_cast<long long>(e));
            return exp(e * log(base));
        }
        return base;
    }
    Real primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Real v = expr();
            if (peek() != ')') throw std::runtime_error("missing )");
            ++pos_;
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
                ++pos_;
            return Real(std::string(text_.substr(start, pos_ - start)));
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (name == "t") return t_;
        if (name == "s") return s_;
        if (name == "pi") return acos(Real(-1));
        if (name == "e") return exp(Real(1));
        if (peek() == '(') {
            ++pos_;
            Real a = expr();
            Real b = 0;
            if (peek() == ',') {
                ++pos_;
                b = expr();
            }
            if (peek() != ')') throw std::runtime_error("missing )");
            ++pos_;
            if (name == "sin") return sin(a);
            if (name == "cos") return cos(a);
            if (name == "exp") return exp(a);
            if (name == "ln") return log(a);
            if (name == "sqrt") return sqrt(a);
            if (name == "gamma") return gamma_fn(a);
            if (name == "beta") return voltau::beta(a, b);
        }
        throw std::runtime_error("unknown identifier " + name);
    }
};

bool node_equal(const NodePtr& a, const NodePtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::Number:
            if (a->rat.has_value() != b->rat.has_value()) return false;
            if (a->rat) return *a->rat == *b->rat;
            return a->text == b->text;
        case NodeKind::Constant: return a->name == b->name;
        case NodeKind::Variable: return a->var == b->var;
        case NodeKind::Unary: return node_equal(a->lhs, b->lhs);
        case NodeKind::Binary:
            return a->op == b->op && node_equal(a->lhs, b->lhs) && node_equal(a->rhs, b->rhs);
        case NodeKind::Call:
            if (a->name != b->name || a->args.size() != b->args.size()) return false;
            for (std::size_t i = 0; i < a->args.size(); ++i)
                if (!node_equal(a->args[i], b->args[i])) return false;
            return true;
    }
    return false;
}

// random parser-producible AST
NodePtr random_ast(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 9);
    switch (pick(rng)) {
        case 0: return Node::number(Rational(std::uniform_int_distribution<int>(0, 40)(rng)));
        case 1: return Node::number_text("0." + std::to_string(std::uniform_int_distribution<int>(1, 97)(rng)));
        case 2: return Node::variable('t');
        case 3: return Node::constant("pi");
        case 4: return Node::unary(random_ast(rng, depth - 1));
        case 5: return Node::call("sin", {random_ast(rng, depth - 1)});
        case 6: return Node::call("exp", {random_ast(rng, depth - 1)});
        case 7:
            return Node::binary('^', random_ast(rng, depth - 1),
                                Node::number(Rational(std::uniform_int_distribution<int>(0, 3)(rng))));
        default: {
            const char ops[] = {'+', '-', '*', '/'};
            char op = ops[std::uniform_int_distribution<int>(0, 3)(rng)];
            return Node::binary(op, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        }
    }
}

}  // namespace

TEST_CASE("parse and evaluate basics") {
    Expr e = parse("2*t^(1/2)-1", "t");
    CHECK(eval(e, Real("0.25")) == 0);

    check_close(eval_const(parse("sqrt(3)/(3*pi)", "")), Real("0.18377629847379068"),
                voltau::pow10(-15));
    check_close(eval_const(parse("beta(1/2, 9/2)", "")), 35 * acos(Real(-1)) / 128,
                voltau::pow10(-44));
    check_close(eval_const(parse("ln(e)", "")), Real(1), voltau::pow10(-44));
}

TEST_CASE("operator precedence and associativity") {
    CHECK(eval(parse("-t^2", "t"), Real(3)) == -9);
    CHECK(eval_const(parse("2^-3", "")) == Real(1) / 8);
    CHECK(eval_const(parse("2^3^2", "")) == 512);  // right-assoc
    CHECK(eval_const(parse("1-2-3", "")) == -4);
    CHECK(eval_const(parse("2*3+4*5", "")) == 26);
    CHECK(eval_const(parse("6/3/2", "")) == 1);
}

TEST_CASE("parse errors carry byte offsets") {
    auto offset_of = [](const char* text, const char* vars) -> std::size_t {
        try {
            parse(text, vars);
        } catch (const ParseError& e) {
            return e.position;
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(offset_of("t+", "t") == 2);
    CHECK(offset_of("s^2", "t") == 0);    // undeclared variable
    CHECK(offset_of("2t", "t") == 1);     // no implicit multiplication
    CHECK(offset_of("foo(t)", "t") == 0); // unknown function
    CHECK(offset_of("beta(1)", "t") == 0);
    CHECK(offset_of("t*(1+2", "t") == 6);
    CHECK_THROWS_AS(parse("", "t"), ParseError);
}

TEST_CASE("evaluation errors") {
    CHECK_THROWS_AS(eval_const(parse("ln(0-1)", "")), EvalError);
    CHECK_THROWS_AS(eval_const(parse("sqrt(0-4)", "")), EvalError);
    CHECK_THROWS_AS(eval_const(parse("0^(0-2)", "")), EvalError);
    CHECK_THROWS_AS(eval_const(parse("1/0", "")), EvalError);
    CHECK_THROWS_AS(eval(parse("t+s", "ts"), Real(1)), EvalError);  // s unbound
}

TEST_CASE("constant_fold examples") {
    CHECK(to_string(constant_fold(parse("t^(3/2)*2*2", "t"))) == "((t^(3/2))*4)");
    CHECK(to_string(constant_fold(parse("(1-0)*s", "s"))) == "s");
    CHECK(to_string(constant_fold(parse("t^(1+1/2)", "t"))) == "(t^(3/2))");
    CHECK(to_string(constant_fold(parse("t^1", "t"))) == "t");
    CHECK(to_string(constant_fold(parse("0*sin(t)+t", "t"))) == "t");
}

TEST_CASE("constant_fold preserves evaluation") {
    std::mt19937_64 rng(7151);
    const Real tol = voltau::pow10(-44);
    int done = 0;
    while (done < 20) {
        NodePtr ast = random_ast(rng, 4);
        Expr e(ast, "t");
        Expr folded = constant_fold(e);
        Real t(std::uniform_real_distribution<double>(0.05, 1.0)(rng));
        Real a, b;
        try {
            a = eval(e, t);
            b = eval(folded, t);
        } catch (const EvalError&) {
            continue;  // division by zero etc. in the random tree
        }
        if (abs(a) > voltau::pow10(12)) continue;
        check_close(b, a, tol);
        ++done;
    }
}

TEST_CASE("print then reparse reproduces the AST") {
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 100; ++trial) {
        NodePtr ast = random_ast(rng, 4);
        std::string text = to_string_node(ast);
        Expr back = parse(text, "t");
        CAPTURE(text);
        CHECK(node_equal(ast, back.root()));
    }
}

TEST_CASE("eval agrees with a direct one-pass interpreter") {
    std::mt19937_64 rng(99173);
    const Real tol = voltau::pow10(-40);
    int done = 0;
    while (done < 60) {
        NodePtr ast = random_ast(rng, 4);
        std::string text = to_string_node(ast);
        Real t(std::uniform_real_distribution<double>(0.05, 1.0)(rng));
        Real mine, oracle;
        try {
            mine = eval(parse(text, "t"), t);
            oracle = DirectInterp(text, t, Real(0)).run();
        } catch (const std::exception&) {
            continue;
        }
        if (abs(mine) > voltau::pow10(12)) continue;
        CAPTURE(text);
        check_close(mine, oracle, tol);
        ++done;
    }
}
