#include "voltau/expr.hpp"

#include "voltau/special.hpp"

#include <cctype>
#include <cstdlib>

namespace voltau::exprlang {

NodePtr Node::number(Rational r) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Number;
    n->rat = r;
    n->text = r.str();
    return n;
}
NodePtr Node::number_text(std::string text) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Number;
    n->text = std::move(text);
    return n;
}
NodePtr Node::variable(char v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Variable;
    n->var = v;
    return n;
}
NodePtr Node::constant(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->name = std::move(name);
    return n;
}
NodePtr Node::unary(NodePtr child) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Unary;
    n->op = '-';
    n->lhs = std::move(child);
    return n;
}
NodePtr Node::binary(char op, NodePtr l, NodePtr r) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Binary;
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}
NodePtr Node::call(std::string name, std::vector<NodePtr> args) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Call;
    n->name = std::move(name);
    n->args = std::move(args);
    return n;
}

namespace {

int function_arity(const std::string& name) {
    if (name == "beta") return 2;
    if (name == "sin" || name == "cos" || name == "exp" || name == "ln" || name == "sqrt" ||
        name == "gamma")
        return 1;
    return -1;
}

bool is_known_constant(const std::string& name) { return name == "pi" || name == "e"; }

class Parser {
  public:
    Parser(std::string_view text, std::string_view vars) : text_(text), vars_(vars) {}

    NodePtr run() {
        if (text_.empty()) throw ParseError(0, "empty expression");
        skip_ws();
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) throw ParseError(pos_, "unexpected trailing input");
        return e;
    }

  private:
    std::string_view text_;
    std::string_view vars_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    bool consume(char c) {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') return lhs;
            ++pos_;
            lhs = Node::binary(c, lhs, parse_term());
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '*' && c != '/') return lhs;
            ++pos_;
            lhs = Node::binary(c, lhs, parse_unary());
        }
    }

    NodePtr parse_unary() {
        skip_ws();
        if (peek() == '-') {
            ++pos_;
            return Node::unary(parse_unary());
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            // right-associative; binds tighter than unary minus on the left,
            // and accepts a signed exponent on the right
            return Node::binary('^', base, parse_unary());
        }
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError(pos_, "dangling operator");
        char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            if (!consume(')')) throw ParseError(pos_, "missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        std::size_t start = pos_;
        bool has_dot = false, has_exp = false;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.' && !has_dot && !has_exp) {
                has_dot = true;
                ++pos_;
            } else if ((c == 'e' || c == 'E') && !has_exp && pos_ > start &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_ - 1]))) {
                if (pos_ + 1 < text_.size() &&
                    (std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
                     ((text_[pos_ + 1] == '+' || text_[pos_ + 1] == '-') && pos_ + 2 < text_.size() &&
                      std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))))) {
                    has_exp = true;
                    pos_ += (text_[pos_ + 1] == '+' || text_[pos_ + 1] == '-') ? 2 : 1;
                } else {
                    break;
                }
            } else {
                break;
            }
        }
        std::string lit(text_.substr(start, pos_ - start));
        if (lit == "." || lit.empty()) throw ParseError(start, "malformed number");
        if (!has_dot && !has_exp) {
            try {
                return Node::number(Rational(std::stoll(lit)));
            } catch (const std::out_of_range&) {
                return Node::number_text(std::move(lit));  // huge integer: value-only literal
            }
        }
        return Node::number_text(std::move(lit));
    }

    NodePtr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        skip_ws();
        if (peek() == '(') {
            int arity = function_arity(name);
            if (arity < 0) throw ParseError(start, "unknown function '" + name + "'");
            ++pos_;
            std::vector<NodePtr> args;
            args.push_back(parse_expr());
            while (consume(',')) args.push_back(parse_expr());
            if (!consume(')')) throw ParseError(pos_, "missing ')'");
            if (static_cast<int>(args.size()) != arity)
                throw ParseError(start, "function '" + name + "' expects " + std::to_string(arity) +
                                            " argument(s)");
            return Node::call(std::move(name), std::move(args));
        }
        if (is_known_constant(name)) return Node::constant(std::move(name));
        if (name.size() == 1 && vars_.find(name[0]) != std::string_view::npos)
            return Node::variable(name[0]);
        throw ParseError(start, "unknown identifier '" + name + "'");
    }
};

Real eval_pow(const Node& node, const Real& x, const Real* t, const Real* s) {
    const NodePtr& en = node.rhs;
    if (en->kind == NodeKind::Number && en->rat && en->rat->is_integer()) {
        if (x == 0 && en->rat->num < 0) throw EvalError("0 raised to a negative power");
        if (x == 0 && en->rat->num == 0) return Real(1);
        if (x == 0) return Real(0);
        return pow_int(x, en->rat->num);
    }
    Real y = eval_node(en, t, s);
    if (x > 0) return exp(y * log(x));
    if (x == 0) {
        if (y > 0) return Real(0);
        if (y == 0) return Real(1);
        throw EvalError("0 raised to a negative power");
    }
    throw EvalError("negative base with non-integer exponent");
}

}  // namespace

Expr parse(std::string_view text, std::string_view allowed_vars) {
    Parser p(text, allowed_vars);
    return Expr(p.run(), std::string(allowed_vars));
}

Real eval_node(const NodePtr& node, const Real* t, const Real* s) {
    const Node& n = *node;
    switch (n.kind) {
        case NodeKind::Number:
            if (n.rat) return n.rat->to_real();
            return real_from_string(n.text);
        case NodeKind::Constant:
            if (n.name == "pi") return acos(Real(-1));
            return exp(Real(1));
        case NodeKind::Variable: {
            const Real* bound = (n.var == 't') ? t : (n.var == 's') ? s : nullptr;
            if (!bound) throw EvalError(std::string("unbound variable '") + n.var + "'");
            return *bound;
        }
        case NodeKind::Unary:
            return -eval_node(n.lhs, t, s);
        case NodeKind::Binary: {
            if (n.op == '^') return eval_pow(n, eval_node(n.lhs, t, s), t, s);
            Real l = eval_node(n.lhs, t, s);
            Real r = eval_node(n.rhs, t, s);
            switch (n.op) {
                case '+': return l + r;
                case '-': return l - r;
                case '*': return l * r;
                case '/':
                    if (r == 0) throw EvalError("division by zero");
                    return l / r;
            }
            throw EvalError("bad operator");
        }
        case NodeKind::Call: {
            Real a = eval_node(n.args[0], t, s);
            if (n.name == "sin") return sin(a);
            if (n.name == "cos") return cos(a);
            if (n.name == "exp") return exp(a);
            if (n.name == "ln") {
                if (!(a > 0)) throw EvalError("ln of non-positive value");
                return log(a);
            }
            if (n.name == "sqrt") {
                if (a < 0) throw EvalError("sqrt of negative value");
                return sqrt(a);
            }
            if (n.name == "gamma") {
                if (!(a > 0)) throw EvalError("gamma of non-positive value");
                return gamma_fn(a);
            }
            if (n.name == "beta") {
                Real b2 = eval_node(n.args[1], t, s);
                if (!(a > 0) || !(b2 > 0)) throw EvalError("beta of non-positive value");
                return beta(a, b2);
            }
            throw EvalError("unknown function '" + n.name + "'");
        }
    }
    throw EvalError("corrupt expression node");
}

Real eval(const Expr& e, const Real& t) { return eval_node(e.root(), &t, nullptr); }
Real eval(const Expr& e, const Real& t, const Real& s) { return eval_node(e.root(), &t, &s); }
Real eval_const(const Expr& e) { return eval_node(e.root(), nullptr, nullptr); }

namespace {

bool is_rat(const NodePtr& n) { return n->kind == NodeKind::Number && n->rat.has_value(); }
bool is_rat_value(const NodePtr& n, long long v) {
    return is_rat(n) && *n->rat == Rational(v);
}

std::optional<Rational> rat_pow(const Rational& base, long long k) {
    if (k < -64 || k > 64) return std::nullopt;
    if (base.is_zero() && k <= 0) return std::nullopt;
    Rational acc(1);
    Rational b = k < 0 ? Rational(base.den, base.num) : base;
    long long reps = k < 0 ? -k : k;
    for (long long i = 0; i < reps; ++i) acc = acc * b;
    return acc;
}

}  // namespace

NodePtr constant_fold_node(const NodePtr& node) {
    const Node& n = *node;
    switch (n.kind) {
        case NodeKind::Number:
        case NodeKind::Constant:
        case NodeKind::Variable:
            return node;
        case NodeKind::Unary: {
            NodePtr c = constant_fold_node(n.lhs);
            if (is_rat(c)) return Node::number(-*c->rat);
            return c == n.lhs ? node : Node::unary(c);
        }
        case NodeKind::Call: {
            std::vector<NodePtr> args;
            bool changed = false;
            for (const auto& a : n.args) {
                args.push_back(constant_fold_node(a));
                changed |= (args.back() != a);
            }
            return changed ? Node::call(n.name, std::move(args)) : node;
        }
        case NodeKind::Binary:
            break;
    }

    NodePtr l = constant_fold_node(n.lhs);
    NodePtr r = constant_fold_node(n.rhs);

    if (is_rat(l) && is_rat(r)) {
        const Rational& a = *l->rat;
        const Rational& b = *r->rat;
        switch (n.op) {
            case '+': return Node::number(a + b);
            case '-': return Node::number(a - b);
            case '*': return Node::number(a * b);
            case '/':
                if (!b.is_zero()) return Node::number(a / b);
                break;
            case '^':
                if (b.is_integer()) {
                    if (auto p = rat_pow(a, b.num)) return Node::number(*p);
                }
                break;
        }
    }

    switch (n.op) {
        case '+':
            if (is_rat_value(l, 0)) return r;
            if (is_rat_value(r, 0)) return l;
            break;
        case '-':
            if (is_rat_value(r, 0)) return l;
            break;
        case '*':
            if (is_rat_value(l, 1)) return r;
            if (is_rat_value(r, 1)) return l;
            if (is_rat_value(l, 0) || is_rat_value(r, 0)) return Node::number(Rational(0));
            // collect scattered numeric factors: (x * c1) * c2 -> x * (c1*c2)
            if (is_rat(r) && l->kind == NodeKind::Binary && l->op == '*' && is_rat(l->rhs))
                return Node::binary('*', l->lhs, Node::number(*l->rhs->rat * *r->rat));
            break;
        case '/':
            if (is_rat_value(r, 1)) return l;
            if (is_rat_value(l, 0) && is_rat(r) && !r->rat->is_zero())
                return Node::number(Rational(0));
            break;
        case '^':
            if (is_rat_value(r, 1)) return l;
            if (is_rat_value(r, 0)) return Node::number(Rational(1));
            break;
    }
    if (l == n.lhs && r == n.rhs) return node;
    return Node::binary(n.op, l, r);
}

Expr constant_fold(const Expr& e) {
    if (e.empty()) return e;
    return Expr(constant_fold_node(e.root()), e.allowed_vars());
}

std::string to_string_node(const NodePtr& node) {
    const Node& n = *node;
    switch (n.kind) {
        case NodeKind::Number:
            if (n.rat && !n.rat->is_integer())
                return "(" + std::to_string(n.rat->num) + "/" + std::to_string(n.rat->den) + ")";
            if (n.rat && n.rat->num < 0) return "(0-" + std::to_string(-n.rat->num) + ")";
            return n.rat ? n.rat->str() : n.text;
        case NodeKind::Constant:
            return n.name;
        case NodeKind::Variable:
            return std::string(1, n.var);
        case NodeKind::Unary:
            return "(-" + to_string_node(n.lhs) + ")";
        case NodeKind::Binary:
            return "(" + to_string_node(n.lhs) + n.op + to_string_node(n.rhs) + ")";
        case NodeKind::Call: {
            std::string out = n.name + "(";
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i) out += ",";
                out += to_string_node(n.args[i]);
            }
            return out + ")";
        }
    }
    return "?";
}

std::string to_string(const Expr& e) { return e.empty() ? "" : to_string_node(e.root()); }

}  // namespace voltau::exprlang
