#pragma once

#include "voltau/rational.hpp"
#include "voltau/real.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace voltau::exprlang {

enum class NodeKind { Number, Constant, Variable, Unary, Binary, Call };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// One AST node. Which fields are meaningful depends on `kind`:
///  - Number:   text (literal as written), rat (exact value when known)
///  - Constant: name ("pi" or "e")
///  - Variable: var ('t' or 's')
///  - Unary:    op '-' with lhs
///  - Binary:   op in + - * / ^ with lhs, rhs
///  - Call:     name (sin cos exp ln sqrt gamma beta) with args
struct Node {
    NodeKind kind;
    std::string text;
    std::optional<Rational> rat;
    std::string name;
    char var = 0;
    char op = 0;
    NodePtr lhs, rhs;
    std::vector<NodePtr> args;

    static NodePtr number(Rational r);
    static NodePtr number_text(std::string text);
    static NodePtr variable(char v);
    static NodePtr constant(std::string name);
    static NodePtr unary(NodePtr child);
    static NodePtr binary(char op, NodePtr l, NodePtr r);
    static NodePtr call(std::string name, std::vector<NodePtr> args);
};

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(std::size_t pos, const std::string& msg)
        : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A parsed expression together with its declared variable set.
class Expr {
  public:
    Expr() = default;
    Expr(NodePtr root, std::string vars) : root_(std::move(root)), vars_(std::move(vars)) {}

    const NodePtr& root() const { return root_; }
    const std::string& allowed_vars() const { return vars_; }
    bool empty() const { return root_ == nullptr; }

  private:
    NodePtr root_;
    std::string vars_;
};

/// Parses `text` with the given variable set ("t", "ts", or ""). Throws
/// ParseError with the byte offset of the offending token.
Expr parse(std::string_view text, std::string_view allowed_vars);

/// Evaluation at working precision. Null binding pointers mean "unbound";
/// referencing an unbound variable raises EvalError.
Real eval_node(const NodePtr& node, const Real* t, const Real* s);

Real eval(const Expr& e, const Real& t);
Real eval(const Expr& e, const Real& t, const Real& s);
Real eval_const(const Expr& e);

/// Exact-rational folding plus algebraic identity cleanup (x*1, x+0, x^1, ...).
/// Variable-free subtrees with irrational values (sqrt, pi, gamma, ...) are
/// left intact so later evaluation happens at whatever precision is in effect.
Expr constant_fold(const Expr& e);
NodePtr constant_fold_node(const NodePtr& node);

/// Fully parenthesized canonical form; parse(to_string(e)) reproduces the
/// structure of any parser-produced AST.
std::string to_string(const Expr& e);
std::string to_string_node(const NodePtr& node);

}  // namespace voltau::exprlang
