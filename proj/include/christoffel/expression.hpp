#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "christoffel/hyperdual.hpp"

namespace christoffel {

enum class NodeKind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Atan };

std::string_view function_name(Function fn);
std::optional<Function> function_from_name(std::string_view name);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable AST node. Subtrees may be shared between expressions, so an
/// expression is in general a DAG.
struct Node {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;      // Constant
    std::size_t index = 0;   // Variable, 0-based
    Function fn = Function::Sin;  // Call
    NodePtr lhs;             // unary operand, call argument or left operand
    NodePtr rhs;             // right operand of binary nodes
};

// Node builders.
NodePtr constant(double v);
NodePtr variable(std::size_t index);
NodePtr negate(NodePtr a);
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr pow(NodePtr a, NodePtr b);
NodePtr call(Function fn, NodePtr a);

/// Structural equality; constants compare by value.
bool equal(const Node& a, const Node& b);

class Tape;

/// A scalar expression over `n_vars` coordinates. Immutable and safe to
/// evaluate concurrently.
class Expression {
public:
    /// Throws ShapeError if a variable index is out of range or n_vars is 0.
    /// `names`, when given, is used for printing and error messages.
    Expression(NodePtr root, std::size_t n_vars, std::vector<std::string> names = {});

    const Node& root() const noexcept { return *root_; }
    const NodePtr& root_ptr() const noexcept { return root_; }
    std::size_t n_vars() const noexcept { return n_vars_; }

    /// Coordinate names; defaults to x1..xn.
    const std::vector<std::string>& names() const noexcept { return *names_; }

    /// Number of distinct nodes in the DAG.
    std::size_t size() const noexcept;

    double eval(std::span<const double> point) const;
    HyperDual eval(std::span<const HyperDual> point) const;

    friend bool operator==(const Expression& a, const Expression& b) {
        return a.n_vars_ == b.n_vars_ && equal(*a.root_, *b.root_);
    }

private:
    NodePtr root_;
    std::size_t n_vars_;
    std::shared_ptr<const std::vector<std::string>> names_;
    std::shared_ptr<const Tape> tape_;
};

/// Parses `text` over the ordered coordinate names.
///
/// Grammar, loosest binding first:
///
///     expr    := term (('+' | '-') term)*
///     term    := power (('*' | '/') power)*
///     power   := unary ('^' power)?
///     unary   := '-' unary | primary
///     primary := number | name | function '(' expr ')' | '(' expr ')'
///
/// Unary minus binds tighter than '^', so "-x^2" is (-x)^2.
///
/// Throws ParseError with the byte offset of the failure, or
/// UnknownIdentifierError.
Expression parse(std::string_view text, std::span<const std::string> variables);

/// Fully parenthesized text that re-parses to an identical AST.
std::string print(const Expression& e, std::span<const std::string> variables);
std::string print(const Node& node, std::span<const std::string> variables);
std::string print(const Expression& e);

/// Like print, but stops after roughly `limit` characters and appends "...".
std::string print_abbreviated(const Node& node, std::span<const std::string> variables,
                              std::size_t limit);

struct SecondDerivative {
    double value = 0.0;
    double d_i = 0.0;
    double d_j = 0.0;
    double d_ij = 0.0;
};

/// Value, first partials along i and j, and the mixed partial, by seeding a
/// hyper-dual evaluation. Indices are 0-based.
SecondDerivative derivative2(const Expression& e, std::span<const double> point, std::size_t i,
                             std::size_t j);

/// All first partials at a point.
std::vector<double> gradient(const Expression& e, std::span<const double> point);

/// Substitutes `args[k]` for variable k. The result lives over the argument
/// expressions' variables; shared subtrees stay shared.
Expression compose(const Expression& e, std::span<const Expression> args);

}  // namespace christoffel
