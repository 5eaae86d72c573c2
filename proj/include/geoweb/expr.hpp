#pragma once

#include "geoweb/jet.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace geoweb {

enum class UnaryFn { neg, exp, log, sin, cos, sqrt, atan };
enum class BinaryOp { add, sub, mul, div, pow };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct Constant {
    double value;
};
struct Variable {
    int index; // 0-based, x1 -> 0
};
struct Unary {
    UnaryFn fn;
    ExprPtr arg;
};
struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct ExprNode {
    std::variant<Constant, Variable, Unary, Binary> node;
};

/// Immutable parsed expression in the variables x1..xn.
///
/// Grammar (loosest to tightest):
///   sum     := product (('+' | '-') product)*
///   product := signed (('*' | '/') signed)*
///   signed  := '-' signed | '+' signed | power
///   power   := primary ('^' signed)?        -- right associative
///   primary := number | 'x'<k> | fn '(' sum ')' | '(' sum ')'
/// with fn in {exp, log, sin, cos, sqrt, atan}.
class Expression {
public:
    Expression() = default;
    Expression(ExprPtr root, int dim, std::string source) : root_(std::move(root)), dim_(dim), source_(std::move(source)) {}

    const ExprNode& root() const { return *root_; }
    const ExprPtr& root_ptr() const { return root_; }
    int dim() const noexcept { return dim_; }
    const std::string& source() const noexcept { return source_; }

    /// Canonical text: every binary operation parenthesized, literals with 17 significant digits.
    std::string to_string() const;
    /// Structural form, e.g. "Add(x1, Mul(2, x2))".
    std::string describe() const;

private:
    ExprPtr root_;
    int dim_ = 0;
    std::string source_;
};

Expression parse_expression(std::string_view source, int dim);

/// Jet of the expression at `point`, truncated at `order`.
Jet eval_field(const Expression& expr, std::span<const double> point, int order);

} // namespace geoweb
