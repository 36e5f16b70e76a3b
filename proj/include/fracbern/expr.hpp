#ifndef FRACBERN_EXPR_HPP
#define FRACBERN_EXPR_HPP

#include <memory>
#include <string>

namespace fracbern {

// Parsed scalar function of t with alpha as a bound constant. Grammar:
// numbers (decimal, scientific), `t`, `alpha`, `pi`, `e`, operators
// + - * / ^ (^ right-associative, unary minus), functions exp, ln, sin,
// cos, tan, sqrt, abs, gamma, parentheses.
//
// Immutable after parsing; evaluation is pure and thread-safe.
class Expression {
public:
    struct Node;

    Expression() = default;

    // Throws SyntaxError (with byte offset) or UnknownIdentifier.
    static Expression parse(const std::string& source);

    // Throws DomainError on ln of non-positive, sqrt of negative, gamma at
    // non-positive integers, division by zero.
    double eval(double t, double alpha) const;

    // Canonical text form; parse(serialize()) evaluates identically.
    std::string serialize() const;

    const std::string& source() const { return source_; }
    bool empty() const { return root_ == nullptr; }

    // Test hook: build directly from a node tree.
    static Expression from_root(std::shared_ptr<const Node> root);

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

namespace expr_detail {

enum class UnaryOp { Neg };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Exp, Ln, Sin, Cos, Tan, Sqrt, Abs, Gamma };
enum class NamedConst { Pi, E };

} // namespace expr_detail

struct Expression::Node {
    enum class Kind { Number, VarT, ParamAlpha, Const, Unary, Binary, Call };

    Kind kind;
    double number = 0.0;
    expr_detail::NamedConst named{};
    expr_detail::UnaryOp uop{};
    expr_detail::BinaryOp bop{};
    expr_detail::Func func{};
    std::shared_ptr<const Node> lhs;  // unary/call operand lives here too
    std::shared_ptr<const Node> rhs;
};

} // namespace fracbern

#endif // FRACBERN_EXPR_HPP
