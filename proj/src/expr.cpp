#include "fracbern/expr.hpp"

#include "fracbern/errors.hpp"
#include "fracbern/special.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <utility>

namespace fracbern {

using expr_detail::BinaryOp;
using expr_detail::Func;
using expr_detail::NamedConst;
using expr_detail::UnaryOp;

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = v;
    return n;
}

NodePtr make_leaf(Node::Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
}

NodePtr make_const(NamedConst c) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Const;
    n->named = c;
    return n;
}

NodePtr make_unary(UnaryOp op, NodePtr child) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Unary;
    n->uop = op;
    n->lhs = std::move(child);
    return n;
}

NodePtr make_binary(BinaryOp op, NodePtr l, NodePtr r) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->bop = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

NodePtr make_call(Func f, NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call;
    n->func = f;
    n->lhs = std::move(arg);
    return n;
}

struct FuncName {
    const char* name;
    Func func;
};

constexpr std::array<FuncName, 8> kFuncs{{
    {"exp", Func::Exp}, {"ln", Func::Ln}, {"sin", Func::Sin}, {"cos", Func::Cos},
    {"tan", Func::Tan}, {"sqrt", Func::Sqrt}, {"abs", Func::Abs}, {"gamma", Func::Gamma},
}};

// Recursive-descent parser over the byte string. Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := primary ('^' factor)?          (right-associative)
//   primary:= number | 't' | 'alpha' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
class Parser {
public:
    explicit Parser(const std::string& src) : src_(src) {}

    NodePtr run() {
        skip_ws();
        if (at_end())
            throw SyntaxError("empty expression", 0);
        NodePtr e = parse_expr();
        skip_ws();
        if (!at_end())
            throw SyntaxError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& src_;
    std::size_t pos_ = 0;

    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return at_end() ? '\0' : src_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (peek() == c) { ++pos_; return true; }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            skip_ws();
            if (consume('+')) lhs = make_binary(BinaryOp::Add, lhs, parse_term());
            else if (consume('-')) lhs = make_binary(BinaryOp::Sub, lhs, parse_term());
            else return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            skip_ws();
            if (consume('*')) lhs = make_binary(BinaryOp::Mul, lhs, parse_factor());
            else if (consume('/')) lhs = make_binary(BinaryOp::Div, lhs, parse_factor());
            else return lhs;
        }
    }

    NodePtr parse_factor() {
        skip_ws();
        if (consume('-'))
            return make_unary(UnaryOp::Neg, parse_factor());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        skip_ws();
        if (consume('^'))
            return make_binary(BinaryOp::Pow, base, parse_factor());
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (at_end())
            throw SyntaxError("unexpected end of input", pos_);
        const char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            if (!consume(')'))
                throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_identifier();
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr parse_number() {
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        double value = 0.0;
        auto res = std::from_chars(begin, end, value);
        if (res.ec != std::errc{})
            throw SyntaxError("malformed number", pos_);
        pos_ = static_cast<std::size_t>(res.ptr - src_.data());
        return make_number(value);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name = src_.substr(start, pos_ - start);
        if (name == "t") return make_leaf(Node::Kind::VarT);
        if (name == "alpha") return make_leaf(Node::Kind::ParamAlpha);
        if (name == "pi") return make_const(NamedConst::Pi);
        if (name == "e") return make_const(NamedConst::E);
        for (const auto& f : kFuncs) {
            if (name == f.name) {
                if (!consume('('))
                    throw SyntaxError("expected '(' after function '" + name + "'", pos_);
                NodePtr arg = parse_expr();
                if (!consume(')'))
                    throw SyntaxError("expected ')'", pos_);
                return make_call(f.func, arg);
            }
        }
        throw UnknownIdentifier(name, start);
    }
};

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kE = 2.718281828459045235360287471352662498;

double eval_node(const Node& n, double t, double alpha) {
    switch (n.kind) {
        case Node::Kind::Number: return n.number;
        case Node::Kind::VarT: return t;
        case Node::Kind::ParamAlpha: return alpha;
        case Node::Kind::Const: return n.named == NamedConst::Pi ? kPi : kE;
        case Node::Kind::Unary: return -eval_node(*n.lhs, t, alpha);
        case Node::Kind::Binary: {
            const double a = eval_node(*n.lhs, t, alpha);
            const double b = eval_node(*n.rhs, t, alpha);
            switch (n.bop) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div:
                    if (b == 0.0)
                        throw DomainError("division by zero");
                    return a / b;
                case BinaryOp::Pow: return std::pow(a, b);
            }
            break;
        }
        case Node::Kind::Call: {
            const double x = eval_node(*n.lhs, t, alpha);
            switch (n.func) {
                case Func::Exp: return std::exp(x);
                case Func::Ln:
                    if (x <= 0.0)
                        throw DomainError("ln of non-positive value " + std::to_string(x));
                    return std::log(x);
                case Func::Sin: return std::sin(x);
                case Func::Cos: return std::cos(x);
                case Func::Tan: return std::tan(x);
                case Func::Sqrt:
                    if (x < 0.0)
                        throw DomainError("sqrt of negative value " + std::to_string(x));
                    return std::sqrt(x);
                case Func::Abs: return std::abs(x);
                case Func::Gamma: return gamma_fn(x);
            }
            break;
        }
    }
    throw DomainError("corrupt expression node");
}

int precedence(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Binary:
            switch (n.bop) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return 1;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 2;
                case BinaryOp::Pow: return 4;
            }
            return 0;
        case Node::Kind::Unary: return 3;
        case Node::Kind::Number:
            // A negative literal prints with a leading '-', so it binds like
            // unary minus for parenthesization.
            if (n.number < 0.0 || (n.number == 0.0 && std::signbit(n.number)))
                return 3;
            return 5;
        default: return 5;  // atoms never need parentheses
    }
}

void format_double(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

void serialize_node(const Node& n, std::string& out) {
    auto child = [&out](const Node& c, bool parens) {
        if (parens) out += '(';
        serialize_node(c, out);
        if (parens) out += ')';
    };
    switch (n.kind) {
        case Node::Kind::Number: format_double(out, n.number); return;
        case Node::Kind::VarT: out += 't'; return;
        case Node::Kind::ParamAlpha: out += "alpha"; return;
        case Node::Kind::Const: out += (n.named == NamedConst::Pi ? "pi" : "e"); return;
        case Node::Kind::Unary:
            out += '-';
            child(*n.lhs, precedence(*n.lhs) < precedence(n));
            return;
        case Node::Kind::Binary: {
            const int p = precedence(n);
            const char* op = nullptr;
            switch (n.bop) {
                case BinaryOp::Add: op = "+"; break;
                case BinaryOp::Sub: op = "-"; break;
                case BinaryOp::Mul: op = "*"; break;
                case BinaryOp::Div: op = "/"; break;
                case BinaryOp::Pow: op = "^"; break;
            }
            // Left child needs parens when strictly weaker, or equal for the
            // right-associative '^'; right child when weaker or equal for the
            // left-associative ops (and '-','/' are not commutative anyway).
            const bool pow = n.bop == BinaryOp::Pow;
            child(*n.lhs, precedence(*n.lhs) < p || (pow && precedence(*n.lhs) == p));
            out += op;
            child(*n.rhs, precedence(*n.rhs) < p || (!pow && precedence(*n.rhs) == p));
            return;
        }
        case Node::Kind::Call: {
            const char* name = nullptr;
            switch (n.func) {
                case Func::Exp: name = "exp"; break;
                case Func::Ln: name = "ln"; break;
                case Func::Sin: name = "sin"; break;
                case Func::Cos: name = "cos"; break;
                case Func::Tan: name = "tan"; break;
                case Func::Sqrt: name = "sqrt"; break;
                case Func::Abs: name = "abs"; break;
                case Func::Gamma: name = "gamma"; break;
            }
            out += name;
            out += '(';
            serialize_node(*n.lhs, out);
            out += ')';
            return;
        }
    }
}

} // namespace

Expression Expression::parse(const std::string& source) {
    if (source.empty())
        throw SyntaxError("empty expression", 0);
    Expression e;
    e.root_ = Parser(source).run();
    e.source_ = source;
    return e;
}

double Expression::eval(double t, double alpha) const {
    if (!root_)
        throw DomainError("evaluating empty expression");
    return eval_node(*root_, t, alpha);
}

std::string Expression::serialize() const {
    if (!root_) return {};
    std::string out;
    serialize_node(*root_, out);
    return out;
}

Expression Expression::from_root(std::shared_ptr<const Node> root) {
    Expression e;
    e.root_ = std::move(root);
    e.source_ = e.serialize();
    return e;
}

} // namespace fracbern
