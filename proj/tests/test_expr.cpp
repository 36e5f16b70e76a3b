#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracbern/errors.hpp"
#include "fracbern/expr.hpp"
#include "fracbern/special.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>

using namespace fracbern;

namespace {

bool bitwise_equal(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

} // namespace

TEST_CASE("basic parses and evaluations") {
    CHECK(Expression::parse("t").eval(7.5, 0.123) == 7.5);
    CHECK(Expression::parse("t^(1-alpha)").eval(4.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(Expression::parse("exp(t-alpha)").eval(0.5, 0.5) == 1.0);

    const Expression ce = Expression::parse("exp(-t^2)");
    for (double t : {-2.0, -0.3, 0.0, 1.7})
        CHECK(ce.eval(t, 0.5) == doctest::Approx(std::exp(-t * t)).epsilon(1e-15));
}

TEST_CASE("operator precedence and associativity") {
    CHECK(Expression::parse("2+3*4").eval(0, 0) == 14.0);
    CHECK(Expression::parse("2^3^2").eval(0, 0) == 512.0);  // right-associative
    CHECK(Expression::parse("-t^2").eval(3.0, 0) == -9.0);
    CHECK(Expression::parse("2^-1").eval(0, 0) == 0.5);
    CHECK(Expression::parse("-2*3").eval(0, 0) == -6.0);
    CHECK(Expression::parse("2-3-4").eval(0, 0) == -5.0);
    CHECK(Expression::parse("12/3/2").eval(0, 0) == 2.0);
    CHECK(Expression::parse("(2+3)*4").eval(0, 0) == 20.0);
}

TEST_CASE("named constants and functions") {
    CHECK(Expression::parse("pi").eval(0, 0) == doctest::Approx(3.14159265358979).epsilon(1e-14));
    CHECK(Expression::parse("e").eval(0, 0) == doctest::Approx(2.71828182845905).epsilon(1e-14));
    CHECK(Expression::parse("ln(e)").eval(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(Expression::parse("sqrt(t)").eval(9.0, 0) == 3.0);
    CHECK(Expression::parse("abs(-t)").eval(4.25, 0) == 4.25);
    CHECK(Expression::parse("sin(t)^2+cos(t)^2").eval(1.3, 0) == doctest::Approx(1.0));
    CHECK(Expression::parse("tan(t)").eval(0.4, 0) == doctest::Approx(std::tan(0.4)));
    CHECK(Expression::parse("gamma(5)").eval(0, 0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(Expression::parse("1.5e-3").eval(0, 0) == 0.0015);
    CHECK(Expression::parse(" 1 + 2 ").eval(0, 0) == 3.0);
}

TEST_CASE("syntax errors carry byte offsets") {
    CHECK_THROWS_AS(Expression::parse(""), SyntaxError);
    try {
        Expression::parse("2+");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 2);
    }
    try {
        Expression::parse("2 % 3");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 2);
    }
    CHECK_THROWS_AS(Expression::parse("(2"), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("sin t"), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("2 3"), SyntaxError);

    try {
        Expression::parse("2*x");
        FAIL("expected UnknownIdentifier");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.name() == "x");
        CHECK(e.offset() == 2);
    }
    CHECK_THROWS_AS(Expression::parse("foo(2)"), UnknownIdentifier);
}

TEST_CASE("evaluation domain errors") {
    CHECK_THROWS_AS(Expression::parse("ln(t)").eval(0.0, 0), DomainError);
    CHECK_THROWS_AS(Expression::parse("ln(t)").eval(-1.0, 0), DomainError);
    CHECK_THROWS_AS(Expression::parse("sqrt(t)").eval(-4.0, 0), DomainError);
    CHECK_THROWS_AS(Expression::parse("1/t").eval(0.0, 0), DomainError);
    CHECK_THROWS_AS(Expression::parse("gamma(t)").eval(0.0, 0), DomainError);
    CHECK_THROWS_AS(Expression::parse("gamma(t)").eval(-3.0, 0), DomainError);
    CHECK(Expression::parse("gamma(t)").eval(-0.5, 0) ==
          doctest::Approx(-2.0 * std::sqrt(3.14159265358979324)).epsilon(1e-12));
}

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

// Random expression trees for the round-trip property. Pow exponents are kept
// small integers so evaluation stays real-valued most of the time.
NodePtr random_tree(std::mt19937& rng, int depth) {
    auto node = std::make_shared<Node>();
    std::uniform_int_distribution<int> kind_dist(0, depth <= 0 ? 3 : 9);
    std::uniform_real_distribution<double> num(-3.0, 3.0);
    switch (kind_dist(rng)) {
        case 0:
            node->kind = Node::Kind::Number;
            node->number = num(rng);
            break;
        case 1: node->kind = Node::Kind::VarT; break;
        case 2: node->kind = Node::Kind::ParamAlpha; break;
        case 3:
            node->kind = Node::Kind::Const;
            node->named = rng() % 2 ? expr_detail::NamedConst::Pi : expr_detail::NamedConst::E;
            break;
        case 4:
            node->kind = Node::Kind::Unary;
            node->uop = expr_detail::UnaryOp::Neg;
            node->lhs = random_tree(rng, depth - 1);
            break;
        case 5:
        case 6:
        case 7: {
            node->kind = Node::Kind::Binary;
            const int op = static_cast<int>(rng() % 4);
            node->bop = static_cast<expr_detail::BinaryOp>(op);  // Add..Div
            node->lhs = random_tree(rng, depth - 1);
            node->rhs = random_tree(rng, depth - 1);
            break;
        }
        case 8: {
            node->kind = Node::Kind::Binary;
            node->bop = expr_detail::BinaryOp::Pow;
            node->lhs = random_tree(rng, depth - 1);
            auto exponent = std::make_shared<Node>();
            exponent->kind = Node::Kind::Number;
            exponent->number = static_cast<double>(static_cast<int>(rng() % 5) - 2);
            node->rhs = exponent;
            break;
        }
        default: {
            node->kind = Node::Kind::Call;
            node->func = static_cast<expr_detail::Func>(rng() % 5);  // exp..tan
            node->lhs = random_tree(rng, depth - 1);
            break;
        }
    }
    return node;
}

// Either a value or "it threw"; bitwise comparison treats NaNs as equal when
// their payloads match.
struct EvalOutcome {
    bool threw = false;
    double value = 0.0;
};

EvalOutcome outcome(const Expression& e, double t, double alpha) {
    EvalOutcome o;
    try {
        o.value = e.eval(t, alpha);
    } catch (const Error&) {
        o.threw = true;
    }
    return o;
}

} // namespace

TEST_CASE("serialize/parse round trip evaluates bitwise-identically") {
    std::mt19937 rng(20240811u);
    std::uniform_real_distribution<double> point(-5.0, 5.0);
    std::uniform_real_distribution<double> alpha_dist(0.05, 1.0);

    for (int trial = 0; trial < 100; ++trial) {
        const Expression original = Expression::from_root(random_tree(rng, 4));
        const std::string text = original.serialize();
        Expression reparsed;
        try {
            reparsed = Expression::parse(text);
        } catch (const Error&) {
            INFO("source: " << text);
            FAIL("serialized form failed to reparse");
        }
        CHECK(reparsed.serialize() == text);  // serialization is a fixpoint

        for (int i = 0; i < 100; ++i) {
            const double t = point(rng), al = alpha_dist(rng);
            const EvalOutcome a = outcome(original, t, al);
            const EvalOutcome b = outcome(reparsed, t, al);
            REQUIRE(a.threw == b.threw);
            if (!a.threw && !bitwise_equal(a.value, b.value)) {
                INFO("source: " << text << " at t=" << t << " alpha=" << al);
                FAIL("round-trip evaluation mismatch");
            }
        }
    }
}

TEST_CASE("gamma matches exact factorials and half-integer values") {
    // Gamma(k) = (k-1)!
    double factorial = 1.0;
    for (int k = 1; k <= 30; ++k) {
        CHECK(gamma_fn(k) == doctest::Approx(factorial).epsilon(1e-13));
        factorial *= k;
    }
    // Gamma(m + 1/2) = sqrt(pi) * prod_{j=0}^{m-1} (j + 1/2)
    const double sqrt_pi = std::sqrt(3.141592653589793238462643383279502884);
    double half_product = 1.0;
    for (int m = 0; m <= 29; ++m) {
        CHECK(gamma_fn(m + 0.5) == doctest::Approx(sqrt_pi * half_product).epsilon(1e-12));
        half_product *= (m + 0.5);
    }
    // Cross-check against the C library on random points in [0.5, 30].
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> xd(0.5, 30.0);
    for (int i = 0; i < 500; ++i) {
        const double x = xd(rng);
        const double ref = std::tgamma(x);
        CHECK(std::abs(gamma_fn(x) - ref) <= 1e-12 * std::abs(ref));
    }
}
