#include "geoweb/error.hpp"
#include "geoweb/expr.hpp"

#include "support/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace geoweb;

namespace {

// Random well-defined trees: log/sqrt/pow only see positive arguments.
ExprPtr random_tree(std::mt19937_64& rng, int dim, int depth)
{
    auto node = [](auto v) { return std::make_shared<const ExprNode>(ExprNode{v}); };
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    std::uniform_int_distribution<int> var(0, dim - 1);
    std::uniform_real_distribution<double> lit(0.1, 3.0);
    switch (pick(rng)) {
    case 0: return node(Constant{std::round(lit(rng) * 1000) / 1000});
    case 1: return node(Variable{var(rng)});
    case 2: return node(Unary{UnaryFn::neg, random_tree(rng, dim, depth - 1)});
    case 3: return node(Unary{UnaryFn::sin, random_tree(rng, dim, depth - 1)});
    case 4: return node(Unary{UnaryFn::atan, random_tree(rng, dim, depth - 1)});
    case 5: {
        // exp(-u^2) keeps magnitudes tame; log(1 + u^2) stays in domain
        auto u = random_tree(rng, dim, depth - 1);
        auto sq = node(Binary{BinaryOp::mul, u, u});
        return std::uniform_int_distribution<int>(0, 1)(rng)
                   ? node(Unary{UnaryFn::exp, node(Unary{UnaryFn::neg, sq})})
                   : node(Unary{UnaryFn::log, node(Binary{BinaryOp::add, node(Constant{1.0}), sq})});
    }
    case 6: return node(Binary{BinaryOp::add, random_tree(rng, dim, depth - 1), random_tree(rng, dim, depth - 1)});
    case 7: return node(Binary{BinaryOp::sub, random_tree(rng, dim, depth - 1), random_tree(rng, dim, depth - 1)});
    case 8: return node(Binary{BinaryOp::mul, random_tree(rng, dim, depth - 1), random_tree(rng, dim, depth - 1)});
    default: {
        auto u = random_tree(rng, dim, depth - 1);
        auto den = node(Binary{BinaryOp::add, node(Constant{2.0}), node(Unary{UnaryFn::cos, u})});
        return node(Binary{BinaryOp::div, random_tree(rng, dim, depth - 1), den});
    }
    }
}

std::size_t offset_of(auto fn)
{
    try {
        fn();
    } catch (const ParseError& e) {
        return e.offset();
    }
    return std::string::npos;
}

} // namespace

TEST_SUITE("expr") {

TEST_CASE("grammar examples")
{
    CHECK(parse_expression("x1 + 2*x2", 2).describe() == "Add(x1, Mul(2, x2))");
    CHECK(parse_expression("-(x1+x2)", 2).describe() == "Neg(Add(x1, x2))");
    CHECK(parse_expression("x1^2^3", 1).describe() == "Pow(x1, Pow(2, 3))");
    CHECK(parse_expression("-x1^2", 1).describe() == "Neg(Pow(x1, 2))");
    CHECK(parse_expression("x1 - x2 - x1", 2).describe() == "Sub(Sub(x1, x2), x1)");
    CHECK(parse_expression("x1/x2*x1", 2).describe() == "Mul(Div(x1, x2), x1)");
    CHECK(parse_expression("2*-x1", 1).describe() == "Mul(2, Neg(x1))");
    CHECK(parse_expression("1.5e-3 + .5 + 2E2", 1).describe() == "Add(Add(0.0015, 0.5), 200)");
    CHECK(parse_expression(" sqrt ( x1 ) ", 1).describe() == "Sqrt(x1)");
}

TEST_CASE("x1^2^3 has x1^8 semantics")
{
    const std::vector<double> pt{1.1};
    CHECK(eval_field(parse_expression("x1^2^3", 1), pt, 0).value() == doctest::Approx(std::pow(1.1, 8)));
}

TEST_CASE("errors carry offsets")
{
    CHECK_THROWS_AS((void)parse_expression("", 1), SyntaxError);
    CHECK_THROWS_AS((void)parse_expression("x1 +", 1), SyntaxError);
    CHECK_THROWS_AS((void)parse_expression("(x1", 1), SyntaxError);
    CHECK_THROWS_AS((void)parse_expression("x1 x2", 2), SyntaxError);
    CHECK_THROWS_AS((void)parse_expression("y + 1", 1), UnknownIdentifier);
    CHECK_THROWS_AS((void)parse_expression("tan(x1)", 1), UnknownIdentifier);
    CHECK_THROWS_AS((void)parse_expression("sin(x1, x1)", 1), ArityError);
    CHECK_THROWS_AS((void)parse_expression("exp()", 1), ArityError);
    CHECK_THROWS_AS((void)parse_expression("x3", 2), VariableOutOfRange);
    CHECK_THROWS_AS((void)parse_expression("x0", 2), VariableOutOfRange);

    CHECK(offset_of([] { (void)parse_expression("x1 + x3", 2); }) == 5);
    CHECK(offset_of([] { (void)parse_expression("x1 + foo", 1); }) == 5);
    CHECK(offset_of([] { (void)parse_expression("x1 + )", 1); }) == 5);
}

TEST_CASE("evaluation examples")
{
    SUBCASE("x1^2 + sin(x2) at the origin")
    {
        const std::vector<double> pt{0.0, 0.0};
        const Jet j = eval_field(parse_expression("x1^2 + sin(x2)", 2), pt, 2);
        CHECK(j.value() == doctest::Approx(0.0));
        CHECK(j.gradient()[0] == doctest::Approx(0.0));
        CHECK(j.gradient()[1] == doctest::Approx(1.0));
        CHECK(j.coeff(std::vector<int>{2, 0}) == doctest::Approx(1.0));
        CHECK(j.derivative(std::vector<int>{2, 0}) == doctest::Approx(2.0));
        CHECK(j.coeff(std::vector<int>{1, 1}) == doctest::Approx(0.0));
        CHECK(j.coeff(std::vector<int>{0, 2}) == doctest::Approx(0.0));
    }
    SUBCASE("coordinate function")
    {
        const std::vector<double> pt{5.0, 7.0};
        const Jet j = eval_field(parse_expression("x1", 2), pt, 1);
        CHECK(j.value() == 5.0);
        CHECK(j.gradient() == std::vector<double>{1.0, 0.0});
    }
    SUBCASE("log of a quotient")
    {
        const Expression e = parse_expression("log((2+x1)/(1+x2))", 2);
        const std::vector<double> pt{0.0, 0.0};
        const Jet j = eval_field(e, pt, 1);
        CHECK(j.value() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
        CHECK(j.gradient()[0] == doctest::Approx(oracle::derivative(e, pt, std::vector<int>{1, 0})).epsilon(1e-9));
        CHECK(j.gradient()[1] == doctest::Approx(oracle::derivative(e, pt, std::vector<int>{0, 1})).epsilon(1e-9));
        CHECK(j.gradient()[0] == doctest::Approx(0.5));
        CHECK(j.gradient()[1] == doctest::Approx(-1.0));
    }
    SUBCASE("domain errors propagate")
    {
        const std::vector<double> pt{-1.0};
        CHECK_THROWS_AS((void)eval_field(parse_expression("log(x1)", 1), pt, 2), DomainError);
        CHECK_THROWS_AS((void)eval_field(parse_expression("x1^0.5", 1), pt, 2), DomainError);
        CHECK_NOTHROW((void)eval_field(parse_expression("x1^3", 1), pt, 2));
    }
    SUBCASE("wrong point dimension")
    {
        const std::vector<double> pt{1.0};
        CHECK_THROWS_AS((void)eval_field(parse_expression("x1", 2), pt, 1), MixedContext);
    }
}

TEST_CASE("round trip through the canonical printer and order consistency")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int dim = 1 + trial % 3;
        const Expression tree(random_tree(rng, dim, 4), dim, "");
        const std::string text = tree.to_string();
        const Expression once = parse_expression(text, dim);
        INFO(text);
        CHECK(once.to_string() == text);
        CHECK(parse_expression(once.to_string(), dim).to_string() == text);

        std::vector<double> pt(static_cast<std::size_t>(dim));
        for (auto& x : pt) x = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        const Jet a = eval_field(tree, pt, 4);
        const Jet b = eval_field(once, pt, 4);
        for (std::size_t p = 0; p < a.size(); ++p) CHECK(a[p] == b[p]);

        CHECK(eval_field(tree, pt, 0).value() == a.value());
        const Jet a3 = eval_field(tree, pt, 3);
        const Jet cut = a.truncated(3);
        for (std::size_t p = 0; p < a3.size(); ++p) CHECK(a3[p] == cut[p]);
    }
}

} // TEST_SUITE
