#include <doctest.h>

#include <cmath>
#include <random>

#include "gfix/realdsl.hpp"

using namespace gfix::realdsl;

namespace {

NodePtr num(double v) { return std::make_shared<const Node>(Node{Op::Number, v, 0, {}}); }
NodePtr var() { return std::make_shared<const Node>(Node{Op::Var, 0.0, 0, {}}); }
NodePtr node(Op op, std::vector<NodePtr> args, unsigned exponent = 0)
{
    return std::make_shared<const Node>(Node{op, 0.0, exponent, std::move(args)});
}

NodePtr random_tree(std::mt19937_64& rng, int depth)
{
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 10);
    switch (pick(rng)) {
    case 0: return num(static_cast<double>(std::uniform_int_distribution<int>(0, 400)(rng)) / 8.0);
    case 1: return var();
    case 2: return node(Op::Neg, {random_tree(rng, depth - 1)});
    case 3: return node(Op::Add, {random_tree(rng, depth - 1), random_tree(rng, depth - 1)});
    case 4: return node(Op::Sub, {random_tree(rng, depth - 1), random_tree(rng, depth - 1)});
    case 5: return node(Op::Mul, {random_tree(rng, depth - 1), random_tree(rng, depth - 1)});
    case 6: return node(Op::Div, {random_tree(rng, depth - 1), random_tree(rng, depth - 1)});
    case 7: return node(Op::Pow, {random_tree(rng, depth - 1)}, std::uniform_int_distribution<unsigned>(0, 4)(rng));
    case 8: return node(Op::Abs, {random_tree(rng, depth - 1)});
    case 9: return node(Op::Min, {random_tree(rng, depth - 1), random_tree(rng, depth - 1)});
    default: return node(Op::Max, {random_tree(rng, depth - 1), random_tree(rng, depth - 1)});
    }
}

}  // namespace

TEST_CASE("grammar examples")
{
    CHECK(parse_map_expr("x/(1+x)").to_tree() == "Div(Var, Add(1, Var))");
    CHECK(parse_map_expr("min(x, 1-x)").to_tree() == "min(Var, Sub(1, Var))");
    CHECK(parse_map_expr("  x /2 ").to_tree() == "Div(Var, 2)");
    CHECK(parse_map_expr("x - 1 - 2").to_tree() == "Sub(Sub(Var, 1), 2)");
    CHECK(parse_map_expr("x / 2 / 4").to_tree() == "Div(Div(Var, 2), 4)");
    CHECK(parse_map_expr("1 + 2*x").to_tree() == "Add(1, Mul(2, Var))");
    CHECK(parse_map_expr("-x^2").to_tree() == "Neg(Pow(Var, 2))");
    CHECK(parse_map_expr("sqrt(abs(x))").to_tree() == "sqrt(abs(Var))");
    CHECK(parse_map_expr("2.5e-1*x").to_tree() == "Mul(0.25, Var)");
}

TEST_CASE("syntax errors carry offsets and expectations")
{
    try {
        parse_map_expr("x^-2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
        CHECK_FALSE(e.expected().empty());
    }
    const auto offset_of = [](std::string_view text) {
        try {
            parse_map_expr(text);
        } catch (const ParseError& e) {
            return static_cast<long>(e.offset());
        }
        return -1L;
    };
    CHECK(offset_of("x +") == 3);
    CHECK(offset_of("(x") == 2);
    CHECK(offset_of("x x") == 2);
    CHECK(offset_of("") == 0);
    CHECK(offset_of("foo(x)") == 0);
    CHECK(offset_of("min(x)") >= 0);
    CHECK(offset_of("sqrt(x, 1)") >= 0);
    CHECK(offset_of("x^1.5") == 3);
}

TEST_CASE("evaluation examples and guarded domains")
{
    CHECK(parse_map_expr("x/(1+x)").eval(1.0) == 0.5);
    CHECK(parse_map_expr("x/2").eval(0.0) == 0.0);
    CHECK(parse_map_expr("x^0").eval(-3.0) == 1.0);
    CHECK(parse_map_expr("max(x, 1) - min(x, 1)").eval(4.0) == 3.0);
    CHECK_THROWS_AS(parse_map_expr("1/x").eval(0.0), EvalError);
    CHECK_THROWS_AS(parse_map_expr("sqrt(x - 1)").eval(0.0), EvalError);
    try {
        parse_map_expr("x + 1/(x-x)").eval(2.0);
    } catch (const EvalError& e) {
        CHECK(e.subexpression() == "(1 / (x - x))");
    }
}

TEST_CASE("tree evaluation matches a hand-coded closure bit for bit")
{
    const auto e = parse_map_expr("x/(1+x)");
    const auto closure = [](double x) { return x / (1.0 + x); };
    for (int i = 0; i <= 1000; ++i) {
        const double x = static_cast<double>(i) / 1000.0;
        CHECK(e.eval(x) == closure(x));
    }
}

TEST_CASE("print then parse reproduces the tree")
{
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 500; ++i) {
        const MapExpr e(random_tree(rng, 5));
        const auto source = e.to_source();
        const auto back = parse_map_expr(source);
        CHECK_MESSAGE(back == e, source);
        CHECK(back.to_source() == source);
    }
}

TEST_CASE("self-map grid check")
{
    CHECK(check_self_map(parse_map_expr("x/2"), 0.0, 1.0, 11).in_range);
    const auto doubling = check_self_map(parse_map_expr("2*x"), 0.0, 1.0, 11);
    CHECK_FALSE(doubling.in_range);
    CHECK(doubling.worst_x == 1.0);
    CHECK(doubling.worst_excursion == 1.0);

    // monotone on [0,1], so the maximum is at the right endpoint
    const auto e = parse_map_expr("x/(1+x)");
    const auto v = check_self_map(e, 0.0, 1.0, 101);
    CHECK(v.in_range);
    CHECK(v.points_checked == 101);
    double prev = e.eval(0.0);
    for (int i = 1; i <= 100; ++i) {
        const double cur = e.eval(i / 100.0);
        CHECK(cur >= prev);
        prev = cur;
    }
    CHECK(e.eval(1.0) == 0.5);
    CHECK(SelfMapVerdict::label == "grid-checked");

    CHECK_THROWS_AS(check_self_map(e, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(check_self_map(e, 0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(check_self_map(parse_map_expr("1/x"), 0.0, 1.0), EvalError);
}
