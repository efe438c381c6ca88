#include <doctest.h>

#include <cmath>
#include <numbers>

#include "christoffel/error.hpp"
#include "christoffel/expression.hpp"
#include "support.hpp"

using namespace christoffel;
using christoffel::testing::kPolarNames;

namespace {

double eval_text(const std::string& text, std::vector<double> point, std::vector<std::string> names = kPolarNames) {
    return parse(text, names).eval(point);
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
    SUBCASE("power of a variable") {
        const Expression e = parse("r^2", kPolarNames);
        const Expression expected(pow(variable(0), constant(2)), 2);
        CHECK(e == expected);
    }
    SUBCASE("call times variable") {
        const Expression e = parse("sin(th)*r", kPolarNames);
        const Expression expected(mul(call(Function::Sin, variable(1)), variable(0)), 2);
        CHECK(e == expected);
    }
    SUBCASE("unary minus binds tighter than power") {
        CHECK(parse("-r^2", kPolarNames) == Expression(pow(negate(variable(0)), constant(2)), 2));
        CHECK(eval_text("-r^2", {3, 0}) == 9.0);
    }
    SUBCASE("power is right associative") {
        CHECK(parse("r^th^2", kPolarNames) ==
              Expression(pow(variable(0), pow(variable(1), constant(2))), 2));
    }
    SUBCASE("additive and multiplicative operators are left associative") {
        CHECK(eval_text("10 - 4 - 3", {0, 0}) == 3.0);
        CHECK(eval_text("12 / 3 / 2", {0, 0}) == 2.0);
        CHECK(eval_text("1 + 2 * 3 ^ 2", {0, 0}) == 19.0);
    }
    SUBCASE("numbers with exponents and whitespace") {
        CHECK(eval_text("  1.5e2 +.5 ", {0, 0}) == 150.5);
        CHECK(eval_text("2E-1", {0, 0}) == doctest::Approx(0.2).epsilon(1e-15));
    }
}

TEST_CASE("parse reports errors with offsets") {
    SUBCASE("incomplete expression") {
        const std::vector<std::string> names{"r"};
        try {
            (void)parse("r +", names);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.offset() == 3);
        }
    }
    SUBCASE("unknown identifier") {
        try {
            (void)parse("r * phi", kPolarNames);
            FAIL("expected an unknown identifier");
        } catch (const UnknownIdentifierError& e) {
            CHECK(e.offset() == 4);
            CHECK(e.name() == "phi");
        }
    }
    SUBCASE("misc syntax errors") {
        CHECK_THROWS_AS((void)parse("", kPolarNames), ParseError);
        CHECK_THROWS_AS((void)parse("(r", kPolarNames), ParseError);
        CHECK_THROWS_AS((void)parse("r r", kPolarNames), ParseError);
        CHECK_THROWS_AS((void)parse("sin r", kPolarNames), ParseError);
        CHECK_THROWS_AS((void)parse("r # 2", kPolarNames), ParseError);
        CHECK_THROWS_AS((void)parse("asin(r)", kPolarNames), UnknownIdentifierError);
    }
    SUBCASE("bad variable lists") {
        const std::vector<std::string> dup{"r", "r"};
        const std::vector<std::string> fn{"r", "sin"};
        CHECK_THROWS_AS((void)parse("r", dup), ShapeError);
        CHECK_THROWS_AS((void)parse("r", fn), ShapeError);
    }
}

TEST_CASE("eval") {
    CHECK(eval_text("r^2", {3, 0}) == 9.0);
    CHECK(eval_text("sin(th)", {0, std::numbers::pi / 2}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_text("r^-2", {2, 0}) == 0.25);
    CHECK(eval_text("r^0.5", {4, 0}) == 2.0);
    CHECK(eval_text("(-2)^3", {0, 0}) == -8.0);
    CHECK(eval_text("atan(1)", {0, 0}) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));

    SUBCASE("domain errors name the offending subexpression") {
        try {
            (void)eval_text("1/r", {0, 0});
            FAIL("expected a domain error");
        } catch (const DomainError& e) {
            CHECK(e.subexpression() == "(1 / r)");
        }
        CHECK_THROWS_AS((void)eval_text("sqrt(r - 1)", {0, 0}), DomainError);
        CHECK_THROWS_AS((void)eval_text("log(r)", {0, 0}), DomainError);
        CHECK_THROWS_AS((void)eval_text("log(r)", {-1, 0}), DomainError);
        CHECK_THROWS_AS((void)eval_text("(-2)^0.5", {0, 0}), DomainError);
        CHECK_THROWS_AS((void)eval_text("r^th", {-2, 2}), DomainError);
        CHECK_THROWS_AS((void)eval_text("r^-1", {0, 0}), DomainError);
        CHECK_THROWS_AS((void)eval_text("exp(r)", {1000, 0}), DomainError);
    }
    SUBCASE("point length must match") {
        const Expression e = parse("r", kPolarNames);
        const std::vector<double> p{1.0};
        CHECK_THROWS_AS((void)e.eval(p), ShapeError);
    }
}

TEST_CASE("derivative2") {
    SUBCASE("square") {
        const std::vector<std::string> names{"r", "th"};
        const auto d = derivative2(parse("r^2", names), std::vector<double>{2, 0}, 0, 0);
        CHECK(d.value == 4.0);
        CHECK(d.d_i == 4.0);
        CHECK(d.d_j == 4.0);
        CHECK(d.d_ij == 2.0);
    }
    SUBCASE("r sin(th) mixed partial") {
        // By hand: d_r = sin th = 0, d_th = r cos th = 2, d_r d_th = cos th = 1.
        const Expression e = parse("r*sin(th)", kPolarNames);
        const Point x = testing::point({2, 0});
        const auto d = derivative2(e, as_span(x), 0, 1);
        CHECK(d.value == 0.0);
        CHECK(d.d_i == 0.0);
        CHECK(d.d_j == 2.0);
        CHECK(d.d_ij == 1.0);
        const auto f = testing::as_function(e);
        CHECK(d.d_j == doctest::Approx(testing::central_difference(f, x, 1)).epsilon(1e-8));
        CHECK(d.d_ij == doctest::Approx(testing::central_difference2(f, x, 0, 1)).epsilon(1e-6));
    }
    SUBCASE("constant") {
        const std::vector<std::string> names{"x"};
        for (double c : {0.0, -3.5, 7.25}) {
            const Expression e(constant(c), 1, names);
            const auto d = derivative2(e, std::vector<double>{5}, 0, 0);
            CHECK(d.value == c);
            CHECK(d.d_i == 0.0);
            CHECK(d.d_j == 0.0);
            CHECK(d.d_ij == 0.0);
        }
    }
    SUBCASE("every function against finite differences") {
        const std::vector<std::string> names{"x"};
        for (const char* text : {"sin(x)", "cos(x)", "tan(x)", "exp(x)", "log(x)", "sqrt(x)", "sinh(x)", "cosh(x)",
                                 "tanh(x)", "atan(x)", "x^2.5", "2^x", "1/x", "x^-3"}) {
            CAPTURE(text);
            const Expression e = parse(text, names);
            const Point x = testing::point({0.7});
            const auto d = derivative2(e, as_span(x), 0, 0);
            const auto f = testing::as_function(e);
            CHECK(d.d_i == doctest::Approx(testing::central_difference(f, x, 0)).epsilon(1e-8));
            CHECK(d.d_ij == doctest::Approx(testing::central_difference2(f, x, 0, 0)).epsilon(1e-5));
        }
    }
    SUBCASE("index out of range") {
        CHECK_THROWS_AS((void)derivative2(parse("r", kPolarNames), std::vector<double>{1, 1}, 0, 2), ShapeError);
    }
}

TEST_CASE("property: print re-parses to the same tree") {
    Rng rng(11);
    const std::vector<std::string> names{"x", "y", "z"};
    for (int k = 0; k < 300; ++k) {
        const std::string text = testing::random_expression_text(rng, names, 4);
        CAPTURE(text);
        const Expression e = parse(text, names);
        const std::string printed = print(e);
        CHECK(parse(printed, names) == e);
        CHECK(print(parse(printed, names)) == printed);
    }
}

TEST_CASE("property: hyper-dual first derivatives match central differences") {
    Rng rng(5);
    const std::vector<std::string> names{"x", "y", "z"};
    for (int k = 0; k < 200; ++k) {
        const Expression e = parse(testing::random_expression_text(rng, names, 3), names);
        const Point x = random_point(3, rng, 1.0);
        const auto f = testing::as_function(e);
        for (std::size_t i = 0; i < 3; ++i) {
            const double ad = derivative2(e, as_span(x), i, i).d_i;
            const double fd = testing::central_difference(f, x, i);
            CHECK(std::abs(ad - fd) <= 1e-6 * (1.0 + std::abs(ad)));
        }
    }
}

TEST_CASE("property: mixed partials are bitwise symmetric") {
    Rng rng(9);
    const std::vector<std::string> names{"x", "y", "z"};
    for (int k = 0; k < 200; ++k) {
        const Expression e = parse(testing::random_expression_text(rng, names, 4), names);
        const Point x = random_point(3, rng, 1.0);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                const auto a = derivative2(e, as_span(x), i, j);
                const auto b = derivative2(e, as_span(x), j, i);
                CHECK(a.d_ij == b.d_ij);
                CHECK(a.d_i == b.d_j);
            }
        }
    }
}

TEST_CASE("compose substitutes expressions for variables") {
    const std::vector<std::string> uv{"u", "v"};
    const Expression outer = parse("r^2 + sin(th)", kPolarNames);
    const std::vector<Expression> args{parse("u*v", uv), parse("u - v", uv)};
    const Expression composed = compose(outer, args);
    CHECK(composed.n_vars() == 2);
    const std::vector<double> p{1.5, 0.25};
    CHECK(composed.eval(p) == doctest::Approx(std::pow(1.5 * 0.25, 2) + std::sin(1.25)).epsilon(1e-15));
    CHECK(print(composed) == "(((u * v) ^ 2) + sin((u - v)))");
}

TEST_CASE("shared subtrees are evaluated once") {
    // 40 nested squarings of a shared node: a tree walk would visit 2^40 nodes.
    NodePtr node = variable(0);
    for (int k = 0; k < 40; ++k) node = mul(node, node);
    const Expression e(node, 1);
    CHECK(e.size() == 41);
    CHECK(e.eval(std::vector<double>{1.0}) == 1.0);
}
