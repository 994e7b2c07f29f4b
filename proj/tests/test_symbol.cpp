#include <catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "qha/symbol.hpp"

using Catch::Matchers::WithinAbs;
using qha::Expr;
using qha::Growth;

namespace {

const std::vector<std::string> kCorpus = {
    "1",
    "0",
    "-2.5",
    "1e-3",
    "s",
    "s^2",
    "re",
    "im",
    "s^2 + 1",
    "1 - s^2",
    "1 - (2 - s)",
    "(1 - 2) - 3",
    "2 * s^2 * s",
    "2 * (s + 1)",
    "-s",
    "-(s + 1)",
    "--s",
    "3 - -2",
    "s * -2",
    "exp(-s^2)",
    "exp(-3.5 * s^2)",
    "exp(-s^2) * sin(s^2)",
    "sin(s^2) * exp(-s^2)",
    "cos(re) + sin(im)",
    "re * re - im * im",
    "exp(-(re * re + im * im))",
    "ind(0, 1)",
    "ind(0.5, 2.25)",
    "ind(-1, 1)",
    "ind(0, 1) * s^2",
    "ind(0, 1) + ind(1, 2)",
    "exp(s^2)",
    "exp(s)",
    "exp(re)",
    "exp(sin(s))",
    "exp(-s^2 + 3)",
    "exp(2 * s^2 - 3 * s^2)",
    "exp(-(s^2))",
    "exp(-s^2) * s^2 * s^2",
    "1 + 2 * 3",
    "(1 + 2) * 3",
    "sin(cos(exp(-s^2)))",
    "cos(s^2) * cos(s^2)",
    "0.125 * exp(-0.5 * s^2) - 7",
    "re * exp(-s^2)",
    "im * im * exp(-2 * s^2)",
    "ind(0, 3) * exp(s^2)",
    "  s ^ 2  ",
    "exp( -s^2 )*\n2",
    "1e300 * s",
};

}  // namespace

TEST_CASE("print then parse is the identity on a corpus") {
    for (const auto& text : kCorpus) {
        INFO(text);
        const Expr e = qha::parse_expression(text);
        const std::string printed = qha::to_string(e);
        const Expr back = qha::parse_expression(printed);
        CHECK(back == e);
        CHECK(qha::to_string(back) == printed);
    }
}

TEST_CASE("evaluation") {
    const std::complex<double> z(0.6, -0.8);
    CHECK(qha::evaluate(qha::parse_expression("s"), z) == 1.0);
    CHECK_THAT(qha::evaluate(qha::parse_expression("s^2"), z), WithinAbs(1.0, 1e-15));
    CHECK(qha::evaluate(qha::parse_expression("re - im"), z) == 1.4);
    CHECK_THAT(qha::evaluate(qha::parse_expression("exp(-s^2) * sin(s^2)"), z),
               WithinAbs(std::exp(-1.0) * std::sin(1.0), 1e-15));
    const Expr ind = qha::parse_expression("ind(0.5, 1)");
    CHECK(qha::evaluate_radial(ind, 0.5) == 1.0);
    CHECK(qha::evaluate_radial(ind, 1.0) == 0.0);
    CHECK(qha::evaluate_radial(ind, 0.49) == 0.0);
    CHECK(qha::evaluate(qha::parse_expression("2 - 3 - 4"), z) == -5.0);
    CHECK(qha::evaluate(qha::parse_expression("-2 * 3"), z) == -6.0);
}

TEST_CASE("structural growth classification") {
    auto g = [](const char* t) { return qha::classify_growth(qha::parse_expression(t)); };
    CHECK(g("exp(-s^2)") == Growth::decaying);
    CHECK(g("s^2 * exp(-0.1 * s^2)") == Growth::decaying);
    CHECK(g("ind(0, 1)") == Growth::decaying);
    CHECK(g("ind(0, 1) * s^2") == Growth::decaying);
    CHECK(g("1") == Growth::bounded);
    CHECK(g("sin(s^2)") == Growth::bounded);
    CHECK(g("exp(sin(re))") == Growth::bounded);
    CHECK(g("1 + exp(-s^2)") == Growth::bounded);
    CHECK(g("s^2") == Growth::polynomial);
    CHECK(g("re * im") == Growth::polynomial);
    CHECK(g("exp(s^2)") == Growth::exponential);
    CHECK(g("exp(s)") == Growth::exponential);
    CHECK(g("exp(-s^2 + 2 * s^2)") == Growth::exponential);
    CHECK(g("exp(-s^2) * exp(s^2)") == Growth::exponential);

    CHECK(qha::is_bounded(qha::parse_expression("cos(s) * ind(0, 2)")));
    CHECK(qha::is_integrable(qha::parse_expression("exp(-s^2) * cos(re)")));
    CHECK_FALSE(qha::is_integrable(qha::parse_expression("1")));
}

TEST_CASE("parse_symbol rejects unbounded symbols") {
    CHECK_NOTHROW(qha::parse_symbol("exp(-s^2)"));
    CHECK_THROWS_AS(qha::parse_symbol("exp(s^2)"), qha::UnboundedSymbol);
    CHECK_THROWS_AS(qha::parse_symbol("s^2"), qha::UnboundedSymbol);
    CHECK_NOTHROW(qha::parse_symbol("s^2", true));
    CHECK_THROWS_AS(qha::parse_symbol("exp(s^2)", true), qha::UnboundedSymbol);
    try {
        qha::parse_symbol("1 + exp(s)");
        FAIL("expected UnboundedSymbol");
    } catch (const qha::UnboundedSymbol& e) {
        CHECK(std::string(e.what()).find("exp(s)") != std::string::npos);
    }
}

TEST_CASE("parse errors carry line and column") {
    auto where = [](const char* text) {
        try {
            qha::parse_expression(text);
        } catch (const qha::ParseError& e) {
            return std::pair{e.line(), e.column()};
        }
        return std::pair{0, 0};
    };
    CHECK(where("s +") == std::pair{1, 4});
    CHECK(where("s ^ 3") == std::pair{1, 5});
    CHECK(where("exp(s") == std::pair{1, 6});
    CHECK(where("1 +\n  foo") == std::pair{2, 3});
    CHECK(where("ind(2, 1)") == std::pair{1, 10});
    CHECK(where("s s") == std::pair{1, 3});
    CHECK(where("") == std::pair{1, 1});
    CHECK_THROWS_AS(qha::parse_expression("sx"), qha::ParseError);
}

TEST_CASE("symbolic Laplacian matches a finite-difference stencil") {
    const std::vector<std::string> cases = {
        "s^2", "exp(-s^2)", "sin(s^2) * exp(-s^2)", "re * re", "re * im", "cos(re) * exp(-s^2)",
        "exp(-2 * s^2) * s^2", "cos(s^2)", "im * exp(-(re * re))",
    };
    const double h = 1e-3;
    for (const auto& text : cases) {
        const Expr e = qha::parse_expression(text);
        const Expr lap = qha::symbolic_laplacian(e);
        for (const std::complex<double> z : {std::complex<double>(0.3, 0.4), std::complex<double>(-0.9, 0.2),
                                             std::complex<double>(1.1, -0.7)}) {
            INFO(text << " at " << z);
            auto f = [&](double dx, double dy) { return qha::evaluate(e, z + std::complex<double>(dx, dy)); };
            auto stencil = [&](double k) {
                return 0.25 * (f(k, 0) + f(-k, 0) + f(0, k) + f(0, -k) - 4 * f(0, 0)) / (k * k);
            };
            const double fd = (4 * stencil(h / 2) - stencil(h)) / 3;
            CHECK_THAT(qha::evaluate(lap, z), WithinAbs(fd, 1e-6 * (1 + std::abs(fd))));
        }
    }
    CHECK(qha::is_radial(qha::symbolic_laplacian(qha::parse_expression("exp(-s^2)"))));
    CHECK_THROWS_AS(qha::symbolic_laplacian(qha::parse_expression("s")), qha::NotDifferentiable);
    CHECK_THROWS_AS(qha::symbolic_laplacian(qha::parse_expression("ind(0, 1)")), qha::NotDifferentiable);
}

TEST_CASE("shifted symbol functions") {
    const qha::SymbolFunction f{qha::parse_expression("exp(-s^2)"), {1.0, 0.0}};
    CHECK(f({1.0, 0.0}) == 1.0);
    CHECK_FALSE(f.radial_about_origin());
    CHECK(qha::SymbolFunction{qha::parse_expression("s^2")}.radial_about_origin());
    CHECK(qha::indicator_breaks(qha::parse_expression("ind(0, 1) + ind(0.5, 1)")) == std::vector<double>{0.5, 1.0});
}
