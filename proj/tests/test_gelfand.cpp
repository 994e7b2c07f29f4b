#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qha/gelfand.hpp"

using Catch::Matchers::WithinAbs;
using qha::SequenceFunction;

namespace {

SequenceFunction sample(std::size_t n, double (*f)(double)) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(static_cast<double>(i));
    return SequenceFunction(std::move(v));
}

double sin_sqrt(double m) { return std::sin(std::sqrt(m)); }
double sin_lin(double m) { return std::sin(m); }
double two(double) { return 2.0; }

}  // namespace

TEST_CASE("square-root metric") {
    CHECK(qha::sqrt_metric(4, 4) == 0.0);
    CHECK(qha::sqrt_metric(0, 1) == 1.0);
    CHECK(qha::sqrt_metric(100, 121) == 1.0);
    CHECK_THROWS_AS(qha::sqrt_metric(-1, 1), qha::InvalidArgument);
}

TEST_CASE("modulus of continuity in the square-root metric") {
    CHECK(qha::modulus_of_continuity(sample(50, two), 0.3) == 0.0);
    CHECK(qha::modulus_of_continuity(sample(400, sin_sqrt), 0.1) <= 0.1 + 1e-12);
    CHECK(qha::modulus_of_continuity(sample(400, sin_lin), 0.1) > 0.5);
    // brute-force oracle over all pairs
    const auto s = sample(120, sin_lin);
    double brute = 0.0;
    for (int a = 0; a < 120; ++a)
        for (int b = 0; b < 120; ++b)
            if (std::abs(std::sqrt(a) - std::sqrt(b)) <= 0.05) brute = std::max(brute, std::abs(s[a] - s[b]));
    CHECK(qha::modulus_of_continuity(s, 0.05) == brute);
    CHECK_THROWS_AS(qha::modulus_of_continuity(s, 0.0), qha::InvalidArgument);
}

TEST_CASE("square-root interpolation") {
    const auto s = sample(400, sin_sqrt);
    for (int m : {0, 1, 17, 398, 399}) CHECK(qha::extend_plus(s, m) == s[m]);
    const SequenceFunction unit({0.0, 1.0});
    CHECK_THAT(qha::extend_plus(unit, 0.5), WithinAbs(std::sqrt(0.5), 1e-15));

    // continuity across integers and cellwise range
    for (int m = 1; m < 399; m += 37) {
        CHECK_THAT(qha::extend_plus(s, m - 1e-12), WithinAbs(s[m], 1e-9));
        for (double f = 0.0; f <= 1.0; f += 0.125) {
            const double v = qha::extend_plus(s, m + f * 0.999999);
            CHECK(v >= std::min(s[m], s[m + 1]) - 1e-15);
            CHECK(v <= std::max(s[m], s[m + 1]) + 1e-15);
        }
    }

    // sup norm is preserved on a dense grid
    const auto r = sample(300, sin_lin);
    double sup = 0.0;
    for (int i = 0; i <= 10 * 299; ++i) sup = std::max(sup, std::abs(qha::extend_plus(r, i / 10.0)));
    CHECK_THAT(sup, WithinAbs(r.sup_norm(), 1e-12));

    CHECK_THROWS_AS(qha::extend_plus(s, -0.1), qha::OutOfRange);
    CHECK_THROWS_AS(qha::extend_plus(s, 399.5), qha::OutOfRange);
}

TEST_CASE("even extension to the real line") {
    const auto s = sample(400, sin_sqrt);
    for (double x : {0.0, 0.3, 2.5, 11.1, 19.9}) CHECK(qha::extend_real(s, -x) == qha::extend_real(s, x));
    for (int m : {0, 4, 9, 150}) CHECK_THAT(qha::extend_real(s, std::sqrt(m)), WithinAbs(s[m], 1e-14));
    // per-cell error of interpolating sin linearly in x over cells of width < 1/(2 sqrt m)
    double worst = 0.0;
    for (int i = 0; i <= 1900; ++i) {
        const double x = i / 100.0;
        worst = std::max(worst, std::abs(qha::extend_real(s, x) - std::sin(x)));
    }
    CHECK(worst < 0.13);
    CHECK_THROWS_AS(qha::extend_real(s, 20.0), qha::OutOfRange);
    CHECK_THROWS_AS(qha::extend_real(s, NAN), qha::OutOfRange);
}

TEST_CASE("shifts") {
    const auto s = sample(40, sin_lin);
    CHECK(qha::shift_left(s, 0).values == s.values);
    CHECK(qha::shift_left(qha::shift_right(s, 2), 2).values == s.values);
    CHECK(qha::shift_left(s, 5).sup_norm() <= s.sup_norm());
    CHECK(qha::shift_right(s, 3)[0] == s[0]);
    CHECK(qha::shift_right(s, 3).size() == 43);
    CHECK(qha::shift_left(s, 38).size() == 2);
    CHECK_THROWS_AS(qha::shift_left(s, 39), qha::ShiftTooLarge);
    CHECK_THROWS_AS(qha::shift_left(s, 400), qha::ShiftTooLarge);
}

TEST_CASE("left shift relates eigenvalue sequences across dimensions") {
    qha::EigenvalueOptions opts;
    opts.allow_unbounded = true;
    const auto a = qha::parse_expression("s^2");
    const auto g2 = qha::toeplitz_eigenvalues(a, 2, 30, 96, opts);
    const auto g1 = qha::toeplitz_eigenvalues(a, 1, 31, 96, opts);
    const auto shifted = qha::shift_left(SequenceFunction(g1.values), 1);
    for (int m = 0; m < 30; ++m) {
        CHECK_THAT(g2[m], WithinAbs(shifted[m], 1e-12));
        CHECK_THAT(g2[m], WithinAbs((m + 2) / qha::kPi, 1e-12));
    }
}

TEST_CASE("sampling at square roots") {
    const auto c = qha::sample_at_sqrt([](double) { return 3.0; }, 50);
    CHECK(qha::d_delta_defect(c.as_eigen_sequence()) == 0.0);
    const auto lin = qha::sample_at_sqrt([](double x) { return x * x; }, 50);
    CHECK_THAT(lin[49], WithinAbs(49.0, 1e-12));
    CHECK(qha::d_delta_defect(lin.as_eigen_sequence()) < 1e-11);
    const auto s = qha::sample_at_sqrt(qha::parse_expression("sin(s)"), 400);
    CHECK(s.values == sample(400, sin_sqrt).values);
    // sup|f''|/2 plus the first-difference margin
    double step = 0.0;
    for (int m = 1; m < 400; ++m) step = std::max(step, std::abs(s[m] - s[m - 1]));
    CHECK(qha::d_delta_defect(s.as_eigen_sequence()) < 0.5 + step);
}

TEST_CASE("divided differences obey the mean-value bracket") {
    auto f = [](double x) { return std::sin(x) + 0.3 * x * x; };
    auto f2 = [](double x) { return -std::sin(x) + 0.6; };
    const auto s = qha::sample_at_sqrt(f, 300);
    for (std::size_t n = 1; n + 1 < 300; ++n) {
        double lo = 1e300, hi = -1e300;
        const double a = std::sqrt(n - 1.0), b = std::sqrt(n + 1.0);
        for (int i = 0; i <= 200; ++i) {
            const double v = 0.5 * f2(a + (b - a) * i / 200.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double q = qha::sqrt_divided_difference(s, n);
        INFO("n = " << n);
        CHECK(q >= lo - 1e-8);
        CHECK(q <= hi + 1e-8);
    }
    CHECK_THROWS_AS(qha::sqrt_divided_difference(s, 0), qha::OutOfRange);
    CHECK_THROWS_AS(qha::sqrt_divided_difference(s, 299), qha::OutOfRange);
}

TEST_CASE("boundedness verdict") {
    std::vector<double> flat(400), growing(400);
    for (int i = 0; i < 400; ++i) {
        flat[i] = std::sin(i);
        growing[i] = i * std::abs(std::sin(i));
    }
    CHECK(qha::appears_bounded(flat));
    CHECK_FALSE(qha::appears_bounded(growing));
    CHECK(qha::weighted_second_difference({1, 2, 3, 4}) == std::vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(qha::appears_bounded(std::vector<double>(5, 1.0)), qha::SequenceTooShort);
}

TEST_CASE("smoothing into d_Delta") {
    const auto c = qha::approx_in_ddelta(sample(400, two), 0.04);
    for (double v : c.nu.values) CHECK_THAT(v, WithinAbs(2.0, 1e-10));

    const auto s = sample(400, sin_sqrt);
    const auto r = qha::approx_in_ddelta(s, 0.04);
    CHECK(r.sup_error < 0.05);
    CHECK(r.defect < 2.0);
    CHECK(r.window_begin < r.window_end);
    CHECK(r.sup_error <= qha::modulus_of_continuity(s, 4.0 * std::sqrt(0.04)));

    // errors compared on the widest-bandwidth window, which the others contain
    const auto rough = sample(400, sin_lin);
    const auto base = qha::approx_in_ddelta(s, 0.16);
    double prev = 1e300;
    for (double bw : {0.16, 0.04, 0.01}) {
        const auto a = qha::approx_in_ddelta(s, bw);
        double e = 0.0;
        for (std::size_t m = base.window_begin; m < base.window_end; ++m) e = std::max(e, std::abs(s[m] - a.nu[m]));
        CHECK(e < prev);
        prev = e;
        CHECK(std::isfinite(qha::approx_in_ddelta(rough, bw).defect));
    }
    CHECK_THROWS_AS(qha::approx_in_ddelta(s, 0.0), qha::InvalidArgument);
    CHECK_THROWS_AS(qha::approx_in_ddelta(s, 10.0), qha::OutOfRange);
}
