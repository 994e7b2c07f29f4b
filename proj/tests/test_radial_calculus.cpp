#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "qha/radial_calculus.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using qha::EigenSequence;
using qha::kPi;

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-15) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return adaptive_simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, 50);
}

EigenSequence seq(std::size_t n, const std::function<double(double)>& f) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(static_cast<double>(i));
    return EigenSequence(std::move(v));
}

qha::TruncationSpec wide(int dim) {
    qha::TruncationSpec t;
    t.dim = dim;
    return t;
}

}  // namespace

TEST_CASE("eigenvalues of constant and quadratic symbols") {
    for (int n : {1, 2, 5}) {
        const auto g = qha::toeplitz_eigenvalues(qha::parse_expression("1"), n, 20);
        for (double v : g.values) CHECK_THAT(v, WithinAbs(1.0, 1e-13));
    }
    qha::EigenvalueOptions opts;
    opts.allow_unbounded = true;
    const auto g = qha::toeplitz_eigenvalues(qha::parse_expression("s^2"), 1, 40, 96, opts);
    for (int m = 0; m < 40; ++m) CHECK_THAT(g[m], WithinRel((m + 1) / kPi, 1e-12));
    CHECK_THROWS_AS(qha::toeplitz_eigenvalues(qha::parse_expression("s^2"), 1, 4), qha::UnboundedSymbol);
    CHECK_THROWS_AS(qha::toeplitz_eigenvalues(qha::parse_expression("exp(s^2)"), 1, 4, 96, opts), qha::UnboundedSymbol);
    CHECK_THROWS_AS(qha::toeplitz_eigenvalues(qha::parse_expression("re"), 1, 4, 96, opts), qha::InvalidArgument);
    CHECK_THROWS_AS(qha::toeplitz_eigenvalues(qha::parse_expression("1"), 0, 4), qha::InvalidArgument);
}

TEST_CASE("indicator eigenvalues are regularized incomplete gammas") {
    const auto g = qha::toeplitz_eigenvalues(qha::parse_expression("ind(0, 1)"), 1, 48);
    // high-precision references for P(m+1, pi)
    CHECK_THAT(g[0], WithinAbs(0.95678608173622775023, 1e-13));
    CHECK_THAT(g[1], WithinAbs(0.82102555358593105747, 1e-13));
    CHECK_THAT(g[5], WithinAbs(0.098860862490352858361, 1e-13));
    CHECK_THAT(g[20], WithinRel(2.7154137118377656205e-11, 1e-9));
    CHECK_THAT(g[40], WithinRel(3.3731704200536220388e-31, 1e-8));
    for (int m : {0, 2, 7, 12}) {
        const double lf = std::lgamma(m + 1.0);
        const double oracle = integrate([&](double r) { return std::exp(m * std::log(r) - r - lf); }, 1e-300, kPi);
        CHECK_THAT(g[m], WithinAbs(oracle, 1e-12));
    }
}

TEST_CASE("eigenvalue normalization flag") {
    // literal convention reads a(sqrt r): for a = s^2 that is (m+1), pi times the default
    qha::EigenvalueOptions opts;
    opts.allow_unbounded = true;
    opts.normalization = qha::GammaNormalization::literal;
    const auto g = qha::toeplitz_eigenvalues(qha::parse_expression("s^2"), 1, 10, 96, opts);
    for (int m = 0; m < 10; ++m) CHECK_THAT(g[m], WithinRel(m + 1.0, 1e-12));
    opts.allow_unbounded = false;
    const auto lit = qha::toeplitz_eigenvalues(qha::parse_expression("ind(0, 1)"), 1, 3, 96, opts);
    CHECK_THAT(lit[0], WithinAbs(1 - std::exp(-1.0), 1e-13));
}

TEST_CASE("sin(s^2) exp(-s^2) eigenvalues against references") {
    const auto g = qha::toeplitz_eigenvalues(qha::parse_expression("sin(s^2) * exp(-s^2)"), 1, 12);
    CHECK_THAT(g[0], WithinAbs(0.17306390390005660227, 1e-13));
    CHECK_THAT(g[3], WithinAbs(0.24004955016678110086, 1e-13));
    CHECK_THAT(g[10], WithinAbs(0.017875322386586200644, 1e-13));
}

TEST_CASE("eigenvalues are linear in the symbol") {
    const auto a = qha::toeplitz_eigenvalues(qha::parse_expression("exp(-s^2)"), 2, 16);
    const auto b = qha::toeplitz_eigenvalues(qha::parse_expression("cos(s^2) * exp(-0.5 * s^2)"), 2, 16);
    const auto c = qha::toeplitz_eigenvalues(qha::parse_expression("2 * exp(-s^2) - 3 * cos(s^2) * exp(-0.5 * s^2)"), 2, 16);
    for (int m = 0; m < 16; ++m) CHECK_THAT(c[m], WithinAbs(2 * a[m] - 3 * b[m], 1e-13));
}

TEST_CASE("laplacian_sequence") {
    const auto zero = qha::laplacian_sequence(seq(10, [](double) { return 3.0; }));
    CHECK(zero.size() == 9);
    for (double v : zero.values) CHECK(v == 0.0);
    const auto lin = qha::laplacian_sequence(seq(10, [](double m) { return m; }));
    for (double v : lin.values) CHECK_THAT(v, WithinAbs(kPi, 1e-13));
    const int j = 4;
    const auto e = qha::laplacian_sequence(seq(10, [&](double m) { return m == j ? 1.0 : 0.0; }));
    for (int m = 0; m < 9; ++m) {
        const double expect = m == j - 1 ? kPi * j : m == j ? -kPi * (2 * j + 1) : m == j + 1 ? kPi * (j + 1) : 0.0;
        CHECK_THAT(e[m], WithinAbs(expect, 1e-13));
    }
    const auto bare = qha::laplacian_sequence(seq(10, [](double m) { return m; }), qha::PiConvention::without_pi);
    CHECK_THAT(bare[3], WithinAbs(1.0, 1e-15));
    CHECK_THROWS_AS(qha::laplacian_sequence(seq(2, [](double) { return 1.0; })), qha::SequenceTooShort);
}

TEST_CASE("radial Berezin transform") {
    const auto ones = seq(60, [](double) { return 1.0; });
    const auto first = seq(60, [](double m) { return m == 0 ? 1.0 : 0.0; });
    const auto lin = seq(60, [](double m) { return m; });
    for (double r : {0.0, 0.5, 1.0, 1.5}) {
        const qha::ComplexPoint z{r * 0.8, r * 0.6};
        const double x = kPi * r * r;
        CHECK_THAT(qha::berezin_radial(ones, z), WithinAbs(1.0, 1e-12));
        CHECK_THAT(qha::berezin_radial(first, z), WithinAbs(std::exp(-x), 1e-15));
        CHECK_THAT(qha::berezin_radial(lin, z), WithinAbs(x, 1e-11));
        CHECK_THAT(qha::laplacian_of_berezin_radial(ones, z), WithinAbs(0.0, 1e-12));
        CHECK_THAT(qha::laplacian_of_berezin_radial(first, z), WithinAbs(kPi * (x - 1) * std::exp(-x), 1e-13));
        CHECK_THAT(qha::laplacian_of_berezin_radial(lin, z), WithinAbs(kPi, 1e-10));
    }
    CHECK_THROWS_AS(qha::berezin_radial(seq(10, [](double) { return 1.0; }), {2.0, 0.0}), qha::TailTooHeavy);
}

TEST_CASE("Laplacian of the Berezin transform against central differences") {
    const auto lambda = seq(80, [](double m) { return std::sin(std::sqrt(m)) / (1 + 0.1 * m); });
    const double h = 1e-3;
    for (const qha::ComplexPoint z : {qha::ComplexPoint{0.3, 0.1}, qha::ComplexPoint{-0.7, 0.9}}) {
        auto b = [&](double dx, double dy) { return qha::berezin_radial(lambda, {z.re + dx, z.im + dy}); };
        const double fd = 0.25 * (b(h, 0) + b(-h, 0) + b(0, h) + b(0, -h) - 4 * b(0, 0)) / (h * h);
        CHECK_THAT(qha::laplacian_of_berezin_radial(lambda, z), WithinAbs(fd, 1e-5));
    }
}

TEST_CASE("heat kernel matrix") {
    const int m = 160;
    for (double t : {0.1, 1.0}) {
        const auto h = qha::heat_kernel_matrix(t, m, wide(m));
        CHECK((h.h - h.h.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(h.h.minCoeff() >= 0.0);
        for (int k = 0; k < 24; ++k) CHECK_THAT(h.h.row(k).sum(), WithinAbs(1.0, 1e-8));
    }
    // h_00(t) = int e^{-pi|z|^2} phi_t = 1 / (1 + t)
    const auto h = qha::heat_kernel_matrix(0.5, 8, wide(8));
    CHECK_THAT(h.h(0, 0), WithinRel(1.0 / 1.5, 1e-14));
    CHECK_THROWS_AS(qha::heat_kernel_matrix(0.0, 8, wide(8)), qha::InvalidArgument);
    CHECK_THROWS_AS(qha::heat_kernel_matrix(1.0, 9, wide(8)), qha::InvalidArgument);
}

TEST_CASE("heat semigroup and heat equation on sequences") {
    const int m = 160;
    const auto h1 = qha::heat_kernel_matrix(0.3, m, wide(m)).h;
    const auto h2 = qha::heat_kernel_matrix(0.5, m, wide(m)).h;
    const auto h12 = qha::heat_kernel_matrix(0.8, m, wide(m)).h;
    CHECK(((h1 * h2) - h12).topLeftCorner(24, 24).cwiseAbs().maxCoeff() < 1e-10);

    const auto ones = seq(m, [](double) { return 1.0; });
    const auto still = qha::heat_radial(ones, 0.7);
    for (int k = 0; k < 24; ++k) CHECK_THAT(still[k], WithinAbs(1.0, 1e-8));

    const auto lambda = seq(m, [](double k) { return std::exp(-k / 10.0); });
    const double t = 0.4, dt = 1e-4;
    const auto mu = qha::laplacian_sequence(qha::heat_radial(lambda, t));
    const auto plus = qha::heat_radial(lambda, t + dt);
    const auto minus = qha::heat_radial(lambda, t - dt);
    for (int k = 0; k < 24; ++k) CHECK_THAT(mu[k], WithinAbs(kPi * (plus[k] - minus[k]) / (2 * dt), 1e-6));
}

TEST_CASE("heat quotient tends to the sequence Laplacian") {
    const int m = 160;
    const auto lambda = seq(m, [](double k) { return std::cos(std::sqrt(k)); });
    const auto mu = qha::laplacian_sequence(lambda);
    std::vector<double> err;
    for (double t : {4e-3, 2e-3, 1e-3}) {
        const auto ht = qha::heat_radial(lambda, t);
        double e = 0.0, shift = 0.0;
        for (int k = 0; k < 24; ++k) {
            e = std::max(e, std::abs((ht[k] - lambda[k]) / t - mu[k] / kPi));
            shift = std::max(shift, std::abs(ht[k] - lambda[k]));
        }
        CHECK(shift < 10 * t);
        err.push_back(e);
    }
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
    CHECK_THAT(err[0] / err[1], WithinAbs(2.0, 0.3));
}

TEST_CASE("d_delta_defect") {
    CHECK(qha::d_delta_defect(seq(50, [](double) { return 2.0; })) == 0.0);
    CHECK(qha::d_delta_defect(seq(400, [](double k) { return std::sin(k); })) > 50.0);
    CHECK(qha::d_delta_defect(seq(400, [](double k) { return std::sin(std::sqrt(k)); })) < 1.5);
    CHECK_THROWS_AS(qha::d_delta_defect(seq(2, [](double) { return 0.0; })), qha::SequenceTooShort);
}
