#pragma once

// Identity-verification suites behind `qha verify --suite ...`. Each check
// yields a Residual paired with its tolerance; a suite passes when all do.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "qha/fock_core.hpp"
#include "qha/gelfand.hpp"
#include "qha/operator_lab.hpp"
#include "qha/radial_calculus.hpp"
#include "qha/report.hpp"
#include "qha/symbol.hpp"

namespace qha::verify {

/// Heat-matrix checks (row sums, semigroup) need the Poisson spread of rows
/// k < inner_dim to fit inside the matrix; at t = 1 that takes ~160 terms.
inline constexpr int kHeatCheckDim = 160;

/// Deterministic sunflower pattern of `count` points with |z| <= rmax.
inline std::vector<ComplexPoint> sample_points(int count, double rmax) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    std::vector<ComplexPoint> pts;
    for (int i = 0; i < count; ++i) {
        const double r = rmax * std::sqrt((i + 0.5) / count);
        pts.push_back(ComplexPoint::from(std::polar(r, golden * i)));
    }
    return pts;
}

/// Smallest row count D such that W_z e_k for k < inner keeps mass below tol
/// outside rows < D when |z| <= r.
inline int covering_dim(int inner, double r, double tol = 1e-20) {
    int d = inner;
    while (weyl_column_tail(inner - 1, {r, 0.0}, d) > tol) d += 4;
    return d;
}

inline Residual make(std::string identity, double residual, double tolerance, Json params = Json::object()) {
    return Residual{std::move(identity), std::move(params), residual, tolerance, false};
}

inline Residual make_at_least(std::string identity, double value, double threshold, Json params = Json::object()) {
    return Residual{std::move(identity), std::move(params), value, threshold, true};
}

inline std::vector<double> sequence_of(int count, double (*f)(double)) {
    std::vector<double> v(count);
    for (int m = 0; m < count; ++m) v[m] = f(static_cast<double>(m));
    return v;
}

inline Expr gaussian_symbol(double c) { return exp(Expr::number(-c) * Expr::s2()); }

inline std::vector<Expr> builtin_symbols() {
    return {Expr::number(1.0), Expr::s2(), Expr::ind(0.0, 1.0), gaussian_symbol(1.0),
            sin(Expr::s2()) * gaussian_symbol(1.0)};
}

// --- identities ----------------------------------------------------------------

inline std::vector<Residual> identities_suite(const RunConfig& cfg, Json& info) {
    const TruncationSpec& tr = cfg.trunc;
    tr.validate();
    const int n = tr.dim;
    const int k = tr.inner_dim;
    std::vector<Residual> out;
    const auto pts = sample_points(10, std::min(1.5, tr.radius));
    const auto pts_r = sample_points(10, tr.radius);

    {
        const ComplexMatrix g = toeplitz_matrix_of([](Complex) { return 1.0; }, n, tensor_hermite_rule(1.0, cfg.planar_order));
        out.push_back(make("gram_orthonormality", max_entry(g - ComplexMatrix::Identity(n, n)), 1e-10, {{"dim", n}}));
    }
    {
        double worst = 0.0;
        for (const auto& z : pts_r) {
            const double mass = normalized_kernel_coeffs(z, tr).squaredNorm();
            worst = std::max(worst, std::abs(mass - 1.0) - coherent_tail_mass(n, z.abs()));
        }
        out.push_back(make("coherent_normalization_excess_over_tail", std::max(worst, 0.0), 1e-13));
    }
    {
        double worst = 0.0;
        for (double t : {0.25, 1.0, 4.0}) {
            const auto rule = radial_gaussian_rule(t, 32);
            double mass = 0.0;
            for (std::size_t i = 0; i < rule.size(); ++i) mass += rule.weights[i] * heat_kernel(t, {rule.radii[i], 0.0});
            worst = std::max(worst, std::abs(mass - 1.0));
        }
        out.push_back(make("heat_kernel_mass", worst, 1e-10, {{"t", {0.25, 1.0, 4.0}}}));
    }
    {
        double worst = 0.0;
        for (const auto& z : pts_r) {
            const ComplexVector col = weyl_matrix(z, tr).entries.col(0);
            worst = std::max(worst, (col - normalized_kernel_coeffs(z, tr)).cwiseAbs().maxCoeff());
        }
        out.push_back(make("weyl_column0_is_kernel", worst, 1e-12));
    }
    {
        // The check needs rows beyond dim when |z| is near the radius; the
        // radius at which the default rows suffice is reported alongside.
        const int d = covering_dim(k, tr.radius);
        double worst = 0.0;
        for (const auto& z : pts_r) {
            const ComplexMatrix w = weyl_block(z.value(), d, k);
            worst = std::max(worst, max_entry(w.adjoint() * w - ComplexMatrix::Identity(k, k)));
        }
        out.push_back(make("weyl_unitarity_inner", worst, 1e-8, {{"rows", d}}));
        info["weyl_trusted_radius_1e-10"] = trusted_radius(tr, 1e-10);
    }
    {
        double worst = 0.0;
        const double half = 0.5 * tr.radius;
        const auto a = sample_points(5, half);
        const auto b = sample_points(7, half);
        const int d = covering_dim(k, tr.radius);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const ComplexPoint z = a[i], w = b[i + 2];
            const ComplexMatrix prod = weyl_block(z.value(), k, d) * weyl_block(w.value(), d, k);
            const ComplexMatrix sum = weyl_block(z.value() + w.value(), k, k);
            worst = std::max(worst, (prod.cwiseAbs() - sum.cwiseAbs()).cwiseAbs().maxCoeff());
        }
        out.push_back(make("weyl_composition_moduli", worst, 1e-8, {{"rows", d}}));
    }
    {
        const ComplexMatrix u = parity_matrix(tr).entries;
        out.push_back(make("parity_involution", max_entry(u * u - ComplexMatrix::Identity(n, n)), 0.0));
    }
    {
        const double r = trusted_radius(tr, 1e-10);
        double worst = 0.0;
        for (const auto& z : sample_points(10, r)) {
            const OperatorMatrix moved = translate_operator(z, identity_operator(tr));
            worst = std::max(worst, max_entry(moved.inner() - ComplexMatrix::Identity(k, k)));
        }
        out.push_back(make("translate_identity_inner", worst, 1e-8, {{"radius", r}}));
    }
    {
        const OperatorMatrix s = random_hermitian(tr, cfg.seed);
        const double norm_s = operator_norm(s.entries);
        double worst = 0.0;
        const int d = covering_dim(n, tr.radius, 1e-24);
        ComplexMatrix padded = ComplexMatrix::Zero(d, d);
        padded.topLeftCorner(n, n) = s.entries;
        for (const auto& z : pts_r)
            worst = std::max(worst, std::abs(operator_norm(translate_unchecked(z.value(), padded)) - norm_s));
        out.push_back(make("translate_preserves_norm", worst, 1e-10, {{"rows", d}, {"seed", cfg.seed}}));
    }
    {
        double worst = 0.0;
        const int d = covering_dim(2, tr.radius, 1e-24);
        ComplexMatrix phi = ComplexMatrix::Zero(d, d);
        phi(0, 0) = 1.0;
        const auto zs = sample_points(4, 0.5 * tr.radius);
        for (const auto& z : zs) {
            const ComplexMatrix moved = translate_unchecked(z.value(), phi);
            for (const auto& w : sample_points(6, 0.5 * tr.radius)) {
                const Complex b = berezin_unchecked(moved, w.value());
                const Complex diff = w.value() - z.value();
                worst = std::max(worst, std::abs(b - std::exp(-kPi * std::norm(diff))));
            }
        }
        out.push_back(make("translated_phi_berezin", worst, 1e-10));
    }
    {
        ToeplitzOptions opts;
        opts.planar_order = cfg.planar_order;
        opts.allow_unbounded = true;
        const OperatorMatrix one = toeplitz_matrix(Expr::number(1.0), tr, opts);
        out.push_back(make("toeplitz_constant_is_identity", max_entry(one.entries - ComplexMatrix::Identity(n, n)), 1e-10));
        const OperatorMatrix s2 = toeplitz_matrix(Expr::s2(), tr, opts);
        ComplexMatrix expect = ComplexMatrix::Zero(n, n);
        for (int m = 0; m < n; ++m) expect(m, m) = (m + 1) / kPi;
        out.push_back(make("toeplitz_s2_diagonal", max_entry(s2.entries - expect), 1e-10));
        const OperatorMatrix re = toeplitz_matrix(SymbolFunction{Expr::re(), {}}, tr, opts);
        ComplexMatrix tz = ComplexMatrix::Zero(n, n);  // multiplication by z
        for (int m = 0; m + 1 < n; ++m) tz(m + 1, m) = std::sqrt((m + 1) / kPi);
        out.push_back(make("toeplitz_re_tridiagonal", max_entry(re.entries - 0.5 * (tz + tz.adjoint())), 1e-10));
    }
    {
        double worst_i = 0.0, worst_e = 0.0, worst_t = 0.0;
        const OperatorMatrix id = identity_operator(tr);
        ToeplitzOptions opts;
        opts.allow_unbounded = true;
        const OperatorMatrix ts2 = toeplitz_matrix(Expr::s2(), tr, opts);
        for (const auto& z : pts_r) {
            worst_i = std::max(worst_i, std::abs(berezin(id, z) - 1.0));
            for (int m : {0, 1, 5, 10}) {
                const double expect = std::exp(m * std::log(kPi * z.norm()) - kPi * z.norm() - special::log_factorial(m));
                worst_e = std::max(worst_e, std::abs(berezin(basis_projection(m, tr), z) - expect));
            }
            worst_t = std::max(worst_t, std::abs(berezin(ts2, z) - (z.norm() + 1.0 / kPi)));
        }
        out.push_back(make("berezin_identity", worst_i, 1e-10));
        out.push_back(make("berezin_projection", worst_e, 1e-12, {{"m", {0, 1, 5, 10}}}));
        out.push_back(make("berezin_toeplitz_s2", worst_t, 1e-9));
    }
    {
        const OperatorMatrix phi = rank_one_phi(tr);
        const OperatorMatrix a = random_hermitian(tr, cfg.seed);
        const OperatorMatrix b = random_hermitian(tr, cfg.seed + 1);
        double pp = 0.0, ps = 0.0, comm = 0.0, bound = 0.0;
        const double trace_norm_b = schatten_norm(b.entries, 1.0);
        for (const auto& z : pts) {
            pp = std::max(pp, std::abs(conv_op_op(phi, phi, z) - std::exp(-kPi * z.norm())));
            ps = std::max(ps, std::abs(conv_op_op(phi, a, z) - berezin(a, z)));
            const Complex ab = conv_op_op(a, b, z);
            comm = std::max(comm, std::abs(ab - conv_op_op(b, a, z)));
            bound = std::max(bound, std::abs(ab) - trace_norm_b * operator_norm(a.entries));
        }
        out.push_back(make("phi_conv_phi_is_gaussian", pp, 1e-8));
        out.push_back(make("phi_conv_S_is_berezin", ps, 1e-8, {{"seed", cfg.seed}}));
        out.push_back(make("op_conv_commutative", comm, 1e-8, {{"seeds", {cfg.seed, cfg.seed + 1}}}));
        out.push_back(make("op_conv_young_excess", std::max(bound, 0.0), 1e-9));
    }
    {
        const OperatorMatrix s = random_hermitian(tr, cfg.seed);
        const OperatorMatrix phi_s = heat_convolve(1.0, s, cfg.quad_order);
        const OperatorMatrix tb(
            toeplitz_matrix_of([&](Complex z) { return berezin_unchecked(s.entries, z); }, n,
                               tensor_hermite_rule(0.5, std::max(cfg.quad_order, 2 * n))),
            tr);
        out.push_back(make("heat_conv_is_toeplitz_of_berezin", inner_distance(phi_s, tb), 1e-6, {{"seed", cfg.seed}}));
    }
    {
        double worst = 0.0;
        ToeplitzOptions topts;
        topts.allow_unbounded = true;
        ConvolutionOptions copts;
        copts.order = cfg.quad_order;
        copts.operand_decays = true;
        const OperatorMatrix phi = rank_one_phi(tr);
        for (const Expr& a : builtin_symbols()) {
            const OperatorMatrix ta = toeplitz_matrix(a, tr, topts);
            const OperatorMatrix conv = conv_fun_op(SymbolFunction{a, {}}, phi, copts);
            worst = std::max(worst, inner_distance(ta, conv));
        }
        out.push_back(make("toeplitz_is_symbol_conv_phi", worst, 1e-7));
    }
    {
        double worst = 0.0;
        const double r = trusted_radius(tr, 1e-10);
        const std::vector<Expr> symbols{gaussian_symbol(1.0), sin(Expr::s2()) * gaussian_symbol(1.0)};
        for (const Expr& a : symbols) {
            const OperatorMatrix ta = toeplitz_matrix(a, tr);
            for (const auto& z : sample_points(3, r)) {
                const OperatorMatrix shifted = toeplitz_matrix(SymbolFunction{a, z.value()}, tr);
                worst = std::max(worst, inner_distance(translate_operator(z, ta), shifted));
            }
        }
        out.push_back(make("toeplitz_translation_covariance", worst, 1e-7, {{"radius", r}}));
    }
    {
        const OperatorMatrix s = random_hermitian(tr, cfg.seed);
        const OperatorMatrix lhs = heat_convolve(0.25, heat_convolve(0.25, s, cfg.quad_order), cfg.quad_order);
        const OperatorMatrix rhs = heat_convolve(0.5, s, cfg.quad_order);
        out.push_back(make("gaussian_convolution_associativity", inner_distance(lhs, rhs), 1e-6, {{"t", {0.25, 0.25}}}));
    }
    {
        const OperatorMatrix s = random_hermitian(tr, cfg.seed);
        const SymbolFunction psi{sin(Expr::s2()) * gaussian_symbol(2.0), {}};
        ConvolutionOptions copts;
        copts.order = cfg.quad_order;
        const double lhs = operator_norm(conv_fun_op(psi, s, copts).inner());
        const double bound = l1_norm(psi, n, copts) * operator_norm(s.entries);
        const double heat = operator_norm(heat_convolve(0.5, s, cfg.quad_order).inner()) - operator_norm(s.entries);
        out.push_back(make("function_conv_young_excess", std::max({lhs - bound, heat, 0.0}), 1e-9));
    }
    return out;
}

// --- Laplacian -----------------------------------------------------------------

/// Delta phi_t - pi d/dt phi_t at (t, x + iy) by central differences with
/// step h, Richardson-combined over h and h/2, in extended precision.
inline long double heat_pde_residual(long double t, long double x, long double y, long double h) {
    const long double pi = 3.141592653589793238462643383279502884L;
    auto phi = [&](long double tt, long double xx, long double yy) {
        return std::exp(-pi * (xx * xx + yy * yy) / tt) / tt;
    };
    auto lap = [&](long double step) {
        return 0.25L * (phi(t, x + step, y) + phi(t, x - step, y) + phi(t, x, y + step) + phi(t, x, y - step) -
                        4.0L * phi(t, x, y)) / (step * step);
    };
    auto dt = [&](long double step) { return (phi(t + step, x, y) - phi(t - step, x, y)) / (2.0L * step); };
    const long double l = (4.0L * lap(0.5L * h) - lap(h)) / 3.0L;
    const long double d = (4.0L * dt(0.5L * h) - dt(h)) / 3.0L;
    return std::abs(l - pi * d);
}

/// Error of pi * heat_quotient(E_j, t) against the Delta E_j tridiagonal values.
inline double delta_projection_error(const TruncationSpec& tr, int j, double t, int order) {
    std::vector<double> ind(tr.dim, 0.0);
    ind[j] = 1.0;
    const EigenSequence mu = laplacian_sequence(EigenSequence(ind));
    ComplexMatrix diff = kPi * heat_quotient(basis_projection(j, tr), t, order).inner();
    for (int m = 0; m < tr.inner_dim; ++m) diff(m, m) -= mu[m];
    return max_entry(diff);
}

/// Error constant for delta_projection_error: pi Q(t) - Delta S ~ (t / 2 pi) Delta^2 S,
/// taken with a factor 2 of headroom.
inline double delta_projection_constant(const TruncationSpec& tr, int j) {
    std::vector<double> ind(tr.dim, 0.0);
    ind[j] = 1.0;
    const EigenSequence mu = laplacian_sequence(EigenSequence(ind));
    return laplacian_sequence(mu).sup_norm() / kPi;
}

inline double delta_toeplitz_error(const OperatorMatrix& ta, const OperatorMatrix& t_lap, double t, int order) {
    return operator_norm(kPi * heat_quotient(ta, t, order).inner() - t_lap.inner());
}

inline std::vector<Residual> laplacian_suite(const RunConfig& cfg, Json&) {
    const TruncationSpec& tr = cfg.trunc;
    tr.validate();
    const int n = tr.dim;
    std::vector<Residual> out;
    {
        const EigenSequence c(std::vector<double>(n, 2.5));
        const EigenSequence lin(sequence_of(n, [](double m) { return m; }));
        out.push_back(make("laplacian_sequence_constant", laplacian_sequence(c).sup_norm(), 0.0));
        double worst = 0.0;
        for (double v : laplacian_sequence(lin).values) worst = std::max(worst, std::abs(v - kPi));
        out.push_back(make("laplacian_sequence_linear", worst, 1e-12));
    }
    {
        const double h = 1e-3;
        const std::vector<std::vector<double>> lambdas{
            sequence_of(n, [](double m) { return m == 0.0 ? 1.0 : 0.0; }),
            sequence_of(n, [](double m) { return m; }),
            sequence_of(n, [](double m) { return std::sin(std::sqrt(m)); })};
        double worst = 0.0;
        for (const auto& l : lambdas) {
            const EigenSequence lam(l);
            for (const auto& z : sample_points(20, 1.5)) {
                const double direct = laplacian_of_berezin_radial(lam, z);
                const double fd = central_laplacian([&](Complex w) { return berezin_radial(lam, ComplexPoint::from(w)); },
                                                    z.value(), h);
                worst = std::max(worst, std::abs(direct - fd));
            }
        }
        out.push_back(make("radial_berezin_laplacian_dual_path", worst, 1e-7, {{"step", h}}));
    }
    {
        double phi_err = 0.0, id_err = 0.0, fd_err = 0.0, diag_err = 0.0;
        const OperatorMatrix phi = rank_one_phi(tr);
        const OperatorMatrix id = identity_operator(tr);
        const auto pts = sample_points(20, std::min(1.5, tr.radius));
        for (const auto& z : pts) {
            const double x = kPi * z.norm();
            phi_err = std::max(phi_err, std::abs(laplacian_of_berezin(phi, z) - kPi * (x - 1.0) * std::exp(-x)));
            id_err = std::max(id_err, std::abs(laplacian_of_berezin(id, z)));
        }
        for (int i = 0; i < 5; ++i) {
            const OperatorMatrix s = random_hermitian(tr, cfg.seed + i);
            std::vector<double> lam(n);
            for (int m = 0; m < n; ++m) lam[m] = s.entries(m, m).real();
            const OperatorMatrix d = diagonal_operator(lam, tr);
            const EigenSequence seq(lam);
            for (const auto& z : pts) {
                const Complex fd = central_laplacian([&](Complex w) { return berezin_unchecked(s.entries, w); }, z.value(), 1e-3);
                fd_err = std::max(fd_err, std::abs(laplacian_of_berezin(s, z) - fd));
                diag_err = std::max(diag_err, std::abs(laplacian_of_berezin(d, z) - laplacian_of_berezin_radial(seq, z)));
            }
        }
        out.push_back(make("laplacian_of_berezin_phi", phi_err, 1e-12));
        out.push_back(make("laplacian_of_berezin_identity", id_err, 1e-12));
        out.push_back(make("laplacian_of_berezin_finite_difference", fd_err, 1e-5, {{"seeds", 5}, {"step", 1e-3}}));
        out.push_back(make("laplacian_of_berezin_diagonal_vs_sequence", diag_err, 1e-6));
    }
    {
        double worst = 0.0;
        for (long double t : {0.25L, 1.0L, 4.0L})
            for (const auto& z : sample_points(8, 1.5))
                worst = std::max(worst, static_cast<double>(heat_pde_residual(t, z.re, z.im, 1e-4L)));
        out.push_back(make("heat_kernel_pde", worst, 1e-9, {{"step", 1e-4}}));
    }
    for (int j : {0, 1, 5, 10}) {
        const double e1 = delta_projection_error(tr, j, 0.02, cfg.quad_order);
        const double e2 = delta_projection_error(tr, j, 0.01, cfg.quad_order);
        const double c = delta_projection_constant(tr, j);
        out.push_back(make("delta_projection_error_over_Ct", e2 / (c * 0.01), 1.0, {{"j", j}, {"t", 0.01}}));
        out.push_back(make("delta_projection_halving_ratio_distance", std::abs(e1 / e2 - 2.0), 0.4, {{"j", j}}));
    }
    {
        ToeplitzOptions opts;
        for (const Expr& a : {gaussian_symbol(1.0), Expr::s2() * gaussian_symbol(1.0)}) {
            const OperatorMatrix ta = toeplitz_matrix(a, tr, opts);
            const OperatorMatrix tl = toeplitz_matrix(symbolic_laplacian(a), tr, opts);
            const double e1 = delta_toeplitz_error(ta, tl, 0.01, cfg.quad_order);
            const double e2 = delta_toeplitz_error(ta, tl, 0.005, cfg.quad_order);
            out.push_back(make("delta_toeplitz", e1, 5e-3, {{"symbol", to_string(a)}, {"t", 0.01}}));
            out.push_back(make_at_least("delta_toeplitz_improvement", e1 / e2, 1.6, {{"symbol", to_string(a)}}));
        }
    }
    return out;
}

// --- heat ----------------------------------------------------------------------

/// lambda(t) - lambda - (1/pi) int_0^t mu(lambda(s)) ds on m < window, with
/// composite Simpson over `intervals` (even) subintervals.
inline double heat_integral_residual(const EigenSequence& lambda, double t, int intervals, std::size_t window, int order) {
    const std::size_t len = lambda.size() - 1;
    std::vector<double> integral(len, 0.0);
    const double h = t / intervals;
    for (int i = 0; i <= intervals; ++i) {
        const double s = i * h;
        const EigenSequence at = i == 0 ? lambda : heat_radial(lambda, s, order);
        const EigenSequence mu = laplacian_sequence(at);
        const double c = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        for (std::size_t m = 0; m < len; ++m) integral[m] += c * h / 3.0 * mu[m];
    }
    const EigenSequence end = heat_radial(lambda, t, order);
    double worst = 0.0;
    for (std::size_t m = 0; m < window; ++m) worst = std::max(worst, std::abs(end[m] - lambda[m] - integral[m] / kPi));
    return worst;
}

/// max over the window of |Delta(phi_t * S) - pi d/dt(phi_t * S)| with the
/// Laplacian taken as laplacian_estimate.
inline double operator_heat_residual(const OperatorMatrix& s, double t, int order) {
    const OperatorMatrix tt = heat_convolve(t, s, order);
    const OperatorMatrix lap = laplacian_estimate(tt, 0.01, order);
    const OperatorMatrix d = derivative_in_t(s, t, order);
    return max_entry(lap.inner() - kPi * d.inner());
}

inline double derivative_fd_error(const OperatorMatrix& s, double t, double h, int order) {
    const ComplexMatrix fd = (heat_convolve(t + h, s, order).entries - heat_convolve(t - h, s, order).entries) / (2.0 * h);
    return max_entry((fd - derivative_in_t(s, t, order).entries).topLeftCorner(s.trunc.inner_dim, s.trunc.inner_dim));
}

inline std::vector<Residual> heat_suite(const RunConfig& cfg, Json& info) {
    const TruncationSpec& tr = cfg.trunc;
    tr.validate();
    const int n = tr.dim;
    const int k = tr.inner_dim;
    std::vector<Residual> out;

    TruncationSpec big = tr;
    big.dim = std::max(kHeatCheckDim, n);
    info["heat_check_dim"] = big.dim;
    {
        const HeatKernelMatrix h1 = heat_kernel_matrix(1.0, big.dim, big, cfg.quad_order);
        double rows = 0.0, fixed = 0.0;
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(big.dim);
        const Eigen::VectorXd image = h1.h * ones;
        for (int r = 0; r < k; ++r) {
            rows = std::max(rows, std::abs(h1.h.row(r).sum() - 1.0));
            fixed = std::max(fixed, std::abs(image[r] - 1.0));
        }
        out.push_back(make("heat_matrix_row_sums", rows, 1e-8, {{"t", 1.0}, {"M", big.dim}}));
        out.push_back(make("heat_matrix_constant_fixed_point", fixed, 1e-8, {{"t", 1.0}, {"M", big.dim}}));
        const HeatKernelMatrix at_default = heat_kernel_matrix(1.0, n, tr, cfg.quad_order);
        double deficit = 0.0;
        for (int r = 0; r < k; ++r) deficit = std::max(deficit, 1.0 - at_default.h.row(r).sum());
        info["heat_row_deficit_at_default_dim"] = deficit;
    }
    {
        const EigenSequence lam(sequence_of(big.dim, [](double m) { return std::sin(std::sqrt(m)); }));
        double worst = 0.0;
        for (double t : {0.25, 0.5})
            for (double s : {0.25, 0.5}) {
                const EigenSequence lhs = apply(heat_kernel_matrix(t, big.dim, big, cfg.quad_order),
                                                apply(heat_kernel_matrix(s, big.dim, big, cfg.quad_order), lam));
                const EigenSequence rhs = apply(heat_kernel_matrix(t + s, big.dim, big, cfg.quad_order), lam);
                for (int r = 0; r < k; ++r) worst = std::max(worst, std::abs(lhs[r] - rhs[r]));
            }
        out.push_back(make("heat_semigroup", worst, 1e-6, {{"M", big.dim}}));
        double sub = 0.0;
        for (double t : {0.25, 1.0}) sub = std::max(sub, heat_radial(lam, t, cfg.quad_order).sup_norm() - lam.sup_norm());
        out.push_back(make("heat_sub_stochastic_excess", std::max(sub, 0.0), 1e-12));
    }
    {
        // phi * Phi = T_{B(Phi)}, B(Phi)(z) = e^{-pi |z|^2}
        const EigenSequence e0(sequence_of(n, [](double m) { return m == 0.0 ? 1.0 : 0.0; }));
        const EigenSequence lhs = heat_radial(e0, 1.0, cfg.quad_order);
        const EigenSequence rhs = toeplitz_eigenvalues(gaussian_symbol(kPi), 1, k, cfg.quad_order);
        double worst = 0.0;
        for (int r = 0; r < k; ++r) worst = std::max(worst, std::abs(lhs[r] - rhs[r]));
        out.push_back(make("heat_of_phi_is_toeplitz_of_gaussian", worst, 1e-8));
    }
    {
        const EigenSequence lam(sequence_of(n, [](double m) { return std::sin(std::sqrt(m)); }));
        const EigenSequence mu = laplacian_sequence(lam);
        auto limit_error = [&](double t) {
            const EigenSequence ht = heat_radial(lam, t, cfg.quad_order);
            double w = 0.0;
            for (int r = 0; r < k; ++r) w = std::max(w, std::abs((ht[r] - lam[r]) / t - mu[r] / kPi));
            return w;
        };
        const double e1 = limit_error(0.01), e2 = limit_error(0.005);
        out.push_back(make("heat_small_time_limit", e2, 1e-2, {{"t", 0.005}}));
        out.push_back(make("heat_small_time_rate", e2 / e1, 0.6, {{"t", {0.01, 0.005}}}));
        out.push_back(make("heat_integral_identity", heat_integral_residual(lam, 0.25, 40, k, cfg.quad_order), 1e-4,
                           {{"t", 0.25}, {"simpson_intervals", 40}}));
    }
    {
        // I has infinite rank; the check embeds it in enough rows that the
        // Weyl tails stay negligible wherever phi_t has weight.
        TruncationSpec wide = tr;
        wide.dim = covering_dim(k, std::sqrt(0.5 * 40.0 / kPi));
        const OperatorMatrix id = identity_operator(wide);
        out.push_back(make("heat_conv_identity", max_entry(heat_convolve(0.5, id, cfg.quad_order).inner() -
                                                           ComplexMatrix::Identity(k, k)),
                           1e-10, {{"rows", wide.dim}}));
        out.push_back(make("derivative_in_t_identity", max_entry(derivative_in_t(id, 0.5, cfg.quad_order).inner()), 1e-10,
                           {{"rows", wide.dim}}));
        const std::vector<double> lam = sequence_of(n, [](double m) { return std::cos(std::sqrt(m)); });
        const OperatorMatrix conv = heat_convolve(0.5, diagonal_operator(lam, tr), cfg.quad_order);
        const EigenSequence seq = heat_radial(EigenSequence(lam), 0.5, cfg.quad_order);
        double worst = 0.0;
        for (int j = 0; j < n; ++j)
            for (int c = 0; c < n; ++c)
                worst = std::max(worst, std::abs(conv.entries(j, c) - (j == c ? seq[j] : 0.0)));
        out.push_back(make("heat_conv_diagonal_matches_sequence", worst, 1e-7));
    }
    for (int i = 0; i < 3; ++i) {
        const OperatorMatrix s = random_hermitian(tr, cfg.seed + i);
        out.push_back(make("operator_heat_equation", operator_heat_residual(s, 0.5, cfg.quad_order), 1e-3,
                           {{"seed", cfg.seed + i}, {"t", 0.5}}));
        const double e1 = derivative_fd_error(s, 0.5, 2e-3, cfg.quad_order);
        const double e2 = derivative_fd_error(s, 0.5, 1e-3, cfg.quad_order);
        out.push_back(make("derivative_in_t_central_difference", e2, 1e-5, {{"seed", cfg.seed + i}, {"h", 1e-3}}));
        out.push_back(make("derivative_in_t_order_distance", std::abs(e1 / e2 - 4.0), 1.0, {{"seed", cfg.seed + i}}));
    }
    return out;
}

// --- Gelfand -------------------------------------------------------------------

inline std::vector<Residual> gelfand_suite(const RunConfig& cfg, Json&) {
    std::vector<Residual> out;
    constexpr int M = 400;
    const SequenceFunction sin_sqrt = sample_at_sqrt([](double x) { return std::sin(x); }, M);
    const SequenceFunction sin_lin(sequence_of(M, [](double m) { return std::sin(m); }));

    out.push_back(make("sqrt_metric_examples",
                       std::abs(sqrt_metric(4, 4)) + std::abs(sqrt_metric(0, 1) - 1.0) + std::abs(sqrt_metric(100, 121) - 1.0),
                       1e-15));
    out.push_back(make("modulus_sin_sqrt", modulus_of_continuity(sin_sqrt, 0.1), 0.1 + 1e-12, {{"delta", 0.1}, {"M", M}}));
    out.push_back(make_at_least("modulus_sin_linear", modulus_of_continuity(sin_lin, 0.1), 0.5, {{"delta", 0.1}, {"M", M}}));

    const double defect_sqrt = d_delta_defect(sin_sqrt.as_eigen_sequence());
    const double defect_lin = d_delta_defect(sin_lin.as_eigen_sequence());
    out.push_back(make("defect_sin_sqrt", defect_sqrt, 1.5, {{"M", M}}));
    out.push_back(make_at_least("defect_sin_linear", defect_lin, 50.0, {{"M", M}}));
    {
        int disagreements = 0;
        for (const auto* s : {&sin_sqrt, &sin_lin}) {
            const bool mu_bounded = appears_bounded(laplacian_sequence(s->as_eigen_sequence()).values);
            const bool defect_bounded = appears_bounded(weighted_second_difference(s->values));
            if (mu_bounded != defect_bounded) ++disagreements;
        }
        const bool verdicts = appears_bounded(weighted_second_difference(sin_sqrt.values)) &&
                              !appears_bounded(weighted_second_difference(sin_lin.values));
        out.push_back(make("laplacian_boundedness_matches_defect", disagreements + (verdicts ? 0 : 1), 0.0));
    }
    {
        double at_int = 0.0;
        for (int m = 0; m < M; ++m) at_int = std::max(at_int, std::abs(extend_plus(sin_sqrt, m) - sin_sqrt[m]));
        out.push_back(make("extension_reproduces_integers", at_int, 0.0));
        double sup = 0.0;
        const int grid = 10 * (M - 1);  // step 0.1, integers included
        for (int i = 0; i <= grid; ++i) sup = std::max(sup, std::abs(extend_plus(sin_sqrt, i / 10.0)));
        out.push_back(make("extension_sup_isometry", std::abs(sup - sin_sqrt.sup_norm()), 1e-12, {{"grid", grid}}));
        const SequenceFunction two(std::vector<double>{0.0, 1.0});
        out.push_back(make("extension_half_cell", std::abs(extend_plus(two, 0.5) - std::sqrt(0.5)), 1e-15));
        double excess = 0.0, even = 0.0;
        for (int i = 0; i <= 1900; ++i) {
            const double x = 0.01 * i;
            const double m = std::floor(x * x);
            const double cell = std::sqrt(m + 1.0) - std::sqrt(m);
            excess = std::max(excess, std::abs(extend_real(sin_sqrt, x) - std::sin(x)) - cell * cell / 8.0);
            even = std::max(even, std::abs(extend_real(sin_sqrt, -x) - extend_real(sin_sqrt, x)));
        }
        out.push_back(make("extension_real_interpolation_excess", std::max(excess, 0.0), 1e-12));
        out.push_back(make("extension_real_even", even, 0.0));
    }
    {
        double shift_err = 0.0;
        shift_err = std::max(shift_err, std::abs(shift_left(sin_sqrt, 0).sup_norm() - sin_sqrt.sup_norm()));
        const SequenceFunction back = shift_left(shift_right(sin_sqrt, 2), 2);
        for (int m = 0; m < M; ++m) shift_err = std::max(shift_err, std::abs(back[m] - sin_sqrt[m]));
        out.push_back(make("shift_left_inverts_shift_right", shift_err, 0.0));
        double gamma_err = 0.0;
        EigenvalueOptions eo;
        eo.allow_unbounded = true;
        const int count = cfg.trunc.inner_dim;
        for (const Expr& a : {Expr::number(1.0), Expr::s2(), gaussian_symbol(1.0)}) {
            const EigenSequence g2 = toeplitz_eigenvalues(a, 2, count, cfg.quad_order, eo);
            const SequenceFunction g1(toeplitz_eigenvalues(a, 1, count + 1, cfg.quad_order, eo).values);
            const SequenceFunction shifted = shift_left(g1, 1);
            for (int m = 0; m < count; ++m) gamma_err = std::max(gamma_err, std::abs(g2[m] - shifted[m]));
        }
        out.push_back(make("gamma_dimension_shift", gamma_err, 1e-8));
    }
    {
        // mean-value bracket for the divided difference of sampled functions
        struct Sample {
            double (*f)(double);
            double (*half_f2)(double);
        };
        const Sample samples[] = {
            {[](double x) { return std::sin(x); }, [](double x) { return -0.5 * std::sin(x); }},
            {[](double x) { return std::exp(-x * x / 50.0); },
             [](double x) { return 0.5 * (x * x / 625.0 - 1.0 / 25.0) * std::exp(-x * x / 50.0); }},
            {[](double x) { return x * x * x / 100.0; }, [](double x) { return 0.03 * x; }},
        };
        double worst = 0.0;
        for (const auto& smp : samples) {
            const SequenceFunction sig = sample_at_sqrt(smp.f, M);
            for (int nidx = 1; nidx + 1 < M; ++nidx) {
                const double q = sqrt_divided_difference(sig, nidx);
                const double a = std::sqrt(nidx - 1.0), b = std::sqrt(nidx + 1.0);
                double lo = 1e300, hi = -1e300;
                for (int i = 0; i <= 200; ++i) {
                    const double v = smp.half_f2(a + (b - a) * i / 200.0);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                const double slack = 1e-9 + 1e-4 * (hi - lo);
                worst = std::max(worst, std::max(lo - q, q - hi) - slack);
            }
        }
        out.push_back(make("divided_difference_mean_value_excess", std::max(worst, 0.0), 0.0));
        double step = 0.0;
        for (int m = 1; m < M; ++m) step = std::max(step, std::abs(sin_sqrt[m] - sin_sqrt[m - 1]));
        out.push_back(make("sampled_sin_defect", defect_sqrt, 0.5 + step, {{"margin", step}}));
        const SequenceFunction sq = sample_at_sqrt([](double x) { return x * x; }, M);
        out.push_back(make("sampled_square_defect", d_delta_defect(sq.as_eigen_sequence()), 1e-9));
    }
    {
        const SequenceFunction flat(std::vector<double>(M, 0.75));
        const ApproxResult fa = approx_in_ddelta(flat, 0.04);
        double flat_err = 0.0;
        for (std::size_t m = 0; m < fa.nu.size(); ++m) flat_err = std::max(flat_err, std::abs(fa.nu[m] - 0.75));
        out.push_back(make("approx_constant", flat_err, 1e-10));

        const ApproxResult r16 = approx_in_ddelta(sin_sqrt, 0.16);
        const ApproxResult r04 = approx_in_ddelta(sin_sqrt, 0.04);
        const ApproxResult r01 = approx_in_ddelta(sin_sqrt, 0.01);
        out.push_back(make("approx_sup_error", r04.sup_error, 0.05, {{"s", 0.04}}));
        out.push_back(make("approx_defect", r04.defect, 2.0, {{"s", 0.04}}));
        auto window_error = [&](const ApproxResult& r) {
            double w = 0.0;
            for (std::size_t m = r16.window_begin; m < r16.window_end; ++m) w = std::max(w, std::abs(sin_sqrt[m] - r.nu[m]));
            return w;
        };
        const double e16 = window_error(r16), e04 = window_error(r04), e01 = window_error(r01);
        out.push_back(make("approx_monotone_violations", (e04 < e16 ? 0 : 1) + (e01 < e04 ? 0 : 1), 0.0,
                           {{"errors", {e16, e04, e01}}}));
        double bound = 0.0;
        for (const auto* r : {&r16, &r04, &r01})
            bound = std::max(bound, r->sup_error - modulus_of_continuity(sin_sqrt, 4.0 * std::sqrt(r->bandwidth)));
        out.push_back(make("approx_modulus_bound_excess", std::max(bound, 0.0), 0.0, {{"c", 4.0}}));
    }
    return out;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"identities", "laplacian", "heat", "gelfand"};
    return names;
}

inline std::vector<Residual> run_suite(std::string_view name, const RunConfig& cfg, Json& info) {
    if (name == "identities") return identities_suite(cfg, info);
    if (name == "laplacian") return laplacian_suite(cfg, info);
    if (name == "heat") return heat_suite(cfg, info);
    if (name == "gelfand") return gelfand_suite(cfg, info);
    throw InvalidArgument("unknown suite: " + std::string(name));
}

}  // namespace qha::verify
