#pragma once

// Truncated-matrix realization of the QHA calculus for general operators on
// F^2(C): Toeplitz matrices, Berezin transforms, function-operator and
// operator-operator convolutions, the heat semigroup and the operator Laplacian.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "qha/error.hpp"
#include "qha/fock_core.hpp"
#include "qha/quadrature.hpp"
#include "qha/radial_calculus.hpp"
#include "qha/symbol.hpp"

namespace qha {

// --- norms -----------------------------------------------------------------

inline Eigen::VectorXd singular_values(const ComplexMatrix& m) {
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
}

inline double operator_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    return singular_values(m)(0);
}

inline double schatten_norm(const ComplexMatrix& m, double p) {
    if (!(p >= 1.0)) throw InvalidArgument("Schatten exponent must be >= 1");
    const Eigen::VectorXd sv = singular_values(m);
    if (std::isinf(p)) return sv.size() ? sv(0) : 0.0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) sum += std::pow(sv(i), p);
    return std::pow(sum, 1.0 / p);
}

inline ComplexMatrix inner_block(const OperatorMatrix& s) { return s.inner(); }

/// Operator norm of the difference on the leading inner block.
inline double inner_distance(const OperatorMatrix& a, const OperatorMatrix& b) {
    const int k = std::min(a.trunc.inner_dim, b.trunc.inner_dim);
    return operator_norm(a.entries.topLeftCorner(k, k) - b.entries.topLeftCorner(k, k));
}

inline double max_entry(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// --- elementary operators --------------------------------------------------

inline OperatorMatrix identity_operator(const TruncationSpec& trunc) {
    return {ComplexMatrix::Identity(trunc.dim, trunc.dim), trunc};
}

/// E_m = e_m (x) conj(e_m).
inline OperatorMatrix basis_projection(int m, const TruncationSpec& trunc) {
    if (m < 0 || m >= trunc.dim) throw InvalidArgument("projection index outside the truncation");
    ComplexMatrix e = ComplexMatrix::Zero(trunc.dim, trunc.dim);
    e(m, m) = 1.0;
    return {std::move(e), trunc};
}

/// Phi = 1 (x) conj(1) = E_0.
inline OperatorMatrix rank_one_phi(const TruncationSpec& trunc) { return basis_projection(0, trunc); }

/// sum_m lambda_m E_m; entries beyond lambda.size() are zero.
inline OperatorMatrix diagonal_operator(const std::vector<double>& lambda, const TruncationSpec& trunc) {
    if (static_cast<int>(lambda.size()) > trunc.dim) throw InvalidArgument("diagonal longer than the truncation");
    ComplexMatrix d = ComplexMatrix::Zero(trunc.dim, trunc.dim);
    for (std::size_t m = 0; m < lambda.size(); ++m) d(m, m) = lambda[m];
    return {std::move(d), trunc};
}

inline OperatorMatrix diagonal_operator(const EigenSequence& lambda, const TruncationSpec& trunc) {
    return diagonal_operator(lambda.values, trunc);
}

/// Hermitian matrix with normal entries from mt19937_64(seed), scaled to unit operator norm.
inline OperatorMatrix random_hermitian(const TruncationSpec& trunc, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix a(trunc.dim, trunc.dim);
    for (int j = 0; j < trunc.dim; ++j)
        for (int k = 0; k < trunc.dim; ++k) {
            const double re = normal(gen);
            const double im = normal(gen);
            a(j, k) = Complex(re, im);
        }
    ComplexMatrix h = 0.5 * (a + a.adjoint());
    h /= operator_norm(h);
    return {std::move(h), trunc};
}

// --- Berezin transform -----------------------------------------------------

inline Complex berezin_unchecked(const ComplexMatrix& s, Complex z) {
    const ComplexVector c = kernel_coeffs_unchecked(z, static_cast<int>(s.rows()));
    return c.dot(s * c);  // conj(c)^T S c
}

/// B(S)(z) = <S k_z, k_z>.
inline Complex berezin(const OperatorMatrix& s, ComplexPoint z) {
    require_within_radius(z, s.trunc);
    return berezin_unchecked(s.entries, z.value());
}

/// pi (pi <S v, v> - <S k_z, k_z>), where v holds the coefficients of (w - z) k_z(w):
/// v_m = sqrt(m/pi) c_{m-1} - z c_m.
inline Complex laplacian_of_berezin(const OperatorMatrix& s, ComplexPoint z) {
    require_within_radius(z, s.trunc);
    const int n = s.dim();
    const Complex zv = z.value();
    const ComplexVector c = kernel_coeffs_unchecked(zv, n);
    ComplexVector v(n);
    for (int m = 0; m < n; ++m) v[m] = (m > 0 ? std::sqrt(m / kPi) * c[m - 1] : Complex{}) - zv * c[m];
    return kPi * (kPi * v.dot(s.entries * v) - c.dot(s.entries * c));
}

/// Central-difference Laplacian (1/4)(f_xx + f_yy) with Richardson over h and h/2.
template <class F>
auto central_laplacian(F&& f, Complex z, double h) {
    auto stencil = [&](double step) {
        const auto f0 = f(z);
        return 0.25 * (f(z + step) + f(z - step) + f(z + Complex(0, step)) + f(z - Complex(0, step)) - 4.0 * f0) /
               (step * step);
    };
    const auto coarse = stencil(h);
    const auto fine = stencil(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

// --- Toeplitz matrices -----------------------------------------------------

struct ToeplitzOptions {
    int planar_order = 64;  // Gauss-Hermite per axis
    int radial_order = 24;  // Gauss-Legendre per radial piece
    double tolerance = 1e-9;
    bool allow_unbounded = false;
};

/// (T_a)_{jk} = sum_i w_i a(z_i) e_k(z_i) conj(e_j(z_i)) e^{-pi|z_i|^2} for any
/// callable a and planar rule.
template <class F>
ComplexMatrix toeplitz_matrix_of(F&& a, int dim, const PlanarRule& rule) {
    const auto q = static_cast<Eigen::Index>(rule.size());
    ComplexMatrix v(q, dim);
    Eigen::VectorXcd wa(q);
    for (Eigen::Index i = 0; i < q; ++i) {
        v.row(i) = kernel_coeffs_unchecked(rule.nodes[i], dim).conjugate().transpose();
        wa[i] = rule.weights[i] * a(rule.nodes[i]);
    }
    return v.adjoint() * wa.asDiagonal() * v;
}

namespace detail {

inline void require_symbol_growth(const Expr& e, bool allow_unbounded) {
    const Growth g = classify_growth(e);
    if (g == Growth::exponential || (g == Growth::polynomial && !allow_unbounded))
        throw UnboundedSymbol("symbol is not structurally bounded: " + to_string(e));
}

/// Diagonal of T_a for a radial about the origin, by composite Gauss-Legendre in s:
/// lambda_m = int_0^smax a(s) 2 pi s e^{-pi s^2} (pi s^2)^m / m! ds.
inline std::vector<double> radial_toeplitz_diagonal(const Expr& a, int dim, int order) {
    const double smax = std::sqrt((dim + 10.0 * std::sqrt(static_cast<double>(dim)) + 60.0) / kPi);
    const auto nodes = piecewise_legendre(indicator_breaks(a), 0.0, smax, order, 0.5);
    std::vector<double> out(dim, 0.0);
    for (const auto& [s, w] : nodes) {
        const double x = kPi * s * s;
        const double base = w * 2.0 * kPi * s * evaluate_radial(a, s);
        if (base == 0.0) continue;
        const double log_x = std::log(x);
        for (int m = 0; m < dim; ++m) out[m] += base * std::exp(m * log_x - x - special::log_factorial(m));
    }
    return out;
}

inline PlanarRule toeplitz_rule(const SymbolFunction& a, int dim, int order) {
    if (!contains_indicator(a.expr)) return tensor_hermite_rule(1.0, order);
    const double smax = std::abs(a.shift) + std::sqrt((dim + 10.0 * std::sqrt(static_cast<double>(dim)) + 60.0) / kPi);
    return polar_piecewise_rule(indicator_breaks(a.expr), smax, order / 2, 0.5, 2 * dim + order, a.shift);
}

inline double relative_gap(const ComplexMatrix& coarse, const ComplexMatrix& fine) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < fine.rows(); ++j)
        for (Eigen::Index k = 0; k < fine.cols(); ++k)
            worst = std::max(worst, std::abs(coarse(j, k) - fine(j, k)) / std::max(1.0, std::abs(fine(j, k))));
    return worst;
}

}  // namespace detail

/// T_a in the monomial basis. Symbols radial about the origin give a diagonal
/// matrix; other symbols go through a planar rule. Each route runs at its
/// configured order and at twice that order, returning the finer result.
inline OperatorMatrix toeplitz_matrix(const SymbolFunction& a, const TruncationSpec& trunc,
                                      const ToeplitzOptions& options = {}) {
    trunc.validate();
    detail::require_symbol_growth(a.expr, options.allow_unbounded);
    require_finite(ComplexPoint::from(a.shift));
    const int n = trunc.dim;
    ComplexMatrix coarse, fine;
    int order = 0;
    if (a.radial_about_origin()) {
        order = options.radial_order;
        const auto d1 = detail::radial_toeplitz_diagonal(a.expr, n, order);
        const auto d2 = detail::radial_toeplitz_diagonal(a.expr, n, 2 * order);
        coarse = ComplexMatrix::Zero(n, n);
        fine = ComplexMatrix::Zero(n, n);
        for (int m = 0; m < n; ++m) {
            coarse(m, m) = d1[m];
            fine(m, m) = d2[m];
        }
    } else {
        order = options.planar_order;
        coarse = toeplitz_matrix_of(a, n, detail::toeplitz_rule(a, n, order));
        fine = toeplitz_matrix_of(a, n, detail::toeplitz_rule(a, n, 2 * order));
    }
    const double gap = detail::relative_gap(coarse, fine);
    if (!(gap <= options.tolerance))
        throw QuadratureOrderTooLow("Toeplitz order-doubling estimate " + std::to_string(gap) + " exceeds " +
                                    std::to_string(options.tolerance) + " at order " + std::to_string(order));
    return {std::move(fine), trunc};
}

inline OperatorMatrix toeplitz_matrix(const Expr& a, const TruncationSpec& trunc, const ToeplitzOptions& options = {}) {
    return toeplitz_matrix(SymbolFunction{a, {}}, trunc, options);
}

// --- function-operator convolution -----------------------------------------

/// sum_i w_i psi(z_i) W_{z_i} S W_{z_i}^*. Translations of a matrix supported
/// on the truncation are exact, so nodes are not clipped at trunc.radius.
template <class F>
OperatorMatrix conv_fun_op(F&& psi, const OperatorMatrix& s, const PlanarRule& rule) {
    const int n = s.dim();
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const Complex weight = rule.weights[i] * Complex(psi(rule.nodes[i]));
        if (weight == 0.0) continue;
        const ComplexMatrix w = weyl_block(rule.nodes[i], n, n);
        out.noalias() += weight * (w * s.entries * w.adjoint());
    }
    return {std::move(out), s.trunc};
}

namespace detail {

/// out += weight * (1/2pi) int_0^{2pi} W_{r e^{i theta}} S W^* dtheta.
/// W_{re^{i theta}} = D W_r D^* with D = diag(e^{-i j theta}), so the average
/// keeps the terms with l - m = j - k:
///   sum_l W_{jl}(r) S_{l, l-d} W_{k, l-d}(r),  d = j - k,
/// and W_r is real.
inline void accumulate_angular_average(double r, Complex weight, const ComplexMatrix& s, ComplexMatrix& out) {
    const int n = static_cast<int>(s.rows());
    const Eigen::MatrixXd w = weyl_block({r, 0.0}, n, n).real();
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const int d = j - k;
            const int lo = std::max(0, d);
            const int hi = std::min(n, n + d);
            Complex sum{};
            for (int l = lo; l < hi; ++l) sum += (w(j, l) * w(k, l - d)) * s(l, l - d);
            out(j, k) += weight * sum;
        }
    }
}

}  // namespace detail

/// int psi(|z|) W_z S W_z^* dz for radial psi, with the angle integrated exactly.
template <class F>
OperatorMatrix conv_radial(F&& psi, const OperatorMatrix& s, const RadialRule& rule) {
    const int n = s.dim();
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const Complex weight = rule.weights[i] * Complex(psi(rule.radii[i]));
        if (weight == 0.0) continue;
        detail::accumulate_angular_average(rule.radii[i], weight, s.entries, out);
    }
    return {std::move(out), s.trunc};
}

inline RadialRule radial_piecewise_rule(const std::vector<double>& breaks, double s_max, int order, double piece) {
    RadialRule rule;
    for (const auto& [r, w] : piecewise_legendre(breaks, 0.0, s_max, order, piece)) {
        rule.radii.push_back(r);
        rule.weights.push_back(2.0 * kPi * r * w);
    }
    return rule;
}

struct ConvolutionOptions {
    int order = 96;  // at least 2 * dim is used
    // Set when psi is only bounded and the operand supplies the decay
    // (a * Phi = T_a); skips the integrability check.
    bool operand_decays = false;
};

/// psi * S for a grammar symbol psi, which must be integrable (contain a
/// decaying Gaussian factor or a bounded indicator).
inline OperatorMatrix conv_fun_op(const SymbolFunction& psi, const OperatorMatrix& s,
                                  const ConvolutionOptions& options = {}) {
    if (!options.operand_decays && !is_integrable(psi.expr))
        throw NotIntegrable("convolution weight is not integrable: " + to_string(psi.expr));
    require_finite(ComplexPoint::from(psi.shift));
    const int n = s.dim();
    const int order = std::max(options.order, 2 * n);
    const double reach = std::sqrt((n + 12.0 * std::sqrt(static_cast<double>(n)) + 80.0) / kPi);
    if (psi.radial_about_origin()) {
        auto f = [&](double r) { return evaluate_radial(psi.expr, r); };
        if (contains_indicator(psi.expr))
            return conv_radial(f, s, radial_piecewise_rule(indicator_breaks(psi.expr), reach, 16, 0.25));
        return conv_radial(f, s, radial_gaussian_rule(1.0, order));
    }
    if (contains_indicator(psi.expr))
        return conv_fun_op(psi, s,
                           polar_piecewise_rule(indicator_breaks(psi.expr), std::abs(psi.shift) + reach, 16, 0.25,
                                                4 * n, psi.shift));
    return conv_fun_op(psi, s, tensor_hermite_rule(1.0, order));
}

/// ||psi||_1 under the rule a convolution would use.
inline double l1_norm(const SymbolFunction& psi, int dim, const ConvolutionOptions& options = {}) {
    const int order = std::max(options.order, 2 * dim);
    if (psi.radial_about_origin() && !contains_indicator(psi.expr)) {
        const auto rule = radial_gaussian_rule(1.0, order);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * std::abs(evaluate_radial(psi.expr, rule.radii[i]));
        return sum;
    }
    const double reach = std::abs(psi.shift) + std::sqrt((dim + 12.0 * std::sqrt(static_cast<double>(dim)) + 80.0) / kPi);
    const auto rule = contains_indicator(psi.expr)
                          ? polar_piecewise_rule(indicator_breaks(psi.expr), reach, 16, 0.25, 4 * dim, psi.shift)
                          : tensor_hermite_rule(1.0, order);
    return rule.integrate([&](Complex z) { return std::abs(psi(z)); });
}

// --- heat semigroup ----------------------------------------------------------

/// Radial rule exact for phi_t times the entries of W_z S W_z^*, whose
/// envelope is e^{-pi|z|^2}: Gauss-Laguerre at scale t / (1 + t).
inline RadialRule heat_rule(double t, int dim, int order = 96) {
    return radial_gaussian_rule(t / (1.0 + t), std::max(order, 2 * dim));
}

inline void require_heat_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("heat time must be positive");
}

/// phi_t * S.
inline OperatorMatrix heat_convolve(double t, const OperatorMatrix& s, int order = 96) {
    require_heat_time(t);
    return conv_radial([&](double r) { return std::exp(-kPi * r * r / t) / t; }, s, heat_rule(t, s.dim(), order));
}

/// (d/dt phi_t) * S with d/dt phi_t(z) = (pi|z|^2/t - 1) phi_t(z) / t.
inline OperatorMatrix derivative_in_t(const OperatorMatrix& s, double t, int order = 96) {
    require_heat_time(t);
    auto dphi = [&](double r) {
        const double x = kPi * r * r / t;
        return (x - 1.0) * std::exp(-x) / (t * t);
    };
    return conv_radial(dphi, s, heat_rule(t, s.dim(), order));
}

/// (phi_t * S - S) / t.
inline OperatorMatrix heat_quotient(const OperatorMatrix& s, double t, int order = 96) {
    if (!(t > 0.0) || !(t <= 1.0)) throw InvalidArgument("heat quotient needs t in (0, 1]");
    const OperatorMatrix conv = heat_convolve(t, s, order);
    return {(conv.entries - s.entries) / t, s.trunc};
}

/// Delta S ~ pi (2 Q(t/2) - Q(t)), Q the heat quotient.
inline OperatorMatrix laplacian_estimate(const OperatorMatrix& s, double t = 0.01, int order = 96) {
    const OperatorMatrix q1 = heat_quotient(s, t, order);
    const OperatorMatrix q2 = heat_quotient(s, 0.5 * t, order);
    return {kPi * (2.0 * q2.entries - q1.entries), s.trunc};
}

// --- operator-operator convolution ---------------------------------------------

/// S * T(z) = Tr(S W_z (U T U) W_z^*).
inline Complex conv_op_op(const OperatorMatrix& s, const OperatorMatrix& t, ComplexPoint z) {
    if (!(s.trunc == t.trunc)) throw InvalidArgument("operands use different truncations");
    require_within_radius(z, s.trunc);
    const ComplexMatrix u = parity_matrix(s.trunc).entries;
    const ComplexMatrix moved = translate_unchecked(z.value(), u * t.entries * u);
    return (s.entries.transpose().cwiseProduct(moved)).sum();
}

/// z -> S * T(z) as a callable, with the operands recorded.
struct ConvolutionResultFunction {
    std::function<Complex(ComplexPoint)> eval;
    std::string operands;
    TruncationSpec trunc;

    Complex operator()(ComplexPoint z) const { return eval(z); }
};

inline ConvolutionResultFunction conv_op_op_function(const OperatorMatrix& s, const OperatorMatrix& t,
                                                     std::string operands = "S*T") {
    return {[s, t](ComplexPoint z) { return conv_op_op(s, t, z); }, std::move(operands), s.trunc};
}

}  // namespace qha
