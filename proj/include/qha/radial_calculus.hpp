#pragma once

// Sequence-level calculus of radial operators S = sum_m lambda_m E_m, where
// E_m = e_m (x) conj(e_m). Radial operators are diagonal in the monomial basis,
// so Toeplitz eigenvalues, the operator Laplacian, Berezin transforms and the
// heat semigroup all act on the eigenvalue sequence.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qha/error.hpp"
#include "qha/fock_core.hpp"
#include "qha/quadrature.hpp"
#include "qha/special.hpp"
#include "qha/symbol.hpp"

namespace qha {

/// Finite prefix (lambda_0, ..., lambda_{M-1}) of a radial operator's diagonal.
struct EigenSequence {
    std::vector<double> values;

    EigenSequence() = default;
    explicit EigenSequence(std::vector<double> v) : values(std::move(v)) {
        for (double x : values)
            if (!std::isfinite(x)) throw InvalidArgument("eigen sequence has a non-finite entry");
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }

    double sup_norm() const {
        double s = 0.0;
        for (double x : values) s = std::max(s, std::abs(x));
        return s;
    }
};

inline void require_length(const EigenSequence& s, std::size_t min_len, const char* what) {
    if (s.size() < min_len)
        throw SequenceTooShort(std::string(what) + " needs at least " + std::to_string(min_len) + " terms");
}

// --- Toeplitz eigenvalues -------------------------------------------------

/// How the radial symbol enters the eigenvalue integral.
///   gaussian_measure: a(sqrt(r/pi)), consistent with the measure e^{-pi|z|^2} dz
///   literal:          a(sqrt(r)), the convention of the standard-Gaussian literature
enum class GammaNormalization { gaussian_measure, literal };

struct EigenvalueOptions {
    GammaNormalization normalization = GammaNormalization::gaussian_measure;
    bool allow_unbounded = false;
    double tolerance = 1e-9;  // order-doubling error budget
};

namespace detail {

inline std::vector<double> gamma_integrals(const Expr& a, int n, int count, int order, GammaNormalization norm) {
    const bool scaled = norm == GammaNormalization::gaussian_measure;
    auto radius_of = [&](double r) { return scaled ? std::sqrt(r / kPi) : std::sqrt(r); };

    std::vector<double> breaks;
    for (double b : indicator_breaks(a)) breaks.push_back(scaled ? kPi * b * b : b * b);

    const auto lag = gauss_laguerre(order);
    std::vector<double> out(count, 0.0);
    for (int m = 0; m < count; ++m) {
        const int p = m + n - 1;  // integrand r^p e^{-r} / p!
        const double log_norm = special::log_factorial(p);
        double sum = 0.0;
        if (breaks.empty()) {
            for (std::size_t i = 0; i < lag.size(); ++i) {
                const double x = lag.nodes[i];
                sum += std::exp(lag.log_weights[i] + p * std::log(x) - log_norm) * evaluate_radial(a, radius_of(x));
            }
        } else {
            const double tail_start = breaks.back();
            for (const auto& [r, w] : piecewise_legendre(breaks, 0.0, tail_start, order, 16.0))
                sum += w * std::exp(p * std::log(r) - r - log_norm) * evaluate_radial(a, radius_of(r));
            for (std::size_t i = 0; i < lag.size(); ++i) {
                const double r = tail_start + lag.nodes[i];
                sum += std::exp(lag.log_weights[i] - tail_start + p * std::log(r) - log_norm) *
                       evaluate_radial(a, radius_of(r));
            }
        }
        out[m] = sum;
    }
    return out;
}

}  // namespace detail

/// gamma_{n,a}(m) = (1/(n-1+m)!) int_0^inf a(s(r)) r^{m+n-1} e^{-r} dr for m < count.
/// Computed at the scheme's order and at twice that order; the doubled result
/// is returned and the difference must stay within options.tolerance.
inline EigenSequence toeplitz_eigenvalues(const Expr& a, int n, int count, const QuadratureScheme& q,
                                          const EigenvalueOptions& options = {}) {
    if (q.kind != QuadratureKind::gauss_laguerre) throw InvalidArgument("eigenvalue integrals need a Gauss-Laguerre scheme");
    if (n < 1) throw InvalidArgument("dimension n must be >= 1");
    if (count < 1) throw InvalidArgument("count must be positive");
    if (!is_radial(a)) throw InvalidArgument("eigenvalue integrals need a radial symbol");
    const Growth g = classify_growth(a);
    if (g == Growth::exponential || (g == Growth::polynomial && !options.allow_unbounded))
        throw UnboundedSymbol("symbol is not structurally bounded: " + to_string(a));

    const auto coarse = detail::gamma_integrals(a, n, count, q.order, options.normalization);
    const auto fine = detail::gamma_integrals(a, n, count, 2 * q.order, options.normalization);
    double worst = 0.0;
    for (int m = 0; m < count; ++m)
        worst = std::max(worst, std::abs(coarse[m] - fine[m]) / std::max(1.0, std::abs(fine[m])));
    if (!(worst <= options.tolerance))
        throw QuadratureOrderTooLow("order-doubling estimate " + std::to_string(worst) + " exceeds " +
                                    std::to_string(options.tolerance) + " at order " + std::to_string(q.order));
    return EigenSequence(fine);
}

inline EigenSequence toeplitz_eigenvalues(const Expr& a, int n, int count, int order = 96,
                                          const EigenvalueOptions& options = {}) {
    return toeplitz_eigenvalues(a, n, count, gauss_laguerre(order), options);
}

// --- operator Laplacian on sequences -----------------------------------------

/// Whether mu_m carries the factor pi of the Delta E_m identity (default) or
/// is the bare combination m Delta^2 lambda_{m-1} + Delta lambda_m.
enum class PiConvention { with_pi, without_pi };

/// mu_m = pi [(m+1) lambda_{m+1} - (2m+1) lambda_m + m lambda_{m-1}], 0 <= m <= M-2.
inline EigenSequence laplacian_sequence(const EigenSequence& lambda, PiConvention conv = PiConvention::with_pi) {
    require_length(lambda, 3, "laplacian_sequence");
    const std::size_t len = lambda.size() - 1;
    const double scale = conv == PiConvention::with_pi ? kPi : 1.0;
    std::vector<double> mu(len);
    for (std::size_t m = 0; m < len; ++m) {
        const double md = static_cast<double>(m);
        double v = (md + 1.0) * lambda[m + 1] - (2.0 * md + 1.0) * lambda[m];
        if (m > 0) v += md * lambda[m - 1];
        mu[m] = scale * v;
    }
    return EigenSequence(std::move(mu));
}

// --- Berezin transform of radial operators ---------------------------------

inline constexpr double kPoissonTailTolerance = 1e-10;

/// B(S)(z) = sum_m lambda_m e^{-x} x^m / m!, x = pi|z|^2: the Poisson(x) mean of lambda.
inline double berezin_radial(const EigenSequence& lambda, ComplexPoint z) {
    require_finite(z);
    const double x = kPi * z.norm();
    const int len = static_cast<int>(lambda.size());
    const double tail = special::poisson_upper_tail(len, x);
    if (tail > kPoissonTailTolerance)
        throw TailTooHeavy("Poisson mass " + std::to_string(tail) + " beyond the " + std::to_string(len) +
                           " available terms");
    double sum = 0.0;
    for (int m = 0; m < len; ++m) sum += lambda[m] * special::poisson_pmf(m, x);
    return sum;
}

inline double laplacian_of_berezin_radial(const EigenSequence& lambda, ComplexPoint z) {
    return berezin_radial(laplacian_sequence(lambda), z);
}

// --- heat semigroup on sequences -------------------------------------------

/// h_km(t) = int_C |<e_k, W_z e_m>|^2 phi_t(z) dz for k, m < M.
struct HeatKernelMatrix {
    Eigen::MatrixXd h;
    double t = 0.0;

    std::size_t size() const { return static_cast<std::size_t>(h.rows()); }
};

inline constexpr double kHeatEntryFloor = 1e-14;

/// |W_{n+a,n}|^2 = (n!/(n+a)!) x^a e^{-x} (L_n^{(a)}(x))^2 with x = pi|z|^2 = t u
/// under phi_t(z) dz = e^{-u} du. The factor e^{-tu} is absorbed by
/// substituting v = (1+t) u, which leaves a polynomial of degree k + m in v;
/// Gauss-Laguerre of order >= M integrates it exactly.
inline HeatKernelMatrix heat_kernel_matrix(double t, int count, const TruncationSpec& trunc, int order = 96) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("heat kernel matrix needs t > 0");
    if (count < 1) throw InvalidArgument("heat kernel matrix needs M >= 1");
    if (count > trunc.dim) throw InvalidArgument("heat kernel matrix size exceeds truncation dim");
    const auto q = gauss_laguerre(std::max(order, count));
    std::vector<double> log_fact(2 * count + 1);
    for (std::size_t i = 0; i < log_fact.size(); ++i) log_fact[i] = special::log_factorial(static_cast<int>(i));

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(count, count);
    const double log_jac = -std::log1p(t);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double x = t * q.nodes[i] / (1.0 + t);
        const double lw = q.log_weights[i] + log_jac;
        const double log_x = std::log(x);
        for (int a = 0; a < count; ++a) {
            const special::ScaledLaguerre lag(count - a, a, x);
            for (int n = 0; n + a < count; ++n) {
                if (lag.mantissa(n) == 0.0) continue;
                const double v = std::exp(lw + log_fact[n] - log_fact[n + a] + a * log_x + 2.0 * lag.log_abs(n));
                h(n + a, n) += v;
                if (a != 0) h(n, n + a) += v;
            }
        }
    }
    for (Eigen::Index j = 0; j < h.rows(); ++j)
        for (Eigen::Index k = 0; k < h.cols(); ++k)
            if (h(j, k) < kHeatEntryFloor) h(j, k) = 0.0;
    return {std::move(h), t};
}

inline EigenSequence apply(const HeatKernelMatrix& h, const EigenSequence& lambda) {
    if (lambda.size() != h.size()) throw InvalidArgument("heat matrix and sequence lengths differ");
    const Eigen::Map<const Eigen::VectorXd> v(lambda.values.data(), static_cast<Eigen::Index>(lambda.size()));
    const Eigen::VectorXd out = h.h * v;
    return EigenSequence(std::vector<double>(out.data(), out.data() + out.size()));
}

/// phi_t * S on the diagonal: h(t) lambda. Rows near the end of the sequence
/// lose the mass that leaks past index M-1.
inline EigenSequence heat_radial(const EigenSequence& lambda, double t, int order = 96) {
    const int len = static_cast<int>(lambda.size());
    TruncationSpec trunc;
    trunc.dim = len;
    trunc.inner_dim = len;
    return apply(heat_kernel_matrix(t, len, trunc, order), lambda);
}

// --- d_Delta membership proxy ----------------------------------------------

/// max over 1 <= m <= M-2 of |m (x_{m+1} - 2 x_m + x_{m-1})|.
inline double d_delta_defect(const EigenSequence& x) {
    require_length(x, 3, "d_delta_defect");
    double worst = 0.0;
    for (std::size_t m = 1; m + 1 < x.size(); ++m)
        worst = std::max(worst, std::abs(static_cast<double>(m) * (x[m + 1] - 2.0 * x[m] + x[m - 1])));
    return worst;
}

}  // namespace qha
