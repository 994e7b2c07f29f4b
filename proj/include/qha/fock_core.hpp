#pragma once

// Kernel and basis formulas of the Fock space F^2(C) with Gaussian measure
// e^{-pi|z|^2} dz, and truncated matrices of the Weyl and parity operators in
// the monomial basis e_m(z) = sqrt(pi^m / m!) z^m.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "qha/error.hpp"
#include "qha/special.hpp"

namespace qha {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;

/// A point of C. Non-finite components are rejected wherever a point enters
/// the library.
struct ComplexPoint {
    double re = 0.0;
    double im = 0.0;

    static ComplexPoint from(Complex z) { return {z.real(), z.imag()}; }
    Complex value() const { return {re, im}; }
    double abs() const { return std::hypot(re, im); }
    double norm() const { return re * re + im * im; }
};

inline void require_finite(const ComplexPoint& z) {
    if (!std::isfinite(z.re) || !std::isfinite(z.im))
        throw InvalidArgument("complex point has a non-finite component");
}

/// Coherent-state mass beyond the first `dim` coefficients at |z| = radius,
/// i.e. P(Poisson(pi radius^2) >= dim).
inline double coherent_tail_mass(int dim, double radius) {
    return special::poisson_upper_tail(dim, kPi * radius * radius);
}

/// Truncation of the monomial basis to e_0..e_{dim-1}. Identities are only
/// asserted on the leading inner_dim x inner_dim block and for |z| <= radius.
struct TruncationSpec {
    int dim = 48;
    int inner_dim = 24;
    double radius = 2.0;

    static constexpr double kTailTolerance = 1e-12;

    void validate() const {
        if (dim < 1) throw InvalidArgument("truncation dim must be positive");
        if (inner_dim < 1 || inner_dim > dim) throw InvalidArgument("inner_dim must lie in [1, dim]");
        if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("truncation radius must be positive");
        if (coherent_tail_mass(dim, radius) > kTailTolerance)
            throw InvalidArgument("truncation radius too large for dim: coherent tail exceeds " +
                                  std::to_string(kTailTolerance));
    }

    bool operator==(const TruncationSpec&) const = default;
};

/// Operator on the truncated monomial basis; entries(j, k) = <S e_k, e_j>.
struct OperatorMatrix {
    ComplexMatrix entries;
    TruncationSpec trunc;

    OperatorMatrix() = default;
    OperatorMatrix(ComplexMatrix m, TruncationSpec t) : entries(std::move(m)), trunc(t) {
        if (entries.rows() != trunc.dim || entries.cols() != trunc.dim)
            throw InvalidArgument("operator matrix size does not match truncation dim");
    }

    int dim() const { return trunc.dim; }
    auto inner() const { return entries.topLeftCorner(trunc.inner_dim, trunc.inner_dim); }
};

inline void require_within_radius(const ComplexPoint& z, const TruncationSpec& trunc) {
    require_finite(z);
    if (z.abs() > trunc.radius * (1.0 + 1e-12))
        throw RadiusExceeded("|z| = " + std::to_string(z.abs()) + " exceeds truncation radius " +
                             std::to_string(trunc.radius));
}

/// e_m(z) = sqrt(pi^m / m!) z^m.
inline Complex monomial_basis_value(int m, ComplexPoint z) {
    if (m < 0) throw InvalidArgument("basis index must be non-negative");
    require_finite(z);
    if (m == 0) return 1.0;
    const Complex w = z.value();
    if (w == 0.0) return 0.0;
    if (m <= 20) {
        double f = 1.0;
        for (int i = 2; i <= m; ++i) f *= i;
        return std::sqrt(std::pow(kPi, m) / f) * std::pow(w, m);
    }
    const double log_mag = 0.5 * (m * std::log(kPi) - special::log_factorial(m)) + m * std::log(std::abs(w));
    return std::polar(std::exp(log_mag), m * std::arg(w));
}

/// Coefficients of k_z in the monomial basis, truncated to `count` terms:
/// c_m(z) = e^{-pi|z|^2/2} (sqrt(pi) conj z)^m / sqrt(m!).
inline ComplexVector kernel_coeffs_unchecked(Complex z, int count) {
    ComplexVector c = ComplexVector::Zero(count);
    if (count == 0) return c;
    const double r = std::abs(z);
    if (r == 0.0) {
        c[0] = 1.0;
        return c;
    }
    const double log_beta = std::log(std::sqrt(kPi) * r);
    const double phase = -std::arg(z);
    const double half_x = 0.5 * kPi * r * r;
    for (int m = 0; m < count; ++m)
        c[m] = std::polar(std::exp(-half_x + m * log_beta - 0.5 * special::log_factorial(m)), m * phase);
    return c;
}

inline ComplexVector normalized_kernel_coeffs(ComplexPoint z, const TruncationSpec& trunc) {
    require_within_radius(z, trunc);
    return kernel_coeffs_unchecked(z.value(), trunc.dim);
}

/// phi_t(z) = t^{-1} e^{-pi|z|^2 / t} (n = 1).
inline double heat_kernel(double t, ComplexPoint z) {
    if (!(t > 0.0)) throw InvalidArgument("heat kernel needs t > 0");
    require_finite(z);
    return std::exp(-kPi * z.norm() / t) / t;
}

/// Exact entries <W_z e_k, e_j> for j < rows, k < cols. W_z acts as the
/// displacement with amplitude beta = sqrt(pi) conj z, so for j >= k
///   W_jk = sqrt(k!/j!) beta^{j-k} e^{-|beta|^2/2} L_k^{(j-k)}(|beta|^2)
/// and W_jk = sqrt(j!/k!) (-conj beta)^{k-j} e^{-|beta|^2/2} L_j^{(k-j)}(|beta|^2)
/// otherwise.
inline ComplexMatrix weyl_block(Complex z, int rows, int cols) {
    ComplexMatrix w = ComplexMatrix::Zero(rows, cols);
    const double r = std::abs(z);
    if (r == 0.0) {
        for (int i = 0; i < std::min(rows, cols); ++i) w(i, i) = 1.0;
        return w;
    }
    const double x = kPi * r * r;
    const double log_beta = 0.5 * std::log(x);
    const double phase = -std::arg(z);  // arg beta
    const int span = std::max(rows, cols);
    for (int a = 0; a < span; ++a) {
        // Lower diagonal (j = k + a) needs n = k < min(cols, rows - a);
        // upper diagonal (k = j + a) needs n = j < min(rows, cols - a).
        const int n_lower = std::max(0, std::min(cols, rows - a));
        const int n_upper = a == 0 ? 0 : std::max(0, std::min(rows, cols - a));
        const int count = std::max(n_lower, n_upper);
        if (count == 0) continue;
        const special::ScaledLaguerre lag(count, a, x);
        for (int n = 0; n < count; ++n) {
            if (lag.mantissa(n) == 0.0) continue;
            const double log_mag = 0.5 * (special::log_factorial(n) - special::log_factorial(n + a)) +
                                   a * log_beta - 0.5 * x + lag.log_abs(n);
            const double mag = lag.sign(n) * std::exp(log_mag);
            if (n < n_lower) w(n + a, n) = mag * std::polar(1.0, a * phase);
            if (n < n_upper) w(n, n + a) = (a % 2 == 0 ? mag : -mag) * std::polar(1.0, -a * phase);
        }
    }
    return w;
}

inline OperatorMatrix weyl_matrix(ComplexPoint z, const TruncationSpec& trunc) {
    require_within_radius(z, trunc);
    return {weyl_block(z.value(), trunc.dim, trunc.dim), trunc};
}

/// Mass of W_z e_k outside the truncation, sum_{l >= dim} |<W_z e_k, e_l>|^2.
inline double weyl_column_tail(int k, ComplexPoint z, int dim) {
    const double x = kPi * z.norm();
    // A displaced number state has mean level k + x and variance about (2k+1)x.
    const int span = std::max(dim, k) + 40 + static_cast<int>(x + 12.0 * std::sqrt((2.0 * k + 1.0) * (x + 1.0)));
    const ComplexVector col = weyl_block(z.value(), span, k + 1).col(k);
    double outside = 0.0;
    for (int l = span - 1; l >= dim; --l) outside += std::norm(col[l]);
    return outside;
}

/// Largest radius r <= trunc.radius such that for every index below inner_dim
/// the Weyl column tail at |z| = r stays below tol. Identities involving
/// operators of infinite rank (I, T_a) are only meaningful inside it.
inline double trusted_radius(const TruncationSpec& trunc, double tol) {
    auto ok = [&](double r) {
        for (int k = 0; k < trunc.inner_dim; ++k)
            if (weyl_column_tail(k, {r, 0.0}, trunc.dim) > tol) return false;
        return true;
    };
    if (ok(trunc.radius)) return trunc.radius;
    double lo = 0.0, hi = trunc.radius;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

/// (U f)(z) = f(-z): diag((-1)^m).
inline OperatorMatrix parity_matrix(const TruncationSpec& trunc) {
    ComplexMatrix u = ComplexMatrix::Zero(trunc.dim, trunc.dim);
    for (int m = 0; m < trunc.dim; ++m) u(m, m) = (m % 2 == 0) ? 1.0 : -1.0;
    return {std::move(u), trunc};
}

/// W_z S W_z^* with S regarded as supported on span{e_0..e_{dim-1}}; the
/// returned block is exact for such S.
inline ComplexMatrix translate_unchecked(Complex z, const ComplexMatrix& s) {
    const ComplexMatrix w = weyl_block(z, static_cast<int>(s.rows()), static_cast<int>(s.cols()));
    return w * s * w.adjoint();
}

inline OperatorMatrix translate_operator(ComplexPoint z, const OperatorMatrix& s) {
    require_within_radius(z, s.trunc);
    return {translate_unchecked(z.value(), s.entries), s.trunc};
}

}  // namespace qha
