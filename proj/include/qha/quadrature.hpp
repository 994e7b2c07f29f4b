#pragma once

// Gaussian quadrature on the line and on the plane.
//
// One-dimensional rules come from the Golub-Welsch eigenproblem, after which
// every node is polished by Newton's method on the orthonormal recurrence and
// the weights are recomputed from the Christoffel function in the log domain.
// This keeps tiny Gauss-Laguerre weights accurate in relative terms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "qha/error.hpp"

namespace qha {

enum class QuadratureKind { gauss_laguerre, gauss_hermite, gauss_legendre };

/// One-dimensional Gaussian rule.
///   gauss_laguerre : integral over [0, inf) of f(x) e^{-x}
///   gauss_hermite  : integral over R of f(x) e^{-x^2}
///   gauss_legendre : integral over [-1, 1] of f(x)
struct QuadratureScheme {
    QuadratureKind kind{};
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> log_weights;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

namespace detail {

struct JacobiRecurrence {
    // Orthonormal recurrence b_{k+1} p_{k+1} = (x - a_k) p_k - b_k p_{k-1}.
    std::vector<double> a;  // size n + 1
    std::vector<double> b;  // size n + 1, b[0] unused
    double mu0 = 1.0;
};

inline JacobiRecurrence recurrence_for(QuadratureKind kind, int n) {
    JacobiRecurrence r;
    r.a.assign(n + 1, 0.0);
    r.b.assign(n + 1, 0.0);
    switch (kind) {
        case QuadratureKind::gauss_laguerre:
            for (int k = 0; k <= n; ++k) r.a[k] = 2.0 * k + 1.0;
            for (int k = 1; k <= n; ++k) r.b[k] = k;
            r.mu0 = 1.0;
            break;
        case QuadratureKind::gauss_hermite:
            for (int k = 1; k <= n; ++k) r.b[k] = std::sqrt(k / 2.0);
            r.mu0 = std::sqrt(std::numbers::pi);
            break;
        case QuadratureKind::gauss_legendre:
            for (int k = 1; k <= n; ++k) r.b[k] = k / std::sqrt(4.0 * k * k - 1.0);
            r.mu0 = 2.0;
            break;
    }
    return r;
}

struct RecurrenceEval {
    double p_n = 0.0;      // scaled
    double dp_n = 0.0;     // scaled by the same factor
    double log_christoffel_sum = 0.0;  // log sum_{k<n} p_k(x)^2, unscaled
};

inline RecurrenceEval evaluate_recurrence(const JacobiRecurrence& r, int n, double x) {
    constexpr double kBig = 1e150;
    double prev = 0.0, dprev = 0.0;
    double cur = 1.0 / std::sqrt(r.mu0), dcur = 0.0;
    double sum = 0.0;
    double log_acc = 0.0;
    for (int k = 0; k < n; ++k) {
        sum += cur * cur;
        const double next = ((x - r.a[k]) * cur - r.b[k] * prev) / r.b[k + 1];
        const double dnext = (cur + (x - r.a[k]) * dcur - r.b[k] * dprev) / r.b[k + 1];
        prev = cur;
        dprev = dcur;
        cur = next;
        dcur = dnext;
        const double mag = std::max(std::abs(cur), std::abs(dcur));
        if (mag > kBig) {
            prev /= kBig;
            dprev /= kBig;
            cur /= kBig;
            dcur /= kBig;
            sum /= kBig * kBig;
            log_acc += std::log(kBig);
        }
    }
    return {cur, dcur, std::log(sum) + 2.0 * log_acc};
}

}  // namespace detail

inline QuadratureScheme make_gauss_rule(QuadratureKind kind, int order) {
    if (order < 1) throw InvalidArgument("quadrature order must be positive");
    const auto rec = detail::recurrence_for(kind, order);
    Eigen::VectorXd diag(order);
    Eigen::VectorXd sub(std::max(order - 1, 0));
    for (int k = 0; k < order; ++k) diag[k] = rec.a[k];
    for (int k = 1; k < order; ++k) sub[k - 1] = rec.b[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

    QuadratureScheme q;
    q.kind = kind;
    q.order = order;
    q.nodes.resize(order);
    q.weights.resize(order);
    q.log_weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = solver.eigenvalues()[i];
        for (int it = 0; it < 4; ++it) {
            const auto ev = detail::evaluate_recurrence(rec, order, x);
            if (ev.dp_n == 0.0) break;
            const double dx = ev.p_n / ev.dp_n;
            x -= dx;
            if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
        }
        const auto ev = detail::evaluate_recurrence(rec, order, x);
        q.nodes[i] = x;
        q.log_weights[i] = -ev.log_christoffel_sum;
        q.weights[i] = std::exp(q.log_weights[i]);
    }
    if (kind != QuadratureKind::gauss_laguerre) {
        // Symmetric rules: enforce exact antisymmetry of the node set.
        for (int i = 0; i < order / 2; ++i) {
            const int j = order - 1 - i;
            const double x = 0.5 * (q.nodes[j] - q.nodes[i]);
            const double lw = 0.5 * (q.log_weights[i] + q.log_weights[j]);
            q.nodes[i] = -x;
            q.nodes[j] = x;
            q.log_weights[i] = q.log_weights[j] = lw;
            q.weights[i] = q.weights[j] = std::exp(lw);
        }
        if (order % 2 == 1) q.nodes[order / 2] = 0.0;
    }
    return q;
}

inline QuadratureScheme gauss_laguerre(int order) { return make_gauss_rule(QuadratureKind::gauss_laguerre, order); }
inline QuadratureScheme gauss_hermite(int order) { return make_gauss_rule(QuadratureKind::gauss_hermite, order); }
inline QuadratureScheme gauss_legendre(int order) { return make_gauss_rule(QuadratureKind::gauss_legendre, order); }

/// Nodes and weights for a plain integral over C: int f(z) dz ~ sum w_i f(z_i).
/// Gaussian-adapted rules fold e^{+pi|z|^2/scale} into the weights, so they are
/// exact for e^{-pi|z|^2/scale} times a low-degree polynomial.
struct PlanarRule {
    std::vector<std::complex<double>> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    auto integrate(F&& f) const {
        using R = decltype(f(nodes.front()));
        R sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

/// Radial rule for int_C f(|z|) dz ~ sum w_i f(r_i) (angle already integrated).
struct RadialRule {
    std::vector<double> radii;
    std::vector<double> weights;

    std::size_t size() const { return radii.size(); }
};

/// Gauss-Laguerre in u = pi r^2 / scale. Exact for f(r) = e^{-pi r^2/scale} p(r^2)
/// with deg p <= 2*order - 1.
inline RadialRule radial_gaussian_rule(double scale, int order) {
    if (!(scale > 0.0)) throw InvalidArgument("radial rule scale must be positive");
    const auto q = gauss_laguerre(order);
    RadialRule rule;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double u = q.nodes[i];
        const double w = scale * std::exp(q.log_weights[i] + u);
        if (!std::isfinite(w)) continue;
        rule.radii.push_back(std::sqrt(scale * u / std::numbers::pi));
        rule.weights.push_back(w);
    }
    return rule;
}

/// Polar product rule: Gauss-Laguerre radius times trapezoid in angle.
inline PlanarRule polar_gaussian_rule(double scale, int radial_order, int angles) {
    if (angles < 1) throw InvalidArgument("angle count must be positive");
    const auto radial = radial_gaussian_rule(scale, radial_order);
    PlanarRule rule;
    rule.nodes.reserve(radial.size() * angles);
    for (std::size_t i = 0; i < radial.size(); ++i) {
        for (int k = 0; k < angles; ++k) {
            const double theta = 2.0 * std::numbers::pi * (k + 0.5) / angles;
            rule.nodes.push_back(std::polar(radial.radii[i], theta));
            rule.weights.push_back(radial.weights[i] / angles);
        }
    }
    return rule;
}

/// Tensor Gauss-Hermite in (re z, im z); exact for e^{-pi|z-center|^2/scale}
/// times a polynomial of degree <= 2*order - 1 in each coordinate.
inline PlanarRule tensor_hermite_rule(double scale, int order, std::complex<double> center = {}) {
    if (!(scale > 0.0)) throw InvalidArgument("planar rule scale must be positive");
    const auto q = gauss_hermite(order);
    const double stretch = std::sqrt(scale / std::numbers::pi);
    PlanarRule rule;
    rule.nodes.reserve(q.size() * q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            const std::complex<double> z = center + stretch * std::complex<double>(q.nodes[i], q.nodes[j]);
            const double lw = q.log_weights[i] + q.log_weights[j] +
                              q.nodes[i] * q.nodes[i] + q.nodes[j] * q.nodes[j];
            rule.nodes.push_back(z);
            rule.weights.push_back(scale / std::numbers::pi * std::exp(lw));
        }
    }
    return rule;
}

/// Composite Gauss-Legendre on [0, s_max] in the radial variable, split at the
/// given breakpoints and into pieces no longer than piece_length, times a
/// trapezoid in angle around `center`. Suited to integrands with jumps on
/// circles (indicator symbols).
inline std::vector<std::pair<double, double>> piecewise_legendre(std::vector<double> breaks, double lo, double hi,
                                                                 int order, double piece_length) {
    const auto q = gauss_legendre(order);
    breaks.push_back(lo);
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    std::vector<std::pair<double, double>> out;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        const double a0 = std::max(breaks[b], lo);
        const double a1 = std::min(breaks[b + 1], hi);
        if (!(a1 > a0)) continue;
        const int pieces = std::max(1, static_cast<int>(std::ceil((a1 - a0) / piece_length)));
        const double h = (a1 - a0) / pieces;
        for (int p = 0; p < pieces; ++p) {
            const double c = a0 + (p + 0.5) * h;
            for (std::size_t i = 0; i < q.size(); ++i)
                out.emplace_back(c + 0.5 * h * q.nodes[i], 0.5 * h * q.weights[i]);
        }
    }
    return out;
}

inline PlanarRule polar_piecewise_rule(const std::vector<double>& radial_breaks, double s_max, int order,
                                       double piece_length, int angles, std::complex<double> center = {}) {
    const auto radial = piecewise_legendre(radial_breaks, 0.0, s_max, order, piece_length);
    PlanarRule rule;
    rule.nodes.reserve(radial.size() * angles);
    for (const auto& [s, w] : radial) {
        for (int k = 0; k < angles; ++k) {
            const double theta = 2.0 * std::numbers::pi * (k + 0.5) / angles;
            rule.nodes.push_back(center + std::polar(s, theta));
            rule.weights.push_back(w * s * 2.0 * std::numbers::pi / angles);
        }
    }
    return rule;
}

}  // namespace qha
