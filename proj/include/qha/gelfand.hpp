#pragma once

// Sequences on N_0 with the square-root metric rho(m1, m2) = |sqrt m1 - sqrt m2|:
// extensions to R_+ and R, shifts, sampling at square roots and the Gaussian
// smoothing that produces d_Delta approximants.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>
#include <vector>

#include "qha/error.hpp"
#include "qha/fock_core.hpp"
#include "qha/radial_calculus.hpp"
#include "qha/symbol.hpp"

namespace qha {

struct SequenceFunction {
    std::vector<double> values;

    SequenceFunction() = default;
    explicit SequenceFunction(std::vector<double> v) : values(std::move(v)) {
        if (values.size() < 2) throw InvalidArgument("sequence function needs at least two terms");
        for (double x : values)
            if (!std::isfinite(x)) throw InvalidArgument("sequence function has a non-finite entry");
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }

    double sup_norm() const {
        double s = 0.0;
        for (double x : values) s = std::max(s, std::abs(x));
        return s;
    }

    EigenSequence as_eigen_sequence() const { return EigenSequence(values); }
};

inline double sqrt_metric(double m1, double m2) {
    if (m1 < 0.0 || m2 < 0.0) throw InvalidArgument("square-root metric is defined on non-negative indices");
    return std::abs(std::sqrt(m1) - std::sqrt(m2));
}

/// max |sigma_{m1} - sigma_{m2}| over pairs with rho(m1, m2) <= delta.
inline double modulus_of_continuity(const SequenceFunction& sigma, double delta) {
    if (!(delta > 0.0)) throw InvalidArgument("modulus of continuity needs delta > 0");
    const std::size_t len = sigma.size();
    double worst = 0.0;
    for (std::size_t m1 = 0; m1 < len; ++m1) {
        const double root = std::sqrt(static_cast<double>(m1));
        for (std::size_t m2 = m1 + 1; m2 < len; ++m2) {
            if (std::sqrt(static_cast<double>(m2)) - root > delta) break;
            worst = std::max(worst, std::abs(sigma[m1] - sigma[m2]));
        }
    }
    return worst;
}

/// f_sigma^+(x) = sigma(m) + (sigma(m+1) - sigma(m)) (sqrt x - sqrt m) / (sqrt(m+1) - sqrt m),
/// m = floor(x), for 0 <= x <= M - 1.
inline double extend_plus(const SequenceFunction& sigma, double x) {
    const double top = static_cast<double>(sigma.size() - 1);
    if (!(x >= 0.0) || !(x <= top))
        throw OutOfRange("extension argument " + std::to_string(x) + " outside [0, " + std::to_string(top) + "]");
    const double fl = std::floor(x);
    const auto m = static_cast<std::size_t>(fl);
    if (m + 1 >= sigma.size()) return sigma[sigma.size() - 1];
    const double frac = (std::sqrt(x) - std::sqrt(fl)) / (std::sqrt(fl + 1.0) - std::sqrt(fl));
    return sigma[m] + (sigma[m + 1] - sigma[m]) * frac;
}

/// f_sigma(x) = f_sigma^+(x^2), an even function on R.
inline double extend_real(const SequenceFunction& sigma, double x) {
    if (!std::isfinite(x)) throw OutOfRange("extension argument is not finite");
    return extend_plus(sigma, x * x);
}

/// tau_L^k: drop the first k terms.
inline SequenceFunction shift_left(const SequenceFunction& sigma, std::size_t k) {
    if (k + 2 > sigma.size())
        throw ShiftTooLarge("left shift by " + std::to_string(k) + " leaves fewer than two of " +
                            std::to_string(sigma.size()) + " terms");
    return SequenceFunction(std::vector<double>(sigma.values.begin() + static_cast<std::ptrdiff_t>(k), sigma.values.end()));
}

/// tau_R^k: prepend k copies of sigma_0.
inline SequenceFunction shift_right(const SequenceFunction& sigma, std::size_t k) {
    std::vector<double> v(k, sigma[0]);
    v.insert(v.end(), sigma.values.begin(), sigma.values.end());
    return SequenceFunction(std::move(v));
}

/// sigma_n = f(sqrt n) for n < count.
template <class F>
    requires std::invocable<F&, double>
SequenceFunction sample_at_sqrt(F&& f, std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t n = 0; n < count; ++n) v[n] = f(std::sqrt(static_cast<double>(n)));
    return SequenceFunction(std::move(v));
}

/// Expression form: the atom s is bound to x = sqrt n (so s^2 = n).
inline SequenceFunction sample_at_sqrt(const Expr& f, std::size_t count) {
    return sample_at_sqrt([&](double x) { return evaluate_radial(f, x); }, count);
}

/// 1/2 (sqrt(n+1) + sqrt(n-1)) (sqrt(n+1) + sqrt n) Delta^2 sigma_{n-1} + Delta sigma_{n-1}:
/// the second divided difference of f at sqrt(n-1), sqrt n, sqrt(n+1) when
/// sigma_n = f(sqrt n). Defined for 1 <= n <= M - 2.
inline double sqrt_divided_difference(const SequenceFunction& sigma, std::size_t n) {
    if (n < 1 || n + 1 >= sigma.size()) throw OutOfRange("divided difference index outside the stencil window");
    const double a = std::sqrt(static_cast<double>(n) + 1.0);
    const double b = std::sqrt(static_cast<double>(n));
    const double c = std::sqrt(static_cast<double>(n) - 1.0);
    const double d2 = sigma[n + 1] - 2.0 * sigma[n] + sigma[n - 1];
    const double d1 = sigma[n] - sigma[n - 1];
    return 0.5 * (a + c) * (a + b) * d2 + d1;
}

/// m (x_{m+1} - 2 x_m + x_{m-1}) for 1 <= m <= M-2.
inline std::vector<double> weighted_second_difference(const std::vector<double>& x) {
    std::vector<double> out;
    for (std::size_t m = 1; m + 1 < x.size(); ++m)
        out.push_back(static_cast<double>(m) * (x[m + 1] - 2.0 * x[m] + x[m - 1]));
    return out;
}

/// Finite-window boundedness verdict: the sup over the last half of the
/// window stays within `factor` times the sup over the quarter before it.
/// Linear growth doubles that ratio; bounded oscillation keeps it near 1.
inline bool appears_bounded(const std::vector<double>& v, double factor = 1.5) {
    const std::size_t len = v.size();
    if (len < 8) throw SequenceTooShort("boundedness verdict needs at least 8 terms");
    double early = 0.0, late = 0.0;
    for (std::size_t i = len / 4; i < len / 2; ++i) early = std::max(early, std::abs(v[i]));
    for (std::size_t i = len / 2; i < len; ++i) late = std::max(late, std::abs(v[i]));
    return late <= factor * early || late == 0.0;
}

// --- constructive d_Delta approximant ----------------------------------------

/// kappa_s(x) = s^{-1/2} e^{-pi x^2 / s}.
inline double heat_kernel_1d(double s, double x) { return std::exp(-kPi * x * x / s) / std::sqrt(s); }

struct ApproxResult {
    SequenceFunction nu;          // nu_n = g(sqrt n) for n < nu.size()
    std::size_t window_begin = 0;  // trusted window [begin, end)
    std::size_t window_end = 0;
    double bandwidth = 0.0;
    double sup_error = 0.0;  // max |sigma - nu| on the window
    double defect = 0.0;     // d_delta_defect(nu)
};

/// Smoothing g = kappa_s * f_sigma, Simpson's rule over [-4 sqrt s, 4 sqrt s]
/// with step min(0.01, sqrt(s)/20); nu_n = g(sqrt n). The trusted window keeps
/// sqrt n within [4 sqrt s, sqrt(M-1) - 4 sqrt s].
inline ApproxResult approx_in_ddelta(const SequenceFunction& sigma, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("smoothing bandwidth must be positive");
    const double half = 4.0 * std::sqrt(s);
    const double top = std::sqrt(static_cast<double>(sigma.size() - 1));
    if (top - half < half)
        throw OutOfRange("smoothing support 4 sqrt(s) = " + std::to_string(half) + " leaves no trusted window");

    const double step0 = std::min(0.01, std::sqrt(s) / 20.0);
    int intervals = static_cast<int>(std::ceil(2.0 * half / step0));
    if (intervals % 2 == 1) ++intervals;
    const double h = 2.0 * half / intervals;
    std::vector<double> ys(intervals + 1), ws(intervals + 1);
    for (int i = 0; i <= intervals; ++i) {
        ys[i] = -half + i * h;
        const double simpson = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        ws[i] = simpson * h / 3.0 * heat_kernel_1d(s, ys[i]);
    }

    const double last_root = top - half;
    const auto count = static_cast<std::size_t>(std::floor(last_root * last_root + 1e-12)) + 1;
    std::vector<double> nu(count);
    for (std::size_t n = 0; n < count; ++n) {
        const double x = std::sqrt(static_cast<double>(n));
        double g = 0.0;
        for (int i = 0; i <= intervals; ++i) {
            const double arg = x - ys[i];
            g += ws[i] * extend_plus(sigma, std::min(arg * arg, static_cast<double>(sigma.size() - 1)));
        }
        nu[n] = g;
    }

    ApproxResult r{SequenceFunction(std::move(nu)), 0, 0, s, 0.0, 0.0};
    r.window_begin = static_cast<std::size_t>(std::ceil(half * half - 1e-12));
    r.window_end = count;
    for (std::size_t n = r.window_begin; n < r.window_end; ++n)
        r.sup_error = std::max(r.sup_error, std::abs(sigma[n] - r.nu[n]));
    r.defect = d_delta_defect(r.nu.as_eigen_sequence());
    return r;
}

}  // namespace qha
