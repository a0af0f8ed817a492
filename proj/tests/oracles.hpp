#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's symbolic machinery.

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using Complex = std::complex<double>;
using Fn = std::function<Complex(Complex)>;

/// n-th derivative by the Cauchy integral on a circle of radius r, evaluated
/// with the N-point trapezoidal rule (spectrally accurate for analytic f).
inline Complex cauchy_derivative(const Fn& f, Complex z0, int n, double r = 0.05, int N = 256) {
    Complex sum = 0.0;
    for (int k = 0; k < N; ++k) {
        const double t = 2.0 * M_PI * k / N;
        sum += f(z0 + std::polar(r, t)) * std::polar(1.0, -n * t);
    }
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    return sum * fact / (N * std::pow(r, n));
}

/// Schwarzian from central finite differences with step h.
inline Complex fd_schwarzian(const Fn& f, Complex z, double h = 1e-3) {
    const Complex fm2 = f(z - 2.0 * h), fm1 = f(z - h), f1 = f(z + h), f2 = f(z + 2.0 * h), f0 = f(z);
    const Complex d1 = (f1 - fm1) / (2.0 * h);
    const Complex d2 = (f1 - 2.0 * f0 + fm1) / (h * h);
    const Complex d3 = (f2 - 2.0 * f1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
    return d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
}

inline Complex cauchy_schwarzian(const Fn& f, Complex z, double r = 0.05) {
    const Complex d1 = cauchy_derivative(f, z, 1, r), d2 = cauchy_derivative(f, z, 2, r),
                  d3 = cauchy_derivative(f, z, 3, r);
    return d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
}

/// Root of a sign-changing f on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
    double flo = f(lo);
    for (int k = 0; k < iterations; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Distance from z to the line Re z = u0.
inline double distance_to_vertical(Complex z, double u0) { return std::abs(z.real() - u0); }

}  // namespace oracle
