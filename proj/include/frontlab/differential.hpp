#pragma once

// Finite-difference geometry of parametrised maps z = u + iv -> R^n_1.
// These are the independent "geometric" route that the closed-form
// fundamental forms are checked against.

#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "frontlab/lorentz.hpp"

namespace frontlab::differential {

using Complex = std::complex<double>;

/// Central differences in u and v, Richardson-extrapolated (O(step^4)).
template <typename Map>
auto partials(const Map& map, Complex z, double step) {
    const Complex du(step, 0.0);
    const Complex dv(0.0, step);
    auto central = [&](Complex dz, double h) {
        const Complex unit = dz / std::abs(dz);
        return ((map(z + unit * h) - map(z - unit * h)) / (2.0 * h)).eval();
    };
    auto richardson = [&](Complex dz) {
        const auto coarse = central(dz, step);
        const auto fine = central(dz, step / 2.0);
        return ((4.0 * fine - coarse) / 3.0).eval();
    };
    return std::make_pair(richardson(du), richardson(dv));
}

/// Plain (non-extrapolated) central differences.
template <typename Map>
auto central_partials(const Map& map, Complex z, double step) {
    auto fu = ((map(z + Complex(step, 0)) - map(z - Complex(step, 0))) / (2.0 * step)).eval();
    auto fv = ((map(z + Complex(0, step)) - map(z - Complex(0, step))) / (2.0 * step)).eval();
    return std::make_pair(fu, fv);
}

/// Gram matrix <x_i, y_j> in the Lorentz product, symmetrised.
template <typename V>
Eigen::Matrix2d lorentz_gram(const V& xu, const V& xv, const V& yu, const V& yv) {
    using lorentz::inner;
    Eigen::Matrix2d m;
    const double off = 0.5 * (inner<double>(xu, yv) + inner<double>(xv, yu));
    m << inner<double>(xu, yu), off, off, inner<double>(xv, yv);
    return m;
}

struct SurfaceForms {
    Eigen::Matrix2d first;   // <df, df>
    Eigen::Matrix2d second;  // -<df, dn>
    Eigen::Matrix2d third;   // <dn, dn>
};

/// Fundamental forms of a surface `f` with normal field `n`, both maps
/// Complex -> Vec (R^4_1 or R^3_1), by finite differences.
template <typename SurfaceMap, typename NormalMap>
SurfaceForms surface_forms(const SurfaceMap& f, const NormalMap& n, Complex z, double step = 1e-3) {
    const auto [fu, fv] = partials(f, z, step);
    const auto [nu, nv] = partials(n, z, step);
    return {lorentz_gram(fu, fv, fu, fv), -lorentz_gram(fu, fv, nu, nv), lorentz_gram(nu, nv, nu, nv)};
}

/// Smallest singular value of the Jacobian [f_u f_v] divided by the largest.
template <typename Map>
double jacobian_rank_ratio(const Map& f, Complex z, double step = 1e-5) {
    const auto [fu, fv] = central_partials(f, z, step);
    Eigen::Matrix<double, Eigen::Dynamic, 2> jac(fu.size(), 2);
    jac.col(0) = fu;
    jac.col(1) = fv;
    const Eigen::JacobiSVD<Eigen::Matrix<double, Eigen::Dynamic, 2>> svd(jac);
    const auto& s = svd.singularValues();
    return s[0] > 0.0 ? s[1] / s[0] : 0.0;
}

}  // namespace frontlab::differential
