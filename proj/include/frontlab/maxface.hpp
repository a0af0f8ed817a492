#pragma once

// Maxfaces in R^3_1 from Weierstrass-type data (g, omega = omega_hat dz):
// f = Re of the integral of (-2g, 1+g^2, i(1-g^2)) omega, with the normal
// field psi o phi^{-1} o g that stays finite across {|g| = 1}.

#include <complex>
#include <optional>
#include <vector>

#include "frontlab/holo.hpp"
#include "frontlab/lorentz.hpp"
#include "frontlab/weingarten.hpp"

namespace frontlab::maxface {

using Complex = std::complex<double>;
using holo::MeroExpr;
using lorentz::Vec3d;

/// z -> (a w + b)/(c w + d) with w = conj(z) (or w = z when `conjugate` is off).
struct Involution {
    Complex a{0.0}, b{-1.0}, c{1.0}, d{0.0};
    bool conjugate = true;

    Complex operator()(Complex z) const;
};

class MaxfaceData {
public:
    MaxfaceData(MeroExpr g, MeroExpr omega_hat, weingarten::Rect domain = {},
                std::optional<Involution> involution = {});

    const MeroExpr& g() const noexcept { return g_; }
    const MeroExpr& omega_hat() const noexcept { return omega_; }
    const weingarten::Rect& domain() const noexcept { return domain_; }
    const std::optional<Involution>& involution() const noexcept { return involution_; }

private:
    MeroExpr g_, omega_;
    weingarten::Rect domain_;
    std::optional<Involution> involution_;
};

using Vec3c = Eigen::Matrix<Complex, 3, 1>;

/// (-2g, 1+g^2, i(1-g^2)) omega_hat at z, so that f_z = integrand/2.
Vec3c integrand(const MaxfaceData& d, Complex z);

/// Real part of the integral along the segment basepoint -> z (adaptive
/// Gauss-Legendre). Throws PoleOnPath when the segment meets or grazes a pole.
Vec3d maxface_point(const MaxfaceData& d, Complex z, Complex basepoint);

/// Exact partials (f_u, f_v) = (Re, -Im) of the integrand.
std::pair<Vec3d, Vec3d> maxface_tangents(const MaxfaceData& d, Complex z);

/// (1 - |g|^2)^2 |omega_hat|^2, the conformal factor of the induced metric.
double metric_factor(const MaxfaceData& d, Complex z);

/// (1+|g|^2, -2 Re g, -2 Im g)/sqrt((1+|g|^2)^2 + 4|g|^2); Euclidean unit.
Vec3d lorentz_normal(const MaxfaceData& d, Complex z);

/// |g(T z) - 1/conj(g(z))|.
double involution_residual(const MaxfaceData& d, const Involution& T, Complex z);

struct LoopParity {
    std::vector<Complex> loop;
    int crossings = 0;
    bool odd = false;
};

/// Sign changes of |g|^2 - 1 along the polyline. Throws NonGenericPath at a
/// sample within 1e-10 of the unit circle whose slope is also near zero.
int count_unit_crossings(const MaxfaceData& d, const std::vector<Complex>& path);

/// Requires g o T = 1/conj(g) along the samples (1e-9) and path.back() = T(path.front()).
LoopParity loop_singular_parity(const MaxfaceData& d, const Involution& T, const std::vector<Complex>& path);

/// Samples t -> path(t) at t = k/n, k = 0..n.
std::vector<Complex> sample_path(const MeroExpr& path, std::size_t n);

/// The path followed by its image under T.
std::vector<Complex> doubled_path(const Involution& T, const std::vector<Complex>& path);

}  // namespace frontlab::maxface
