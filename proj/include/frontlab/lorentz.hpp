#pragma once

// Minkowski space R^4_1 (signature -,+,+,+) and R^3_1, the Hermitian matrix
// model of R^4_1, the model hypersurfaces and the stereographic charts onto
// the hyperbolic 2- and 3-spheres.

#include <cmath>
#include <complex>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "frontlab/errors.hpp"

namespace frontlab::lorentz {

template <typename Scalar> using Vec4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
/// 2x2 complex matrix. Used both for Hermitian points of R^4_1 and for
/// SL(2,C) frames.
template <typename Scalar> using Mat2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar> using Herm2 = Mat2c<Scalar>;
template <typename Scalar> using SL2 = Mat2c<Scalar>;

using Vec4d = Vec4<double>;
using Vec3d = Vec3<double>;
using Herm2d = Herm2<double>;
using SL2d = SL2<double>;
using Complex = std::complex<double>;

inline constexpr double kMembershipTolerance = 1e-9;

/// A value on a one-point compactification (Riemann sphere, hyperbolic
/// 3-sphere chart). The point at infinity is explicit.
template <typename T>
class Extended {
public:
    static Extended infinity() { return Extended(); }
    static Extended finite(T value) { return Extended(std::move(value)); }

    bool is_infinite() const noexcept { return !value_.has_value(); }
    const T& value() const {
        if (!value_) throw PreconditionError("point at infinity has no finite value");
        return *value_;
    }

private:
    Extended() = default;
    explicit Extended(T value) : value_(std::move(value)) {}
    std::optional<T> value_;
};

using RiemannPoint = Extended<Complex>;
using ChartPoint3 = Extended<Vec3d>;

// --------------------------------------------------------------- products

template <typename Scalar>
Scalar inner(const Vec4<Scalar>& x, const Vec4<Scalar>& y) {
    return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
}

template <typename Scalar>
Scalar inner(const Vec3<Scalar>& x, const Vec3<Scalar>& y) {
    return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

/// Basis e_0..e_3 of Herm(2).
template <typename Scalar>
Herm2<Scalar> basis(int k) {
    using C = std::complex<Scalar>;
    Herm2<Scalar> e;
    switch (k) {
        case 0: e << C(1), C(0), C(0), C(1); break;
        case 1: e << C(0), C(1), C(1), C(0); break;
        case 2: e << C(0), C(0, 1), C(0, -1), C(0); break;
        default: e << C(1), C(0), C(0), C(-1); break;
    }
    return e;
}

template <typename Scalar>
Herm2<Scalar> herm_from_vec(const Vec4<Scalar>& x) {
    using C = std::complex<Scalar>;
    Herm2<Scalar> m;
    m << C(x[0] + x[3]), C(x[1], x[2]), C(x[1], -x[2]), C(x[0] - x[3]);
    return m;
}

template <typename Scalar>
Scalar hermitian_defect(const Herm2<Scalar>& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Inverse of herm_from_vec. Rejects matrices whose anti-Hermitian part
/// exceeds `tol` (relative to the matrix scale).
template <typename Scalar>
Vec4<Scalar> vec_from_herm(const Herm2<Scalar>& m, Scalar tol = Scalar(1e-9)) {
    const Scalar scale = std::max(Scalar(1), m.cwiseAbs().maxCoeff());
    if (hermitian_defect(m) > tol * scale) throw PreconditionError("matrix is not Hermitian");
    const Scalar a = std::real(m(0, 0));
    const Scalar d = std::real(m(1, 1));
    const std::complex<Scalar> b = Scalar(0.5) * (m(0, 1) + std::conj(m(1, 0)));
    return Vec4<Scalar>((a + d) / 2, b.real(), b.imag(), (a - d) / 2);
}

/// Lorentz product through the matrix model: -1/2 trace(X e2 Y^T e2).
template <typename Scalar>
Scalar inner_trace(const Vec4<Scalar>& x, const Vec4<Scalar>& y) {
    const Herm2<Scalar> e2 = basis<Scalar>(2);
    const Herm2<Scalar> prod = herm_from_vec(x) * e2 * herm_from_vec(y).transpose() * e2;
    return -Scalar(0.5) * std::real(prod.trace());
}

/// a M a*, the action of SL(2,C) on Herm(2) by isometries.
template <typename Scalar>
Herm2<Scalar> congruence(const Mat2c<Scalar>& a, const Herm2<Scalar>& m) {
    return a * m * a.adjoint();
}

// --------------------------------------------------------------- membership

enum class PointClass { H3Plus, H3Minus, DeSitter, LightCone, Generic };

inline const char* to_string(PointClass c) {
    switch (c) {
        case PointClass::H3Plus: return "H3+";
        case PointClass::H3Minus: return "H3-";
        case PointClass::DeSitter: return "S31";
        case PointClass::LightCone: return "lightcone";
        case PointClass::Generic: return "generic";
    }
    return "?";
}

template <typename Scalar>
PointClass classify_point(const Vec4<Scalar>& x, Scalar tol = Scalar(kMembershipTolerance)) {
    const Scalar n = inner(x, x);
    using std::abs;
    if (abs(n + 1) <= tol) return x[0] > 0 ? PointClass::H3Plus : PointClass::H3Minus;
    if (abs(n - 1) <= tol) return PointClass::DeSitter;
    if (abs(n) <= tol) return PointClass::LightCone;
    return PointClass::Generic;
}

// --------------------------------------------------------------- charts

/// Stereographic projection of H^3_+ u H^3_- onto R^3 u {inf}:
/// (x1,x2,x3)/(1-x0). x0 = 1 goes to infinity.
template <typename Scalar>
Extended<Vec3<Scalar>> stereo_phi3(const Vec4<Scalar>& x) {
    const Scalar den = 1 - x[0];
    if (den == Scalar(0)) return Extended<Vec3<Scalar>>::infinity();
    return Extended<Vec3<Scalar>>::finite(x.template tail<3>() / den);
}

/// Inverse of stereo_phi3 off the unit sphere: (1+|x|^2, -2x)/(|x|^2-1).
template <typename Scalar>
Vec4<Scalar> stereo_phi3_inverse(const Vec3<Scalar>& x) {
    const Scalar s = x.squaredNorm();
    if (s == Scalar(1)) throw SingularSetError("unit sphere is not in the range of the chart");
    Vec4<Scalar> out;
    out << 1 + s, -2 * x;
    return out / (s - 1);
}

/// Closed form of psi o phi^{-1}: (1+|x|^2, -2x)/sqrt((1+|x|^2)^2 + 4|x|^2).
/// Euclidean unit and smooth on all of R^3, including the unit sphere.
template <typename Scalar>
Vec4<Scalar> psi_phi_inv(const Vec3<Scalar>& x) {
    const Scalar s = x.squaredNorm();
    Vec4<Scalar> out;
    out << 1 + s, -2 * x;
    using std::sqrt;
    return out / sqrt((s + 1) * (s + 1) + 4 * s);
}

/// psi on the hyperboloid of two sheets: sign(x0) x / |x|_E.
template <typename Scalar>
Vec4<Scalar> psi(const Vec4<Scalar>& x) {
    return (x[0] > 0 ? Scalar(1) : Scalar(-1)) * x / x.norm();
}

/// The value of psi o phi^{-1} at infinity.
template <typename Scalar>
Vec4<Scalar> psi_phi_inv_at_infinity() {
    return Vec4<Scalar>(1, 0, 0, 0);
}

template <typename Scalar>
Vec4<Scalar> psi_phi_inv(const Extended<Vec3<Scalar>>& x) {
    return x.is_infinite() ? psi_phi_inv_at_infinity<Scalar>() : psi_phi_inv(x.value());
}

/// 2D analogue on H^2_+ u H^2_- in R^3_1: (x1 + i x2)/(1 - x0).
template <typename Scalar>
Extended<std::complex<Scalar>> stereo_phi2(const Vec3<Scalar>& x) {
    const Scalar den = 1 - x[0];
    if (den == Scalar(0)) return Extended<std::complex<Scalar>>::infinity();
    return Extended<std::complex<Scalar>>::finite(std::complex<Scalar>(x[1], x[2]) / den);
}

template <typename Scalar>
Vec3<Scalar> psi_phi_inv2(std::complex<Scalar> w) {
    const Scalar s = std::norm(w);
    using std::sqrt;
    return Vec3<Scalar>(1 + s, -2 * w.real(), -2 * w.imag()) / sqrt((s + 1) * (s + 1) + 4 * s);
}

template <typename Scalar>
Vec3<Scalar> psi_phi_inv2(const Extended<std::complex<Scalar>>& w) {
    return w.is_infinite() ? Vec3<Scalar>(1, 0, 0) : psi_phi_inv2(w.value());
}

/// Poincare ball model of H^3_+: (x1,x2,x3)/(1+x0).
/// Membership is checked relative to x0^2, the scale of the cancellation.
template <typename Scalar>
Vec3<Scalar> poincare_ball(const Vec4<Scalar>& x, Scalar tol = Scalar(kMembershipTolerance)) {
    using std::abs;
    if (!(x[0] > 0) || abs(inner(x, x) + 1) > tol * std::max(Scalar(1), x[0] * x[0]))
        throw PreconditionError("point is not on H^3_+");
    return x.template tail<3>() / (1 + x[0]);
}

}  // namespace frontlab::lorentz
