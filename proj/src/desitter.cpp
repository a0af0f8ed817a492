#include "frontlab/desitter.hpp"

#include <cmath>

namespace frontlab::desitter {

namespace {

using Mat2 = lorentz::Mat2c<double>;
const Complex I_unit(0.0, 1.0);

// The principal (G_h)^{-3/2} may flip sign between nearby points; pick the
// sign of `m` closest to `ref`.
Mat2 aligned(const Mat2& ref, const Mat2& m) { return (m - ref).norm() <= (m + ref).norm() ? m : Mat2(-m); }

}  // namespace

CMC1FaceData::CMC1FaceData(weingarten::WeingartenData data) : data_(std::move(data)) {
    if (data_.epsilon() != -1.0) throw PreconditionError("CMC-1 face data requires eps = -1");
}

CMC1FaceData::CMC1FaceData(holo::MeroExpr G, holo::MeroExpr h, weingarten::Rect domain)
    : CMC1FaceData(weingarten::WeingartenData::with_epsilon(std::move(G), std::move(h), -1.0, domain)) {}

SL2d null_lift(const CMC1FaceData& d, Complex z) {
    const SL2d frame = weingarten::build_frame(d.data(), z);
    const Complex h = d.data().h()(z);
    Mat2 m;
    m << 0.0, -I_unit, -I_unit, I_unit * h;
    return frame * m;
}

Mat2 lift_derivative(const CMC1FaceData& d, Complex z, double step) {
    const Mat2 center = null_lift(d, z);
    auto at = [&](double t) { return aligned(center, null_lift(d, z + t)); };
    const Mat2 coarse = (at(step) - at(-step)) / (2.0 * step);
    const Mat2 fine = (at(step / 2) - at(-step / 2)) / step;
    return (4.0 * fine - coarse) / 3.0;
}

LiftResiduals lift_residuals(const CMC1FaceData& d, Complex z, double step) {
    const Mat2 F = null_lift(d, z);
    const Mat2 dF = lift_derivative(d, z, step);
    const weingarten::Jet j = d.data().jet(z);
    if (std::abs(j.Gz) <= holo::kPoleTolerance) throw PoleSignal("q/G_z (zero of G_z)");
    Mat2 left, right;
    left << j.h, -j.h * j.h, 1.0, -j.h;
    right << j.G, -j.G * j.G, 1.0, -j.G;
    left *= j.q / j.hz;
    right *= j.q / j.Gz;
    const Mat2 Finv = F.inverse();
    return {(Finv * dF - left).cwiseAbs().maxCoeff(), (dF * Finv - right).cwiseAbs().maxCoeff()};
}

double face_singular_function(const CMC1FaceData& d, Complex z) { return std::norm(d.data().h()(z)) - 1.0; }

Herm2d normal_tilde(const CMC1FaceData& d, Complex z) {
    const SL2d F = null_lift(d, z);
    const Complex h = d.data().h()(z);
    const double n = 1.0 + std::norm(h);
    Herm2d p;
    p << n, 2.0 * h, 2.0 * std::conj(h), n;
    return lorentz::congruence<double>(F, p);
}

Vec4d normal(const CMC1FaceData& d, Complex z) {
    const double m = 1.0 - std::norm(d.data().h()(z));
    if (std::abs(m) <= 1e-12) throw SingularSetError("unit normal is undefined on |h| = 1");
    return lorentz::vec_from_herm<double>(normal_tilde(d, z)) / m;
}

ExtendedNormal extended_normal(const CMC1FaceData& d, Complex z) {
    const SL2d F = null_lift(d, z);
    const Complex h = d.data().h()(z);
    const Complex A = F(0, 0), B = F(0, 1), C = F(1, 0), D = F(1, 1);
    const Complex hb = std::conj(h);
    // trace of nu~ = |F (h,1)^T|^2 + |F (1, conj h)^T|^2
    const double sum = std::norm(A + B * hb) + std::norm(C + D * hb) + std::norm(A * h + B) + std::norm(C * h + D);
    if (sum <= 1e-12) throw DegenerateLift("null lift is singular");
    const double m = 1.0 - std::norm(h);

    ExtendedNormal out{lorentz::ChartPoint3::infinity(), Vec4d::Zero(), 2.0 * m + sum, sum - 2.0 * m};
    // phi(nu~/m) = y/(m - y0) with y0 = sum/2; the 1/m factors cancel.
    const Vec4d y = lorentz::vec_from_herm<double>(normal_tilde(d, z));
    const double den = m - y[0];
    if (den != 0.0) out.N = lorentz::ChartPoint3::finite(Vec3d(y.tail<3>() / den));
    out.Psi = lorentz::psi_phi_inv<double>(out.N);
    return out;
}

Vec4d face_point(const CMC1FaceData& d, Complex z) {
    const SL2d F = null_lift(d, z);
    return lorentz::vec_from_herm<double>(lorentz::congruence<double>(F, lorentz::basis<double>(3)));
}

}  // namespace frontlab::desitter
