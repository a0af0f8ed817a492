#pragma once

// CMC-1 faces in de Sitter space S^3_1: the null holomorphic lift, the face
// map f = F e3 F*, its singular set {|h| = 1} and the normal field extended
// real-analytically across it through the hyperbolic 3-sphere chart.

#include <complex>

#include "frontlab/lorentz.hpp"
#include "frontlab/weingarten.hpp"

namespace frontlab::desitter {

using Complex = std::complex<double>;
using lorentz::Herm2d;
using lorentz::SL2d;
using lorentz::Vec3d;
using lorentz::Vec4d;

/// Data of a CMC-1 face: Weingarten data with eps = -1.
class CMC1FaceData {
public:
    explicit CMC1FaceData(weingarten::WeingartenData data);
    CMC1FaceData(holo::MeroExpr G, holo::MeroExpr h, weingarten::Rect domain = {});

    const weingarten::WeingartenData& data() const noexcept { return data_; }

private:
    weingarten::WeingartenData data_;
};

/// F = G_frame [[0, -i], [-i, i h]].
SL2d null_lift(const CMC1FaceData& d, Complex z);

/// dF/dz by Richardson-extrapolated differences along u (F is holomorphic),
/// with the frame's sign branch aligned to F(z).
lorentz::Mat2c<double> lift_derivative(const CMC1FaceData& d, Complex z, double step = 1e-5);

struct LiftResiduals {
    double left;   // |F^{-1} dF - [[h, -h^2], [1, -h]] q/h_z|_max
    double right;  // |dF F^{-1} - [[G, -G^2], [1, -G]] q/G_z|_max
};

LiftResiduals lift_residuals(const CMC1FaceData& d, Complex z, double step = 1e-5);

/// |h|^2 - 1; its zero set is the singular set of the face.
double face_singular_function(const CMC1FaceData& d, Complex z);

/// nu~ = F [[1+|h|^2, 2h], [2 conj h, 1+|h|^2]] F*, smooth across |h| = 1.
Herm2d normal_tilde(const CMC1FaceData& d, Complex z);

/// nu = nu~/(1 - |h|^2) on H^3_+ u H^3_-. Throws SingularSetError at |h| = 1.
Vec4d normal(const CMC1FaceData& d, Complex z);

struct ExtendedNormal {
    lorentz::ChartPoint3 N;  // phi o nu, extended across |h| = 1
    Vec4d Psi;               // psi o phi^{-1} o N, Euclidean unit
    double r;                // 2(1-|h|^2) + |A+B h*|^2 + |C+D h*|^2 + |Ah+B|^2 + |Ch+D|^2
    double chart_denominator;  // |A+B h*|^2 + ... - 2(1-|h|^2), the denominator of phi o nu
};

/// Throws DegenerateLift when F is numerically singular.
ExtendedNormal extended_normal(const CMC1FaceData& d, Complex z);

/// f = F e3 F*, a point of S^3_1.
Vec4d face_point(const CMC1FaceData& d, Complex z);

}  // namespace frontlab::desitter
