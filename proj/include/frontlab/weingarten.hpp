#pragma once

// Linear Weingarten fronts of Bryant type in H^3 built from a meromorphic
// Gauss map G, a developing map h and the curvature ratio epsilon.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frontlab/errors.hpp"
#include "frontlab/holo.hpp"
#include "frontlab/lorentz.hpp"

namespace frontlab::weingarten {

using Complex = std::complex<double>;
using holo::MeroExpr;
using lorentz::Herm2d;
using lorentz::SL2d;
using lorentz::Vec4d;

/// Axis-aligned rectangle [u0,u1] x [v0,v1] of the z-plane.
struct Rect {
    double u0 = -1.0, u1 = 1.0, v0 = -1.0, v1 = 1.0;
};

/// Pointwise values of G, h and the derivatives the formulas need.
struct Jet {
    Complex G, Gz, h, hz, hzz;
    Complex Gh, Ghh;  // dG/dh and d^2G/dh^2
    Complex q, qz;    // Hopf differential Q = q dz^2 and its z-derivative
};

class WeingartenData {
public:
    /// Canonical coefficients (a, b) = (eps, (1 - eps)/2), so a + 2b = 1.
    static WeingartenData with_epsilon(MeroExpr G, MeroExpr h, double epsilon, Rect domain = {});
    /// Rejects (a,b) = (0,0) and the horo-flat case a + 2b = 0.
    static WeingartenData with_coefficients(MeroExpr G, MeroExpr h, double a, double b,
                                            Rect domain = {});

    const MeroExpr& G() const noexcept { return G_; }
    const MeroExpr& h() const noexcept { return h_; }
    double epsilon() const noexcept { return epsilon_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    const Rect& domain() const noexcept { return domain_; }

    /// Throws PoleSignal where G, h or the derived quantities are singular.
    Jet jet(Complex z) const;

private:
    WeingartenData(MeroExpr G, MeroExpr h, double a, double b, Rect domain);

    MeroExpr G_, h_;
    double a_, b_, epsilon_;
    Rect domain_;
    MeroExpr q_;  // (S(h) - S(G))/2
};

enum class Sheet { H3Plus, H3Minus };

struct FrontPoint {
    Vec4d f;
    Vec4d nu;
    Sheet sheet;
};

struct Forms {
    Eigen::Matrix2d I, II, III;
};

struct Curvatures {
    double H;     // mean curvature, half the trace of the shape operator
    double K;     // intrinsic Gaussian curvature Kext - 1
    double Kext;  // determinant of the shape operator
};

struct ParallelParams {
    double delta;
    double b_delta;
};

enum class SingularKind { CuspidalEdge, Swallowtail, DegenerateOrUnknown };

const char* to_string(SingularKind k);

struct SingularClass {
    SingularKind kind = SingularKind::DegenerateOrUnknown;
    double delta = 0.0;  // continued Delta value
    bool nondegenerate = false;
};

/// Per-point bundle used for sampling and export.
struct FrontSample {
    Complex z;
    Vec4d f, nu;
    Sheet sheet = Sheet::H3Plus;
    Forms forms;
    double H = 0.0, K = 0.0, Kext = 0.0;  // NaN where the point is singular
    double sing = 0.0;                    // singular function
    double sigma_hat = 0.0;
    Complex q;
};

inline constexpr double kDeltaTolerance = 1e-6;

// ------------------------------------------------------------ metric data

/// d sigma^2 = sigma_hat |dz|^2 with sigma_hat = 4|h_z|^2/(1 + eps|h|^2)^2.
double sigma_hat(const WeingartenData& d, Complex z);

/// Q = q dz^2, q = ({h:z} - {G:z})/2.
Complex hopf_q(const WeingartenData& d, Complex z);

// ------------------------------------------------------------ representation

/// i (G_h)^{-3/2} [[-G G_h, G G_hh/2 - G_h^2], [-G_h, G_hh/2]], principal branch.
SL2d build_frame(const WeingartenData& d, Complex z);

/// True when arg(G_h) crosses the negative real axis between z1 and z2, i.e.
/// the principal frame flips sign there (f and nu do not).
bool frame_branch_flips(const WeingartenData& d, Complex z1, Complex z2);

/// Relative error between G^{-1} dG/dz from finite differences (step `step`)
/// and the structure matrix [[0, q/h_z], [h_z, 0]].
double frame_structure_residual(const WeingartenData& d, Complex z, double step = 1e-5);

/// The constant matrices A (front) and B (normal) of the representation.
Herm2d front_matrix(double epsilon, Complex h);
Herm2d normal_matrix(double epsilon, Complex h);

/// f = G A G*, nu = G B G*.
FrontPoint build_front(const WeingartenData& d, Complex z);

/// Closed-form I, II, III in (du, dv) coordinates.
Forms fundamental_forms(const WeingartenData& d, Complex z);

/// Matrix of A|dz|^2 + 2 Re(c dz^2).
Eigen::Matrix2d hermitian_plus_quadratic(double A, Complex c);

Curvatures curvatures(const Eigen::Matrix2d& I, const Eigen::Matrix2d& II);

/// Principal curvatures: eigenvalues of I^{-1} II, ascending.
Eigen::Vector2d principal_curvatures(const Eigen::Matrix2d& I, const Eigen::Matrix2d& II);

/// |a(H - 1) + b K| from the closed-form fundamental forms.
double weingarten_residual(const WeingartenData& d, Complex z, double a, double b);

// ------------------------------------------------------------ singularities

/// Phi = 4|q|^2/sigma_hat - ((1 - eps)^2/4) sigma_hat. Zero set is the singular set.
double singular_function(const WeingartenData& d, Complex z);

/// |Phi| <= 1e-7 (1 + sigma_hat).
bool is_singular(const WeingartenData& d, Complex z);

/// The left side of the nondegeneracy condition,
/// 4 eps h_z conj(h) + (1 + eps|h|^2)(theta_z/theta - h_zz/h_z) with theta = q/h_z.
Complex nondegeneracy_expression(const WeingartenData& d, Complex z);

/// Throws CMC1Unsupported for eps = 1 and NotSingular when |Phi| exceeds
/// `tolerance` (defaults to the singular-set tolerance, loosened to 1e-6
/// relative for refined curve vertices).
bool is_nondegenerate(const WeingartenData& d, Complex z, std::optional<double> tolerance = {});

struct DeltaValue {
    double value;
    Complex sqrt_q;          // branch of sqrt(h_z theta) = sqrt(q) that was used
    bool continued = false;  // true when the non-principal root was taken
};

/// Cuspidal-edge invariant. With `branch` set, the square root closest to it
/// is used (continuation along a curve); otherwise the principal root.
DeltaValue delta_invariant(const WeingartenData& d, Complex z, std::optional<Complex> branch = {});

/// A singular curve on the parameter domain, as produced by mesh extraction.
struct CurveView {
    const std::vector<Complex>& points;
    bool closed = false;
};

/// Classification of vertex `index` of `curve` (branch continued from vertex 0).
SingularClass classify_singularity(const WeingartenData& d, const CurveView& curve, std::size_t index);

struct SwallowtailPoint {
    Complex z;
    double slope;  // d(Delta o gamma)/ds by arclength
};

struct CurveClassification {
    std::vector<SingularClass> vertices;
    std::vector<SwallowtailPoint> swallowtails;
    bool branch_cut_crossed = false;
};

/// Classifies every vertex and locates Delta roots between vertices by
/// bisection along the singular curve.
CurveClassification classify_curve(const WeingartenData& d, const CurveView& curve);

// ------------------------------------------------------------ parallels

FrontPoint parallel_front(const WeingartenData& d, Complex z, double delta);

/// b_delta = b e^{2 delta} + a (e^{2 delta} - 1)/2.
ParallelParams parallel_params(double a, double b, double delta);

/// Data (G, e^delta h, eps e^{-2 delta}) with coefficients (a, b_delta)
/// representing the parallel front f_delta.
WeingartenData parallel_data(const WeingartenData& d, double delta);

/// delta with f_delta CMC-1 (eps > 0) or nu_delta CMC-1 in S^3_1 (eps < 0).
double cmc1_delta(const WeingartenData& d);

// ------------------------------------------------------------ Gauss maps

lorentz::RiemannPoint gauss_G(const WeingartenData& d, Complex z);

/// Lightlike-line class of a null vector x: ratio of the columns of its
/// Hermitian matrix, (x1 + i x2)/(x0 - x3).
lorentz::RiemannPoint lightlike_class(const Vec4d& x);

inline lorentz::RiemannPoint gauss_G_numeric(const Vec4d& f, const Vec4d& nu) {
    return lightlike_class(f + nu);
}

lorentz::RiemannPoint gauss_Gstar_explicit(const WeingartenData& d, Complex z);

/// q/s where G Phi = [[p, q], [r, s]].
lorentz::RiemannPoint gauss_Gstar_numeric(const WeingartenData& d, Complex z);

/// |dG_*/d(conj z)| by central differences of the explicit formula.
double antiholo_defect_Gstar(const WeingartenData& d, Complex z, double step = 1e-4);

// ------------------------------------------------------------ certificates

struct ZigzagCertificate {
    double delta;
    double c;            // min |q/h_z^2| over the loop
    double min_rho;      // min e^{-2 delta}|q/h_z^2| over the loop (> 1)
    double min_abs_phi;  // min |Phi_delta| over the loop
};

inline constexpr double kZigzagMargin = 0.1;

/// For a flat front and a closed loop, a delta whose parallel front has no
/// singular point on the loop.
ZigzagCertificate zigzag_trivializing_delta(const WeingartenData& d, const std::vector<Complex>& loop);

std::vector<Complex> circle_loop(Complex center, double radius, std::size_t samples);

/// {arccoth kappa_i : |kappa_i| > 1}, ascending.
std::vector<double> parallel_singular_radii(double kappa1, double kappa2);

// ------------------------------------------------------------ sampling

/// Everything at one point. Curvatures are NaN at singular points.
FrontSample sample_point(const WeingartenData& d, Complex z);

}  // namespace frontlab::weingarten
