#include "frontlab/weingarten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frontlab::weingarten {

namespace {

constexpr double kPole = holo::kPoleTolerance;
const Complex I_unit(0.0, 1.0);

bool identically_zero(const MeroExpr& e) {
    if (e.is_constant()) return std::abs(e(0.0)) == 0.0;
    // Probe a few scattered points; a nonzero meromorphic function cannot
    // vanish at all of them unless the data is degenerate.
    const Complex probes[] = {{0.3127, 0.1713}, {-0.4419, 0.5231}, {0.7071, -0.2929}, {-0.1234, -0.8765}};
    for (const Complex p : probes) {
        try {
            if (std::abs(e(p)) > kPole) return false;
        } catch (const PoleSignal&) {
            return false;
        }
    }
    return true;
}

double check_denominator(double value, const char* what) {
    if (std::abs(value) <= kPole) throw PoleSignal(what);
    return value;
}

// Newton steps on Phi along its finite-difference gradient.
Complex project_to_singular_set(const WeingartenData& d, Complex z, int steps = 4) {
    for (int k = 0; k < steps; ++k) {
        const double phi = singular_function(d, z);
        const double h = 1e-6 * std::max(1.0, std::abs(z));
        const double gu = (singular_function(d, z + h) - singular_function(d, z - h)) / (2 * h);
        const double gv = (singular_function(d, z + Complex(0, h)) - singular_function(d, z - Complex(0, h))) / (2 * h);
        const double g2 = gu * gu + gv * gv;
        if (g2 == 0.0) break;
        z -= Complex(gu, gv) * (phi / g2);
        if (std::abs(phi) <= 1e-14 * (1.0 + sigma_hat(d, z))) break;
    }
    return z;
}

}  // namespace

const char* to_string(SingularKind k) {
    switch (k) {
        case SingularKind::CuspidalEdge: return "cuspidal_edge";
        case SingularKind::Swallowtail: return "swallowtail";
        case SingularKind::DegenerateOrUnknown: return "degenerate_or_unknown";
    }
    return "?";
}

// ------------------------------------------------------------ data

WeingartenData::WeingartenData(MeroExpr G, MeroExpr h, double a, double b, Rect domain)
    : G_(std::move(G)), h_(std::move(h)), a_(a), b_(b), epsilon_(0.0), domain_(domain) {
    if (a == 0.0 && b == 0.0) throw PreconditionError("coefficients (a, b) must not both vanish");
    if (a + 2.0 * b == 0.0) throw PreconditionError("horo-flat unsupported: a + 2b = 0");
    epsilon_ = a / (a + 2.0 * b);
    if (identically_zero(G_.derivative())) throw PreconditionError("G_z vanishes identically");
    if (identically_zero(h_.derivative())) throw PreconditionError("h_z vanishes identically");
    q_ = MeroExpr::constant(0.5) * (holo::schwarzian(h_) - holo::schwarzian(G_));
}

WeingartenData WeingartenData::with_epsilon(MeroExpr G, MeroExpr h, double epsilon, Rect domain) {
    if (!std::isfinite(epsilon)) throw PreconditionError("horo-flat unsupported: epsilon must be finite");
    return WeingartenData(std::move(G), std::move(h), epsilon, 0.5 * (1.0 - epsilon), domain);
}

WeingartenData WeingartenData::with_coefficients(MeroExpr G, MeroExpr h, double a, double b, Rect domain) {
    return WeingartenData(std::move(G), std::move(h), a, b, domain);
}

Jet WeingartenData::jet(Complex z) const {
    Jet j;
    const MeroExpr& dG = G_.derivative();
    const MeroExpr& dh = h_.derivative();
    j.G = G_(z);
    j.Gz = dG(z);
    const Complex Gzz = dG.derivative()(z);
    j.h = h_(z);
    j.hz = dh(z);
    j.hzz = dh.derivative()(z);
    if (std::abs(j.hz) <= kPole) throw PoleSignal("G_h (zero of h_z)");
    j.Gh = j.Gz / j.hz;
    j.Ghh = (Gzz * j.hz - j.Gz * j.hzz) / (j.hz * j.hz * j.hz);
    j.q = q_(z);
    j.qz = q_.derivative()(z);
    return j;
}

// ------------------------------------------------------------ metric data

double sigma_hat(const WeingartenData& d, Complex z) {
    const Complex h = d.h()(z);
    const Complex hz = d.h().derivative()(z);
    const double den = check_denominator(1.0 + d.epsilon() * std::norm(h), "1 + eps|h|^2");
    const double s = 4.0 * std::norm(hz) / (den * den);
    if (s == 0.0) throw DegenerateMetric("d sigma^2 vanishes (zero of dh)");
    return s;
}

Complex hopf_q(const WeingartenData& d, Complex z) { return d.jet(z).q; }

// ------------------------------------------------------------ representation

SL2d build_frame(const WeingartenData& d, Complex z) {
    const Jet j = d.jet(z);
    if (std::abs(j.Gh) <= kPole) throw PoleSignal("(G_h)^{-3/2} (zero of G_h)");
    const Complex pre = I_unit * std::exp(-1.5 * std::log(j.Gh));
    SL2d frame;
    frame << -j.G * j.Gh, j.G * j.Ghh / 2.0 - j.Gh * j.Gh, -j.Gh, j.Ghh / 2.0;
    return pre * frame;
}

bool frame_branch_flips(const WeingartenData& d, Complex z1, Complex z2) {
    const Jet a = d.jet(z1);
    const Jet b = d.jet(z2);
    const bool straddles = (a.Gh.imag() >= 0.0) != (b.Gh.imag() >= 0.0);
    return straddles && a.Gh.real() < 0.0 && b.Gh.real() < 0.0;
}

double frame_structure_residual(const WeingartenData& d, Complex z, double step) {
    using Mat2 = lorentz::Mat2c<double>;
    const SL2d center = build_frame(d, z);
    auto at = [&](double t) {
        const SL2d m = build_frame(d, z + t);
        return (m - center).norm() <= (m + center).norm() ? Mat2(m) : Mat2(-m);
    };
    const Mat2 dG = (at(step) - at(-step)) / (2.0 * step);
    const Jet j = d.jet(z);
    Mat2 expected;
    expected << 0.0, j.q / j.hz, j.hz, 0.0;
    return (center.inverse() * dG - expected).norm() / expected.norm();
}

Herm2d front_matrix(double eps, Complex h) {
    const double m = 1.0 + eps * std::norm(h);
    if (std::abs(m) <= 1e-12) throw MetricSignatureError("1 + eps|h|^2 = 0");
    Herm2d a;
    a << (1.0 + eps * eps * std::norm(h)) / m, -eps * std::conj(h), -eps * h, m;
    return a;
}

Herm2d normal_matrix(double eps, Complex h) {
    const double m = 1.0 + eps * std::norm(h);
    if (std::abs(m) <= 1e-12) throw MetricSignatureError("1 + eps|h|^2 = 0");
    Herm2d b;
    b << (1.0 - eps * eps * std::norm(h)) / m, eps * std::conj(h), eps * h, -m;
    return b;
}

FrontPoint build_front(const WeingartenData& d, Complex z) {
    const SL2d g = build_frame(d, z);
    const Complex h = d.h()(z);
    FrontPoint p;
    p.f = lorentz::vec_from_herm<double>(lorentz::congruence<double>(g, front_matrix(d.epsilon(), h)));
    p.nu = lorentz::vec_from_herm<double>(lorentz::congruence<double>(g, normal_matrix(d.epsilon(), h)));
    p.sheet = p.f[0] > 0.0 ? Sheet::H3Plus : Sheet::H3Minus;
    return p;
}

Eigen::Matrix2d hermitian_plus_quadratic(double A, Complex c) {
    Eigen::Matrix2d m;
    m << A + 2.0 * c.real(), -2.0 * c.imag(), -2.0 * c.imag(), A - 2.0 * c.real();
    return m;
}

Forms fundamental_forms(const WeingartenData& d, Complex z) {
    const double s = sigma_hat(d, z);
    const Complex q = hopf_q(d, z);
    const double e = d.epsilon();
    const double t = 4.0 * std::norm(q) / s;
    Forms forms;
    forms.I = hermitian_plus_quadratic((1 - e) * (1 - e) / 4.0 * s + t, (1 - e) * q);
    forms.II = hermitian_plus_quadratic((e * e - 1) / 4.0 * s + t, -e * q);
    forms.III = hermitian_plus_quadratic((1 + e) * (1 + e) / 4.0 * s + t, -(1 + e) * q);
    return forms;
}

Curvatures curvatures(const Eigen::Matrix2d& I, const Eigen::Matrix2d& II) {
    const double detI = I.determinant();
    const double scale = std::max(1e-300, I.trace() * I.trace());
    if (!(detI > 1e-14 * scale)) throw SingularPointError("first fundamental form is degenerate");
    const Eigen::Matrix2d shape = I.inverse() * II;
    const double kext = shape.determinant();
    return {0.5 * shape.trace(), kext - 1.0, kext};
}

Eigen::Vector2d principal_curvatures(const Eigen::Matrix2d& I, const Eigen::Matrix2d& II) {
    if (!(I.determinant() > 0.0)) throw SingularPointError("first fundamental form is not positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> solver(II, I, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double weingarten_residual(const WeingartenData& d, Complex z, double a, double b) {
    const Forms forms = fundamental_forms(d, z);
    const Curvatures c = curvatures(forms.I, forms.II);
    return std::abs(a * (c.H - 1.0) + b * c.K);
}

// ------------------------------------------------------------ singularities

double singular_function(const WeingartenData& d, Complex z) {
    const double s = sigma_hat(d, z);
    const Complex q = hopf_q(d, z);
    const double e = d.epsilon();
    return 4.0 * std::norm(q) / s - (1 - e) * (1 - e) / 4.0 * s;
}

bool is_singular(const WeingartenData& d, Complex z) {
    return std::abs(singular_function(d, z)) <= 1e-7 * (1.0 + sigma_hat(d, z));
}

Complex nondegeneracy_expression(const WeingartenData& d, Complex z) {
    const Jet j = d.jet(z);
    if (std::abs(j.q) <= kPole) throw PoleSignal("theta_z/theta (zero of q)");
    const double e = d.epsilon();
    // theta = q/h_z, so theta_z/theta = q_z/q - h_zz/h_z.
    const Complex bracket = j.qz / j.q - 2.0 * j.hzz / j.hz;
    return 4.0 * e * j.hz * std::conj(j.h) + (1.0 + e * std::norm(j.h)) * bracket;
}

bool is_nondegenerate(const WeingartenData& d, Complex z, std::optional<double> tolerance) {
    if (d.epsilon() == 1.0) throw CMC1Unsupported("nondegeneracy is undefined for CMC-1 fronts");
    const double phi = singular_function(d, z);
    const double tol = tolerance.value_or(1e-7 * (1.0 + sigma_hat(d, z)));
    if (std::abs(phi) > tol) throw NotSingular("point is not on the singular set");
    return std::abs(nondegeneracy_expression(d, z)) > 1e-8;
}

DeltaValue delta_invariant(const WeingartenData& d, Complex z, std::optional<Complex> branch) {
    const double e = d.epsilon();
    if (e == 1.0) throw CMC1Unsupported("Delta is undefined for CMC-1 fronts");
    const Jet j = d.jet(z);
    const double m = 1.0 + e * std::norm(j.h);
    if (std::abs(m) <= kPole) throw MetricSignatureError("1 + eps|h|^2 = 0");
    if (std::abs(j.q) <= kPole) throw PoleSignal("1/sqrt(h_z theta) (zero of q)");
    const Complex bracket = 4.0 * e * j.hz * std::conj(j.h) / m + j.qz / j.q - 2.0 * j.hzz / j.hz;
    // sqrt(1 - eps) is i sqrt(eps - 1) for eps > 1; std::sqrt on (1 - eps, +0) gives exactly that.
    const Complex root_eps = std::sqrt(Complex(1.0 - e, 0.0));
    Complex root_q = std::sqrt(j.q);
    bool continued = false;
    if (branch && std::abs(-root_q - *branch) < std::abs(root_q - *branch)) {
        root_q = -root_q;
        continued = true;
    }
    return {(bracket / (root_eps * root_q)).imag(), root_q, continued};
}

namespace {

std::vector<DeltaValue> continued_deltas(const WeingartenData& d, const std::vector<Complex>& pts,
                                         std::size_t upto) {
    std::vector<DeltaValue> out;
    out.reserve(upto + 1);
    std::optional<Complex> branch;
    for (std::size_t k = 0; k <= upto && k < pts.size(); ++k) {
        out.push_back(delta_invariant(d, pts[k], branch));
        branch = out.back().sqrt_q;
    }
    return out;
}

double slope_at(const std::vector<Complex>& pts, const std::vector<DeltaValue>& deltas, std::size_t k,
                bool closed) {
    const std::size_t n = deltas.size();
    if (n < 2) return 0.0;
    std::size_t lo = k == 0 ? (closed ? n - 1 : 0) : k - 1;
    std::size_t hi = k + 1 >= n ? (closed ? 0 : n - 1) : k + 1;
    if (lo == hi) return 0.0;
    double ds = std::abs(pts[hi] - pts[k]) + std::abs(pts[k] - pts[lo]);
    if (ds == 0.0) return 0.0;
    return (deltas[hi].value - deltas[lo].value) / ds;
}

SingularClass classify_from(const WeingartenData& d, Complex z, double delta, double slope) {
    SingularClass c;
    c.delta = delta;
    c.nondegenerate = is_nondegenerate(d, z, 1e-6 * (1.0 + sigma_hat(d, z)));
    if (!c.nondegenerate)
        c.kind = SingularKind::DegenerateOrUnknown;
    else if (std::abs(delta) > kDeltaTolerance)
        c.kind = SingularKind::CuspidalEdge;
    else if (std::abs(slope) > kDeltaTolerance)
        c.kind = SingularKind::Swallowtail;
    else
        c.kind = SingularKind::DegenerateOrUnknown;
    return c;
}

}  // namespace

SingularClass classify_singularity(const WeingartenData& d, const CurveView& curve, std::size_t index) {
    if (d.epsilon() == 1.0) throw CMC1Unsupported("classification is undefined for CMC-1 fronts");
    if (index >= curve.points.size()) throw PreconditionError("curve index out of range");
    // Continue the branch one vertex past `index` so the slope sees both neighbours.
    const std::size_t last = std::min(curve.points.size() - 1, index + 1);
    auto deltas = continued_deltas(d, curve.points, curve.closed ? curve.points.size() - 1 : last);
    const double slope = slope_at(curve.points, deltas, index, curve.closed);
    return classify_from(d, curve.points[index], deltas[index].value, slope);
}

CurveClassification classify_curve(const WeingartenData& d, const CurveView& curve) {
    if (d.epsilon() == 1.0) throw CMC1Unsupported("classification is undefined for CMC-1 fronts");
    CurveClassification out;
    const auto& pts = curve.points;
    if (pts.empty()) return out;
    const auto deltas = continued_deltas(d, pts, pts.size() - 1);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        out.branch_cut_crossed = out.branch_cut_crossed || deltas[k].continued;
        out.vertices.push_back(classify_from(d, pts[k], deltas[k].value, slope_at(pts, deltas, k, curve.closed)));
    }
    const std::size_t segments = curve.closed ? pts.size() : pts.size() - 1;
    for (std::size_t k = 0; k < segments; ++k) {
        const std::size_t k1 = (k + 1) % pts.size();
        const double da = deltas[k].value;
        double db = deltas[k1].value;
        if (curve.closed && k1 == 0) db = delta_invariant(d, pts[0], deltas[k].sqrt_q).value;
        if (!(da * db < 0.0)) continue;
        // Bisection on the segment, projecting each probe back onto the singular set.
        double lo = 0.0, hi = 1.0;
        Complex root = pts[k];
        double droot = da;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            root = project_to_singular_set(d, pts[k] + mid * (pts[k1] - pts[k]));
            droot = delta_invariant(d, root, deltas[k].sqrt_q).value;
            if ((droot < 0.0) == (da < 0.0))
                lo = mid;
            else
                hi = mid;
        }
        const double slope = (db - da) / std::abs(pts[k1] - pts[k]);
        const SingularClass c = classify_from(d, root, droot, slope);
        if (c.kind == SingularKind::Swallowtail) out.swallowtails.push_back({root, slope});
    }
    return out;
}

// ------------------------------------------------------------ parallels

FrontPoint parallel_front(const WeingartenData& d, Complex z, double delta) {
    const FrontPoint p = build_front(d, z);
    const double ch = std::cosh(delta), sh = std::sinh(delta);
    FrontPoint out;
    out.f = ch * p.f + sh * p.nu;
    out.nu = ch * p.nu + sh * p.f;
    out.sheet = out.f[0] > 0.0 ? Sheet::H3Plus : Sheet::H3Minus;
    return out;
}

ParallelParams parallel_params(double a, double b, double delta) {
    const double e2 = std::exp(2.0 * delta);
    return {delta, b * e2 + a * (e2 - 1.0) / 2.0};
}

WeingartenData parallel_data(const WeingartenData& d, double delta) {
    const MeroExpr scaled = MeroExpr::constant(std::exp(delta)) * d.h();
    return WeingartenData::with_coefficients(d.G(), scaled, d.a(), parallel_params(d.a(), d.b(), delta).b_delta,
                                             d.domain());
}

double cmc1_delta(const WeingartenData& d) {
    const double e = d.epsilon();
    if (e == 0.0) throw FlatUnsupported("flat fronts have no CMC-1 parallel");
    // b_delta = 0 (eps > 0) or b_delta = -a (eps < 0) reduces to e^{2 delta} = |eps|.
    return 0.5 * std::log(std::abs(e));
}

// ------------------------------------------------------------ Gauss maps

lorentz::RiemannPoint gauss_G(const WeingartenData& d, Complex z) {
    try {
        return lorentz::RiemannPoint::finite(d.G()(z));
    } catch (const PoleSignal&) {
        return lorentz::RiemannPoint::infinity();
    }
}

lorentz::RiemannPoint lightlike_class(const Vec4d& x) {
    const Herm2d m = lorentz::herm_from_vec<double>(x);
    // Rank one: m = 2 (q, s)^T (conj q, conj s); the ratio q/s is read off
    // whichever column is better conditioned.
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) throw PreconditionError("zero vector has no lightlike class");
    if (std::abs(m(1, 1)) >= std::abs(m(1, 0)) && std::abs(m(1, 1)) > 1e-14 * scale)
        return lorentz::RiemannPoint::finite(m(0, 1) / m(1, 1));
    if (std::abs(m(1, 0)) > 1e-14 * scale) return lorentz::RiemannPoint::finite(m(0, 0) / m(1, 0));
    return lorentz::RiemannPoint::infinity();
}

lorentz::RiemannPoint gauss_Gstar_explicit(const WeingartenData& d, Complex z) {
    const Jet j = d.jet(z);
    const double e = d.epsilon();
    const double m = 1.0 + e * std::norm(j.h);
    const Complex den = e * std::conj(j.h) * j.Gh + j.Ghh / 2.0 * m;
    if (std::abs(den) <= kPole) return lorentz::RiemannPoint::infinity();
    return lorentz::RiemannPoint::finite(j.G - j.Gh * j.Gh * m / den);
}

lorentz::RiemannPoint gauss_Gstar_numeric(const WeingartenData& d, Complex z) {
    const SL2d g = build_frame(d, z);
    const double e = d.epsilon();
    const Complex h = d.h()(z);
    const double m = 1.0 + e * std::norm(h);
    if (std::abs(m) <= 1e-12) throw MetricSignatureError("1 + eps|h|^2 = 0");
    lorentz::Mat2c<double> phi;
    phi << -1.0, -e * std::conj(h), 0.0, m;
    phi *= I_unit / std::sqrt(Complex(m, 0.0));
    const lorentz::Mat2c<double> gp = g * phi;
    const Complex q = gp(0, 1), s = gp(1, 1);
    if (std::abs(s) <= kPole * std::max(1.0, std::abs(q))) return lorentz::RiemannPoint::infinity();
    return lorentz::RiemannPoint::finite(q / s);
}

double antiholo_defect_Gstar(const WeingartenData& d, Complex z, double step) {
    auto value = [&](Complex w) {
        const auto p = gauss_Gstar_explicit(d, w);
        if (p.is_infinite()) throw PoleSignal("G_* (infinite near sample point)");
        return p.value();
    };
    const Complex du = (value(z + step) - value(z - step)) / (2.0 * step);
    const Complex dv = (value(z + Complex(0, step)) - value(z - Complex(0, step))) / (2.0 * step);
    return std::abs(0.5 * (du + I_unit * dv));
}

// ------------------------------------------------------------ certificates

std::vector<Complex> circle_loop(Complex center, double radius, std::size_t samples) {
    std::vector<Complex> loop(samples);
    for (std::size_t k = 0; k < samples; ++k)
        loop[k] = center + std::polar(radius, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(samples));
    return loop;
}

ZigzagCertificate zigzag_trivializing_delta(const WeingartenData& d, const std::vector<Complex>& loop) {
    if (d.epsilon() != 0.0) throw FlatOnly("zig-zag certificate applies to flat fronts only");
    if (loop.empty()) throw PreconditionError("empty loop");
    double c = std::numeric_limits<double>::infinity();
    for (const Complex z : loop) {
        const Jet j = d.jet(z);
        c = std::min(c, std::abs(j.q / (j.hz * j.hz)));
    }
    if (!(c > 1e-10)) throw LoopThroughZero("loop passes through a zero of Q");
    ZigzagCertificate cert{};
    cert.c = c;
    cert.delta = 0.5 * std::log(c) - kZigzagMargin;
    cert.min_rho = std::exp(-2.0 * cert.delta) * c;
    const WeingartenData parallel = parallel_data(d, cert.delta);
    cert.min_abs_phi = std::numeric_limits<double>::infinity();
    for (const Complex z : loop) cert.min_abs_phi = std::min(cert.min_abs_phi, std::abs(singular_function(parallel, z)));
    return cert;
}

std::vector<double> parallel_singular_radii(double kappa1, double kappa2) {
    std::vector<double> radii;
    for (const double k : {kappa1, kappa2})
        if (std::abs(k) > 1.0) radii.push_back(0.5 * std::log((k + 1.0) / (k - 1.0)));
    std::sort(radii.begin(), radii.end());
    return radii;
}

// ------------------------------------------------------------ sampling

FrontSample sample_point(const WeingartenData& d, Complex z) {
    FrontSample s;
    s.z = z;
    const FrontPoint p = build_front(d, z);
    s.f = p.f;
    s.nu = p.nu;
    s.sheet = p.sheet;
    s.sigma_hat = sigma_hat(d, z);
    s.q = hopf_q(d, z);
    s.forms = fundamental_forms(d, z);
    s.sing = singular_function(d, z);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.H = s.K = s.Kext = nan;
    if (std::abs(s.sing) > 1e-7 * (1.0 + s.sigma_hat)) {
        try {
            const Curvatures c = curvatures(s.forms.I, s.forms.II);
            s.H = c.H;
            s.K = c.K;
            s.Kext = c.Kext;
        } catch (const SingularPointError&) {
        }
    }
    return s;
}

}  // namespace frontlab::weingarten
