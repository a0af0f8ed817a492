#include "frontlab/maxface.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

namespace frontlab::maxface {

namespace {

const Complex I_unit(0.0, 1.0);
constexpr int kMaxDepth = 40;
constexpr double kQuadTolerance = 1e-13;

using Rule = boost::math::quadrature::gauss<double, 20>;

// Gauss-Legendre on [t0, t1] of the pulled-back integrand along z0 + t dz.
Vec3c panel(const MaxfaceData& d, Complex z0, Complex dz, double t0, double t1) {
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
    Vec3c sum = Vec3c::Zero();
    for (std::size_t k = 0; k < x.size(); ++k) {
        // Boost stores the nonnegative half of the symmetric rule.
        if (x[k] == 0.0) {
            sum += w[k] * integrand(d, z0 + mid * dz);
            continue;
        }
        sum += w[k] * (integrand(d, z0 + (mid - half * x[k]) * dz) + integrand(d, z0 + (mid + half * x[k]) * dz));
    }
    return sum * half * dz;
}

Vec3c adaptive(const MaxfaceData& d, Complex z0, Complex dz, double t0, double t1, const Vec3c& whole, int depth) {
    const double mid = 0.5 * (t0 + t1);
    const Vec3c left = panel(d, z0, dz, t0, mid);
    const Vec3c right = panel(d, z0, dz, mid, t1);
    const Vec3c both = left + right;
    const double err = (both - whole).norm();
    if (err <= kQuadTolerance * std::max(1.0, both.norm())) return both;
    if (depth >= kMaxDepth || !std::isfinite(err)) throw PoleOnPath("quadrature did not converge; the path passes too close to a pole");
    return adaptive(d, z0, dz, t0, mid, left, depth + 1) + adaptive(d, z0, dz, mid, t1, right, depth + 1);
}

bool identically_zero(const MeroExpr& e) {
    const Complex probes[] = {{0.3127, 0.1713}, {-0.4419, 0.5231}, {0.7071, -0.2929}, {-0.1234, -0.8765}};
    for (const Complex p : probes) {
        try {
            if (std::abs(e(p)) > holo::kPoleTolerance) return false;
        } catch (const PoleSignal&) {
            return false;
        }
    }
    return true;
}

}  // namespace

Complex Involution::operator()(Complex z) const {
    const Complex w = conjugate ? std::conj(z) : z;
    const Complex den = c * w + d;
    if (std::abs(den) <= holo::kPoleTolerance) throw PoleSignal("involution denominator");
    return (a * w + b) / den;
}

MaxfaceData::MaxfaceData(MeroExpr g, MeroExpr omega_hat, weingarten::Rect domain, std::optional<Involution> involution)
    : g_(std::move(g)), omega_(std::move(omega_hat)), domain_(domain), involution_(involution) {
    if (g_.is_constant() && std::abs(std::abs(g_(0.0)) - 1.0) <= 1e-12)
        throw PreconditionError("g is identically of modulus 1");
    if (identically_zero(omega_)) throw PreconditionError("omega_hat vanishes identically");
    if (involution_) {
        const Involution& t = *involution_;
        if (std::abs(t.a * t.d - t.b * t.c) <= holo::kPoleTolerance)
            throw PreconditionError("involution is not a Moebius map (ad - bc = 0)");
    }
}

Vec3c integrand(const MaxfaceData& d, Complex z) {
    const Complex g = d.g()(z);
    const Complex w = d.omega_hat()(z);
    const Complex g2 = g * g;
    return Vec3c(-2.0 * g * w, (1.0 + g2) * w, I_unit * (1.0 - g2) * w);
}

Vec3d maxface_point(const MaxfaceData& d, Complex z, Complex basepoint) {
    const Complex dz = z - basepoint;
    if (dz == 0.0) return Vec3d::Zero();
    try {
        const Vec3c whole = panel(d, basepoint, dz, 0.0, 1.0);
        return adaptive(d, basepoint, dz, 0.0, 1.0, whole, 0).real();
    } catch (const PoleSignal& e) {
        throw PoleOnPath(std::string("path from basepoint meets a ") + e.what());
    }
}

std::pair<Vec3d, Vec3d> maxface_tangents(const MaxfaceData& d, Complex z) {
    // f_z = Phi/2 with f real: f_u = Re Phi, f_v = -Im Phi.
    const Vec3c phi = integrand(d, z);
    return {phi.real(), -phi.imag()};
}

double metric_factor(const MaxfaceData& d, Complex z) {
    const double m = 1.0 - std::norm(d.g()(z));
    return m * m * std::norm(d.omega_hat()(z));
}

Vec3d lorentz_normal(const MaxfaceData& d, Complex z) { return lorentz::psi_phi_inv2<double>(d.g()(z)); }

double involution_residual(const MaxfaceData& d, const Involution& T, Complex z) {
    const Complex gz = d.g()(z);
    if (std::abs(gz) <= holo::kPoleTolerance) throw PoleSignal("1/conj(g)");
    return std::abs(d.g()(T(z)) - 1.0 / std::conj(gz));
}

int count_unit_crossings(const MaxfaceData& d, const std::vector<Complex>& path) {
    std::vector<double> s(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) s[k] = std::norm(d.g()(path[k])) - 1.0;
    int crossings = 0;
    int last_sign = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (std::abs(s[k]) <= 1e-10) {
            const double before = k > 0 ? s[k - 1] : s[k];
            const double after = k + 1 < s.size() ? s[k + 1] : s[k];
            if (std::abs(after - before) <= 1e-8) throw NonGenericPath("path touches |g| = 1 tangentially");
        }
        const int sign = s[k] > 0.0 ? 1 : (s[k] < 0.0 ? -1 : 0);
        if (sign == 0) continue;
        if (last_sign != 0 && sign != last_sign) ++crossings;
        last_sign = sign;
    }
    return crossings;
}

LoopParity loop_singular_parity(const MaxfaceData& d, const Involution& T, const std::vector<Complex>& path) {
    if (path.size() < 2) throw PreconditionError("path needs at least two samples");
    const Complex image = T(path.front());
    if (std::abs(image - path.back()) > 1e-9 * (1.0 + std::abs(image)))
        throw PreconditionError("path endpoints are not related by the involution");
    for (const Complex z : path) {
        if (involution_residual(d, T, z) > 1e-9 * (1.0 + std::abs(d.g()(T(z)))))
            throw PreconditionError("g o T = 1/conj(g) fails along the path");
    }
    LoopParity out;
    out.loop = path;
    out.crossings = count_unit_crossings(d, path);
    out.odd = out.crossings % 2 == 1;
    return out;
}

std::vector<Complex> sample_path(const MeroExpr& path, std::size_t n) {
    if (n == 0) throw PreconditionError("path needs at least one segment");
    std::vector<Complex> out(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out[k] = path(static_cast<double>(k) / static_cast<double>(n));
    return out;
}

std::vector<Complex> doubled_path(const Involution& T, const std::vector<Complex>& path) {
    std::vector<Complex> out = path;
    // T(path[0]) = path.back() is already present.
    for (std::size_t k = 1; k < path.size(); ++k) out.push_back(T(path[k]));
    return out;
}

}  // namespace frontlab::maxface
