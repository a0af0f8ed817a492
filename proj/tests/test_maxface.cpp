#include <doctest.h>

#include <cmath>

#include "frontlab/differential.hpp"
#include "frontlab/maxface.hpp"

using namespace frontlab;
using namespace frontlab::maxface;
using holo::parse_expr;
using lorentz::inner;

namespace {

MaxfaceData catenoid() { return MaxfaceData(parse_expr("z"), parse_expr("1/z^2"), {0.5, 2.0, -0.7, 0.7}); }

MaxfaceData mobius() { return MaxfaceData(parse_expr("z^2"), parse_expr("1/z^3"), {0.3, 2.0, -0.6, 0.6}, Involution{}); }

/// Closed form of the catenoid integral from the basepoint 1.
Vec3d catenoid_closed(Complex z) {
    return {-2.0 * std::log(std::abs(z)), (z - 1.0 / z).real(), (z + 1.0 / z).imag()};
}

const Complex kProbes[] = {{0.6, 0.3}, {1.5, -0.5}, {1.0, 0.6}, {1.9, 0.1}, {0.8, -0.65}};

}  // namespace

TEST_CASE("catenoid integral matches the closed form") {
    const auto d = catenoid();
    for (Complex z : kProbes) CHECK((maxface_point(d, z, 1.0) - catenoid_closed(z)).norm() <= 1e-12);
}

TEST_CASE("tangents, conformality and the normal") {
    for (const auto& d : {catenoid(), mobius()}) {
        auto f = [&](Complex w) { return maxface_point(d, w, 1.0); };
        for (Complex z : kProbes) {
            const auto [fu, fv] = maxface_tangents(d, z);
            const auto [gu, gv] = differential::partials(f, z, 1e-3);
            const double scale = std::max(1.0, fu.norm());
            CHECK((fu - gu).norm() <= 1e-8 * scale);
            CHECK((fv - gv).norm() <= 1e-8 * scale);
            const double lambda = metric_factor(d, z);
            CHECK(std::abs(inner<double>(fu, fu) - lambda) <= 1e-12 * std::max(1.0, lambda));
            CHECK(std::abs(inner<double>(fv, fv) - lambda) <= 1e-12 * std::max(1.0, lambda));
            CHECK(std::abs(inner<double>(fu, fv)) <= 1e-12 * std::max(1.0, lambda));
            const Vec3d n = lorentz_normal(d, z);
            CHECK(std::abs(n.norm() - 1.0) <= 1e-15);
            CHECK(std::abs(inner<double>(n, gu)) <= 1e-8 * scale);
            CHECK(std::abs(inner<double>(n, gv)) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("normal at g = 0 and on |g| = 1") {
    const auto d = MaxfaceData(parse_expr("z"), parse_expr("1"));
    CHECK((lorentz_normal(d, 0.0) - Vec3d(1, 0, 0)).norm() == 0.0);
    for (double t : {0.0, 1.0, 2.5}) {
        const Complex z = std::polar(1.0, t);
        const Vec3d n = lorentz_normal(d, z);
        CHECK(std::abs(inner(n, n)) <= 1e-15);
        CHECK(metric_factor(d, z) <= 1e-28);
    }
}

TEST_CASE("constant g gives a planar image") {
    const auto d = MaxfaceData(parse_expr("0.5"), parse_expr("1 + z"));
    const Vec3d p0 = maxface_point(d, 0.0, 0.0);
    const Vec3d a = maxface_point(d, {0.7, 0.1}, 0.0) - p0;
    const Vec3d b = maxface_point(d, {-0.2, 0.9}, 0.0) - p0;
    const Vec3d c = maxface_point(d, {0.4, -0.6}, 0.0) - p0;
    CHECK(std::abs(a.cross(b).dot(c)) <= 1e-12);
    CHECK(a.cross(b).norm() > 1e-2);
}

TEST_CASE("invalid data") {
    CHECK_THROWS_AS(MaxfaceData(parse_expr("i"), parse_expr("1")), PreconditionError);
    CHECK_THROWS_AS(MaxfaceData(parse_expr("z"), parse_expr("0")), PreconditionError);
    CHECK_THROWS_AS(MaxfaceData(parse_expr("z"), parse_expr("1"), {}, Involution{1.0, 2.0, 1.0, 2.0, true}),
                    PreconditionError);
}

TEST_CASE("path through a pole") {
    CHECK_THROWS_AS(maxface_point(catenoid(), -1.0, 1.0), PoleOnPath);
    CHECK_THROWS_AS(maxface_point(catenoid(), Complex(-1.0, 1e-9), 1.0), PoleOnPath);
}

TEST_CASE("involutions") {
    const Involution T;
    CHECK(std::abs(T(Complex(2.0, 1.0)) + 1.0 / Complex(2.0, -1.0)) <= 1e-15);
    const Involution holo_map{1.0, 1.0, 0.0, 1.0, false};
    CHECK(std::abs(holo_map(Complex(2.0, 1.0)) - Complex(3.0, 1.0)) <= 1e-15);
    const auto d = mobius();
    for (Complex z : kProbes) CHECK(involution_residual(d, T, z) <= 1e-13);
    CHECK(involution_residual(catenoid(), T, Complex(1.2, 0.3)) > 0.1);
}

TEST_CASE("parity of singular crossings") {
    const auto d = mobius();
    const Involution T;
    const auto path = sample_path(parse_expr("(2 - 1.5*t)*exp(i*pi*t)", "t"), 1000);
    REQUIRE(path.size() == 1001);
    CHECK(std::abs(path.back() - T(path.front())) <= 1e-12);
    const LoopParity p = loop_singular_parity(d, T, path);
    CHECK(p.crossings == 1);
    CHECK(p.odd);
    CHECK(count_unit_crossings(d, doubled_path(T, path)) == 2);

    const auto unrelated = sample_path(parse_expr("2 - 1.5*t", "t"), 100);
    CHECK_THROWS_AS(loop_singular_parity(d, T, unrelated), PreconditionError);
    CHECK_THROWS_AS(loop_singular_parity(catenoid(), T, path), PreconditionError);
}

TEST_CASE("paths tangent to the singular set are not generic") {
    const auto d = mobius();
    const auto along = sample_path(parse_expr("exp(i*pi*t)", "t"), 200);
    CHECK_THROWS_AS(count_unit_crossings(d, along), NonGenericPath);
}
