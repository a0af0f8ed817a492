#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "frontlab/desitter.hpp"
#include "frontlab/mesh.hpp"
#include "oracles.hpp"

using namespace frontlab;
using namespace frontlab::mesh;
using holo::parse_expr;
using weingarten::WeingartenData;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("frontlab_test_mesh_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

double total_length(const Extraction& e) {
    double n = 0.0;
    for (const auto& c : e.curves) n += curve_length(c);
    return n;
}

desitter::CMC1FaceData fx2() {
    return desitter::CMC1FaceData(parse_expr("z + i*z^2"), parse_expr("z + z^3"), {-1.5, 1.5, -1.5, 1.5});
}

struct ThreadsEnv {
    explicit ThreadsEnv(const char* value) { setenv("FRONTLAB_THREADS", value, 1); }
    ~ThreadsEnv() { unsetenv("FRONTLAB_THREADS"); }
};

}  // namespace

TEST_CASE("grid geometry") {
    const Grid g({0.0, 1.0, -2.0, 2.0}, 2, 2);
    CHECK(g.cells() == 1);
    CHECK(g.node(0, 0) == Complex(0.0, -2.0));
    CHECK(g.node(1, 1) == Complex(1.0, 2.0));
    CHECK(g.du() == 1.0);
    CHECK(g.dv() == 4.0);
    const Grid h({-1.0, 1.0, -1.0, 1.0}, 5, 3);
    CHECK(h.node(4, 2) == Complex(1.0, 1.0));
    CHECK(h.index(4, 2) == 14);
    CHECK_THROWS_AS(Grid({0.0, 1.0, 0.0, 1.0}, 1, 4), PreconditionError);
    CHECK_THROWS_AS(Grid({1.0, 1.0, 0.0, 1.0}, 4, 4), PreconditionError);
}

TEST_CASE("poles mask the surrounding cells only") {
    const auto e = parse_expr("1/z");
    const Grid g({-1.0, 1.0, -1.0, 1.0}, 5, 5);
    const auto field = scalar_field(g, [&](Complex z) { return e(z).real(); });
    CHECK_FALSE(field.nodes[g.index(2, 2)].has_value());
    CHECK(field.masked_count() == 4);
    CHECK(field.cell_masked(1, 1));
    CHECK(field.cell_masked(2, 2));
    CHECK_FALSE(field.cell_masked(0, 0));
}

TEST_CASE("a mostly undefined field fails the grid") {
    const Grid g({-1.0, 1.0, -1.0, 1.0}, 10, 10);
    CHECK_THROWS_AS(scalar_field(g, [](Complex z) { return z.real() < 0.9 ? std::nan("") : 1.0; }), GridFailure);
}

TEST_CASE("FX1 samples cleanly on the unit square") {
    const auto d = WeingartenData::with_epsilon(parse_expr("z + i*z^2"), parse_expr("z + z^3"), 1.0);
    const auto field = sample_grid(d, Grid({-1.0, 1.0, -1.0, 1.0}, 100, 100));
    CHECK(field.unmasked_fraction() >= 0.95);
}

TEST_CASE("the exponential flat front has the singular line Re z = -ln 2") {
    const auto d = WeingartenData::with_epsilon(parse_expr("z"), parse_expr("exp(z)"), 0.0, {-2.0, 0.0, -1.0, 1.0});
    auto phi = [&](Complex z) { return weingarten::singular_function(d, z); };
    const auto e = extract_singular_curves(scalar_field(Grid(d.domain(), 100, 100), phi), phi);
    REQUIRE(e.curves.size() == 1);
    CHECK_FALSE(e.curves[0].closed);
    const double u0 = -std::log(2.0);
    for (Complex z : e.curves[0].points) CHECK(oracle::distance_to_vertical(z, u0) <= 1e-4);
    CHECK(curve_length(e.curves[0]) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("CMC-1 face singular set matches a radial bisection of |h| = 1") {
    const auto d = fx2();
    auto s = [&](Complex z) { return desitter::face_singular_function(d, z); };
    const auto e = extract_singular_curves(scalar_field(Grid(d.data().domain(), 100, 100), s), s);
    REQUIRE_FALSE(e.curves.empty());
    const auto& h = d.data().h();
    for (const auto& c : e.curves)
        for (Complex z : c.points) {
            const double r = std::abs(z), t = std::arg(z);
            auto radial = [&](double x) { return std::abs(h(std::polar(x, t))) - 1.0; };
            REQUIRE(radial(r - 0.02) * radial(r + 0.02) < 0.0);
            CHECK(std::abs(oracle::bisect(radial, r - 0.02, r + 0.02) - r) <= 1e-4);
        }
}

TEST_CASE("singular curve length is stable under refinement") {
    const auto d = fx2();
    auto s = [&](Complex z) { return desitter::face_singular_function(d, z); };
    const double coarse = total_length(extract_singular_curves(scalar_field(Grid(d.data().domain(), 100, 100), s), s));
    const double fine = total_length(extract_singular_curves(scalar_field(Grid(d.data().domain(), 200, 200), s), s));
    CHECK(coarse > 0.0);
    CHECK(std::abs(coarse - fine) <= 0.01 * fine);
}

TEST_CASE("saddle cells are resolved by the midpoint sign") {
    // Corners alternate in sign; the centre is positive, so the curves cut
    // off the two negative corners.
    const auto f = [](Complex z) { return z.real() * z.imag() + 0.1; };
    const auto e = extract_singular_curves(scalar_field(Grid({-1.0, 1.0, -1.0, 1.0}, 2, 2), f));
    CHECK(e.ambiguous_cells == 1);
    REQUIRE(e.curves.size() == 2);
    for (const auto& c : e.curves) {
        REQUIRE(c.points.size() == 2);
        for (Complex z : c.points) CHECK(z.real() * z.imag() < 0.0);
        CHECK(c.points[0].real() * c.points[1].real() > 0.0);  // both on the same side
    }
}

TEST_CASE("closed curves are detected") {
    const auto f = [](Complex z) { return std::norm(z) - 0.25; };
    const auto e = extract_singular_curves(scalar_field(Grid({-1.0, 1.0, -1.0, 1.0}, 41, 41), f), f);
    REQUIRE(e.curves.size() == 1);
    CHECK(e.curves[0].closed);
    for (Complex z : e.curves[0].points) CHECK(std::abs(std::abs(z) - 0.5) <= 1e-10);
    CHECK(curve_length(e.curves[0]) == doctest::Approx(M_PI).epsilon(1e-3));
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("CSV export with no records is header only") {
    const auto dir = scratch_dir("csv");
    export_csv({}, dir / "empty.csv");
    CHECK(slurp(dir / "empty.csv") == "# frontlab 0.1.0\nz_re,z_im,H,K,Phi,Delta,class\n");
    export_csv({Record{{0.5, -0.25}, 1.0, 0.0, 2.0, std::nan(""), "regular"}}, dir / "one.csv");
    CHECK(slurp(dir / "one.csv") == "# frontlab 0.1.0\nz_re,z_im,H,K,Phi,Delta,class\n0.5,-0.25,1,0,2,nan,regular\n");
    CHECK_THROWS_AS(export_csv({}, dir / "missing" / "x.csv"), IoError);
}

TEST_CASE("OBJ export re-parses to the same mesh") {
    const Grid g({-1.0, 1.0, -1.0, 1.0}, 6, 5);
    const auto nodes = sample(g, [](Complex z) {
        MeshNode n;
        n.position = Vec3d(z.real(), z.imag(), z.real() * z.imag());
        n.field = z.real() - 0.1;
        n.attributes = {std::abs(z)};
        return n;
    });
    Mesh m = build_mesh(nodes, {"r"}, true);
    // 5 x 4 cells, one column straddles the field's zero and stays open.
    CHECK(m.vertices.size() == 30);
    CHECK(m.triangles.size() == 2 * 4 * 4);
    m.curves.push_back(Polyline{"ring", {Vec3d(0, 0, 0), Vec3d(1, 0, 0), Vec3d(0, 1, 0)}, true});

    const auto dir = scratch_dir("obj");
    export_obj(m, dir / "m.obj");
    std::ifstream in(dir / "m.obj");
    std::string line;
    std::size_t v = 0, f = 0, l = 0;
    std::vector<std::string> objects;
    while (std::getline(in, line)) {
        std::istringstream s(line);
        std::string tag;
        s >> tag;
        if (tag == "v") {
            double x, y, z;
            REQUIRE(static_cast<bool>(s >> x >> y >> z));
            ++v;
        } else if (tag == "f") {
            int a, b, c;
            REQUIRE(static_cast<bool>(s >> a >> b >> c));
            CHECK((a >= 1 && b >= 1 && c >= 1));
            ++f;
        } else if (tag == "l") {
            std::vector<int> idx;
            for (int k; s >> k;) idx.push_back(k);
            CHECK(idx.size() == 4);
            CHECK(idx.front() == idx.back());
            ++l;
        } else if (tag == "o") {
            std::string name;
            s >> name;
            objects.push_back(name);
        }
    }
    CHECK(v == 33);
    CHECK(f == m.triangles.size());
    CHECK(l == 1);
    CHECK(objects == std::vector<std::string>{"surface", "ring"});

    export_vertex_attributes(m, dir / "m.csv");
    const std::string csv = slurp(dir / "m.csv");
    CHECK(csv.find("index,z_re,z_im,x,y,z,sheet,r\n") != std::string::npos);
}

TEST_CASE("results do not depend on the thread count") {
    const auto d = WeingartenData::with_epsilon(parse_expr("z + i*z^2"), parse_expr("z + z^3"), -1.0,
                                                {-1.5, 1.5, -1.5, 1.5});
    auto run = [&](const char* threads) {
        const ThreadsEnv env(threads);
        CHECK(thread_count() == static_cast<unsigned>(std::atoi(threads)));
        const auto field = sample_grid(d, Grid(d.domain(), 60, 60));
        std::vector<Record> rows;
        for (const auto& n : field.nodes)
            if (n) rows.push_back(Record{n->z, n->H, n->K, n->sing, 0.0, "x"});
        const auto dir = scratch_dir(std::string("threads") + threads);
        export_csv(rows, dir / "out.csv");
        return slurp(dir / "out.csv");
    };
    const std::string one = run("1");
    CHECK(one == run("4"));
    CHECK(one == run("7"));
}
