#pragma once

// Grid sampling over a parameter rectangle, marching-squares extraction of
// zero sets, triangle meshes and the OBJ/CSV writers.

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "frontlab/errors.hpp"
#include "frontlab/parallel.hpp"
#include "frontlab/weingarten.hpp"

namespace frontlab::mesh {

using Complex = std::complex<double>;
using lorentz::Vec3d;
using lorentz::Vec4d;
using weingarten::Rect;

/// Masking more than this fraction of cells fails the whole grid.
inline constexpr double kMaxMaskedFraction = 0.9;

/// nu x nv nodes on a rectangle; cells are indexed by their lower-left node.
struct Grid {
    Rect rect;
    std::size_t nu = 2, nv = 2;

    Grid() = default;
    Grid(Rect r, std::size_t nu_, std::size_t nv_);

    Complex node(std::size_t i, std::size_t j) const;
    std::size_t index(std::size_t i, std::size_t j) const { return j * nu + i; }
    std::size_t cells() const { return (nu - 1) * (nv - 1); }
    double du() const { return (rect.u1 - rect.u0) / static_cast<double>(nu - 1); }
    double dv() const { return (rect.v1 - rect.v0) / static_cast<double>(nv - 1); }
};

/// Node values with failures left empty; a cell is masked when any corner is.
template <typename T>
struct GridField {
    Grid grid;
    std::vector<std::optional<T>> nodes;
    std::vector<std::uint8_t> masked;  // per cell

    bool cell_masked(std::size_t i, std::size_t j) const { return masked[j * (grid.nu - 1) + i] != 0; }
    std::size_t masked_count() const {
        std::size_t n = 0;
        for (auto m : masked) n += m;
        return n;
    }
    double unmasked_fraction() const {
        return grid.cells() == 0 ? 0.0 : 1.0 - static_cast<double>(masked_count()) / static_cast<double>(grid.cells());
    }
};

/// Recomputes the cell mask from node availability; throws GridFailure when
/// more than 90% of the cells are masked.
template <typename T>
void update_mask(GridField<T>& field) {
    const Grid& g = field.grid;
    field.masked.assign(g.cells(), 0);
    for (std::size_t j = 0; j + 1 < g.nv; ++j)
        for (std::size_t i = 0; i + 1 < g.nu; ++i) {
            const bool ok = field.nodes[g.index(i, j)] && field.nodes[g.index(i + 1, j)] &&
                            field.nodes[g.index(i, j + 1)] && field.nodes[g.index(i + 1, j + 1)];
            field.masked[j * (g.nu - 1) + i] = ok ? 0 : 1;
        }
    if (static_cast<double>(field.masked_count()) > kMaxMaskedFraction * static_cast<double>(g.cells()))
        throw GridFailure("more than 90% of the grid cells are masked (" + std::to_string(field.masked_count()) +
                          " of " + std::to_string(g.cells()) + ")");
}

/// Evaluates `eval` at every node in parallel. Library errors at a node
/// (poles, degenerate metric, ...) leave the node empty.
template <typename Eval>
auto sample(const Grid& grid, const Eval& eval) {
    using T = std::decay_t<std::invoke_result_t<const Eval&, Complex>>;
    GridField<T> field;
    field.grid = grid;
    field.nodes.resize(grid.nu * grid.nv);
    parallel_for(field.nodes.size(), [&](std::size_t k) {
        try {
            T value = eval(grid.node(k % grid.nu, k / grid.nu));
            field.nodes[k] = std::move(value);
        } catch (const Error&) {
        }
    });
    update_mask(field);
    return field;
}

/// FrontSample at every node.
GridField<weingarten::FrontSample> sample_grid(const weingarten::WeingartenData& d, const Grid& grid);

/// Values of a scalar function on the grid, masked where it is not finite.
GridField<double> scalar_field(const Grid& grid, const std::function<double(Complex)>& f);

struct SingularCurve {
    std::vector<Complex> points;
    bool closed = false;
    std::vector<std::string> labels;  // per vertex, filled by classification
};

struct Extraction {
    std::vector<SingularCurve> curves;
    std::size_t ambiguous_cells = 0;  // saddle cells resolved by the midpoint sign
};

/// Marching squares on the zero set of `field`, with sub-cell linear
/// interpolation. When `refine` is given, each vertex takes up to
/// `newton_steps` Newton steps along the finite-difference gradient of it.
Extraction extract_singular_curves(const GridField<double>& field,
                                   const std::function<double(Complex)>& refine = {}, int newton_steps = 3);

/// Newton projection of z onto {f = 0} along the gradient.
Complex newton_refine(const std::function<double(Complex)>& f, Complex z, int steps, double step_size);

double curve_length(const SingularCurve& curve);

// ------------------------------------------------------------ meshes

/// Ball-model position of a point of H^3_+ u H^3_- (the H^3_- sheet is
/// mapped through x -> -x).
Vec3d ball_position(const Vec4d& f);

struct MeshNode {
    Vec3d position;
    int sheet = 0;                 // tag; triangles never join different tags
    double field = 0.0;            // sign used for split-on-singular
    std::vector<double> attributes;
};

struct Polyline {
    std::string name;
    std::vector<Vec3d> points;
    bool closed = false;
};

struct Mesh {
    std::vector<std::string> attribute_names;
    std::vector<Vec3d> vertices;
    std::vector<Complex> parameters;
    std::vector<int> sheets;
    std::vector<std::vector<double>> attributes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Polyline> curves;
};

/// Two triangles per unmasked cell. With `split_on_singular`, cells whose
/// corners disagree in the sign of `field` or in sheet are left open.
Mesh build_mesh(const GridField<MeshNode>& nodes, std::vector<std::string> attribute_names, bool split_on_singular);

// ------------------------------------------------------------ export

using Cell = std::variant<double, long long, std::string>;

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_double(double x);

/// CSV with a "# frontlab <version>" first line, then the header and rows.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<Cell>>& rows);

struct Record {
    Complex z;
    double H = 0.0, K = 0.0, Phi = 0.0, Delta = 0.0;
    std::string cls;
};

/// Header z_re,z_im,H,K,Phi,Delta,class.
void export_csv(const std::vector<Record>& records, const std::filesystem::path& path);

/// ASCII OBJ: the surface as object "surface" and each curve as an "l" object.
void export_obj(const Mesh& mesh, const std::filesystem::path& path);

/// Per-vertex attributes of `mesh` as CSV (index, x, y, z, sheet, attributes...).
void export_vertex_attributes(const Mesh& mesh, const std::filesystem::path& path);

}  // namespace frontlab::mesh
