#include "frontlab/mesh.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "frontlab/version.hpp"

namespace frontlab::mesh {

Grid::Grid(Rect r, std::size_t nu_, std::size_t nv_) : rect(r), nu(nu_), nv(nv_) {
    if (nu < 2 || nv < 2) throw PreconditionError("grid needs at least 2 x 2 nodes");
    if (!(rect.u1 > rect.u0) || !(rect.v1 > rect.v0)) throw PreconditionError("empty domain");
}

Complex Grid::node(std::size_t i, std::size_t j) const {
    // Endpoints are hit exactly so that neighbouring grids share nodes.
    const double u = i + 1 == nu ? rect.u1 : rect.u0 + du() * static_cast<double>(i);
    const double v = j + 1 == nv ? rect.v1 : rect.v0 + dv() * static_cast<double>(j);
    return {u, v};
}

GridField<weingarten::FrontSample> sample_grid(const weingarten::WeingartenData& d, const Grid& grid) {
    return sample(grid, [&](Complex z) { return weingarten::sample_point(d, z); });
}

GridField<double> scalar_field(const Grid& grid, const std::function<double(Complex)>& f) {
    return sample(grid, [&](Complex z) {
        const double v = f(z);
        if (!std::isfinite(v)) throw DegenerateMetric("non-finite field value");
        return v;
    });
}

Complex newton_refine(const std::function<double(Complex)>& f, Complex z, int steps, double step_size) {
    for (int k = 0; k < steps; ++k) {
        try {
            const double v = f(z);
            if (v == 0.0) break;
            const double h = 1e-6 * std::max(1.0, std::abs(z));
            const double gu = (f(z + h) - f(z - h)) / (2 * h);
            const double gv = (f(z + Complex(0, h)) - f(z - Complex(0, h))) / (2 * h);
            const double g2 = gu * gu + gv * gv;
            if (g2 == 0.0) break;
            const Complex next = z - Complex(gu, gv) * (v / g2);
            // A step longer than a cell means Newton left the basin.
            if (std::abs(next - z) > step_size) break;
            z = next;
        } catch (const Error&) {
            break;
        }
    }
    return z;
}

namespace {

bool positive(double v) { return v > 0.0; }

}  // namespace

Extraction extract_singular_curves(const GridField<double>& field, const std::function<double(Complex)>& refine,
                                   int newton_steps) {
    const Grid& g = field.grid;
    const std::size_t nh = (g.nu - 1) * g.nv;
    const std::size_t total = nh + g.nu * (g.nv - 1);
    auto hedge = [&](std::size_t i, std::size_t j) { return j * (g.nu - 1) + i; };
    auto vedge = [&](std::size_t i, std::size_t j) { return nh + j * g.nu + i; };
    auto value = [&](std::size_t i, std::size_t j) { return *field.nodes[g.index(i, j)]; };

    std::vector<std::vector<std::size_t>> links(total);
    std::vector<Complex> crossing(total);
    std::vector<std::uint8_t> has_crossing(total, 0);

    auto mark = [&](std::size_t id, std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
        if (has_crossing[id]) return;
        const double a = value(i0, j0), b = value(i1, j1);
        const double t = a / (a - b);
        crossing[id] = g.node(i0, j0) + t * (g.node(i1, j1) - g.node(i0, j0));
        has_crossing[id] = 1;
    };
    auto link = [&](std::size_t p, std::size_t q) {
        links[p].push_back(q);
        links[q].push_back(p);
    };

    Extraction out;
    for (std::size_t j = 0; j + 1 < g.nv; ++j) {
        for (std::size_t i = 0; i + 1 < g.nu; ++i) {
            if (field.cell_masked(i, j)) continue;
            const bool s00 = positive(value(i, j)), s10 = positive(value(i + 1, j));
            const bool s11 = positive(value(i + 1, j + 1)), s01 = positive(value(i, j + 1));
            const std::size_t bottom = hedge(i, j), top = hedge(i, j + 1);
            const std::size_t left = vedge(i, j), right = vedge(i + 1, j);
            std::vector<std::size_t> cut;
            if (s00 != s10) { mark(bottom, i, j, i + 1, j); cut.push_back(bottom); }
            if (s10 != s11) { mark(right, i + 1, j, i + 1, j + 1); cut.push_back(right); }
            if (s11 != s01) { mark(top, i, j + 1, i + 1, j + 1); cut.push_back(top); }
            if (s01 != s00) { mark(left, i, j, i, j + 1); cut.push_back(left); }
            if (cut.size() == 2) {
                link(cut[0], cut[1]);
            } else if (cut.size() == 4) {
                ++out.ambiguous_cells;
                double mid = 0.25 * (value(i, j) + value(i + 1, j) + value(i + 1, j + 1) + value(i, j + 1));
                if (refine) {
                    try {
                        mid = refine(0.25 * (g.node(i, j) + g.node(i + 1, j) + g.node(i + 1, j + 1) + g.node(i, j + 1)));
                    } catch (const Error&) {
                    }
                }
                // Centre joined to the lower-left corner: cut off the other two corners.
                if (positive(mid) == s00) {
                    link(bottom, right);
                    link(top, left);
                } else {
                    link(bottom, left);
                    link(right, top);
                }
            }
        }
    }

    const double cell = std::hypot(g.du(), g.dv());
    std::vector<std::uint8_t> visited(total, 0);
    auto walk = [&](std::size_t start) {
        SingularCurve curve;
        std::size_t cur = start;
        while (true) {
            visited[cur] = 1;
            curve.points.push_back(crossing[cur]);
            std::size_t next = total;
            for (std::size_t n : links[cur])
                if (!visited[n]) {
                    next = n;
                    break;
                }
            if (next == total) break;
            cur = next;
        }
        if (curve.points.size() > 2)
            for (std::size_t n : links[cur])
                if (n == start) curve.closed = true;
        if (refine)
            for (Complex& p : curve.points) p = newton_refine(refine, p, newton_steps, cell);
        out.curves.push_back(std::move(curve));
    };
    for (std::size_t id = 0; id < total; ++id)
        if (!visited[id] && links[id].size() == 1) walk(id);
    for (std::size_t id = 0; id < total; ++id)
        if (!visited[id] && !links[id].empty()) walk(id);
    return out;
}

double curve_length(const SingularCurve& curve) {
    double len = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) len += std::abs(curve.points[k] - curve.points[k - 1]);
    if (curve.closed && curve.points.size() > 1) len += std::abs(curve.points.front() - curve.points.back());
    return len;
}

// ------------------------------------------------------------ meshes

Vec3d ball_position(const Vec4d& f) {
    // Large x0 loses relative precision in the membership check; the
    // projection itself is well conditioned.
    return f[0] > 0.0 ? Vec3d(f.tail<3>() / (1.0 + f[0])) : Vec3d(-f.tail<3>() / (1.0 - f[0]));
}

Mesh build_mesh(const GridField<MeshNode>& nodes, std::vector<std::string> attribute_names, bool split_on_singular) {
    const Grid& g = nodes.grid;
    Mesh mesh;
    mesh.attribute_names = std::move(attribute_names);
    std::vector<int> index(g.nu * g.nv, -1);
    auto vertex = [&](std::size_t i, std::size_t j) {
        const std::size_t k = g.index(i, j);
        if (index[k] < 0) {
            const MeshNode& n = *nodes.nodes[k];
            index[k] = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back(n.position);
            mesh.parameters.push_back(g.node(i, j));
            mesh.sheets.push_back(n.sheet);
            mesh.attributes.push_back(n.attributes);
        }
        return index[k];
    };
    for (std::size_t j = 0; j + 1 < g.nv; ++j) {
        for (std::size_t i = 0; i + 1 < g.nu; ++i) {
            if (nodes.cell_masked(i, j)) continue;
            if (split_on_singular) {
                const MeshNode* c[4] = {&*nodes.nodes[g.index(i, j)], &*nodes.nodes[g.index(i + 1, j)],
                                        &*nodes.nodes[g.index(i + 1, j + 1)], &*nodes.nodes[g.index(i, j + 1)]};
                bool split = false;
                for (const MeshNode* n : c)
                    split = split || n->sheet != c[0]->sheet || (n->field > 0.0) != (c[0]->field > 0.0);
                if (split) continue;
            }
            const int a = vertex(i, j), b = vertex(i + 1, j), c = vertex(i + 1, j + 1), d = vertex(i, j + 1);
            mesh.triangles.push_back({a, b, c});
            mesh.triangles.push_back({a, c, d});
        }
    }
    return mesh;
}

// ------------------------------------------------------------ export

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";  // folds -0
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string render(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) return format_double(*d);
    if (const long long* n = std::get_if<long long>(&c)) return std::to_string(*n);
    return std::get<std::string>(c);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

std::string banner() { return std::string("# frontlab ") + kVersion + "\n"; }

void append_vertex(std::ostringstream& os, const Vec3d& p) {
    os << "v " << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]) << '\n';
}

}  // namespace

void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<Cell>>& rows) {
    std::ostringstream os;
    os << banner();
    for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << render(row[k]);
        os << '\n';
    }
    write_file(path, os.str());
}

void export_csv(const std::vector<Record>& records, const std::filesystem::path& path) {
    std::vector<std::vector<Cell>> rows;
    rows.reserve(records.size());
    for (const Record& r : records)
        rows.push_back({r.z.real(), r.z.imag(), r.H, r.K, r.Phi, r.Delta, r.cls});
    write_table(path, {"z_re", "z_im", "H", "K", "Phi", "Delta", "class"}, rows);
}

void export_obj(const Mesh& mesh, const std::filesystem::path& path) {
    std::ostringstream os;
    os << banner();
    os << "o surface\n";
    for (const Vec3d& v : mesh.vertices) append_vertex(os, v);
    for (const auto& t : mesh.triangles) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    std::size_t base = mesh.vertices.size();
    for (const Polyline& c : mesh.curves) {
        if (c.points.empty()) continue;
        os << "o " << c.name << '\n';
        for (const Vec3d& p : c.points) append_vertex(os, p);
        os << 'l';
        for (std::size_t k = 0; k < c.points.size(); ++k) os << ' ' << base + k + 1;
        if (c.closed) os << ' ' << base + 1;
        os << '\n';
        base += c.points.size();
    }
    write_file(path, os.str());
}

void export_vertex_attributes(const Mesh& mesh, const std::filesystem::path& path) {
    std::vector<std::string> header{"index", "z_re", "z_im", "x", "y", "z", "sheet"};
    header.insert(header.end(), mesh.attribute_names.begin(), mesh.attribute_names.end());
    std::vector<std::vector<Cell>> rows;
    rows.reserve(mesh.vertices.size());
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
        const Vec3d& v = mesh.vertices[k];
        std::vector<Cell> row{static_cast<long long>(k + 1), mesh.parameters[k].real(), mesh.parameters[k].imag(),
                              v[0], v[1], v[2], static_cast<long long>(mesh.sheets[k])};
        for (double a : mesh.attributes[k]) row.emplace_back(a);
        rows.push_back(std::move(row));
    }
    write_table(path, header, rows);
}

}  // namespace frontlab::mesh
