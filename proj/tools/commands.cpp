#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "frontlab/desitter.hpp"
#include "frontlab/differential.hpp"
#include "frontlab/maxface.hpp"
#include "frontlab/mesh.hpp"
#include "frontlab/weingarten.hpp"

namespace frontlab::cli {

namespace {

namespace fs = std::filesystem;
namespace wg = weingarten;
using lorentz::inner;
using lorentz::Vec3d;
using lorentz::Vec4d;
using mesh::format_double;
using mesh::GridField;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Points where I is this close to degenerate are excluded from curvature checks.
constexpr double kConditioning = 1e-6;

// Step for finite-difference fundamental forms (Richardson, O(step^4)).
constexpr double kFormStep = 2.5e-4;

mesh::Grid grid_of(const SceneConfig& s) { return mesh::Grid(s.domain, s.grid_u, s.grid_v); }

fs::path output(const SceneConfig& s, const std::string& suffix) {
    std::error_code ec;
    fs::create_directories(s.out, ec);
    if (ec) throw IoError("cannot create output directory " + s.out.string() + ": " + ec.message());
    return s.out / (s.name + "_" + suffix);
}

template <typename T, typename Fn>
double max_over(const GridField<T>& f, Fn fn) {
    double m = 0.0;
    for (const auto& n : f.nodes) {
        if (!n) continue;
        const double v = fn(*n);
        if (std::isnan(v)) continue;
        m = std::max(m, v);
    }
    return m;
}

template <typename T, typename Fn>
double min_over(const GridField<T>& f, Fn fn) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& n : f.nodes) {
        if (!n) continue;
        const double v = fn(*n);
        if (!std::isnan(v)) m = std::min(m, v);
    }
    return m;
}

template <typename T, typename Fn>
auto map_field(const GridField<T>& f, Fn fn) {
    using R = std::decay_t<std::invoke_result_t<Fn, const T&>>;
    GridField<R> out;
    out.grid = f.grid;
    out.masked = f.masked;
    out.nodes.resize(f.nodes.size());
    for (std::size_t k = 0; k < f.nodes.size(); ++k)
        if (f.nodes[k]) out.nodes[k] = fn(*f.nodes[k]);
    return out;
}

template <typename T>
std::size_t evaluated(const GridField<T>& f) {
    return static_cast<std::size_t>(std::count_if(f.nodes.begin(), f.nodes.end(), [](const auto& n) { return n.has_value(); }));
}

template <typename T>
void grid_info(Report& r, const GridField<T>& f) {
    std::ostringstream os;
    os << f.grid.nu << "x" << f.grid.nv << " nodes, " << evaluated(f) << " evaluated, "
       << f.masked_count() << " of " << f.grid.cells() << " cells masked";
    r.info("grid", os.str());
}

double rel(double value, double scale) { return value / std::max(1.0, scale); }

// Unit vector along the finite-difference gradient of f at z.
Complex gradient_direction(const std::function<double(Complex)>& f, Complex z) {
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    const Complex g((f(z + h) - f(z - h)) / (2 * h), (f(z + Complex(0, h)) - f(z - Complex(0, h))) / (2 * h));
    if (std::abs(g) == 0.0) throw SingularSetError("vanishing gradient on the singular curve");
    return g / std::abs(g);
}

// ------------------------------------------------------------ Weingarten fronts

struct FrontNode {
    wg::FrontSample s;
    double det_frame = 0, det_A = 0, det_B = 0;
    double hyperboloid = 0, de_sitter = 0, f_nu = 0, nu_df = 0;
    double structure = 0;
    double residual = kNaN;  // NaN off the well-conditioned regular set
};

FrontNode front_node(const wg::WeingartenData& d, Complex z) {
    FrontNode n;
    n.s = wg::sample_point(d, z);
    const Complex h = d.h()(z);
    n.det_frame = std::abs(wg::build_frame(d, z).determinant() - 1.0);
    n.det_A = std::abs(wg::front_matrix(d.epsilon(), h).determinant() - 1.0);
    n.det_B = std::abs(wg::normal_matrix(d.epsilon(), h).determinant() + 1.0);
    const Vec4d& f = n.s.f;
    const Vec4d& nu = n.s.nu;
    n.hyperboloid = rel(std::abs(inner<double>(f, f) + 1.0), f.squaredNorm());
    n.de_sitter = rel(std::abs(inner<double>(nu, nu) - 1.0), nu.squaredNorm());
    n.f_nu = rel(std::abs(inner<double>(f, nu)), f.norm() * nu.norm());
    const auto [fu, fv] = differential::partials([&](Complex w) { return wg::build_front(d, w).f; }, z, 1e-4);
    const double scale = nu.norm() * std::max(fu.norm(), fv.norm());
    n.nu_df = std::max(std::abs(inner<double>(nu, fu)), std::abs(inner<double>(nu, fv))) / scale;
    n.structure = wg::frame_structure_residual(d, z);
    const auto& I = n.s.forms.I;
    if (std::isfinite(n.s.H) && I.determinant() >= kConditioning * I.trace() * I.trace())
        n.residual = std::abs(d.a() * (n.s.H - 1.0) + d.b() * n.s.K);
    return n;
}

struct SingularAnalysis {
    mesh::Extraction extraction;
    std::vector<std::optional<wg::CurveClassification>> classes;
};

SingularAnalysis singular_analysis(const wg::WeingartenData& d, const GridField<double>& phi, Report& r) {
    SingularAnalysis out;
    const std::function<double(Complex)> field = [&](Complex z) { return wg::singular_function(d, z); };
    out.extraction = mesh::extract_singular_curves(phi, field);
    const auto& curves = out.extraction.curves;
    std::size_t vertices = 0;
    double worst = 0.0;
    for (const auto& c : curves) {
        vertices += c.points.size();
        for (Complex z : c.points) {
            try {
                worst = std::max(worst, std::abs(wg::singular_function(d, z)) / (1.0 + wg::sigma_hat(d, z)));
            } catch (const Error&) {
                worst = kNaN;
            }
        }
    }
    r.info("singular curves", std::to_string(curves.size()) + " curve(s), " + std::to_string(vertices) +
                                  " vertices, " + std::to_string(out.extraction.ambiguous_cells) + " saddle cell(s)");
    if (vertices > 0) r.at_most("singular vertices refined onto Phi = 0 (relative)", worst, 1e-6);

    if (d.epsilon() == 1.0) {
        bool refused = false;
        try {
            const std::vector<Complex> probe{Complex(d.domain().u0, d.domain().v0)};
            wg::classify_curve(d, wg::CurveView{probe, false});
        } catch (const CMC1Unsupported&) {
            refused = true;
        }
        r.expect("classification refused for eps = 1 (CMC1Unsupported)", refused);
        out.classes.resize(curves.size());
        return out;
    }

    std::size_t counts[3] = {0, 0, 0};
    std::size_t swallowtails = 0, failures = 0;
    for (const auto& c : curves) {
        try {
            out.classes.push_back(wg::classify_curve(d, wg::CurveView{c.points, c.closed}));
            for (const auto& v : out.classes.back()->vertices) ++counts[static_cast<int>(v.kind)];
            swallowtails += out.classes.back()->swallowtails.size();
        } catch (const Error& e) {
            out.classes.emplace_back();
            ++failures;
            r.info("classification error", e.what());
        }
    }
    if (vertices > 0) {
        std::ostringstream os;
        os << counts[0] << " cuspidal_edge, " << counts[2] << " degenerate_or_unknown vertices; " << swallowtails
           << " swallowtail(s) between vertices";
        r.info("classification", os.str());
        r.expect("every singular curve classified", failures == 0, std::to_string(failures) + " failure(s)");
    }
    return out;
}

struct FrontAnalysis {
    GridField<FrontNode> nodes;
    SingularAnalysis singular;
};

FrontAnalysis analyze_front(const SceneConfig& s, const wg::WeingartenData& d, Report& r) {
    FrontAnalysis a;
    a.nodes = mesh::sample(grid_of(s), [&](Complex z) { return front_node(d, z); });
    grid_info(r, a.nodes);
    r.info("coefficients", "eps = " + format_double(d.epsilon()) + ", a = " + format_double(d.a()) +
                               ", b = " + format_double(d.b()));
    const auto& N = a.nodes;
    r.at_most("det frame = 1", max_over(N, [](const FrontNode& n) { return n.det_frame; }), 1e-9);
    r.at_most("det A = 1", max_over(N, [](const FrontNode& n) { return n.det_A; }), 1e-9);
    r.at_most("det B = -1", max_over(N, [](const FrontNode& n) { return n.det_B; }), 1e-9);
    r.at_most("f on a hyperboloid sheet (relative)", max_over(N, [](const FrontNode& n) { return n.hyperboloid; }), 1e-9);
    r.at_most("nu in de Sitter space (relative)", max_over(N, [](const FrontNode& n) { return n.de_sitter; }), 1e-9);
    r.at_most("<f, nu> = 0 (relative)", max_over(N, [](const FrontNode& n) { return n.f_nu; }), 1e-9);
    r.at_most("<nu, df> = 0 by finite differences (relative)", max_over(N, [](const FrontNode& n) { return n.nu_df; }), 1e-6);
    r.at_most("frame structure equation (relative)", max_over(N, [](const FrontNode& n) { return n.structure; }), 1e-4);
    r.at_most("Weingarten relation |a(H-1) + bK| at regular points",
              max_over(N, [](const FrontNode& n) { return n.residual; }), 1e-5);
    std::size_t plus = 0, minus = 0;
    for (const auto& n : N.nodes)
        if (n) ++(n->s.sheet == wg::Sheet::H3Plus ? plus : minus);
    r.info("sheets", std::to_string(plus) + " node(s) on H3+, " + std::to_string(minus) + " on H3-");

    a.singular = singular_analysis(d, map_field(N, [](const FrontNode& n) { return n.s.sing; }), r);
    return a;
}

void write_front_csv(const SceneConfig& s, const wg::WeingartenData& d, const FrontAnalysis& a) {
    std::vector<mesh::Record> records;
    const auto& g = a.nodes.grid;
    for (std::size_t j = 0; j < g.nv; ++j)
        for (std::size_t i = 0; i < g.nu; ++i) {
            const auto& n = a.nodes.nodes[g.index(i, j)];
            if (!n) {
                records.push_back({g.node(i, j), kNaN, kNaN, kNaN, kNaN, "masked"});
                continue;
            }
            const bool singular = std::abs(n->s.sing) <= 1e-7 * (1.0 + n->s.sigma_hat);
            records.push_back({g.node(i, j), n->s.H, n->s.K, n->s.sing, kNaN, singular ? "singular" : "regular"});
        }
    const auto& curves = a.singular.extraction.curves;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& cls = a.singular.classes[c];
        for (std::size_t k = 0; k < curves[c].points.size(); ++k) {
            const Complex z = curves[c].points[k];
            double phi = kNaN;
            try {
                phi = wg::singular_function(d, z);
            } catch (const Error&) {
            }
            if (cls)
                records.push_back({z, kNaN, kNaN, phi, cls->vertices[k].delta, wg::to_string(cls->vertices[k].kind)});
            else
                records.push_back({z, kNaN, kNaN, phi, kNaN, d.epsilon() == 1.0 ? "cmc1_unsupported" : "unclassified"});
        }
        if (cls)
            for (const auto& st : cls->swallowtails) records.push_back({st.z, kNaN, kNaN, 0.0, 0.0, "swallowtail"});
    }
    mesh::export_csv(records, output(s, "analyze.csv"));
}

// ------------------------------------------------------------ parallels

void parallel_suite(const SceneConfig& s, const wg::WeingartenData& d, Report& r) {
    const mesh::Grid grid = grid_of(s);
    // A coarse sub-grid for the finite-difference curvature checks.
    const std::size_t stride_u = std::max<std::size_t>(1, grid.nu / 20), stride_v = std::max<std::size_t>(1, grid.nv / 20);
    std::vector<Complex> probes;
    for (std::size_t j = 0; j < grid.nv; j += stride_v)
        for (std::size_t i = 0; i < grid.nu; i += stride_u) probes.push_back(grid.node(i, j));

    std::vector<std::vector<mesh::Cell>> rows;
    auto sweep = [&](double delta, const std::string& tag) {
        const wg::ParallelParams pp = wg::parallel_params(d.a(), d.b(), delta);
        const wg::WeingartenData pd = wg::parallel_data(d, delta);
        const auto closed = mesh::sample(grid, [&](Complex z) {
            const wg::FrontSample p = wg::sample_point(pd, z);
            const Vec4d direct = wg::parallel_front(d, z, delta).f;
            const auto& I = p.forms.I;
            double res = kNaN;
            if (std::isfinite(p.H) && I.determinant() >= kConditioning * I.trace() * I.trace())
                res = std::abs(d.a() * (p.H - 1.0) + pp.b_delta * p.K);
            return std::make_pair(res, rel((p.f - direct).norm(), direct.norm()));
        });
        std::vector<double> geometric(probes.size(), kNaN);
        parallel_for(probes.size(), [&](std::size_t k) {
            try {
                const auto fmap = [&](Complex w) { return wg::parallel_front(d, w, delta).f; };
                const auto sf = differential::surface_forms(fmap, [&](Complex w) { return wg::parallel_front(d, w, delta).nu; },
                                                            probes[k], kFormStep);
                if (sf.first.determinant() < kConditioning * sf.first.trace() * sf.first.trace()) return;
                const wg::Curvatures c = wg::curvatures(sf.first, sf.second);
                geometric[k] = std::abs(d.a() * (c.H - 1.0) + pp.b_delta * c.K);
            } catch (const Error&) {
            }
        });
        double geo = 0.0;
        for (double g : geometric)
            if (!std::isnan(g)) geo = std::max(geo, g);
        const double res = max_over(closed, [](const auto& p) { return p.first; });
        const double mismatch = max_over(closed, [](const auto& p) { return p.second; });
        const std::string label = "delta = " + format_double(delta);
        r.at_most(label + ": |a(H-1) + b_delta K| (closed form)", res, 1e-5);
        r.at_most(label + ": |a(H-1) + b_delta K| (finite differences)", geo, 1e-5);
        r.at_most(label + ": parallel data reproduces cosh f + sinh nu", mismatch, 1e-9);
        rows.push_back({delta, pp.b_delta, res, geo, mismatch, tag});
    };

    for (double delta : s.deltas) sweep(delta, "");

    const double e = d.epsilon();
    if (e > 0.0) {
        const double ds = wg::cmc1_delta(d);
        const wg::ParallelParams pp = wg::parallel_params(d.a(), d.b(), ds);
        r.info("cmc1 delta", format_double(ds) + " (f_delta has H = 1)");
        r.at_most("b_delta = 0 at the CMC-1 parallel", std::abs(pp.b_delta), 1e-12 * std::max(1.0, std::abs(d.a())));
        const wg::WeingartenData pd = wg::parallel_data(d, ds);
        std::vector<double> err(probes.size(), kNaN);
        parallel_for(probes.size(), [&](std::size_t k) {
            try {
                const auto fmap = [&](Complex w) { return wg::parallel_front(d, w, ds).f; };
                const auto sf = differential::surface_forms(fmap, [&](Complex w) { return wg::parallel_front(d, w, ds).nu; },
                                                            probes[k], kFormStep);
                const double lambda = 4.0 * std::norm(wg::hopf_q(pd, probes[k])) / wg::sigma_hat(pd, probes[k]);
                err[k] = rel((sf.first - lambda * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), lambda);
            } catch (const Error&) {
            }
        });
        double worst = 0.0;
        for (double x : err)
            if (!std::isnan(x)) worst = std::max(worst, x);
        r.at_most("I = 4|Q|^2/dsigma^2 at the CMC-1 parallel (relative to max(1, 4|Q|^2/dsigma^2))", worst, 1e-8);
        sweep(ds, "cmc1");
    } else if (e < 0.0) {
        const double ds = wg::cmc1_delta(d);
        const wg::ParallelParams pp = wg::parallel_params(d.a(), d.b(), ds);
        r.info("cmc1 delta", format_double(ds) + " (nu_delta is CMC-1 in de Sitter space)");
        r.at_most("b_delta = -a at the de Sitter CMC-1 parallel", std::abs(pp.b_delta + d.a()),
                  1e-12 * std::max(1.0, std::abs(d.a())));
        sweep(ds, "cmc1_normal");
    }

    if (s.loop) {
        if (e != 0.0) {
            r.info("zig-zag certificate", "skipped: flat fronts only");
        } else {
            const auto loop = wg::circle_loop(s.loop->center, s.loop->radius, s.loop->samples);
            const wg::ZigzagCertificate cert = wg::zigzag_trivializing_delta(d, loop);
            r.info("zig-zag certificate", "delta = " + format_double(cert.delta) + ", c = " + format_double(cert.c));
            r.above("e^{-2 delta}|q/h_z^2| > 1 on the loop", cert.min_rho, 1.0);
            r.above("|Phi_delta| bounded away from 0 on the loop", cert.min_abs_phi, 1e-3);
            rows.push_back({cert.delta, wg::parallel_params(d.a(), d.b(), cert.delta).b_delta, kNaN, kNaN, kNaN,
                            std::string("zigzag")});
        }
    }
    mesh::write_table(output(s, "parallel.csv"),
                      {"delta", "b_delta", "residual_closed", "residual_fd", "front_mismatch", "tag"}, rows);
}

// ------------------------------------------------------------ Gauss maps

struct GaussNode {
    Complex G, Gstar;
    double match = kNaN, defect = kNaN, G_match = kNaN;
};

void gauss_suite(const SceneConfig& s, const wg::WeingartenData& d, Report& r) {
    const auto nodes = mesh::sample(grid_of(s), [&](Complex z) {
        GaussNode n;
        n.G = d.G()(z);
        const wg::FrontPoint p = wg::build_front(d, z);
        const auto gn = wg::gauss_G_numeric(p.f, p.nu);
        if (!gn.is_infinite()) n.G_match = std::abs(gn.value() - n.G) / (1.0 + std::abs(n.G));
        const auto ge = wg::gauss_Gstar_explicit(d, z);
        const auto gq = wg::gauss_Gstar_numeric(d, z);
        if (ge.is_infinite() || gq.is_infinite()) throw PoleSignal("G_*");
        n.Gstar = ge.value();
        n.match = std::abs(ge.value() - gq.value()) / (1.0 + std::abs(ge.value()));
        n.defect = wg::antiholo_defect_Gstar(d, z);
        return n;
    });
    grid_info(r, nodes);
    r.at_most("G from [f + nu] matches G (relative)", max_over(nodes, [](const GaussNode& n) { return n.G_match; }), 1e-8);
    r.at_most("G_* explicit formula vs q/s projection (relative)",
              max_over(nodes, [](const GaussNode& n) { return n.match; }), 1e-8);
    const double defect = max_over(nodes, [](const GaussNode& n) { return n.defect; });
    if (d.epsilon() == 0.0)
        r.at_most("G_* holomorphic (flat): max |dG_*/d conj z|", defect, 1e-6);
    else
        r.above("G_* not holomorphic (eps != 0): max |dG_*/d conj z|", defect, 1e-3);

    std::vector<std::vector<mesh::Cell>> rows;
    const auto& g = nodes.grid;
    for (std::size_t j = 0; j < g.nv; ++j)
        for (std::size_t i = 0; i < g.nu; ++i) {
            const auto& n = nodes.nodes[g.index(i, j)];
            const Complex z = g.node(i, j);
            if (!n)
                rows.push_back({z.real(), z.imag(), kNaN, kNaN, kNaN, kNaN, kNaN});
            else
                rows.push_back({z.real(), z.imag(), n->G.real(), n->G.imag(), n->Gstar.real(), n->Gstar.imag(), n->defect});
        }
    mesh::write_table(output(s, "gaussmaps.csv"), {"z_re", "z_im", "G_re", "G_im", "Gstar_re", "Gstar_im", "dbar_defect"},
                      rows);
}

// ------------------------------------------------------------ CMC-1 faces

struct FaceNode {
    Vec4d f, Psi;
    double field = 0;
    double det = 0, null = 0, face_vs_front = 0, lift_eq = 0;
    double r = 0, chart_den = 0, unit = 0;
    double orth = kNaN;
};

FaceNode face_node(const desitter::CMC1FaceData& fd, Complex z) {
    FaceNode n;
    const auto& d = fd.data();
    const lorentz::SL2d F = desitter::null_lift(fd, z);
    n.det = std::abs(F.determinant() - 1.0);
    const auto dF = desitter::lift_derivative(fd, z);
    n.null = std::abs(dF.determinant()) / std::max(1e-300, dF.squaredNorm());
    n.f = desitter::face_point(fd, z);
    n.face_vs_front = rel((n.f + wg::build_front(d, z).nu).norm(), n.f.norm());
    const wg::Jet j = d.jet(z);
    const desitter::LiftResiduals lr = desitter::lift_residuals(fd, z);
    const double scale = std::abs(j.q) * std::max(1.0 / std::abs(j.hz), 1.0 / std::abs(j.Gz)) *
                         std::max({1.0, std::norm(j.h), std::norm(j.G)});
    n.lift_eq = rel(std::max(lr.left, lr.right), scale);
    n.field = desitter::face_singular_function(fd, z);
    const desitter::ExtendedNormal en = desitter::extended_normal(fd, z);
    n.r = en.r;
    n.chart_den = en.chart_denominator;
    n.Psi = en.Psi;
    n.unit = std::abs(en.Psi.norm() - 1.0);
    if (std::abs(n.field) > 1e-3) {
        const auto [fu, fv] = differential::partials([&](Complex w) { return desitter::face_point(fd, w); }, z, 1e-4);
        n.orth = std::max(std::abs(inner<double>(en.Psi, fu)) / fu.norm(), std::abs(inner<double>(en.Psi, fv)) / fv.norm());
    }
    return n;
}

struct FaceAnalysis {
    GridField<FaceNode> nodes;
    mesh::Extraction curves;
};

FaceAnalysis face_suite(const SceneConfig& s, Report& r) {
    const desitter::CMC1FaceData fd(weingarten_data(s));
    FaceAnalysis a;
    a.nodes = mesh::sample(grid_of(s), [&](Complex z) { return face_node(fd, z); });
    const auto& N = a.nodes;
    grid_info(r, N);
    r.at_most("det F = 1", max_over(N, [](const FaceNode& n) { return n.det; }), 1e-8);
    r.at_most("null lift: det dF = 0 (relative)", max_over(N, [](const FaceNode& n) { return n.null; }), 1e-8);
    r.at_most("F e3 F* = -G B G* (relative)", max_over(N, [](const FaceNode& n) { return n.face_vs_front; }), 1e-9);
    r.at_most("F^{-1} dF and dF F^{-1} structure (relative)", max_over(N, [](const FaceNode& n) { return n.lift_eq; }), 1e-5);
    r.at_most("extended normal Psi is Euclidean-unit", max_over(N, [](const FaceNode& n) { return n.unit; }), 1e-12);
    r.at_most("Psi Lorentz-orthogonal to df at regular points", max_over(N, [](const FaceNode& n) { return n.orth; }), 1e-6);
    double min_r = min_over(N, [](const FaceNode& n) { return n.r; });
    double min_den = min_over(N, [](const FaceNode& n) { return n.chart_den; });

    const std::function<double(Complex)> field = [&](Complex z) { return desitter::face_singular_function(fd, z); };
    const auto values = map_field(N, [](const FaceNode& n) { return n.field; });
    a.curves = mesh::extract_singular_curves(values, field);
    const mesh::Extraction raw = mesh::extract_singular_curves(values);
    const double cell = std::hypot(N.grid.du(), N.grid.dv());
    double worst_field = 0.0, worst_offset = 0.0, worst_jump = 0.0;
    std::size_t vertices = 0, flips = 0;
    for (std::size_t c = 0; c < a.curves.curves.size(); ++c) {
        const auto& pts = a.curves.curves[c].points;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const Complex z = pts[k];
            ++vertices;
            worst_field = std::max(worst_field, std::abs(field(z)));
            worst_offset = std::max(worst_offset, std::abs(z - raw.curves[c].points[k]) / cell);
            const desitter::ExtendedNormal en = desitter::extended_normal(fd, z);
            min_r = std::min(min_r, en.r);
            min_den = std::min(min_den, en.chart_denominator);
            const Complex n = gradient_direction(field, z);
            const Complex zp = z + 1e-4 * n, zm = z - 1e-4 * n;
            worst_jump = std::max(worst_jump, (desitter::extended_normal(fd, zp).Psi - desitter::extended_normal(fd, zm).Psi).norm());
            if ((desitter::normal(fd, zp)[0] > 0.0) != (desitter::normal(fd, zm)[0] > 0.0)) ++flips;
        }
    }
    r.info("singular set |h| = 1", std::to_string(a.curves.curves.size()) + " curve(s), " + std::to_string(vertices) + " vertices");
    if (vertices > 0) {
        r.at_most("curve vertices on |h|^2 = 1", worst_field, 1e-6);
        r.at_most("refinement stays within one grid cell (cells)", worst_offset, 1.0);
        r.at_most("Psi continuous across |h| = 1 (offset 1e-4)", worst_jump, 1e-3);
        r.expect("nu changes sheet across |h| = 1", flips == vertices,
                 std::to_string(flips) + " of " + std::to_string(vertices) + " vertices");
    }
    r.above("denominator r > 0", min_r, 0.0);
    r.above("chart denominator > 0", min_den, 0.0);

    std::vector<std::vector<mesh::Cell>> rows;
    const auto& g = N.grid;
    for (std::size_t j = 0; j < g.nv; ++j)
        for (std::size_t i = 0; i < g.nu; ++i) {
            const Complex z = g.node(i, j);
            const auto& n = N.nodes[g.index(i, j)];
            std::vector<mesh::Cell> row{z.real(), z.imag()};
            for (int k = 0; k < 4; ++k) row.emplace_back(n ? n->f[k] : kNaN);
            for (int k = 0; k < 4; ++k) row.emplace_back(n ? n->Psi[k] : kNaN);
            row.emplace_back(n ? n->r : kNaN);
            row.emplace_back(n ? n->chart_den : kNaN);
            row.emplace_back(n ? n->field : kNaN);
            rows.push_back(std::move(row));
        }
    mesh::write_table(output(s, "face.csv"),
                      {"z_re", "z_im", "f0", "f1", "f2", "f3", "Psi0", "Psi1", "Psi2", "Psi3", "r", "chart_denominator",
                       "h2_minus_1"},
                      rows);
    return a;
}

// ------------------------------------------------------------ maxfaces

struct MaxNode {
    Vec3d f, nu;
    double field = 0, nn = 0;
    double conformal = kNaN, orth = kNaN, metric = kNaN;
    double involution = kNaN;
};

Complex basepoint_of(const SceneConfig& s) {
    if (s.basepoint) return *s.basepoint;
    return {0.5 * (s.domain.u0 + s.domain.u1), 0.5 * (s.domain.v0 + s.domain.v1)};
}

struct MaxAnalysis {
    GridField<MaxNode> nodes;
    mesh::Extraction curves;
};

MaxAnalysis maxface_suite(const SceneConfig& s, Report& r) {
    const maxface::MaxfaceData md = maxface_data(s);
    const Complex base = basepoint_of(s);
    MaxAnalysis a;
    a.nodes = mesh::sample(grid_of(s), [&](Complex z) {
        MaxNode n;
        n.f = maxface::maxface_point(md, z, base);
        n.nu = maxface::lorentz_normal(md, z);
        n.field = std::norm(md.g()(z)) - 1.0;
        n.nn = inner<double>(n.nu, n.nu);
        if (std::abs(n.field) > 1e-3) {
            const auto [fu, fv] = differential::partials([&](Complex w) { return maxface::maxface_point(md, w, base); }, z, 1e-3);
            const double E = inner<double>(fu, fu), F = inner<double>(fu, fv), G = inner<double>(fv, fv);
            n.conformal = std::max(std::abs(E - G), 2.0 * std::abs(F)) / (E + G);
            n.orth = std::max(std::abs(inner<double>(n.nu, fu)) / fu.norm(), std::abs(inner<double>(n.nu, fv)) / fv.norm());
            const double m = maxface::metric_factor(md, z);
            n.metric = std::abs(0.5 * (E + G) - m) / m;
        }
        if (md.involution()) {
            try {
                const maxface::Involution& T = *md.involution();
                n.involution = maxface::involution_residual(md, T, z) / (1.0 + std::abs(md.g()(T(z))));
            } catch (const PoleSignal&) {
            }
        }
        return n;
    });
    const auto& N = a.nodes;
    grid_info(r, N);
    r.info("basepoint", format_double(base.real()) + " + " + format_double(base.imag()) + "i");
    r.at_most("conformal: |E - G|, 2|F| relative to E + G", max_over(N, [](const MaxNode& n) { return n.conformal; }), 1e-5);
    r.at_most("nu Lorentz-orthogonal to df", max_over(N, [](const MaxNode& n) { return n.orth; }), 1e-5);
    r.at_most("metric (1 - |g|^2)^2 |omega|^2 (relative)", max_over(N, [](const MaxNode& n) { return n.metric; }), 1e-5);
    r.at_most("nu Euclidean-unit", max_over(N, [](const MaxNode& n) { return std::abs(n.nu.norm() - 1.0); }), 1e-12);
    const double worst_nn = max_over(N, [](const MaxNode& n) { return std::abs(n.field) > 1e-6 ? n.nn + 1.0 : kNaN; }) - 1.0;
    r.expect("<nu, nu> < 0 off |g| = 1", worst_nn < 0.0, "max " + format_double(worst_nn));

    const std::function<double(Complex)> field = [&](Complex z) { return std::norm(md.g()(z)) - 1.0; };
    a.curves = mesh::extract_singular_curves(map_field(N, [](const MaxNode& n) { return n.field; }), field);
    double worst = 0.0;
    std::size_t vertices = 0;
    for (const auto& c : a.curves.curves)
        for (Complex z : c.points) {
            ++vertices;
            const Vec3d nu = maxface::lorentz_normal(md, z);
            worst = std::max(worst, std::abs(inner<double>(nu, nu)));
        }
    r.info("singular set |g| = 1", std::to_string(a.curves.curves.size()) + " curve(s), " + std::to_string(vertices) + " vertices");
    if (vertices > 0) r.at_most("<nu, nu> = 0 on |g| = 1", worst, 1e-8);

    if (md.involution()) {
        const maxface::Involution& T = *md.involution();
        r.at_most("involution g o T = 1/conj(g) (relative)", max_over(N, [](const MaxNode& n) { return n.involution; }), 1e-9);
        if (s.path) {
            const auto path = maxface::sample_path(holo::parse_expr(s.path->expr, "t"), s.path->samples);
            try {
                const maxface::LoopParity lp = maxface::loop_singular_parity(md, T, path);
                r.expect("odd number of singular crossings on the path", lp.odd, std::to_string(lp.crossings) + " crossing(s)");
                const int doubled = maxface::count_unit_crossings(md, maxface::doubled_path(T, path));
                r.expect("even number of crossings on the doubled path", doubled % 2 == 0, std::to_string(doubled) + " crossing(s)");
            } catch (const Error& e) {
                r.expect("loop parity", false, e.what());
            }
        }
    } else if (s.path) {
        r.info("loop parity", "skipped: no involution given");
    }

    std::vector<std::vector<mesh::Cell>> rows;
    const auto& g = N.grid;
    for (std::size_t j = 0; j < g.nv; ++j)
        for (std::size_t i = 0; i < g.nu; ++i) {
            const Complex z = g.node(i, j);
            const auto& n = N.nodes[g.index(i, j)];
            std::vector<mesh::Cell> row{z.real(), z.imag()};
            for (int k = 0; k < 3; ++k) row.emplace_back(n ? n->f[k] : kNaN);
            for (int k = 0; k < 3; ++k) row.emplace_back(n ? n->nu[k] : kNaN);
            row.emplace_back(n ? n->field : kNaN);
            rows.push_back(std::move(row));
        }
    mesh::write_table(output(s, "maxface.csv"), {"z_re", "z_im", "f0", "f1", "f2", "nu0", "nu1", "nu2", "g2_minus_1"}, rows);
    return a;
}

void require(const SceneConfig& s, std::initializer_list<Kind> kinds, const char* command) {
    for (Kind k : kinds)
        if (s.kind == k) return;
    throw ConfigError("scene.kind", std::string("'") + to_string(s.kind) + "' scenes are not accepted by " + command);
}

mesh::Polyline polyline(const std::string& name, const mesh::SingularCurve& c,
                        const std::function<Vec3d(Complex)>& position) {
    mesh::Polyline p{name, {}, c.closed};
    for (Complex z : c.points) {
        try {
            p.points.push_back(position(z));
        } catch (const Error&) {
        }
    }
    return p;
}

}  // namespace

// ------------------------------------------------------------ commands

void cmd_analyze(const SceneConfig& s, Report& r) {
    require(s, {Kind::Weingarten, Kind::CMC1Face}, "analyze");
    const wg::WeingartenData d = weingarten_data(s);
    const FrontAnalysis a = analyze_front(s, d, r);
    write_front_csv(s, d, a);
}

void cmd_parallel(const SceneConfig& s, Report& r) {
    require(s, {Kind::Weingarten, Kind::CMC1Face}, "parallel");
    parallel_suite(s, weingarten_data(s), r);
}

void cmd_gaussmaps(const SceneConfig& s, Report& r) {
    require(s, {Kind::Weingarten, Kind::CMC1Face}, "gaussmaps");
    gauss_suite(s, weingarten_data(s), r);
}

void cmd_face(const SceneConfig& s, Report& r) {
    require(s, {Kind::CMC1Face}, "face");
    face_suite(s, r);
}

void cmd_maxface(const SceneConfig& s, Report& r) {
    require(s, {Kind::Maxface}, "maxface");
    maxface_suite(s, r);
}

void cmd_render(const SceneConfig& s, Report& r) {
    const mesh::Grid grid = grid_of(s);
    mesh::Mesh m;
    std::string suffix;
    if (s.kind == Kind::Weingarten) {
        const wg::WeingartenData d = weingarten_data(s);
        const auto nodes = mesh::sample(grid, [&](Complex z) {
            const wg::FrontSample p = wg::sample_point(d, z);
            return mesh::MeshNode{mesh::ball_position(p.f), p.sheet == wg::Sheet::H3Plus ? 1 : -1, p.sing, {p.H, p.K, p.sing}};
        });
        grid_info(r, nodes);
        m = mesh::build_mesh(nodes, {"H", "K", "Phi"}, true);
        const std::function<double(Complex)> field = [&](Complex z) { return wg::singular_function(d, z); };
        const auto ex = mesh::extract_singular_curves(map_field(nodes, [](const mesh::MeshNode& n) { return n.field; }), field);
        for (std::size_t c = 0; c < ex.curves.size(); ++c)
            m.curves.push_back(polyline("singular_" + std::to_string(c + 1), ex.curves[c],
                                        [&](Complex z) { return mesh::ball_position(wg::build_front(d, z).f); }));
        suffix = "front";
    } else if (s.kind == Kind::CMC1Face) {
        const desitter::CMC1FaceData fd(weingarten_data(s));
        const auto nodes = mesh::sample(grid, [&](Complex z) {
            const Vec4d f = desitter::face_point(fd, z);
            const desitter::ExtendedNormal en = desitter::extended_normal(fd, z);
            const double field = desitter::face_singular_function(fd, z);
            return mesh::MeshNode{Vec3d(f.tail<3>()), 0, field, {f[0], en.Psi[0], en.Psi[1], en.Psi[2], en.Psi[3], field}};
        });
        grid_info(r, nodes);
        m = mesh::build_mesh(nodes, {"x0", "Psi0", "Psi1", "Psi2", "Psi3", "h2_minus_1"}, true);
        const std::function<double(Complex)> field = [&](Complex z) { return desitter::face_singular_function(fd, z); };
        const auto ex = mesh::extract_singular_curves(map_field(nodes, [](const mesh::MeshNode& n) { return n.field; }), field);
        for (std::size_t c = 0; c < ex.curves.size(); ++c)
            m.curves.push_back(polyline("singular_" + std::to_string(c + 1), ex.curves[c],
                                        [&](Complex z) { return Vec3d(desitter::face_point(fd, z).tail<3>()); }));
        suffix = "face";
    } else {
        const maxface::MaxfaceData md = maxface_data(s);
        const Complex base = basepoint_of(s);
        const auto nodes = mesh::sample(grid, [&](Complex z) {
            const Vec3d nu = maxface::lorentz_normal(md, z);
            const double field = std::norm(md.g()(z)) - 1.0;
            return mesh::MeshNode{maxface::maxface_point(md, z, base), 0, field, {nu[0], nu[1], nu[2], field}};
        });
        grid_info(r, nodes);
        m = mesh::build_mesh(nodes, {"nu0", "nu1", "nu2", "g2_minus_1"}, true);
        const std::function<double(Complex)> field = [&](Complex z) { return std::norm(md.g()(z)) - 1.0; };
        const auto ex = mesh::extract_singular_curves(map_field(nodes, [](const mesh::MeshNode& n) { return n.field; }), field);
        for (std::size_t c = 0; c < ex.curves.size(); ++c)
            m.curves.push_back(polyline("singular_" + std::to_string(c + 1), ex.curves[c],
                                        [&](Complex z) { return maxface::maxface_point(md, z, base); }));
        suffix = "maxface";
    }
    const fs::path obj = output(s, suffix + ".obj");
    mesh::export_obj(m, obj);
    mesh::export_vertex_attributes(m, output(s, suffix + "_vertices.csv"));
    r.info("mesh", std::to_string(m.vertices.size()) + " vertices, " + std::to_string(m.triangles.size()) +
                       " triangles, " + std::to_string(m.curves.size()) + " curve object(s)");
    r.info("wrote", obj.string());
    r.expect("mesh has triangles", !m.triangles.empty());
}

void cmd_verify(const SceneConfig& s, Report& r) {
    switch (s.kind) {
        case Kind::Weingarten:
        case Kind::CMC1Face: {
            const wg::WeingartenData d = weingarten_data(s);
            const FrontAnalysis a = analyze_front(s, d, r);
            write_front_csv(s, d, a);
            gauss_suite(s, d, r);
            parallel_suite(s, d, r);
            if (s.kind == Kind::CMC1Face) face_suite(s, r);
            break;
        }
        case Kind::Maxface: maxface_suite(s, r); break;
    }
}

}  // namespace frontlab::cli
