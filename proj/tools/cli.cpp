#include "cli.hpp"

#include <CLI11.hpp>

#include "commands.hpp"
#include "frontlab/version.hpp"

namespace frontlab::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Linear Weingarten fronts, CMC-1 faces and maxfaces: construction, verification and export",
                 "frontlab"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;
    std::size_t grid = 0;
    std::string deltas;

    using Command = void (*)(const SceneConfig&, Report&);
    const std::vector<std::tuple<const char*, const char*, Command>> table = {
        {"analyze", "sample the front, check the representation and Weingarten relation, classify singularities", cmd_analyze},
        {"render", "write the surface mesh and singular-curve overlay as OBJ", cmd_render},
        {"parallel", "parallel-front sweep, CMC-1 parallel and zig-zag certificate", cmd_parallel},
        {"gaussmaps", "compare the two formulas for G_* and its holomorphicity", cmd_gaussmaps},
        {"face", "CMC-1 face suite in de Sitter space", cmd_face},
        {"maxface", "maxface suite in R^3_1", cmd_maxface},
        {"verify", "run every check that applies to the scene", cmd_verify},
    };
    std::vector<std::pair<CLI::App*, Command>> subs;
    for (const auto& [name, help, fn] : table) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "scene JSON file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the scene)");
        sub->add_option("--grid", grid, "grid resolution N (N x N nodes)");
        sub->add_option("--delta", deltas, "comma-separated parallel distances");
        subs.emplace_back(sub, fn);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "frontlab: " << e.what() << '\n';
        return kExitConfigError;
    }

    Report report;
    try {
        Overrides ov;
        if (!out_dir.empty()) ov.out = out_dir;
        if (grid != 0) ov.grid = grid;
        if (!deltas.empty()) ov.deltas = parse_number_list(deltas);
        const SceneConfig scene = load_scene(config, ov);
        for (const auto& [sub, fn] : subs) {
            if (!sub->parsed()) continue;
            out << "frontlab " << kVersion << " " << sub->get_name() << " " << scene.name << " ("
                << to_string(scene.kind) << ")\n";
            fn(scene, report);
        }
    } catch (const ConfigError& e) {
        err << "frontlab: config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const ParseError& e) {
        err << "frontlab: parse error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const Error& e) {
        report.print(out);
        err << "frontlab: error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
    report.print(out);
    const bool ok = report.passed();
    out << (ok ? "all checks passed" : "some checks FAILED") << '\n';
    return ok ? kExitOk : kExitVerificationFailed;
}

}  // namespace frontlab::cli
