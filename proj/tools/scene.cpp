#include "scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "frontlab/holo.hpp"

namespace frontlab::cli {

using nlohmann::json;

const char* to_string(Kind k) {
    switch (k) {
        case Kind::Weingarten: return "weingarten";
        case Kind::CMC1Face: return "cmc1face";
        case Kind::Maxface: return "maxface";
    }
    return "?";
}

namespace {

double number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(field, "expected a finite number");
    return v;
}

Complex complex_value(const json& j, const std::string& field) {
    if (j.is_number()) return {number(j, field), 0.0};
    if (j.is_array() && j.size() == 2) return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
    throw ConfigError(field, "expected a number or [re, im]");
}

std::size_t count(const json& j, const std::string& field, std::size_t minimum) {
    if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(minimum))
        throw ConfigError(field, "expected an integer >= " + std::to_string(minimum));
    return j.get<std::size_t>();
}

std::string expression(const json& parent, const char* key, const std::string& field, const char* var = "z") {
    if (!parent.contains(key)) throw ConfigError(field, "missing");
    const json& j = parent.at(key);
    if (!j.is_string()) throw ConfigError(field, "expected an expression string");
    const std::string src = j.get<std::string>();
    try {
        holo::parse_expr(src, var);
    } catch (const ParseError& e) {
        throw ConfigError(field, e.what());
    }
    return src;
}

std::pair<double, double> interval(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(field, "expected [lo, hi]");
    const double lo = number(j[0], field + "[0]"), hi = number(j[1], field + "[1]");
    if (!(hi > lo)) throw ConfigError(field, "empty interval");
    return {lo, hi};
}

const std::vector<std::string> kKnownKeys = {"name", "kind", "G", "h", "epsilon", "a", "b", "g", "omega",
                                             "domain", "grid", "deltas", "loop", "path", "involution",
                                             "basepoint", "out"};

}  // namespace

SceneConfig parse_scene(const json& j, const std::string& default_name) {
    if (!j.is_object()) throw ConfigError("scene", "expected a JSON object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const auto& k : kKnownKeys) known = known || item.key() == k;
        if (!known) throw ConfigError("scene." + item.key(), "unknown field");
    }
    SceneConfig s;
    s.name = default_name;
    if (j.contains("name")) {
        if (!j["name"].is_string() || j["name"].get<std::string>().empty())
            throw ConfigError("scene.name", "expected a non-empty string");
        s.name = j["name"].get<std::string>();
    }
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("scene.kind", "missing");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "weingarten") s.kind = Kind::Weingarten;
    else if (kind == "cmc1face") s.kind = Kind::CMC1Face;
    else if (kind == "maxface") s.kind = Kind::Maxface;
    else throw ConfigError("scene.kind", "expected weingarten, cmc1face or maxface");

    if (s.kind == Kind::Maxface) {
        s.g = expression(j, "g", "scene.g");
        s.omega = expression(j, "omega", "scene.omega");
    } else {
        s.G = expression(j, "G", "scene.G");
        s.h = expression(j, "h", "scene.h");
        if (j.contains("epsilon")) s.epsilon = number(j["epsilon"], "scene.epsilon");
        if (j.contains("a") != j.contains("b")) throw ConfigError("scene.a", "a and b must be given together");
        if (j.contains("a")) {
            s.a = number(j["a"], "scene.a");
            s.b = number(j["b"], "scene.b");
        }
        if (s.epsilon && s.a) throw ConfigError("scene.epsilon", "give either epsilon or (a, b), not both");
        if (s.kind == Kind::CMC1Face) {
            if (s.a) throw ConfigError("scene.a", "CMC-1 faces are fixed by eps = -1");
            if (s.epsilon && *s.epsilon != -1.0) throw ConfigError("scene.epsilon", "CMC-1 faces need eps = -1");
            s.epsilon = -1.0;
        } else if (!s.epsilon && !s.a) {
            throw ConfigError("scene.epsilon", "missing (or give a and b)");
        }
    }

    if (!j.contains("domain")) throw ConfigError("scene.domain", "missing");
    const json& dom = j["domain"];
    if (!dom.is_object() || !dom.contains("u") || !dom.contains("v"))
        throw ConfigError("scene.domain", "expected {\"u\": [lo, hi], \"v\": [lo, hi]}");
    std::tie(s.domain.u0, s.domain.u1) = interval(dom["u"], "scene.domain.u");
    std::tie(s.domain.v0, s.domain.v1) = interval(dom["v"], "scene.domain.v");

    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (g.is_array() && g.size() == 2) {
            s.grid_u = count(g[0], "scene.grid[0]", 2);
            s.grid_v = count(g[1], "scene.grid[1]", 2);
        } else {
            s.grid_u = s.grid_v = count(g, "scene.grid", 2);
        }
    }
    if (j.contains("deltas")) {
        if (!j["deltas"].is_array()) throw ConfigError("scene.deltas", "expected an array of numbers");
        for (std::size_t k = 0; k < j["deltas"].size(); ++k)
            s.deltas.push_back(number(j["deltas"][k], "scene.deltas[" + std::to_string(k) + "]"));
    }
    if (j.contains("loop")) {
        const json& l = j["loop"];
        if (!l.is_object() || !l.contains("center") || !l.contains("radius"))
            throw ConfigError("scene.loop", "expected {\"center\", \"radius\"[, \"samples\"]}");
        LoopSpec loop;
        loop.center = complex_value(l["center"], "scene.loop.center");
        loop.radius = number(l["radius"], "scene.loop.radius");
        if (!(loop.radius > 0.0)) throw ConfigError("scene.loop.radius", "must be positive");
        if (l.contains("samples")) loop.samples = count(l["samples"], "scene.loop.samples", 8);
        s.loop = loop;
    }
    if (j.contains("path")) {
        const json& p = j["path"];
        if (!p.is_object()) throw ConfigError("scene.path", "expected {\"expr\"[, \"samples\"]}");
        PathSpec path;
        path.expr = expression(p, "expr", "scene.path.expr", "t");
        if (p.contains("samples")) path.samples = count(p["samples"], "scene.path.samples", 2);
        s.path = path;
    }
    if (j.contains("involution")) {
        const json& t = j["involution"];
        if (!t.is_object()) throw ConfigError("scene.involution", "expected {\"a\", \"b\", \"c\", \"d\"[, \"conjugate\"]}");
        maxface::Involution inv;
        Complex* slots[] = {&inv.a, &inv.b, &inv.c, &inv.d};
        const char* keys[] = {"a", "b", "c", "d"};
        for (int k = 0; k < 4; ++k) {
            const std::string field = std::string("scene.involution.") + keys[k];
            if (!t.contains(keys[k])) throw ConfigError(field, "missing");
            *slots[k] = complex_value(t[keys[k]], field);
        }
        if (t.contains("conjugate")) {
            if (!t["conjugate"].is_boolean()) throw ConfigError("scene.involution.conjugate", "expected a boolean");
            inv.conjugate = t["conjugate"].get<bool>();
        }
        s.involution = inv;
    }
    if (j.contains("basepoint")) s.basepoint = complex_value(j["basepoint"], "scene.basepoint");
    if (j.contains("out")) {
        if (!j["out"].is_string()) throw ConfigError("scene.out", "expected a directory path");
        s.out = j["out"].get<std::string>();
    }

    // Module preconditions, checked before any sampling.
    try {
        if (s.kind == Kind::Maxface) maxface_data(s);
        else weingarten_data(s);
    } catch (const PreconditionError& e) {
        throw ConfigError(s.kind == Kind::Maxface ? "scene.g" : "scene", e.what());
    }
    return s;
}

SceneConfig load_scene(const std::filesystem::path& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot read scene file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string(), std::string("JSON parse error: ") + e.what());
    }
    SceneConfig s = parse_scene(j, path.stem().string());
    if (!j.contains("out")) s.out = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
    if (overrides.out) s.out = *overrides.out;
    if (overrides.grid) {
        if (*overrides.grid < 2) throw ConfigError("--grid", "expected an integer >= 2");
        s.grid_u = s.grid_v = *overrides.grid;
    }
    if (overrides.deltas) s.deltas = *overrides.deltas;
    return s;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("--delta", "not a number: '" + item + "'");
        }
        if (used != item.size() || !std::isfinite(v)) throw ConfigError("--delta", "not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("--delta", "empty list");
    return out;
}

weingarten::WeingartenData weingarten_data(const SceneConfig& s) {
    auto G = holo::parse_expr(s.G);
    auto h = holo::parse_expr(s.h);
    if (s.a) return weingarten::WeingartenData::with_coefficients(G, h, *s.a, *s.b, s.domain);
    return weingarten::WeingartenData::with_epsilon(G, h, *s.epsilon, s.domain);
}

maxface::MaxfaceData maxface_data(const SceneConfig& s) {
    return maxface::MaxfaceData(holo::parse_expr(s.g), holo::parse_expr(s.omega), s.domain, s.involution);
}

}  // namespace frontlab::cli
