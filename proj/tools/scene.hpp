#pragma once

// Scene files: JSON descriptions of one surface plus the sampling and
// verification parameters the subcommands need.

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "frontlab/errors.hpp"
#include "frontlab/maxface.hpp"
#include "frontlab/weingarten.hpp"

namespace frontlab::cli {

using Complex = std::complex<double>;

/// Invalid scene; `field` is the JSON path of the offending entry.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : Error(field + ": " + what), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class Kind { Weingarten, CMC1Face, Maxface };

const char* to_string(Kind k);

struct LoopSpec {
    Complex center;
    double radius = 0.0;
    std::size_t samples = 256;
};

struct PathSpec {
    std::string expr;  // in the variable t, t in [0, 1]
    std::size_t samples = 1000;
};

struct SceneConfig {
    std::string name = "scene";
    Kind kind = Kind::Weingarten;
    std::string G, h;  // weingarten, cmc1face
    std::optional<double> epsilon;
    std::optional<double> a, b;
    std::string g, omega;  // maxface
    weingarten::Rect domain;
    std::size_t grid_u = 100, grid_v = 100;
    std::vector<double> deltas;
    std::optional<LoopSpec> loop;
    std::optional<PathSpec> path;
    std::optional<maxface::Involution> involution;
    std::optional<Complex> basepoint;
    std::filesystem::path out = ".";
};

struct Overrides {
    std::optional<std::filesystem::path> out;
    std::optional<std::size_t> grid;
    std::optional<std::vector<double>> deltas;
};

/// Validates the JSON and the owning module's preconditions (expressions
/// parse, coefficients admissible, domain non-empty) before any evaluation.
SceneConfig parse_scene(const nlohmann::json& j, const std::string& default_name = "scene");

SceneConfig load_scene(const std::filesystem::path& path, const Overrides& overrides = {});

/// Comma-separated list of numbers, as accepted by --delta.
std::vector<double> parse_number_list(const std::string& text);

weingarten::WeingartenData weingarten_data(const SceneConfig& s);
maxface::MaxfaceData maxface_data(const SceneConfig& s);

}  // namespace frontlab::cli
