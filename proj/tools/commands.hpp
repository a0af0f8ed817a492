#pragma once

#include "report.hpp"
#include "scene.hpp"

namespace frontlab::cli {

void cmd_analyze(const SceneConfig& s, Report& r);
void cmd_render(const SceneConfig& s, Report& r);
void cmd_parallel(const SceneConfig& s, Report& r);
void cmd_gaussmaps(const SceneConfig& s, Report& r);
void cmd_face(const SceneConfig& s, Report& r);
void cmd_maxface(const SceneConfig& s, Report& r);
/// The full invariant suite for the scene's surface kind.
void cmd_verify(const SceneConfig& s, Report& r);

}  // namespace frontlab::cli
