#pragma once

#include "mcwc/contact_model.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mcwc::io {

/// Unreadable or invalid input file; the message names the offending field.
class InputError : public Error {
public:
  using Error::Error;
};

struct Scene {
  RigidBodyParams body;
  Vec3 com = Vec3::Zero();
  ContactConfiguration config;
};

struct TrajectorySample {
  double t = 0.;
  Vec3 com = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
  /// Absent means the angular momentum rate is left free.
  std::optional<Vec3> l_dot;
};

struct Phase {
  std::string name;
  Scene scene;
  std::vector<TrajectorySample> trajectory;
};

struct Scenario {
  std::vector<Phase> phases;
};

Scene parse_scene(const nlohmann::json &j, const std::string &where = "");
nlohmann::json scene_to_json(const Scene &scene);
Scene load_scene(const std::filesystem::path &path);
void save_scene(const Scene &scene, const std::filesystem::path &path);

/// Phases may embed a scene object or name a scene file relative to the
/// scenario file.
Scenario parse_scenario(const nlohmann::json &j,
                        const std::filesystem::path &base_dir);
Scenario load_scenario(const std::filesystem::path &path);

/// "x,y,z" -> vector.
Vec3 parse_triple(const std::string &text, const std::string &what);

nlohmann::json to_json(const Vec3 &v);

} // namespace mcwc::io
