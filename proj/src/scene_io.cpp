#include "mcwc/scene_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mcwc::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string field(const std::string &where, const std::string &name) {
  return where.empty() ? name : where + "." + name;
}

const json &require(const json &j, const std::string &where,
                    const std::string &name) {
  if (!j.is_object())
    throw InputError((where.empty() ? std::string("scene") : where) +
                     " must be a JSON object");
  auto it = j.find(name);
  if (it == j.end())
    throw InputError(field(where, name) + " is missing");
  return *it;
}

double number(const json &j, const std::string &what) {
  if (!j.is_number())
    throw InputError(what + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x))
    throw InputError(what + " must be finite");
  return x;
}

template <int N>
Eigen::Matrix<double, N, 1> array(const json &j, const std::string &what) {
  if (!j.is_array() || j.size() != N)
    throw InputError(what + " must be an array of " + std::to_string(N) +
                     " numbers");
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i)
    v(i) = number(j[i], what + "[" + std::to_string(i) + "]");
  return v;
}

Contact parse_contact(const json &j, const std::string &where) {
  const Vec3 point = array<3>(require(j, where, "point"), field(where, "point"));
  const bool has_normal = j.contains("normal");
  const bool has_rotation = j.contains("rotation");
  if (has_normal == has_rotation)
    throw InputError(where + " needs exactly one of normal or rotation");

  Mat3 R;
  if (has_normal) {
    const Vec3 n = array<3>(j["normal"], field(where, "normal"));
    if (n.norm() <= 1e-12)
      throw InputError(field(where, "normal") + " must be non-zero");
    R = rotation_from_normal(n);
  } else {
    const auto flat = array<9>(j["rotation"], field(where, "rotation"));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        R(r, c) = flat(3 * r + c);
  }

  const double mu = number(require(j, where, "mu"), field(where, "mu"));
  if (mu < 0.)
    throw InputError(field(where, "mu") + " must be non-negative");
  const json &sides_j = require(j, where, "sides");
  if (!sides_j.is_number_integer())
    throw InputError(field(where, "sides") + " must be an integer");
  const int sides = sides_j.get<int>();
  if (sides < 3)
    throw InputError(field(where, "sides") + " must be at least 3");

  try {
    return Contact(point, R, FrictionConeSpec(mu, sides));
  } catch (const InvalidArgument &e) {
    throw InputError(field(where, "rotation") + ": " + e.what());
  }
}

json read_json(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

} // namespace

Vec3 parse_triple(const std::string &text, const std::string &what) {
  std::stringstream ss(text);
  std::string item;
  std::vector<double> vals;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size() && item.find_first_not_of(" \t", used) !=
                                     std::string::npos)
        throw InputError(what + " must be three comma-separated numbers");
    } catch (const std::logic_error &) {
      throw InputError(what + " must be three comma-separated numbers");
    }
  }
  if (vals.size() != 3 || !std::isfinite(vals[0]) || !std::isfinite(vals[1]) ||
      !std::isfinite(vals[2]))
    throw InputError(what + " must be three comma-separated numbers");
  return Vec3(vals[0], vals[1], vals[2]);
}

json to_json(const Vec3 &v) { return json::array({v.x(), v.y(), v.z()}); }

Scene parse_scene(const json &j, const std::string &where) {
  Scene s;
  const double mass = number(require(j, where, "mass"), field(where, "mass"));
  if (!(mass > 0.))
    throw InputError(field(where, "mass") + " must be positive");
  const Vec3 g = array<3>(require(j, where, "gravity"), field(where, "gravity"));
  s.body = RigidBodyParams(mass, g);
  s.com = array<3>(require(j, where, "com"), field(where, "com"));

  const json &cj = require(j, where, "contacts");
  if (!cj.is_array() || cj.empty())
    throw InputError(field(where, "contacts") +
                     " must be a non-empty array");
  std::vector<Contact> contacts;
  for (std::size_t i = 0; i < cj.size(); ++i)
    contacts.push_back(
        parse_contact(cj[i], field(where, "contacts[" + std::to_string(i) + "]")));
  s.config = ContactConfiguration(std::move(contacts));
  return s;
}

json scene_to_json(const Scene &scene) {
  json contacts = json::array();
  for (const auto &c : scene.config.contacts()) {
    json rot = json::array();
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 3; ++col)
        rot.push_back(c.rotation(r, col));
    contacts.push_back({{"point", to_json(c.point)},
                        {"rotation", rot},
                        {"mu", c.cone.mu},
                        {"sides", c.cone.sides}});
  }
  return {{"mass", scene.body.mass},
          {"gravity", to_json(scene.body.gravity)},
          {"com", to_json(scene.com)},
          {"contacts", contacts}};
}

Scene load_scene(const fs::path &path) { return parse_scene(read_json(path)); }

void save_scene(const Scene &scene, const fs::path &path) {
  std::ofstream out(path);
  if (!out)
    throw InputError("cannot write " + path.string());
  out << scene_to_json(scene).dump(2) << '\n';
}

Scenario parse_scenario(const json &j, const fs::path &base_dir) {
  Scenario sc;
  const json &pj = require(j, "", "phases");
  if (!pj.is_array() || pj.empty())
    throw InputError("phases must be a non-empty array");
  for (std::size_t p = 0; p < pj.size(); ++p) {
    const std::string where = "phases[" + std::to_string(p) + "]";
    const json &ph = pj[p];
    Phase phase;
    const json &name = require(ph, where, "name");
    if (!name.is_string())
      throw InputError(field(where, "name") + " must be a string");
    phase.name = name.get<std::string>();

    const json &scene = require(ph, where, "scene");
    if (scene.is_string()) {
      const fs::path ref = base_dir / scene.get<std::string>();
      try {
        phase.scene = parse_scene(read_json(ref), field(where, "scene"));
      } catch (const InputError &e) {
        throw InputError(std::string(e.what()) + " (in " + ref.string() + ")");
      }
    } else {
      phase.scene = parse_scene(scene, field(where, "scene"));
    }

    const json &traj = require(ph, where, "com_trajectory");
    if (!traj.is_array())
      throw InputError(field(where, "com_trajectory") + " must be an array");
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const std::string w =
          field(where, "com_trajectory[" + std::to_string(k) + "]");
      TrajectorySample s;
      s.t = number(require(traj[k], w, "t"), field(w, "t"));
      s.com = array<3>(require(traj[k], w, "com"), field(w, "com"));
      s.accel = array<3>(require(traj[k], w, "accel"), field(w, "accel"));
      if (traj[k].contains("l_dot"))
        s.l_dot = array<3>(traj[k]["l_dot"], field(w, "l_dot"));
      if (!phase.trajectory.empty() && !(s.t > phase.trajectory.back().t))
        throw InputError(field(w, "t") + " must be strictly increasing");
      phase.trajectory.push_back(s);
    }
    sc.phases.push_back(std::move(phase));
  }
  return sc;
}

Scenario load_scenario(const fs::path &path) {
  return parse_scenario(read_json(path), path.parent_path());
}

} // namespace mcwc::io
