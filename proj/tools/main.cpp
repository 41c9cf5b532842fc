// mcwc: wrench feasibility analysis for multi-contact configurations.

#include "mcwc/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace mcwc;

int emit(const cli::CommandResult &res, const std::string &csv_path) {
  std::cout << cli::dump(res.report) << '\n';
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) {
      std::cerr << "error: cannot write " << csv_path << '\n';
      return cli::kInputError;
    }
    out << res.csv;
  }
  if (res.report.contains("error"))
    std::cerr << res.report["error"].get<std::string>() << '\n';
  return res.exit_code;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Contact wrench feasibility and wrench constraint matrices"};
  app.require_subcommand(1);

  cli::CommonOptions common;
  std::string csv_path;
  app.add_flag("--parallel-shortcut", common.parallel_shortcut,
               "Skip the dual-cone LP when all contact normals coincide");
  app.add_option("--csv", csv_path, "Write the timing/timeline table here");

  std::string scene_path;
  std::string accel_text, ldot_text, delta_text;
  int reps = 100;
  std::uint64_t seed = 1;
  cli::ShiftOptions shift_opts;

  auto *analyze = app.add_subcommand("analyze", "Classify a scene and print "
                                                "its WCM");
  analyze->add_option("scene", scene_path)->required();

  auto *check = app.add_subcommand("check", "Is a CoM motion feasible?");
  check->add_option("scene", scene_path)->required();
  check->add_option("--accel", accel_text, "CoM acceleration x,y,z")
      ->required();
  check->add_option("--ldot", ldot_text,
                    "Angular momentum rate x,y,z (omit to leave it free)");

  auto *shift = app.add_subcommand("shift", "Shift the WCM to a moved CoM");
  shift->add_option("scene", scene_path)->required();
  shift->add_option("--delta", delta_text, "CoM displacement x,y,z")
      ->required();
  shift->add_option("--samples", shift_opts.samples,
                    "Wrenches compared between shifted and rebuilt WCM");
  shift->add_option("--reps", shift_opts.reps, "Timed repetitions");
  shift->add_option("--seed", shift_opts.seed);

  auto *scenario = app.add_subcommand("scenario", "Run a phased scenario");
  scenario->add_option("file", scene_path)->required();

  auto *bench = app.add_subcommand("bench", "Time classify/build/shift");
  bench->add_option("scene", scene_path)->required();
  bench->add_option("--reps", reps)->required();
  bench->add_option("--seed", seed);

  for (auto *sub : {analyze, check, shift, scenario, bench})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInputError;
  }

  try {
    if (*scenario)
      return emit(cli::cmd_scenario(io::load_scenario(scene_path), common),
                  csv_path);
    const io::Scene scene = io::load_scene(scene_path);
    if (*analyze)
      return emit(cli::cmd_analyze(scene, common), csv_path);
    if (*check) {
      std::optional<Vec3> ldot;
      if (!ldot_text.empty())
        ldot = io::parse_triple(ldot_text, "--ldot");
      return emit(cli::cmd_check(scene, io::parse_triple(accel_text, "--accel"),
                                 ldot, common),
                  csv_path);
    }
    if (*shift)
      return emit(cli::cmd_shift(scene, io::parse_triple(delta_text, "--delta"),
                                 shift_opts, common),
                  csv_path);
    if (*bench)
      return emit(cli::cmd_bench(scene, reps, seed, common), csv_path);
  } catch (const io::InputError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kInputError;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kInputError;
  }
  return cli::kInputError;
}
