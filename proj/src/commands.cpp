#include "mcwc/commands.hpp"

#include "mcwc/feasibility.hpp"
#include "mcwc/oracle.hpp"
#include "mcwc/timing.hpp"
#include "mcwc/wcm.hpp"

#include <random>
#include <sstream>

namespace mcwc::cli {

using nlohmann::json;
using io::to_json;

namespace {

std::string verdict_name(const Classification &cls) {
  return cls.constrained() ? "constrained" : "unconstrained";
}

json wcm_json(const WrenchConstraintMatrix &w) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < w.rows.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < 6; ++c)
      row.push_back(w.rows(r, c));
    rows.push_back(row);
  }
  return {{"anchor", to_json(w.anchor)},
          {"num_rows", w.rows.rows()},
          {"num_facets", w.num_facets},
          {"affine_dim", w.affine_dim},
          {"rows", rows}};
}

json wrench_json(const Wrench &w) {
  return {{"force", to_json(w.force)},
          {"moment", to_json(w.moment)},
          {"about", to_json(w.about)}};
}

ClassifyOptions classify_options(const CommonOptions &opts) {
  return {.parallel_shortcut = opts.parallel_shortcut};
}

json stats_json(const timing::Stats &s) {
  return {{"median_us", s.median}, {"mean_us", s.mean}, {"p95_us", s.p95},
          {"count", s.count}};
}

Vec3 random_delta(std::mt19937_64 &rng, double radius) {
  std::uniform_real_distribution<double> u(-1., 1.);
  Vec3 d;
  do {
    d = Vec3(u(rng), u(rng), u(rng));
  } while (d.norm() > 1.);
  return radius * d;
}

} // namespace

std::string dump(const json &report) { return report.dump(2); }

CommandResult cmd_analyze(const io::Scene &scene, const CommonOptions &opts) {
  const auto cls = classify(scene.config, scene.com, classify_options(opts));
  CommandResult res;
  json &r = res.report;
  r["verdict"] = verdict_name(cls);
  r["s_star"] = cls.s_star;
  r["witness"] = to_json(cls.witness);
  r["num_contacts"] = scene.config.size();
  r["num_generators"] = cls.generating.cols();
  r["duplicate_contacts"] = scene.config.has_duplicates();
  r["parallel_shortcut"] = cls.used_parallel_shortcut;
  if (cls.constrained())
    r["wcm"] = wcm_json(build_wcm(cls.generating, cls.witness));
  else
    r["wcm"] = nullptr;
  return res;
}

CommandResult cmd_check(const io::Scene &scene, const Vec3 &accel,
                        const std::optional<Vec3> &l_dot,
                        const CommonOptions &opts) {
  const auto cls = classify(scene.config, scene.com, classify_options(opts));
  const MotionQuery q{accel, l_dot};
  const Wrench wrench = required_wrench(scene.body, q, scene.com);

  CommandResult res;
  json &r = res.report;
  r["verdict"] = verdict_name(cls);
  r["required_wrench"] = wrench_json(wrench);

  std::optional<WrenchConstraintMatrix> wcm;
  if (cls.constrained())
    wcm = build_wcm(cls.generating, cls.witness);
  const bool ok = acceleration_feasible(cls, wcm ? &*wcm : nullptr,
                                        scene.body, q, scene.com);
  if (!cls.constrained())
    r["method"] = l_dot ? "oracle" : "unconstrained";
  else
    r["method"] = l_dot ? "wcm" : "oracle";
  if (wcm && l_dot)
    r["margin"] = constraint_margin(*wcm, wrench);
  else
    r["margin"] = nullptr;
  r["feasible"] = ok;
  res.exit_code = ok ? kOk : kNegative;
  return res;
}

CommandResult cmd_shift(const io::Scene &scene, const Vec3 &delta,
                        const ShiftOptions &sopts, const CommonOptions &opts) {
  const auto cls = classify(scene.config, scene.com, classify_options(opts));
  CommandResult res;
  if (!cls.constrained()) {
    res.report = {{"error", "no WCM exists: configuration is unconstrained"}};
    res.exit_code = kNegative;
    return res;
  }
  const Vec3 target = scene.com + delta;
  const auto original = build_wcm(cls.generating, cls.witness);

  WrenchConstraintMatrix rebuilt, shifted;
  const auto rebuild_times = timing::time_batch(sopts.reps, [&] {
    rebuilt = build_wcm(scene.config, target, cls.witness);
  });
  const auto shift_times = timing::time_batch(
      sopts.reps, [&] { shifted = shift_wcm(original, delta); });

  // Compare shifted and rebuilt verdicts on wrenches about the new anchor.
  const auto gen_b = build_generating_matrices(scene.config, target);
  std::mt19937_64 rng(sopts.seed);
  long agree = 0, excluded = 0, disagree = 0;
  for (int s = 0; s < sopts.samples; ++s) {
    const Wrench w = (s % 2 == 0) ? sample_feasible_wrench(gen_b, rng)
                                  : sample_boundary_wrench(gen_b, rng);
    const double norm = w.stacked().norm();
    const double m1 = constraint_margin(shifted, w);
    const double m2 = constraint_margin(rebuilt, w);
    if (norm > 0. && (std::abs(m1) <= kBoundaryBand * norm ||
                      std::abs(m2) <= kBoundaryBand * norm)) {
      ++excluded;
      continue;
    }
    (wrench_feasible(shifted, w) == wrench_feasible(rebuilt, w) ? agree
                                                                 : disagree)++;
  }

  const auto rebuild_stats = timing::summarize(rebuild_times);
  const auto shift_stats = timing::summarize(shift_times);
  json &r = res.report;
  r["delta"] = to_json(delta);
  r["original"] = wcm_json(original);
  r["shifted"] = wcm_json(shifted);
  r["timing"] = {{"rebuild", stats_json(rebuild_stats)},
                 {"shift", stats_json(shift_stats)}};
  r["agreement"] = {{"agree", agree},
                    {"disagree", disagree},
                    {"boundary_excluded", excluded},
                    {"compared", agree + disagree}};
  std::ostringstream csv;
  csv << "stage,median_us,mean_us,p95_us\n";
  csv << "rebuild," << rebuild_stats.median << ',' << rebuild_stats.mean << ','
      << rebuild_stats.p95 << '\n';
  csv << "shift," << shift_stats.median << ',' << shift_stats.mean << ','
      << shift_stats.p95 << '\n';
  res.csv = csv.str();
  return res;
}

CommandResult cmd_scenario(const io::Scenario &scenario,
                           const CommonOptions &opts) {
  CommandResult res;
  json phases = json::array();
  std::ostringstream csv;
  csv << "phase,kind,contacts,verdict,t,feasible,margin,classify_us,build_us,"
         "shift_us\n";
  bool all_feasible = true;

  for (const auto &phase : scenario.phases) {
    const auto &scene = phase.scene;
    Classification cls;
    const double classify_us = timing::time_us([&] {
      cls = classify(scene.config, scene.com, classify_options(opts));
    });
    std::optional<WrenchConstraintMatrix> wcm;
    double build_us = 0.;
    if (cls.constrained())
      build_us = timing::time_us(
          [&] { wcm = build_wcm(cls.generating, cls.witness); });

    json samples = json::array();
    double shift_total = 0.;
    for (const auto &s : phase.trajectory) {
      std::optional<WrenchConstraintMatrix> local;
      double shift_us = 0.;
      if (wcm) {
        const Vec3 delta = s.com - wcm->anchor;
        shift_us = timing::time_us([&] { local = shift_wcm(*wcm, delta); });
      }
      shift_total += shift_us;
      const MotionQuery q{s.accel, s.l_dot};
      const bool ok = acceleration_feasible(cls, local ? &*local : nullptr,
                                            scene.body, q, s.com);
      all_feasible = all_feasible && ok;
      json margin = nullptr;
      if (local && s.l_dot)
        margin = constraint_margin(*local,
                                   required_wrench(scene.body, q, s.com));
      samples.push_back({{"t", s.t}, {"feasible", ok}, {"margin", margin}});
      csv << phase.name << ",sample," << scene.config.size() << ','
          << verdict_name(cls) << ',' << s.t << ',' << (ok ? 1 : 0) << ','
          << (margin.is_null() ? std::string() : std::to_string(margin.get<double>()))
          << ",,," << shift_us << '\n';
    }
    const double mean_shift =
        phase.trajectory.empty() ? 0. : shift_total / double(phase.trajectory.size());
    csv << phase.name << ",summary," << scene.config.size() << ','
        << verdict_name(cls) << ",,,," << classify_us << ',' << build_us << ','
        << mean_shift << '\n';

    json pj = {{"name", phase.name},
               {"contacts", scene.config.size()},
               {"verdict", verdict_name(cls)},
               {"s_star", cls.s_star},
               {"witness", to_json(cls.witness)},
               {"parallel_shortcut", cls.used_parallel_shortcut},
               {"wcm_rows", wcm ? json(wcm->rows.rows()) : json(nullptr)},
               {"classify_us", classify_us},
               {"build_us", wcm ? json(build_us) : json(nullptr)},
               {"mean_shift_us", wcm ? json(mean_shift) : json(nullptr)},
               {"samples", samples}};
    phases.push_back(pj);
  }
  res.report = {{"phases", phases}, {"all_feasible", all_feasible}};
  res.csv = csv.str();
  return res;
}

CommandResult cmd_bench(const io::Scene &scene, int reps, std::uint64_t seed,
                        const CommonOptions &opts) {
  if (reps < 1)
    throw io::InputError("--reps must be at least 1");
  const auto copts = classify_options(opts);
  Classification cls = classify(scene.config, scene.com, copts);
  const auto classify_stats = timing::summarize(timing::time_batch(
      reps, [&] { cls = classify(scene.config, scene.com, copts); }));

  CommandResult res;
  json &r = res.report;
  r["verdict"] = verdict_name(cls);
  r["num_contacts"] = scene.config.size();
  r["reps"] = reps;
  r["warmup"] = timing::kWarmupIterations;
  r["classify"] = stats_json(classify_stats);

  std::ostringstream csv;
  csv << "contacts,verdict,reps,classify_median_us,classify_mean_us,"
         "classify_p95_us,build_median_us,build_mean_us,build_p95_us,"
         "shift_median_us,shift_mean_us,shift_p95_us\n";
  csv << scene.config.size() << ',' << verdict_name(cls) << ',' << reps << ','
      << classify_stats.median << ',' << classify_stats.mean << ','
      << classify_stats.p95;

  if (cls.constrained()) {
    WrenchConstraintMatrix wcm;
    const auto build_stats = timing::summarize(timing::time_batch(
        reps, [&] { wcm = build_wcm(cls.generating, cls.witness); }));
    std::mt19937_64 rng(seed);
    std::vector<Vec3> deltas;
    for (int i = 0; i < reps + timing::kWarmupIterations; ++i)
      deltas.push_back(random_delta(rng, 0.3));
    std::size_t next = 0;
    WrenchConstraintMatrix shifted;
    const auto shift_stats = timing::summarize(timing::time_batch(
        reps, [&] { shifted = shift_wcm(wcm, deltas[next++]); }));
    r["build_wcm"] = stats_json(build_stats);
    r["shift_wcm"] = stats_json(shift_stats);
    r["wcm_rows"] = wcm.rows.rows();
    r["speedup_median"] = build_stats.median / shift_stats.median;
    csv << ',' << build_stats.median << ',' << build_stats.mean << ','
        << build_stats.p95 << ',' << shift_stats.median << ','
        << shift_stats.mean << ',' << shift_stats.p95 << '\n';
  } else {
    r["build_wcm"] = nullptr;
    r["shift_wcm"] = nullptr;
    csv << ",,,,,,\n";
  }
  res.csv = csv.str();
  return res;
}

} // namespace mcwc::cli
