// Command-line front end: dataset generation, twin training/validation,
// synthesis, layout evaluation, the analytic single-beam designer, and run
// reports. Data goes to files under --out (or stdout for summaries);
// diagnostics go to stderr. Exit codes: 0 ok, 1 bad input, 2 runtime
// failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mpems/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  int threads = 1;
  uint64_t seed = 0;
  bool seed_set = false;
  bool quiet = false;
};

void info(const CommonArgs& args, const std::string& msg) {
  if (!args.quiet) std::cerr << "[mpems] " << msg << "\n";
}

json load_config_json(const CommonArgs& args) {
  if (args.config_path.empty())
    throw mpems::ValidationError("missing --config PATH");
  std::ifstream in(args.config_path);
  if (!in)
    throw mpems::ValidationError("cannot open config: " + args.config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw mpems::ValidationError(args.config_path + ": " + e.what());
  }
  for (const auto& ov : args.overrides) mpems::apply_override(j, ov);
  if (args.seed_set) {
    j["twin"]["seed"] = args.seed;
    j["twin"]["cv_seed"] = args.seed;
    j["pso"]["seed"] = args.seed;
  }
  return j;
}

mpems::DesignConfig load_design(const CommonArgs& args) {
  return mpems::parse_config(load_config_json(args));
}

fs::path ensure_out(const CommonArgs& args) {
  fs::create_directories(args.out_dir);
  return fs::path(args.out_dir);
}

int cmd_sample_atoms(const CommonArgs& args) {
  const auto config = load_design(args);
  const auto samples = mpems::build_training_set(config);
  const fs::path out = ensure_out(args) / "atom_samples.csv";
  mpems::write_reflection_table(out.string(), samples);
  info(args, "wrote " + std::to_string(samples.size()) + " samples");
  std::cout << json{{"samples", samples.size()}, {"file", out.string()}}.dump()
            << "\n";
  return 0;
}

int cmd_train_twin(const CommonArgs& args) {
  const auto config = load_design(args);
  const auto samples = mpems::build_training_set(config);
  const auto twin = mpems::train_twin(samples, config.make_bounds());
  const fs::path out = ensure_out(args) / "twin.json";
  mpems::save_twin_json(twin, out.string());
  info(args, "trained twin on " + std::to_string(samples.size()) + " samples");
  std::cout << json{{"file", out.string()},
                    {"samples", samples.size()},
                    {"theta_lo_deg", twin.theta_lo_deg},
                    {"theta_hi_deg", twin.theta_hi_deg}}
                   .dump()
            << "\n";
  return 0;
}

int cmd_validate_twin(const CommonArgs& args) {
  const auto config = load_design(args);
  const auto samples = mpems::build_training_set(config);
  const auto report = mpems::cross_validate(samples, config.make_bounds(),
                                            config.twin.cv_folds,
                                            config.twin.cv_seed);
  const json j{{"folds", config.twin.cv_folds},
               {"samples", samples.size()},
               {"rmse_re_te", report.rmse_re_te},
               {"rmse_im_te", report.rmse_im_te},
               {"rmse_re_tm", report.rmse_re_tm},
               {"rmse_im_tm", report.rmse_im_tm},
               {"phase_rmse_deg_te", report.phase_rmse_deg_te},
               {"phase_rmse_deg_tm", report.phase_rmse_deg_tm},
               {"mag_rmse_te", report.mag_rmse_te},
               {"mag_rmse_tm", report.mag_rmse_tm},
               {"phase_rmse_deg", report.phase_rmse_deg},
               {"mag_rmse", report.mag_rmse}};
  const fs::path out = ensure_out(args) / "twin_cv.json";
  std::ofstream f(out);
  f << j.dump(1) << "\n";
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_synthesize(const CommonArgs& args) {
  const auto config = load_design(args);
  const fs::path out = ensure_out(args);

  std::ofstream log(out / "run_log.csv");
  log << "iteration,best_cost,elapsed_seconds\n";
  mpems::ProgressSink sink = [&log](const mpems::ProgressRecord& rec) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.6f\n", rec.iteration,
                  rec.best_cost, rec.elapsed_seconds);
    log << buf;
  };

  info(args, "synthesizing " + std::to_string(config.p_count) + "x" +
                 std::to_string(config.q_count) + " layout");
  const auto result = mpems::synthesize(config, args.threads, &sink);
  mpems::write_result(result, out.string());
  mpems::save_twin_json(result.twin, (out / "twin.json").string());
  info(args, "done in " + std::to_string(result.runtime_seconds) + " s");

  json summary{{"final_cost", result.final_cost},
               {"runtime_seconds", result.runtime_seconds},
               {"result", (out / "result.json").string()}};
  if (result.te.active) {
    summary["te_peak_u"] = result.te.cut_peak.uv_peak.u;
  }
  if (result.tm.active) {
    summary["tm_peak_u"] = result.tm.cut_peak.uv_peak.u;
  }
  std::cout << summary.dump() << "\n";
  return 0;
}

json pol_report_json(const mpems::PolReport& r) {
  if (!r.active) return json{{"active", false}};
  return json{{"active", true},
              {"cut_peak_u", r.cut_peak.uv_peak.u},
              {"cut_peak_v", r.cut_peak.uv_peak.v},
              {"cut_peak_magnitude", r.cut_peak.magnitude_peak},
              {"grid_peak_u", r.grid_peak.uv_peak.u},
              {"grid_peak_v", r.grid_peak.uv_peak.v},
              {"target_field_mag", r.target_field_mag}};
}

int cmd_evaluate(const CommonArgs& args, const std::string& layout_path,
                 const std::string& twin_path) {
  const auto config = load_design(args);
  if (layout_path.empty())
    throw mpems::ValidationError("evaluate requires --layout PATH");
  const auto layout = mpems::load_layout_json(layout_path);

  mpems::PreparedTwin prepared;
  if (!twin_path.empty()) {
    prepared = mpems::prepare_luts(mpems::load_twin_json(twin_path), config);
  } else {
    prepared = mpems::prepare_twin(config);
  }
  const auto report = mpems::evaluate_layout(layout, config.targets,
                                             prepared.lut_te, prepared.lut_tm,
                                             config.evaluation);
  const fs::path out = ensure_out(args);
  if (report.te.active) {
    mpems::export_pattern_csv(report.te.cut, (out / "pattern_te_cut.csv").string());
    mpems::export_pattern_csv(report.te.grid, (out / "pattern_te_grid.csv").string());
  }
  if (report.tm.active) {
    mpems::export_pattern_csv(report.tm.cut, (out / "pattern_tm_cut.csv").string());
    mpems::export_pattern_csv(report.tm.grid, (out / "pattern_tm_grid.csv").string());
  }
  const json j{{"cost", report.cost},
               {"te", pol_report_json(report.te)},
               {"tm", pol_report_json(report.tm)}};
  std::ofstream f(out / "evaluation.json");
  f << j.dump(1) << "\n";
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_oracle(const CommonArgs& args, const std::string& pol_str,
               const std::string& twin_path) {
  const auto config = load_design(args);
  const mpems::Polarization pol = pol_str == "tm" ? mpems::Polarization::TM
                                                  : mpems::Polarization::TE;
  if (pol_str != "te" && pol_str != "tm")
    throw mpems::ValidationError("--pol must be 'te' or 'tm'");

  mpems::PreparedTwin prepared;
  if (!twin_path.empty()) {
    prepared = mpems::prepare_luts(mpems::load_twin_json(twin_path), config);
  } else {
    prepared = mpems::prepare_twin(config);
  }
  const auto& lut = pol == mpems::Polarization::TE ? prepared.lut_te : prepared.lut_tm;
  const auto& target = pol == mpems::Polarization::TE ? config.targets.te
                                                      : config.targets.tm;

  const auto geometry = mpems::make_layout(config.p_count, config.q_count,
                                           config.make_cell(), config.make_bounds());
  const auto layout = mpems::phase_conjugation_design(
      target.reflection, target.illumination, geometry, lut, pol);

  const fs::path out = ensure_out(args);
  const fs::path layout_file = out / ("oracle_layout_" + pol_str + ".json");
  mpems::export_layout_json(layout, layout_file.string());

  const auto gmap = mpems::gamma_map(layout, lut, pol);
  const auto cut = mpems::pattern_cut(gmap, layout, target.illumination,
                                      target.reflection.phi_deg,
                                      config.evaluation.cut_samples);
  mpems::export_pattern_csv(cut, (out / ("oracle_pattern_" + pol_str + "_cut.csv")).string());
  const auto peak = mpems::peak_metrics(cut);
  const mpems::UV uv = mpems::to_direction_cosines(target.reflection);
  const double target_mag =
      mpems::far_field_at(gmap, layout, target.illumination, uv).norm();

  const json j{{"layout", layout_file.string()},
               {"peak_u", peak.uv_peak.u},
               {"peak_magnitude", peak.magnitude_peak},
               {"target_field_mag", target_mag}};
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_report(const CommonArgs& args) {
  fs::path path(args.out_dir);
  if (fs::is_directory(path)) path /= "result.json";
  std::ifstream in(path);
  if (!in) throw mpems::ValidationError("cannot open result: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw mpems::ValidationError(path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "mpems-result")
    throw mpems::ValidationError(path.string() + ": not a result file");

  const auto& layout = j.at("layout");
  std::cout << "layout: " << layout.at("p").get<int>() << " x "
            << layout.at("q").get<int>() << " cells\n";
  std::cout << "final cost: " << j.at("final_cost").dump() << "\n";
  std::cout << "runtime: " << j.at("runtime_seconds").get<double>() << " s\n";
  for (const char* pol : {"te", "tm"}) {
    const auto& r = j.at(pol);
    if (!r.value("active", false)) continue;
    const auto& peak = r.at("cut_peak");
    std::cout << pol << ": cut peak at u=" << peak.at("u").get<double>()
              << ", |E|=" << peak.at("magnitude").get<double>()
              << ", target |E|=" << r.at("target_field_mag").get<double>()
              << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-polarization passive EM skin synthesis"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string layout_path, twin_path, pol_str = "te";

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("--config", args.config_path, "config JSON")->required();
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--set", args.overrides, "override config key, key.path=value");
    sub->add_option("--threads", args.threads, "worker cap")->check(CLI::PositiveNumber);
    sub->add_option_function<uint64_t>(
        "--seed",
        [&](const uint64_t& v) {
          args.seed = v;
          args.seed_set = true;
        },
        "master seed override (twin + swarm)");
    sub->add_flag("--quiet", args.quiet, "suppress progress notes");
  };

  auto* sample = app.add_subcommand("sample-atoms", "generate a reflection table");
  add_common(sample, true);
  auto* train = app.add_subcommand("train-twin", "train the reflection digital twin");
  add_common(train, true);
  auto* validate = app.add_subcommand("validate-twin", "cross-validate the twin");
  add_common(validate, true);
  auto* synth = app.add_subcommand("synthesize", "run the full synthesis loop");
  add_common(synth, true);
  auto* eval = app.add_subcommand("evaluate", "evaluate a stored layout");
  add_common(eval, true);
  eval->add_option("--layout", layout_path, "layout JSON")->required();
  eval->add_option("--twin", twin_path, "reuse a stored twin");
  auto* oracle = app.add_subcommand("oracle", "single-polarization analytic design");
  add_common(oracle, true);
  oracle->add_option("--pol", pol_str, "te or tm");
  oracle->add_option("--twin", twin_path, "reuse a stored twin");
  auto* report = app.add_subcommand("report", "summarize a result directory");
  add_common(report, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed()) return cmd_sample_atoms(args);
    if (train->parsed()) return cmd_train_twin(args);
    if (validate->parsed()) return cmd_validate_twin(args);
    if (synth->parsed()) return cmd_synthesize(args);
    if (eval->parsed()) return cmd_evaluate(args, layout_path, twin_path);
    if (oracle->parsed()) return cmd_oracle(args, pol_str, twin_path);
    if (report->parsed()) return cmd_report(args);
  } catch (const mpems::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
