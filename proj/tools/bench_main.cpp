// Closed-loop ablation harness CLI.
//
//   bench ablation  --model FILE --trials N --variants LIST --out DIR
//   bench trial     --model FILE --seed S --method M [--replay FILE]
//   bench escape-mc --p P --k-list 1,16,64 --trials N
//
// Variants are comma-separated method specs, each `name[:K[:eta]]`, e.g.
// `pdist-cert:64:0.0005,mono,global-sqp`.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pdik/bench.hpp"
#include "pdik/model_io.hpp"

namespace {

constexpr int kConfigError = 2;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

pdik::AblationVariant parse_variant(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw pdik::Error("empty variant spec");
  pdik::AblationVariant v;
  const auto method = pdik::parse_method(parts[0]);
  if (!method) throw pdik::Error("unknown method '" + parts[0] + "'");
  v.method = *method;
  if (parts.size() > 1) v.batch_k = std::stoi(parts[1]);
  if (parts.size() > 2) v.eta = std::stod(parts[2]);
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw pdik::Error("cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop differential IK benchmark harness"};
  app.require_subcommand(1);

  std::string model_path, out_dir, variants_arg, replay_path, method_arg = "pdist-cert";
  std::string k_list_arg = "1,4,16,64", generator_arg = "near-boundary";
  int trials = 100, horizon = 50, batch_k = 64;
  double eta = 5e-4, dt = 0.05, p = 0.1;
  std::uint64_t seed = 1;

  CLI::App* ablation = app.add_subcommand("ablation", "Run the ablation protocol");
  ablation->add_option("--model", model_path, "robot model file")->required();
  ablation->add_option("--trials", trials, "trials per variant");
  ablation->add_option("--variants", variants_arg, "comma-separated name[:K[:eta]] specs")
      ->required();
  ablation->add_option("--out", out_dir, "output directory")->required();
  ablation->add_option("--seed", seed, "base seed (trial i uses seed+i)");
  ablation->add_option("--horizon", horizon, "steps per trial");
  ablation->add_option("--dt", dt, "seconds per step");
  ablation->add_option("--generator", generator_arg, "random|near-boundary");

  CLI::App* trial = app.add_subcommand("trial", "Run one trial and print its metrics");
  trial->add_option("--model", model_path, "robot model file")->required();
  trial->add_option("--seed", seed, "trial seed");
  trial->add_option("--method", method_arg, "method name");
  trial->add_option("--replay", replay_path, "replay targets from CSV (t,frame,x,y,z)");
  trial->add_option("--k", batch_k, "batch size");
  trial->add_option("--eta", eta, "certificate threshold");
  trial->add_option("--horizon", horizon, "steps");
  trial->add_option("--dt", dt, "seconds per step");
  trial->add_option("--generator", generator_arg, "random|near-boundary");

  CLI::App* escape = app.add_subcommand("escape-mc", "Escape-probability Monte Carlo");
  escape->add_option("--p", p, "per-candidate escape probability")->required();
  escape->add_option("--k-list", k_list_arg, "comma-separated K values");
  escape->add_option("--trials", trials, "Monte Carlo trials");
  escape->add_option("--seed", seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(ablation)) {
      const pdik::RobotModel model = pdik::load_model_file(model_path);
      std::vector<pdik::AblationVariant> variants;
      for (const std::string& spec : split(variants_arg, ','))
        if (!spec.empty()) variants.push_back(parse_variant(spec));
      const pdik::TargetGen gen = generator_arg == "random"
                                      ? pdik::TargetGen::random_reachable
                                      : pdik::TargetGen::near_cbf_boundary;
      if (generator_arg != "random" && generator_arg != "near-boundary")
        throw pdik::Error("unknown generator '" + generator_arg + "'");
      const auto rows = pdik::run_ablation(model, trials, variants, seed, gen, dt, horizon);
      std::filesystem::create_directories(out_dir);
      write_file(std::filesystem::path(out_dir) / "ablation.md", pdik::ablation_markdown(rows));
      write_file(std::filesystem::path(out_dir) / "ablation.csv", pdik::ablation_csv(rows));
      write_file(std::filesystem::path(out_dir) / "trials.csv", pdik::trials_csv(rows));
      std::cout << pdik::ablation_markdown(rows);
      const pdik::CoverageReport cov = pdik::measure_coverage(model);
      std::cout << "\ncoverage: K_dist=" << cov.k_dist << " K_whole=" << cov.k_whole
                << " per " << cov.budget_sec * 1e3 << " ms budget\n";
    } else if (app.got_subcommand(trial)) {
      const pdik::RobotModel model = pdik::load_model_file(model_path);
      pdik::TrialConfig cfg;
      cfg.seed = seed;
      cfg.horizon = horizon;
      cfg.dt = dt;
      cfg.batch_k = batch_k;
      cfg.eta = eta;
      const auto method = pdik::parse_method(method_arg);
      if (!method) throw pdik::Error("unknown method '" + method_arg + "'");
      cfg.method = *method;
      if (!replay_path.empty()) {
        cfg.target_generator = pdik::TargetGen::replay_file;
        cfg.replay_path = replay_path;
      } else if (generator_arg == "random") {
        cfg.target_generator = pdik::TargetGen::random_reachable;
      } else {
        cfg.target_generator = pdik::TargetGen::near_cbf_boundary;
      }
      const pdik::TrialMetrics m = pdik::run_trial(model, cfg);
      std::cout << "method=" << method_arg << " seed=" << seed << '\n'
                << "mean_error_m=" << m.mean_error << '\n'
                << "final_error_m=" << m.final_error << '\n'
                << "solve_time_s=" << m.solve_time_per_step << '\n'
                << "self_collision=" << m.self_collision << '\n'
                << "singularity=" << m.singularity << '\n'
                << "stagnation=" << m.stagnation << '\n';
    } else if (app.got_subcommand(escape)) {
      pdik::EscapeMcConfig cfg;
      cfg.p = p;
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.k_values.clear();
      for (const std::string& k : split(k_list_arg, ','))
        if (!k.empty()) cfg.k_values.push_back(std::stoi(k));
      std::cout << "K,empirical,predicted\n";
      for (const pdik::EscapeMcRow& row : pdik::escape_mc(cfg))
        std::cout << row.k << ',' << row.empirical << ',' << row.predicted << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return 0;
}
