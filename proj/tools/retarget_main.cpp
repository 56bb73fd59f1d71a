// Keypoint-stream retargeting CLI.
//
//   retarget run --model FILE --traj FILE --config FILE --out metrics.csv
//
// Replays a keypoint trajectory CSV through body selection, the robustified
// filter and command scaling, then steps the continuation controller and
// writes one metrics row per frame.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "pdik/config.hpp"
#include "pdik/model_io.hpp"
#include "pdik/retarget.hpp"
#include "pdik/trajectory.hpp"

namespace {
constexpr int kConfigError = 2;
}

int main(int argc, char** argv) {
  CLI::App app{"Keypoint retargeting pipeline"};
  app.require_subcommand(1);

  std::string model_path, traj_path, config_path, out_path;
  std::uint64_t seed = 1;

  CLI::App* run = app.add_subcommand("run", "Run the pipeline on a trajectory file");
  run->add_option("--model", model_path, "robot model file")->required();
  run->add_option("--traj", traj_path, "keypoint CSV (t,body_id,point_id,x,y,z,confidence)")
      ->required();
  run->add_option("--config", config_path, "controller configuration file")->required();
  run->add_option("--out", out_path, "metrics CSV output")->required();
  run->add_option("--seed", seed, "seed for the random grid mode");

  CLI11_PARSE(app, argc, argv);

  try {
    const pdik::RobotModel model = pdik::load_model_file(model_path);
    const pdik::ControllerConfig cfg = pdik::load_controller_config(config_path);
    if (cfg.targets.empty()) throw pdik::Error("config defines no target blocks");
    std::mt19937_64 rng(seed);
    const pdik::ControlConfig cc = cfg.bind(model, &rng);
    const auto frames = pdik::load_trajectory_file(traj_path);

    std::ofstream out(out_path);
    if (!out) throw pdik::Error("cannot write '" + out_path + "'");
    out << "t,body_id,tracking_error_m,v_before,v_after,selected_alpha,"
        << "no_certified_candidate,qp_inexact,cbf_active\n";

    pdik::RetargetController controller(model, cc, model.home());
    std::map<std::string, pdik::FilterState> filters;
    pdik::FilterState anchor_state;

    for (const pdik::TrajectoryFrame& frame : frames) {
      // Group the frame's samples by body and pick the tracked demonstrator.
      std::map<int, std::vector<pdik::Keypoint>> by_body;
      for (const pdik::Keypoint& kp : frame.samples) by_body[kp.body_id].push_back(kp);
      std::vector<std::vector<pdik::Keypoint>> bodies;
      for (auto& [id, kps] : by_body) bodies.push_back(kps);
      const auto body = pdik::select_body(bodies, anchor_state, cfg.filter, cfg.anchor_keypoint);
      if (!body) continue;  // hold the last command
      anchor_state.last_body = *body;

      pdik::Vec3 anchor = anchor_state.last;
      for (const pdik::Keypoint& kp : by_body[*body]) {
        if (kp.point_id != cfg.anchor_keypoint) continue;
        auto [next, value] = pdik::filter_step(anchor_state, kp, cfg.filter);
        anchor_state = next;
        anchor = value;
        break;
      }
      if (!anchor_state.initialized) continue;  // no anchor seen yet

      pdik::TaskSpec task;
      bool complete = true;
      for (const pdik::TargetMapping& mapping : cfg.targets) {
        const pdik::Keypoint* sample = nullptr;
        for (const pdik::Keypoint& kp : by_body[*body])
          if (kp.point_id == mapping.keypoint) sample = &kp;
        pdik::FilterState& state = filters[mapping.keypoint];
        if (sample) {
          auto [next, value] = pdik::filter_step(state, *sample, cfg.filter);
          state = next;
        }
        if (!state.initialized) {
          complete = false;
          break;
        }
        pdik::ScaleSpec scale;
        scale.beta = mapping.beta;
        scale.anchor_human = anchor;
        scale.anchor_robot = mapping.anchor_robot;
        task.targets.push_back({mapping.frame, pdik::scale_command(state.last, scale),
                                pdik::Vec3::Constant(mapping.weight)});
      }
      if (!complete) continue;

      const pdik::StepResult r = controller.step(task);
      double err = 0.0;
      const auto poses = pdik::forward_kinematics(model, r.q_next);
      for (const pdik::TaskTarget& t : task.targets)
        err += (t.x_d - poses.at(t.frame).translation).norm();
      err /= static_cast<double>(task.targets.size());

      out << frame.t << ',' << *body << ',' << err << ',' << r.v_before << ',' << r.v_after
          << ',' << (r.selected_alpha ? *r.selected_alpha : -1.0) << ','
          << r.no_certified_candidate << ',' << r.qp_inexact << ',' << r.cbf_active << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return 0;
}
