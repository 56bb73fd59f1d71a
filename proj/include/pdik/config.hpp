#ifndef PDIK_CONFIG_HPP_
#define PDIK_CONFIG_HPP_

#include <string>
#include <vector>

#include "pdik/filter.hpp"
#include "pdik/model_io.hpp"
#include "pdik/retarget.hpp"

namespace pdik {

/// One retargeted keypoint: maps a filtered human keypoint onto a robot frame.
struct TargetMapping {
  std::string frame;     ///< robot frame to servo
  std::string keypoint;  ///< human keypoint id feeding it
  double beta = 1.0;     ///< command scale factor
  double weight = 1.0;
  Vec3 anchor_robot = Vec3::Zero();
};

/**
 * @brief Controller configuration file contents.
 *
 * Blocks: `controller { k, grid, eta, eps_q, eps_v, gamma, w_q, dt, fallback }`,
 * repeated `segment { name, joints = [...] }` (indices or joint names),
 * repeated `target { frame, keypoint, beta, weight, anchor_robot }`, and an
 * optional `filter { alpha_jr, lambda_jr, tau_jr, conf_min, body_switch_max,
 * anchor }`.
 */
struct ControllerConfig {
  int k = 64;
  ContinuationGrid::Mode grid_mode = ContinuationGrid::Mode::deterministic_grid;
  double eta = 5e-4;
  double eps_q = 1e-4;
  double eps_v = 1e-6;
  double gamma = 0.5;
  double w_q = 1e-2;
  double dt = 0.01;
  FallbackMode fallback = FallbackMode::hold;
  std::vector<std::pair<std::string, std::vector<std::string>>> segments;  // name -> joint refs
  std::vector<TargetMapping> targets;
  FilterParams filter;
  std::string anchor_keypoint = "torso";

  /// Resolves joint references and assembles the runtime ControlConfig.
  ControlConfig bind(const RobotModel& model, std::mt19937_64* rng = nullptr) const {
    ControlConfig cc;
    cc.grid = grid_mode == ContinuationGrid::Mode::deterministic_grid
                  ? ContinuationGrid::deterministic(k)
                  : (rng ? ContinuationGrid::uniform_random(k, *rng)
                         : throw Error("random grid mode needs an rng"));
    cc.certificate.eta = eta;
    cc.certificate.eps_q = eps_q;
    cc.certificate.eps_v = eps_v;
    cc.gamma = gamma;
    cc.w_q = w_q;
    cc.dt = dt;
    cc.fallback = fallback;
    for (const auto& [name, refs] : segments) {
      std::vector<int> joints;
      for (const std::string& ref : refs) {
        try {
          size_t used = 0;
          const int idx = std::stoi(ref, &used);
          if (used == ref.size()) {
            joints.push_back(idx);
            continue;
          }
        } catch (const std::exception&) {
        }
        joints.push_back(model.joint_index(ref));
      }
      cc.segments.segments.push_back(std::move(joints));
    }
    if (!cc.segments.segments.empty()) cc.segments.validate(model.dof());
    return cc;
  }
};

inline ControllerConfig parse_controller_config(const std::string& text) {
  ControllerConfig cfg;
  for (const detail::Block& b : detail::parse_blocks(text)) {
    if (b.kind == "controller") {
      cfg.k = static_cast<int>(b.number_or("k", cfg.k));
      if (const auto* mode = b.find("grid")) {
        if (mode->ident == "deterministic")
          cfg.grid_mode = ContinuationGrid::Mode::deterministic_grid;
        else if (mode->ident == "random")
          cfg.grid_mode = ContinuationGrid::Mode::uniform_random;
        else
          throw Error("line " + std::to_string(b.line) + ": grid must be deterministic|random");
      }
      cfg.eta = b.number_or("eta", cfg.eta);
      cfg.eps_q = b.number_or("eps_q", cfg.eps_q);
      cfg.eps_v = b.number_or("eps_v", cfg.eps_v);
      cfg.gamma = b.number_or("gamma", cfg.gamma);
      cfg.w_q = b.number_or("w_q", cfg.w_q);
      cfg.dt = b.number_or("dt", cfg.dt);
      if (const auto* fb = b.find("fallback")) {
        if (fb->ident == "hold")
          cfg.fallback = FallbackMode::hold;
        else if (fb->ident == "min_predicted")
          cfg.fallback = FallbackMode::min_predicted;
        else
          throw Error("line " + std::to_string(b.line) + ": fallback must be hold|min_predicted");
      }
    } else if (b.kind == "segment") {
      const detail::FieldValue* joints = b.require("joints");
      if (!joints->bracketed)
        throw Error("line " + std::to_string(b.line) + ": segment joints must be a list");
      cfg.segments.emplace_back(b.ident("name"), joints->string_list());
    } else if (b.kind == "target") {
      TargetMapping t;
      t.frame = b.ident("frame");
      t.keypoint = b.find("keypoint") ? b.ident("keypoint") : t.frame;
      t.beta = b.number_or("beta", 1.0);
      t.weight = b.number_or("weight", 1.0);
      if (b.find("anchor_robot")) {
        const auto v = b.list("anchor_robot", 3);
        t.anchor_robot = Vec3(v[0], v[1], v[2]);
      }
      cfg.targets.push_back(std::move(t));
    } else if (b.kind == "filter") {
      cfg.filter.alpha_jr = b.number_or("alpha_jr", cfg.filter.alpha_jr);
      cfg.filter.lambda_jr = b.number_or("lambda_jr", cfg.filter.lambda_jr);
      cfg.filter.tau_jr = b.number_or("tau_jr", cfg.filter.tau_jr);
      cfg.filter.conf_min = b.number_or("conf_min", cfg.filter.conf_min);
      cfg.filter.body_switch_max = b.number_or("body_switch_max", cfg.filter.body_switch_max);
      if (b.find("anchor")) cfg.anchor_keypoint = b.ident("anchor");
    } else {
      throw Error("line " + std::to_string(b.line) + ": unknown block '" + b.kind + "'");
    }
  }
  if (!(cfg.filter.lambda_jr < cfg.filter.alpha_jr))
    throw Error("filter: lambda_jr must be smaller than alpha_jr");
  if (!(cfg.filter.tau_jr > 0.0)) throw Error("filter: tau_jr must be positive");
  return cfg;
}

inline ControllerConfig load_controller_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_controller_config(ss.str());
}

}  // namespace pdik

#endif  // PDIK_CONFIG_HPP_
