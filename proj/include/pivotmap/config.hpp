/*
 * Copyright 2026 The pivotmap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Run-wide defaults, overridable from a JSON file. Every key is optional:
//
//   {"range":        {"x_min": -15, "x_max": 15, "y_min": -30, "y_max": 30},
//    "dvs_weights":  {"alpha1": 5, "alpha2": 2, "alpha3": 2},
//    "mask_weights": {"lambda1": 5, "lambda2": 3},
//    "eval":         {"thresholds": [0.2, 0.5, 1.0], "sample_step": 0.1},
//    "budgets":      {"divider": {"max_instances": 20, "max_points": 10}, ...},
//    "grid":         {"rows": 64, "cols": 32, "thickness": 0},
//    "simplify":     {"area_threshold": 0.01, "tolerance_epsilon": 0.1},
//    "fit":          {"steps": 2000, "learning_rate": 0.05, "prob_lr": 0.1,
//                     "log_interval": 10}}

#pragma once

#include <fstream>
#include <set>
#include <string>

#include "pivotmap/dvs_loss.hpp"
#include "pivotmap/eval.hpp"
#include "pivotmap/fit.hpp"
#include "pivotmap/map_io.hpp"
#include "pivotmap/raster.hpp"
#include "pivotmap/simplify.hpp"

namespace pivotmap {

struct Config {
  BevRange range;
  DvsWeights dvs_weights;
  MaskLossWeights mask_weights;
  EvalConfig eval;
  ClassBudget budget;
  GridDims grid;
  double thickness = 0.0;  // <= 0: one cell diagonal
  SimplifyConfig simplify;
  FitConfig fit;
};

namespace detail {

inline void check_keys(const Json& obj, const std::string& where,
                       std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(ErrorKind::kValidation, "config " + where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!ok.count(item.key())) {
      fail(ErrorKind::kValidation, "config " + where + ": unknown key '" + item.key() + "'");
    }
  }
}

inline void override_number(const Json& obj, const char* key, double& out, const std::string& where) {
  if (obj.contains(key)) out = number(obj.at(key), "config " + where + "." + key);
}

inline void override_count(const Json& obj, const char* key, std::size_t& out,
                           const std::string& where) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(ErrorKind::kValidation, "config " + where + "." + key + ": expected a non-negative integer");
  }
  out = v.get<std::size_t>();
}

}  // namespace detail

inline Config config_from_json(const Json& j) {
  Config cfg;
  detail::check_keys(j, "root",
                     {"range", "dvs_weights", "mask_weights", "eval", "budgets", "grid",
                      "simplify", "fit"});
  if (j.contains("range")) {
    const Json& r = j["range"];
    detail::check_keys(r, "range", {"x_min", "x_max", "y_min", "y_max"});
    detail::override_number(r, "x_min", cfg.range.x_min, "range");
    detail::override_number(r, "x_max", cfg.range.x_max, "range");
    detail::override_number(r, "y_min", cfg.range.y_min, "range");
    detail::override_number(r, "y_max", cfg.range.y_max, "range");
  }
  if (j.contains("dvs_weights")) {
    const Json& w = j["dvs_weights"];
    detail::check_keys(w, "dvs_weights", {"alpha1", "alpha2", "alpha3"});
    detail::override_number(w, "alpha1", cfg.dvs_weights.alpha1, "dvs_weights");
    detail::override_number(w, "alpha2", cfg.dvs_weights.alpha2, "dvs_weights");
    detail::override_number(w, "alpha3", cfg.dvs_weights.alpha3, "dvs_weights");
  }
  if (j.contains("mask_weights")) {
    const Json& w = j["mask_weights"];
    detail::check_keys(w, "mask_weights", {"lambda1", "lambda2"});
    detail::override_number(w, "lambda1", cfg.mask_weights.lambda1, "mask_weights");
    detail::override_number(w, "lambda2", cfg.mask_weights.lambda2, "mask_weights");
  }
  if (j.contains("eval")) {
    const Json& e = j["eval"];
    detail::check_keys(e, "eval", {"thresholds", "sample_step"});
    if (e.contains("thresholds")) {
      if (!e["thresholds"].is_array()) fail(ErrorKind::kValidation, "config eval.thresholds: expected an array");
      cfg.eval.thresholds.clear();
      for (const Json& t : e["thresholds"]) cfg.eval.thresholds.push_back(detail::number(t, "config eval.thresholds"));
    }
    detail::override_number(e, "sample_step", cfg.eval.sample_step, "eval");
  }
  if (j.contains("budgets")) {
    const Json& b = j["budgets"];
    detail::check_keys(b, "budgets", {"divider", "ped_crossing", "boundary"});
    for (ElementClass c : kAllClasses) {
      const std::string name(to_string(c));
      if (!b.contains(name)) continue;
      const Json& lim = b[name];
      detail::check_keys(lim, "budgets." + name, {"max_instances", "max_points"});
      std::size_t m = static_cast<std::size_t>(cfg.budget[c].max_instances);
      std::size_t n = static_cast<std::size_t>(cfg.budget[c].max_points);
      detail::override_count(lim, "max_instances", m, "budgets." + name);
      detail::override_count(lim, "max_points", n, "budgets." + name);
      cfg.budget[c] = {static_cast<int>(m), static_cast<int>(n)};
    }
  }
  if (j.contains("grid")) {
    const Json& g = j["grid"];
    detail::check_keys(g, "grid", {"rows", "cols", "thickness"});
    detail::override_count(g, "rows", cfg.grid.rows, "grid");
    detail::override_count(g, "cols", cfg.grid.cols, "grid");
    detail::override_number(g, "thickness", cfg.thickness, "grid");
  }
  if (j.contains("simplify")) {
    const Json& s = j["simplify"];
    detail::check_keys(s, "simplify", {"area_threshold", "tolerance_epsilon"});
    detail::override_number(s, "area_threshold", cfg.simplify.area_threshold, "simplify");
    detail::override_number(s, "tolerance_epsilon", cfg.simplify.tolerance_epsilon, "simplify");
  }
  if (j.contains("fit")) {
    const Json& f = j["fit"];
    detail::check_keys(f, "fit", {"steps", "learning_rate", "prob_lr", "log_interval"});
    detail::override_count(f, "steps", cfg.fit.steps, "fit");
    detail::override_number(f, "learning_rate", cfg.fit.learning_rate, "fit");
    detail::override_number(f, "prob_lr", cfg.fit.prob_lr, "fit");
    detail::override_count(f, "log_interval", cfg.fit.log_interval, "fit");
  }
  cfg.fit.weights = cfg.dvs_weights;

  validate_range(cfg.range);
  validate(cfg.dvs_weights);
  require(cfg.mask_weights.lambda1 >= 0.0 && cfg.mask_weights.lambda2 >= 0.0,
          ErrorKind::kValidation, "config mask_weights: must be non-negative");
  validate(cfg.eval);
  validate_budget(cfg.budget);
  require(cfg.grid.rows >= 1 && cfg.grid.cols >= 1, ErrorKind::kValidation,
          "config grid: rows and cols must be >= 1");
  validate(cfg.simplify);
  validate(cfg.fit);
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::kParse, "config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace pivotmap
