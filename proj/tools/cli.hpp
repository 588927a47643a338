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

// The `pivotmap` command line tool. Kept in a header so the test suite can
// drive run() in-process with string streams.
//
// Exit codes: 0 success, 2 invalid input, 3 capacity or guard exceeded,
// 4 I/O error. Failures are reported on stderr as
// {"error": {"kind": ..., "detail": ...}}.

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pivotmap/config.hpp"
#include "pivotmap/pivotmap.hpp"
#include "svg.hpp"

namespace pivotmap::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInvalidInput = 2,
  kCapacity = 3,
  kIoError = 4,
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kCapacity: return kCapacity;
    case ErrorKind::kIo: return kIoError;
    default: return kInvalidInput;
  }
}

inline void report_error(std::ostream& err, std::string_view kind, const std::string& detail) {
  Json j;
  j["error"] = {{"kind", std::string(kind)}, {"detail", detail}};
  err << j.dump() << "\n";
}

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

// --in / --out resolution: a path opens a file, an empty path falls back to
// the process streams.
class Input {
 public:
  Input(const std::string& path, std::istream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ifstream>(path);
    if (!*file_) fail(ErrorKind::kIo, "cannot open input file " + path);
    stream_ = file_.get();
  }
  std::istream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) fail(ErrorKind::kIo, "cannot open output file " + path);
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }
  void line(const Json& j) { *stream_ << j.dump() << "\n"; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

// Reads prediction and ground-truth JSONL files in lockstep; frame ids must
// appear in the same order in both.
class FramePairReader {
 public:
  FramePairReader(std::istream& preds, std::istream& gts) : preds_(preds), gts_(gts) {}

  // False at the end of both files.
  bool next(LocalMap& pred, LocalMap& gt) {
    const bool has_pred = read(preds_, pred_line_, pred);
    const bool has_gt = read(gts_, gt_line_, gt);
    if (!has_pred && !has_gt) return false;
    if (has_pred != has_gt) {
      std::string detail = "frame mismatch, missing:";
      std::istream& rest = has_pred ? preds_ : gts_;
      std::size_t& counter = has_pred ? pred_line_ : gt_line_;
      LocalMap extra = has_pred ? pred : gt;
      const char* what = has_pred ? " ground truth for " : " prediction for ";
      do {
        detail += what + extra.frame_id + ";";
      } while (read(rest, counter, extra));
      fail(ErrorKind::kInvalidInput, detail);
    }
    if (pred.frame_id != gt.frame_id) {
      fail(ErrorKind::kInvalidInput, "frame mismatch: predictions have '" + pred.frame_id +
                                         "' where ground truth has '" + gt.frame_id + "'");
    }
    return true;
  }

 private:
  static bool read(std::istream& in, std::size_t& line_number, LocalMap& out) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_number;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out = parse_local_map(line, line_number);
      return true;
    }
    return false;
  }

  std::istream& preds_;
  std::istream& gts_;
  std::size_t pred_line_ = 0;
  std::size_t gt_line_ = 0;
};

inline std::vector<double> parse_thresholds(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::kInvalidInput, "thresholds: cannot parse '" + item + "'");
    }
  }
  return out;
}

// Maps metric coordinates into [0, 1] over the range.
inline std::vector<Point2> normalized(std::span<const Point2> pts, const BevRange& r) {
  std::vector<Point2> out;
  for (const Point2& p : pts) out.push_back({(p.x - r.x_min) / r.width(), (p.y - r.y_min) / r.height()});
  return out;
}

inline Json indices_json(const Combination& c) {
  Json j = Json::array();
  for (std::size_t i : c.indices) j.push_back(i);
  return j;
}

inline Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline std::vector<std::size_t> rle_counts(const BevGrid& grid) {
  std::vector<std::size_t> counts;
  double current = 0.0;
  std::size_t run = 0;
  for (double v : grid.values()) {
    const double bit = v > 0.5 ? 1.0 : 0.0;
    if (bit != current) {
      counts.push_back(run);
      run = 0;
      current = bit;
    }
    ++run;
  }
  counts.push_back(run);
  return counts;
}

inline void write_pgm(const std::string& path, const BevGrid& grid) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kIo, "cannot open output file " + path);
  f << "P5\n" << grid.cols() << " " << grid.rows() << "\n255\n";
  // Top image row is the forward edge.
  for (std::size_t r = grid.rows(); r-- > 0;) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      f.put(static_cast<char>(grid(r, c) > 0.5 ? 255 : 0));
    }
  }
}

struct Common {
  std::string config_path;
  Config config;

  void load() {
    if (!config_path.empty()) config = load_config(config_path);
  }
};

inline void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--config", common.config_path, "JSON file overriding default parameters");
}

// --------------------------------------------------------------------------
// simplify

struct SimplifyArgs {
  std::string in, out;
  std::optional<double> area_threshold;
  std::optional<double> epsilon;
};

inline void cmd_simplify(const SimplifyArgs& a, Common& common, Streams io) {
  common.load();
  SimplifyConfig cfg = common.config.simplify;
  if (a.area_threshold) cfg.area_threshold = *a.area_threshold;
  if (a.epsilon) cfg.tolerance_epsilon = *a.epsilon;
  validate(cfg);
  Input in(a.in, io.in);
  Output out(a.out, io.out);
  for_each_local_map(in.get(), [&](LocalMap&& map) {
    for (MapElement& e : map.elements) e.line = vw_simplify(e.line, cfg);
    out.line(to_json(map));
  });
}

// --------------------------------------------------------------------------
// match

struct MatchArgs {
  std::string preds, gts, out;
  bool normalize = false;
};

inline void cmd_match(const MatchArgs& a, Common& common, Streams io) {
  common.load();
  Input preds(a.preds, io.in);
  Input gts(a.gts, io.in);
  Output out(a.out, io.out);
  FramePairReader reader(preds.get(), gts.get());
  LocalMap pred, gt;
  while (reader.next(pred, gt)) {
    for (ElementClass c : kAllClasses) {
      std::vector<std::size_t> pred_ids, gt_ids;
      std::vector<Polyline> pl, gl;
      for (std::size_t i = 0; i < pred.elements.size(); ++i) {
        if (pred.elements[i].cls != c) continue;
        pred_ids.push_back(i);
        Polyline l = pred.elements[i].line;
        if (a.normalize) l.points = normalized(l.points, common.config.range);
        pl.push_back(std::move(l));
      }
      for (std::size_t i = 0; i < gt.elements.size(); ++i) {
        if (gt.elements[i].cls != c) continue;
        gt_ids.push_back(i);
        Polyline l = gt.elements[i].line;
        if (a.normalize) l.points = normalized(l.points, common.config.range);
        gl.push_back(std::move(l));
      }
      if (pl.empty() && gl.empty()) continue;
      require(gl.size() <= static_cast<std::size_t>(common.config.budget[c].max_instances),
              ErrorKind::kCapacity,
              "frame " + gt.frame_id + ", class " + std::string(to_string(c)) + ": " +
                  std::to_string(gl.size()) + " ground-truth instances exceed budget M = " +
                  std::to_string(common.config.budget[c].max_instances));
      InstanceAssignment asg;
      try {
        asg = assign_instances(pl, gl, c);
      } catch (const Error& e) {
        fail(e.kind(), "frame " + gt.frame_id + ": " + e.what());
      }
      std::vector<std::optional<std::size_t>> gt_of_pred(pl.size());
      for (const auto& p : asg.pairs) gt_of_pred[p.pred] = p.gt;
      for (std::size_t p = 0; p < pl.size(); ++p) {
        Json j;
        j["frame_id"] = pred.frame_id;
        j["class"] = std::string(to_string(c));
        j["pred"] = pred_ids[p];
        if (!gt_of_pred[p]) {
          j["gt"] = nullptr;
          j["combination"] = nullptr;
          j["cost"] = nullptr;
        } else {
          const PivotMatch m = match_polylines(pl[p], gl[*gt_of_pred[p]]);
          j["gt"] = gt_ids[*gt_of_pred[p]];
          j["combination"] = indices_json(m.combination);
          j["cost"] = m.cost;
        }
        out.line(j);
      }
    }
  }
}

// --------------------------------------------------------------------------
// loss

struct LossArgs {
  std::string in, out;
  bool normalize = false;
};

inline Json report_json(const DvsReport& r) {
  Json j;
  j["l_pp"] = r.l_pp;
  j["l_cp"] = r.l_cp;
  j["l_cls"] = r.l_cls;
  j["total"] = r.total;
  j["combination"] = indices_json(r.match.combination);
  j["cost"] = r.match.cost;
  j["grad"] = points_to_json(r.grad);
  j["prob_grad"] = r.prob_grad;
  j["cls_grad"] = r.cls_grad;
  return j;
}

inline void cmd_loss(const LossArgs& a, Common& common, Streams io) {
  common.load();
  Input in(a.in, io.in);
  Output out(a.out, io.out);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in.get(), line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_number);
    try {
      Json rec;
      try {
        rec = Json::parse(line);
      } catch (const Json::parse_error& e) {
        fail(ErrorKind::kParse, e.what());
      }
      auto pred = points_from_json(detail::field(rec, "pred", "record"), "pred");
      auto gt = points_from_json(detail::field(rec, "gt", "record"), "gt");
      const Json& pj = detail::field(rec, "probs", "record");
      if (!pj.is_array()) fail(ErrorKind::kValidation, "probs: expected an array");
      std::vector<double> probs;
      for (const Json& p : pj) probs.push_back(detail::number(p, "probs"));
      if (a.normalize) {
        pred = normalized(pred, common.config.range);
        gt = normalized(gt, common.config.range);
      }
      const DvsReport r = dvs_total(pred, probs, gt, common.config.dvs_weights);
      Json j = report_json(r);
      if (rec.contains("la") || rec.contains("bev")) {
        const double la = rec.contains("la") ? detail::number(rec["la"], "la") : 0.0;
        const double bev = rec.contains("bev") ? detail::number(rec["bev"], "bev") : 0.0;
        j["total_loss"] = total_loss(r, la, bev, common.config.mask_weights);
      }
      out.line(j);
    } catch (const Error& e) {
      fail(e.kind(), where + ": " + e.what());
    }
  }
}

// --------------------------------------------------------------------------
// rasterize

struct RasterArgs {
  std::string in, out, out_dir;
  std::string format = "rle";
  std::optional<double> thickness;
};

inline void cmd_rasterize(const RasterArgs& a, Common& common, Streams io) {
  common.load();
  require(a.format == "rle" || a.format == "pgm", ErrorKind::kInvalidInput,
          "--format must be rle or pgm");
  require(a.format == "rle" || !a.out_dir.empty(), ErrorKind::kInvalidInput,
          "--format pgm requires --out-dir");
  const double thickness = a.thickness.value_or(common.config.thickness);
  Input in(a.in, io.in);
  Output out(a.format == "rle" ? a.out : std::string(), io.out);
  for_each_local_map(in.get(), [&](LocalMap&& raw) {
    const LocalMap map = clip_to_range(raw);
    std::vector<BevGrid> masks;
    for (const MapElement& e : map.elements) {
      masks.push_back(rasterize(e.line, map.range, common.config.grid, thickness));
    }
    const BevGrid all = union_mask(masks, common.config.grid);
    if (a.format == "pgm") {
      const std::filesystem::path path = std::filesystem::path(a.out_dir) / (map.frame_id + ".pgm");
      write_pgm(path.string(), all);
      out.line({{"frame_id", map.frame_id}, {"file", path.string()}});
      return;
    }
    Json j;
    j["frame_id"] = map.frame_id;
    j["rows"] = common.config.grid.rows;
    j["cols"] = common.config.grid.cols;
    Json elements = Json::array();
    for (std::size_t i = 0; i < masks.size(); ++i) {
      elements.push_back({{"class", std::string(to_string(map.elements[i].cls))},
                          {"counts", rle_counts(masks[i])}});
    }
    j["elements"] = std::move(elements);
    j["union"] = {{"counts", rle_counts(all)}};
    out.line(j);
  });
}

// --------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string preds, gts, out, csv;
  std::string thresholds;
  std::optional<double> sample_step;
  unsigned jobs = 1;
};

inline Json eval_json(const EvalResult& r) {
  Json j;
  j["thresholds"] = r.thresholds;
  Json classes;
  for (ElementClass c : kAllClasses) {
    Json aps = Json::array();
    for (std::size_t t = 0; t < r.thresholds.size(); ++t) aps.push_back(optional_json(r.at(c, t)));
    classes[std::string(to_string(c))] = {{"ap", aps}, {"mean", optional_json(r.of(c))}};
  }
  j["classes"] = classes;
  j["mAP"] = optional_json(r.mean_ap);
  return j;
}

inline void cmd_eval(const EvalArgs& a, Common& common, Streams io) {
  common.load();
  EvalConfig cfg = common.config.eval;
  if (!a.thresholds.empty()) cfg.thresholds = parse_thresholds(a.thresholds);
  if (a.sample_step) cfg.sample_step = *a.sample_step;
  EvalAccumulator acc(cfg);
  Input preds(a.preds, io.in);
  Input gts(a.gts, io.in);
  FramePairReader reader(preds.get(), gts.get());
  // Frames are processed in batches so memory stays bounded.
  const std::size_t batch = 64 * std::max(1u, a.jobs);
  std::vector<std::pair<LocalMap, LocalMap>> pending;
  const auto drain = [&] {
    std::vector<FrameEvalResult> results(pending.size());
    parallel_for(pending.size(), a.jobs, [&](std::size_t i) {
      results[i] = acc.evaluate_frame(pending[i].first, pending[i].second);
    });
    for (const auto& r : results) acc.add(r);
    pending.clear();
  };
  LocalMap pred, gt;
  while (reader.next(pred, gt)) {
    pending.emplace_back(clip_to_range(pred), clip_to_range(gt));
    if (pending.size() >= batch) drain();
  }
  drain();
  const EvalResult result = acc.result();
  Output out(a.out, io.out);
  out.line(eval_json(result));
  if (!a.csv.empty()) {
    Output csv(a.csv, io.out);
    const auto cell = [](const std::optional<double>& v) {
      return v ? Json(*v).dump() : std::string("nan");
    };
    csv.get() << "thresholds,AP_divider,AP_ped,AP_boundary,mAP\n";
    std::string thr;
    for (std::size_t t = 0; t < result.thresholds.size(); ++t) {
      thr += (t ? "/" : "") + Json(result.thresholds[t]).dump();
    }
    csv.get() << thr << "," << cell(result.of(ElementClass::kDivider)) << ","
              << cell(result.of(ElementClass::kPedCrossing)) << ","
              << cell(result.of(ElementClass::kBoundary)) << "," << cell(result.mean_ap) << "\n";
  }
}

// --------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string out;
  std::string kinds = "all";
  std::size_t count = 100;
  std::uint64_t seed = 0;
};

inline std::vector<ShapeKind> parse_kinds(const std::string& text) {
  if (text == "all") return {kAllShapes.begin(), kAllShapes.end()};
  if (text == "corner") return {kCornerShapes.begin(), kCornerShapes.end()};
  std::vector<ShapeKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto k = parse_shape_kind(item);
    if (!k) fail(ErrorKind::kInvalidInput, "unknown shape kind '" + item + "'");
    out.push_back(*k);
  }
  require(!out.empty(), ErrorKind::kInvalidInput, "no shape kinds given");
  return out;
}

inline std::string frame_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "synth-%06zu", i);
  return buf;
}

inline std::vector<MapElement> synth_corpus(const std::vector<ShapeKind>& kinds, std::size_t count,
                                            std::uint64_t seed, const BevRange& range) {
  std::vector<MapElement> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(gen_element(kinds[i % kinds.size()], seed + i, range));
  }
  return out;
}

inline void cmd_synth(const SynthArgs& a, Common& common, Streams io) {
  common.load();
  const auto kinds = parse_kinds(a.kinds);
  Output out(a.out, io.out);
  const auto corpus = synth_corpus(kinds, a.count, a.seed, common.config.range);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    LocalMap map{frame_name(i), common.config.range, {corpus[i]}};
    out.line(to_json(map));
  }
}

// --------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::string in, out, svg;
  std::size_t k = 5;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

inline void cmd_compare(const CompareArgs& a, Common& common, Streams io) {
  common.load();
  std::vector<MapElement> corpus;
  if (a.in.empty()) {
    corpus = corner_corpus(a.count, a.seed, common.config.range);
  } else {
    Input in(a.in, io.in);
    for_each_local_map(in.get(), [&](LocalMap&& m) {
      for (MapElement& e : m.elements) corpus.push_back(std::move(e));
    });
  }
  const CompactnessReport rep =
      compactness_experiment(corpus, a.k, common.config.eval.sample_step, a.jobs);
  Json j;
  j["k"] = rep.k;
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"index", r.index}, {"chamfer_even", r.chamfer_even}, {"chamfer_pivot", r.chamfer_pivot}});
  }
  j["rows"] = std::move(rows);
  j["notes"] = rep.notes;
  j["mean_even"] = rep.mean_even;
  j["mean_pivot"] = rep.mean_pivot;
  Output out(a.out, io.out);
  out.line(j);
  if (!a.svg.empty()) {
    std::vector<svg::Panel> panels;
    for (const auto& r : rep.rows) {
      const Polyline& dense = corpus[r.index].line;
      const Polyline even = even_resample(dense, a.k);
      const Polyline piv = vw_top_k(dense, a.k);
      panels.push_back({{dense.points, dense.closed, "#999999", false},
                        {even.points, even.closed, "#d62728", true},
                        {piv.points, piv.closed, "#1f77b4", true}});
    }
    Output svg_out(a.svg, io.out);
    svg::write(svg_out.get(), panels);
  }
}

// --------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string in, out, svg;
  std::string shape;
  std::size_t n = 10;
  bool simplify = false;
  std::optional<std::size_t> steps;
  std::optional<double> lr;
  std::optional<double> prob_lr;
  std::optional<std::size_t> log_interval;
  std::uint64_t seed = 0;
};

inline void cmd_fit(const FitArgs& a, Common& common, Streams io) {
  common.load();
  FitConfig cfg = common.config.fit;
  if (a.steps) cfg.steps = *a.steps;
  if (a.lr) cfg.learning_rate = *a.lr;
  if (a.prob_lr) cfg.prob_lr = *a.prob_lr;
  if (a.log_interval) cfg.log_interval = *a.log_interval;
  cfg.seed = a.seed;
  validate(cfg);
  require(a.in.empty() != a.shape.empty(), ErrorKind::kInvalidInput,
          "fit: give exactly one of --in or --shape");

  std::vector<Polyline> targets;
  if (!a.shape.empty()) {
    const auto kind = parse_shape_kind(a.shape);
    if (!kind) fail(ErrorKind::kInvalidInput, "unknown shape kind '" + a.shape + "'");
    targets.push_back(vw_simplify(gen_element(*kind, a.seed, common.config.range).line,
                                  common.config.simplify));
  } else {
    Input in(a.in, io.in);
    for_each_local_map(in.get(), [&](LocalMap&& m) {
      for (MapElement& e : m.elements) {
        targets.push_back(a.simplify ? vw_simplify(e.line, common.config.simplify) : e.line);
      }
    });
  }

  Output out(a.out, io.out);
  std::vector<svg::Panel> panels;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const Polyline& t = targets[k];
    const std::vector<Point2> gt = t.closed ? cut_closed(t.points, 0) : t.points;
    FitTrace trace;
    try {
      trace = fit_points(gt, a.n, cfg);
    } catch (const Error& e) {
      fail(e.kind(), "instance " + std::to_string(k) + ": " + e.what());
    }
    for (const auto& entry : trace.log) {
      out.line({{"instance", k}, {"step", entry.step}, {"l_pp", entry.l_pp}, {"l_cp", entry.l_cp},
                {"l_cls", entry.l_cls}, {"total", entry.total}});
    }
    Json fin;
    fin["points"] = points_to_json(trace.points);
    fin["probs"] = trace.probs;
    fin["combination"] = indices_json(trace.match.combination);
    fin["cost"] = trace.match.cost;
    fin["stable_steps"] = trace.stable_steps;
    fin["pivots"] = points_to_json(reconstruct_pivots(trace.points, trace.probs));
    out.line({{"instance", k}, {"final", fin}});
    panels.push_back({{trace.init_points, false, "#bbbbbb", true},
                      {gt, false, "#d62728", true},
                      {trace.points, false, "#1f77b4", true}});
  }
  if (!a.svg.empty()) {
    Output svg_out(a.svg, io.out);
    svg::write(svg_out.get(), panels);
  }
}

// --------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Pivot-based vectorized map toolkit: simplification, matching, losses, evaluation",
               "pivotmap"};
  app.require_subcommand(1);
  Common common;

  SimplifyArgs simplify_args;
  auto* simplify = app.add_subcommand("simplify", "Reduce every element to its VW pivot sequence");
  simplify->add_option("--in", simplify_args.in, "Map JSONL (default stdin)");
  simplify->add_option("--out", simplify_args.out, "Output JSONL (default stdout)");
  simplify->add_option("--area-threshold", simplify_args.area_threshold, "Triangle area threshold, m^2");
  simplify->add_option("--epsilon", simplify_args.epsilon, "Tolerance epsilon, m");
  add_common(simplify, common);

  MatchArgs match_args;
  auto* match = app.add_subcommand("match", "Per-instance pivot matching of predictions to ground truth");
  match->add_option("--preds", match_args.preds, "Prediction map JSONL")->required();
  match->add_option("--gts", match_args.gts, "Ground-truth map JSONL")->required();
  match->add_option("--out", match_args.out, "Output JSONL (default stdout)");
  match->add_flag("--normalize", match_args.normalize, "Match in range-normalized coordinates");
  add_common(match, common);

  LossArgs loss_args;
  auto* loss = app.add_subcommand("loss", "DVS loss and gradients per {pred, probs, gt} record");
  loss->add_option("--in", loss_args.in, "Instance JSONL (default stdin)");
  loss->add_option("--out", loss_args.out, "Output JSONL (default stdout)");
  loss->add_flag("--normalize", loss_args.normalize, "Compute losses in range-normalized coordinates");
  add_common(loss, common);

  RasterArgs raster_args;
  auto* raster = app.add_subcommand("rasterize", "Rasterize map elements onto the BEV grid");
  raster->add_option("--in", raster_args.in, "Map JSONL (default stdin)");
  raster->add_option("--out", raster_args.out, "RLE JSONL output (default stdout)");
  raster->add_option("--format", raster_args.format, "rle or pgm");
  raster->add_option("--out-dir", raster_args.out_dir, "Directory for PGM files");
  raster->add_option("--thickness", raster_args.thickness, "Line thickness, m (default: cell diagonal)");
  add_common(raster, common);

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Chamfer-distance AP evaluation");
  eval->add_option("--preds", eval_args.preds, "Prediction map JSONL")->required();
  eval->add_option("--gts", eval_args.gts, "Ground-truth map JSONL")->required();
  eval->add_option("--thresholds", eval_args.thresholds, "Comma-separated Chamfer thresholds, m");
  eval->add_option("--sample-step", eval_args.sample_step, "Resampling step, m");
  eval->add_option("--csv", eval_args.csv, "Also write a CSV summary here");
  eval->add_option("--out", eval_args.out, "Output JSON (default stdout)");
  eval->add_option("--jobs", eval_args.jobs, "Worker threads");
  add_common(eval, common);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Emit a synthetic corpus as map JSONL");
  synth->add_option("--kinds", synth_args.kinds, "all, corner, or comma-separated shape kinds");
  synth->add_option("--count", synth_args.count, "Number of elements");
  synth->add_option("--seed", synth_args.seed, "Base seed");
  synth->add_option("--out", synth_args.out, "Output JSONL (default stdout)");
  add_common(synth, common);

  CompareArgs compare_args;
  auto* compare = app.add_subcommand("compare", "Evenly-spaced vs pivot representation error");
  compare->add_option("--in", compare_args.in, "Corpus JSONL (default: generated corner corpus)");
  compare->add_option("--k", compare_args.k, "Point budget K");
  compare->add_option("--count", compare_args.count, "Generated corpus size");
  compare->add_option("--seed", compare_args.seed, "Generated corpus seed");
  compare->add_option("--svg", compare_args.svg, "Write an SVG overlay here");
  compare->add_option("--out", compare_args.out, "Output JSON (default stdout)");
  compare->add_option("--jobs", compare_args.jobs, "Worker threads");
  add_common(compare, common);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Fit free points to a pivot sequence with the DVS loss");
  fit->add_option("--in", fit_args.in, "Map JSONL whose elements are the targets");
  fit->add_option("--shape", fit_args.shape, "Generate the target from a synthetic shape kind");
  fit->add_flag("--simplify", fit_args.simplify, "Run VW on --in elements first");
  fit->add_option("--n", fit_args.n, "Number of predicted points N");
  fit->add_option("--steps", fit_args.steps, "Optimisation steps");
  fit->add_option("--lr", fit_args.lr, "Coordinate learning rate, m per step");
  fit->add_option("--prob-lr", fit_args.prob_lr, "Logit learning rate");
  fit->add_option("--log-interval", fit_args.log_interval, "Steps between trace lines");
  fit->add_option("--seed", fit_args.seed, "Initialisation seed");
  fit->add_option("--svg", fit_args.svg, "Write an SVG overlay here");
  fit->add_option("--out", fit_args.out, "Output JSONL (default stdout)");
  add_common(fit, common);

  std::vector<std::string> argv_store = {"pivotmap"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return kInvalidInput;
  }

  const Streams io{in, out, err};
  try {
    if (*simplify) cmd_simplify(simplify_args, common, io);
    else if (*match) cmd_match(match_args, common, io);
    else if (*loss) cmd_loss(loss_args, common, io);
    else if (*raster) cmd_rasterize(raster_args, common, io);
    else if (*eval) cmd_eval(eval_args, common, io);
    else if (*synth) cmd_synth(synth_args, common, io);
    else if (*compare) cmd_compare(compare_args, common, io);
    else if (*fit) cmd_fit(fit_args, common, io);
  } catch (const Error& e) {
    report_error(err, to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return kInvalidInput;
  }
  return kSuccess;
}

}  // namespace pivotmap::cli
