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

// JSONL map format, one frame per line:
//
//   {"frame_id": "...",
//    "range": {"x_min": f, "x_max": f, "y_min": f, "y_max": f},
//    "elements": [{"class": "divider"|"ped_crossing"|"boundary",
//                  "closed": bool, "score": f|null,
//                  "points": [[x, y], ...]}]}
//
// Doubles are written in shortest round-trip form, so parse(serialize(m))
// reproduces every field bit for bit.

#pragma once

#include <istream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pivotmap/map_model.hpp"

namespace pivotmap {

using Json = nlohmann::json;

inline Json points_to_json(std::span<const Point2> pts) {
  Json out = Json::array();
  for (const Point2& p : pts) out.push_back(Json::array({p.x, p.y}));
  return out;
}

inline Json to_json(const MapElement& e) {
  Json j;
  j["class"] = std::string(to_string(e.cls));
  j["closed"] = e.line.closed;
  j["score"] = e.score ? Json(*e.score) : Json(nullptr);
  j["points"] = points_to_json(e.line.points);
  return j;
}

inline Json to_json(const LocalMap& map) {
  Json j;
  j["frame_id"] = map.frame_id;
  j["range"] = {{"x_min", map.range.x_min},
                {"x_max", map.range.x_max},
                {"y_min", map.range.y_min},
                {"y_max", map.range.y_max}};
  Json elements = Json::array();
  for (const MapElement& e : map.elements) elements.push_back(to_json(e));
  j["elements"] = std::move(elements);
  return j;
}

inline std::string serialize_local_map(const LocalMap& map) {
  return to_json(map).dump();
}

namespace detail {

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(ErrorKind::kValidation, where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

inline double number(const Json& v, const std::string& where) {
  if (!v.is_number()) fail(ErrorKind::kValidation, where + ": expected a number");
  return v.get<double>();
}

}  // namespace detail

inline std::vector<Point2> points_from_json(const Json& arr, const std::string& where) {
  if (!arr.is_array()) fail(ErrorKind::kValidation, where + ": expected an array of [x, y]");
  std::vector<Point2> pts;
  pts.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    const Json& p = arr[i];
    if (!p.is_array() || p.size() != 2) fail(ErrorKind::kValidation, at + ": expected [x, y]");
    pts.push_back({detail::number(p[0], at), detail::number(p[1], at)});
  }
  return pts;
}

inline MapElement element_from_json(const Json& j, std::size_t index) {
  const std::string where = "element " + std::to_string(index);
  MapElement e;
  const Json& cls = detail::field(j, "class", where);
  const auto parsed = cls.is_string() ? parse_element_class(cls.get<std::string>())
                                      : std::nullopt;
  if (!parsed) fail(ErrorKind::kValidation, where + ": class: unknown element class");
  e.cls = *parsed;
  if (j.contains("closed")) {
    if (!j["closed"].is_boolean()) fail(ErrorKind::kValidation, where + ": closed: expected bool");
    e.line.closed = j["closed"].get<bool>();
  }
  if (j.contains("score") && !j["score"].is_null()) {
    e.score = detail::number(j["score"], where + ": score");
  }
  e.line.points = points_from_json(detail::field(j, "points", where), where + ": points");
  validate_element(e, index);
  return e;
}

inline LocalMap local_map_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::kValidation, "record: expected a JSON object");
  LocalMap map;
  const Json& id = detail::field(j, "frame_id", "record");
  if (!id.is_string()) fail(ErrorKind::kValidation, "frame_id: expected a string");
  map.frame_id = id.get<std::string>();
  if (j.contains("range")) {
    const Json& r = j["range"];
    map.range.x_min = detail::number(detail::field(r, "x_min", "range"), "range.x_min");
    map.range.x_max = detail::number(detail::field(r, "x_max", "range"), "range.x_max");
    map.range.y_min = detail::number(detail::field(r, "y_min", "range"), "range.y_min");
    map.range.y_max = detail::number(detail::field(r, "y_max", "range"), "range.y_max");
  }
  validate_range(map.range);
  const Json& elements = detail::field(j, "elements", "record");
  if (!elements.is_array()) fail(ErrorKind::kValidation, "elements: expected an array");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    map.elements.push_back(element_from_json(elements[i], i));
  }
  return map;
}

// Parses one JSONL record. `line_number` is 1-based and only used in messages.
inline LocalMap parse_local_map(const std::string& text, std::size_t line_number = 1) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::kParse, "line " + std::to_string(line_number) + ": " + e.what());
  }
  try {
    return local_map_from_json(j);
  } catch (const Error& e) {
    fail(e.kind(), "line " + std::to_string(line_number) + ": " + e.what());
  }
}

// Streams records from `in`, calling `sink(LocalMap&&)` per non-blank line.
template <typename Sink>
void for_each_local_map(std::istream& in, Sink&& sink) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    sink(parse_local_map(line, line_number));
  }
}

inline std::vector<LocalMap> read_local_maps(std::istream& in) {
  std::vector<LocalMap> maps;
  for_each_local_map(in, [&](LocalMap&& m) { maps.push_back(std::move(m)); });
  return maps;
}

}  // namespace pivotmap
