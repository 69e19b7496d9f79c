// Copyright 2026 The pedcrit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pedcrit/config.hpp"
#include "pedcrit/criticality.hpp"
#include "pedcrit/error.hpp"
#include "pedcrit/evaluation.hpp"
#include "pedcrit/loss.hpp"
#include "pedcrit/pipeline.hpp"
#include "pedcrit/records.hpp"
#include "pedcrit/scenario.hpp"
#include "pedcrit/scene.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

namespace py = pybind11;
using namespace pedcrit;

namespace
{

// Config arrives as the JSON text of a config file ("" for defaults).
RunConfig config_from(const std::string & config_json)
{
  return resolve_config(config_json.empty() ? ConfigOverrides{} : parse_config_text(config_json), {});
}

LossParams loss_params(double alpha, double gamma, double eps)
{
  LossParams p;
  p.alpha = alpha;
  p.gamma = gamma;
  p.eps = eps;
  return p;
}

std::tuple<double, double, double> as_tuple(const LossEval & e)
{
  return {e.value, e.d_dp, e.d_dlogit};
}

CriticalityMode mode_from(const std::string & s)
{
  const auto m = parse_mode(s);
  if (!m) {
    throw ConfigError("unknown mode '" + s + "'");
  }
  return *m;
}

}  // namespace

PYBIND11_MODULE(_pedcrit, m)
{
  m.doc() = "Pedestrian criticality annotation, safety focal loss and zone-based evaluation.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<MissingAnnotationError>(m, "MissingAnnotationError", base.ptr());

  m.def(
    "focal_loss",
    [](double p, double alpha, double gamma, double eps) {
      return as_tuple(focal_loss(p, loss_params(alpha, gamma, eps)));
    },
    py::arg("p"), py::arg("alpha") = 0.25, py::arg("gamma") = 2.0, py::arg("eps") = 1e-7,
    "Returns (value, d/dp, d/dlogit).");
  m.def(
    "safety_focal_loss",
    [](double p, double kappa, double alpha, double gamma, double eps) {
      return as_tuple(safety_focal_loss(p, kappa, loss_params(alpha, gamma, eps)));
    },
    py::arg("p"), py::arg("kappa"), py::arg("alpha") = 0.25, py::arg("gamma") = 2.0,
    py::arg("eps") = 1e-7, "Returns (value, d/dp, d/dlogit).");

  m.def(
    "distance_criticality",
    [](double d, double d_max) {
      CriticalityConfig c;
      c.d_max = d_max;
      return distance_criticality(d, c);
    },
    py::arg("distance"), py::arg("d_max") = 40.0);
  m.def(
    "collision_criticality",
    [](double ttc, double ttc_max) {
      CriticalityConfig c;
      c.ttc_max = ttc_max;
      return collision_criticality(ttc, c);
    },
    py::arg("ttc"), py::arg("ttc_max") = 6.0);
  m.def(
    "compose_kappa",
    [](double kc, double kd, const std::string & mode) { return compose_kappa(kc, kd, mode_from(mode)); },
    py::arg("kappa_c"), py::arg("kappa_d"), py::arg("mode") = "composed");
  m.def(
    "assign_zone",
    [](double ttc, double d) { return std::string(to_string(assign_zone(ttc, d, {}))); },
    py::arg("ttc"), py::arg("distance"));

  m.def(
    "iou",
    [](const std::array<double, 4> & a, const std::array<double, 4> & b) {
      return iou({a[0], a[1], a[2], a[3]}, {b[0], b[1], b[2], b[3]});
    },
    py::arg("a"), py::arg("b"));

  m.def(
    "generate_scene",
    [](const std::string & kind, int n_pedestrians, double av_speed, std::uint64_t seed,
       int n_frames, bool curved_road) {
      const auto t = parse_template(kind);
      if (!t) {
        throw DomainError("unknown template '" + kind + "'");
      }
      ScenarioSpec spec;
      spec.kind = *t;
      spec.n_pedestrians = n_pedestrians;
      spec.av_speed = av_speed;
      spec.seed = seed;
      spec.n_frames = n_frames;
      spec.curved_road = curved_road;
      return serialize_scene(generate(spec).frames);
    },
    py::arg("template") = "random", py::arg("n_pedestrians") = 4, py::arg("av_speed") = 10.0,
    py::arg("seed") = 0, py::arg("n_frames") = 1, py::arg("curved_road") = false,
    "Returns the scene as JSON text.");

  m.def(
    "annotate",
    [](const std::string & scene_json, const std::string & config_json, int jobs) {
      const auto cfg = config_from(config_json);
      const auto frames = parse_scene(scene_json);
      py::gil_scoped_release release;
      return write_annotations(annotate_scene(frames, cfg, jobs), cfg);
    },
    py::arg("scene_json"), py::arg("config_json") = "", py::arg("jobs") = 1,
    "Scene JSON in, annotation JSON out.");
  m.def(
    "curate",
    [](const std::string & scene_json, const std::string & annotations_json,
       const std::string & config_json) {
      const auto cfg = config_from(config_json);
      const auto frames = parse_scene(scene_json);
      const auto annotated = annotations_json.empty() ? annotate_scene(frames, cfg)
                                                      : parse_annotations(annotations_json);
      const auto set = curate_scene(frames, annotated);
      return std::make_tuple(write_curated(set, cfg), write_discard_report(set));
    },
    py::arg("scene_json"), py::arg("annotations_json") = "", py::arg("config_json") = "",
    "Returns (curated JSON, discard report JSON).");
  m.def(
    "evaluate",
    [](const std::string & curated_json, const std::string & detections_json,
       const std::string & config_json) {
      const auto cfg = config_from(config_json);
      const auto curated = parse_curated(curated_json);
      const auto dets = parse_detections(detections_json);
      return write_eval_report(evaluate(dets, curated.boxes, curated.frame_ids, cfg.eval), cfg);
    },
    py::arg("curated_json"), py::arg("detections_json"), py::arg("config_json") = "",
    "Returns the evaluation report as JSON text.");
  m.def(
    "audit_ttc",
    [](const std::string & scene_json, const std::string & config_json) {
      const auto cfg = config_from(config_json);
      const auto frames = parse_scene(scene_json);
      return write_audit_csv(audit_scene(frames, cfg.reach, {}));
    },
    py::arg("scene_json"), py::arg("config_json") = "", "Returns the audit CSV text.");
}
