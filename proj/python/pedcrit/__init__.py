# Copyright 2026 The pedcrit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for pedcrit.

Scenes, annotations, curated sets, detections and reports travel as the JSON
documents described in docs/formats.md. Functions accept either a dict or
JSON text and return dicts. `config` is a dict of config-file keys.
"""

import json

from . import _pedcrit
from ._pedcrit import (
    ConfigError,
    DomainError,
    Error,
    MissingAnnotationError,
    ParseError,
    assign_zone,
    collision_criticality,
    compose_kappa,
    distance_criticality,
    focal_loss,
    iou,
    safety_focal_loss,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Error",
    "MissingAnnotationError",
    "ParseError",
    "annotate",
    "assign_zone",
    "audit_ttc",
    "collision_criticality",
    "compose_kappa",
    "curate",
    "distance_criticality",
    "evaluate",
    "focal_loss",
    "generate_scene",
    "iou",
    "safety_focal_loss",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def _config(config):
    return json.dumps(config) if config else ""


def generate_scene(template="random", n_pedestrians=4, av_speed=10.0, seed=0, n_frames=1, curved_road=False):
    return json.loads(
        _pedcrit.generate_scene(template, n_pedestrians, av_speed, seed, n_frames, curved_road)
    )


def annotate(scene, config=None, jobs=1):
    return json.loads(_pedcrit.annotate(_text(scene), _config(config), jobs))


def curate(scene, annotations=None, config=None):
    """Returns (curated, discard_report). Annotates first when `annotations` is None."""
    curated, discards = _pedcrit.curate(
        _text(scene), "" if annotations is None else _text(annotations), _config(config)
    )
    return json.loads(curated), json.loads(discards)


def evaluate(curated, detections, config=None):
    return json.loads(_pedcrit.evaluate(_text(curated), _text(detections), _config(config)))


def audit_ttc(scene, config=None):
    """Rows of the soundness audit as dicts; ttc values are floats (inf allowed)."""
    lines = _pedcrit.audit_ttc(_text(scene), _config(config)).splitlines()
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        row = dict(zip(header, line.split(",")))
        for key in ("ttc_rsb", "sampled_ttc", "margin"):
            row[key] = float(row[key])
        row["sound"] = row["sound"] == "true"
        rows.append(row)
    return rows
