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

import json
import math
import os
from pathlib import Path

import pytest

import pedcrit

DATA = Path(os.environ.get("PEDCRIT_TEST_DATA", Path(__file__).resolve().parents[1] / "data"))


def test_loss_kappa_zero_is_focal_loss():
    for p in (0.01, 0.3, 0.5, 0.97):
        assert pedcrit.safety_focal_loss(p, 0.0) == pedcrit.focal_loss(p)


def test_loss_value_at_half():
    value, d_dp, d_dz = pedcrit.safety_focal_loss(0.5, 1.0)
    assert value == pytest.approx(0.086643397569993164, rel=1e-13)
    assert d_dp < 0 and d_dz < 0


def test_kappa_above_gamma_raises():
    with pytest.raises(pedcrit.DomainError):
        pedcrit.safety_focal_loss(0.5, 2.5)


def test_criticality_and_zones():
    assert pedcrit.distance_criticality(20.0) == 0.75
    assert pedcrit.collision_criticality(math.inf) == 0.0
    assert pedcrit.compose_kappa(1.0, 0.0) == 2.0 / 3.0
    assert pedcrit.compose_kappa(0.2, 0.9, "distance_only") == 0.9
    assert [pedcrit.assign_zone(*a) for a in ((1.0, 10.0), (5.0, 15.0), (0.5, 30.0))] == ["C", "PC", "NC"]


def test_iou():
    assert pedcrit.iou([0, 0, 2, 2], [1, 1, 3, 3]) == pytest.approx(1 / 7)


def test_pipeline_on_fixture():
    scene = (DATA / "ten_frames.json").read_text()
    detections = (DATA / "ten_frames_detections.json").read_text()
    ann = pedcrit.annotate(scene)
    assert len(ann["frames"]) == 10
    assert len(ann["records"]) == 60
    assert pedcrit.annotate(scene, jobs=4) == ann
    curated, discards = pedcrit.curate(scene, ann)
    assert discards["summary"]["kept"] == len(curated["boxes"])
    report = pedcrit.evaluate(curated, detections)
    for key in ("ap50", "recall_c", "recall_pc", "recall_nc", "precision"):
        value = report["table"][key]
        assert value is None or 0.0 <= value <= 1.0
    assert report["counts"]["gt"] == len(curated["boxes"])


def test_config_dict_is_applied():
    scene = pedcrit.generate_scene("crossing", n_pedestrians=2, seed=3)
    ann = pedcrit.annotate(scene, config={"mode": "distance_only"})
    assert ann["config"]["mode"] == "distance_only"
    assert all(r["kappa"] == r["kappa_d"] for r in ann["records"])
    with pytest.raises(pedcrit.ConfigError):
        pedcrit.annotate(scene, config={"dtt": 0.1})


def test_generate_is_deterministic_and_audit_sound():
    a = pedcrit.generate_scene("random", n_pedestrians=5, seed=21)
    assert a == pedcrit.generate_scene("random", n_pedestrians=5, seed=21)
    rows = pedcrit.audit_ttc(a)
    assert len(rows) == 5
    assert all(r["sound"] for r in rows)


def test_parse_error_names_field():
    with pytest.raises(pedcrit.ParseError, match="frames"):
        pedcrit.annotate(json.dumps({"frame": []}))
