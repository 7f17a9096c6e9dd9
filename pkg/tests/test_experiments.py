import csv
import io
import json

import numpy as np
import pytest

from affiq.errors import UnknownName
from affiq.experiments import SUITES, BodyCatalog, CaseRecord, SuiteReport, run_suite
from affiq.experiments.report import BAND, CSV_COLUMNS, EQ, GEQ, INFO, ROUND_REL, STRICT
from affiq.hull import body_volume
from affiq.numerics.rng import threads


@pytest.mark.parametrize("kind,margin,stderr,expected", [
    (GEQ, -0.39, 0.1, True), (GEQ, -0.41, 0.1, False),
    (STRICT, 0.41, 0.1, True), (STRICT, 0.39, 0.1, False),
    (EQ, 0.39, 0.1, True), (EQ, -0.41, 0.1, False),
    (BAND, 0.5, 0.1, True), (BAND, -0.41, 0.1, False), (BAND, 1.41, 0.1, False),
])
def test_pass_rules(kind, margin, stderr, expected):
    floor = 1.0 if kind == BAND else 0.0
    rec = CaseRecord("c", "b", lhs=10.0 + margin, rhs=10.0, stderr=stderr, kind=kind, floor=floor)
    assert rec.passed is expected


def test_rounding_floor_and_info():
    rec = CaseRecord("c", "b", lhs=1.0, rhs=1.0 + 1e-12, stderr=0.0, kind=EQ)
    assert rec.floor == pytest.approx(ROUND_REL * (1.0 + 1e-12))
    assert rec.passed
    assert CaseRecord("c", "b", 0.0, 1.0, 0.0, kind=INFO).passed is None
    assert not CaseRecord("c", "b", float("nan"), 1.0, 0.0).passed


def test_report_serialization():
    rep = SuiteReport("demo", 3, 100, {"x": np.float64(0.1)})
    rep.add(CaseRecord("b-case", "cube3", 2.0, 1.0, 0.1, n=3, k=2, p=-3.0, u=[1.0, 0.0, 0.0]))
    rep.add(CaseRecord("a-case", "ball3", 1.0, 1.0, 0.0, kind=INFO))
    d = json.loads(rep.to_json())
    assert d["pass"] and d["n_cases"] == 2 and d["n_asserted"] == 1
    assert [c["case"] for c in d["cases"]] == ["a-case", "b-case"]
    assert d["params"]["x"] == 0.1
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == CSV_COLUMNS
    assert rows[2][1] == "b-case" and rows[2][-1] == "true" and len(rows[2][7]) == 8
    assert rows[1][-1] == ""
    assert "wall_time" not in d
    assert rep.summary().startswith("demo: PASS")


def test_catalog_contents():
    cat = BodyCatalog.load()
    assert "cube3" in cat and "nope" not in cat
    assert set(cat.ids(3)) >= {"cube3", "simplex3", "ball3", "ellipsoid3a"}
    assert body_volume(cat.get("simplex3")).value == pytest.approx(1 / 6)
    assert cat.is_ellipsoid("ellipsoid3b") and not cat.is_ellipsoid("cube3")
    assert cat.get("rpoly3a") is cat.get("rpoly3a")
    with pytest.raises(UnknownName):
        cat.get("nope")


def test_suite_registry():
    assert {"exact-geometry", "kubota", "lutwak", "steiner", "rolodex", "bp", "petty",
            "loomis-whitney", "lp-structure", "af-chain"} <= set(SUITES)
    with pytest.raises(UnknownName):
        run_suite("nope", 1)


def test_exact_geometry_suite_passes():
    rep = run_suite("exact-geometry", 1)
    assert rep.passed and len(rep.asserted) >= 8


def test_run_suite_deterministic_across_threads():
    with threads(1):
        a = run_suite("lutwak", 5, budget=20_000, n_values=(3,)).to_json()
    with threads(3):
        b = run_suite("lutwak", 5, budget=20_000, n_values=(3,)).to_json()
    assert a == b
    c = run_suite("lutwak", 6, budget=20_000, n_values=(3,)).to_json()
    assert c != a


def test_lutwak_small_budget_passes():
    rep = run_suite("lutwak", 2, budget=20_000, n_values=(3,))
    assert rep.passed, [c.case for c in rep.failures]
