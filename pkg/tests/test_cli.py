import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import family_bundle
from sandwich_weyl.cli import main
from sandwich_weyl.pipeline import (
    CHECKS,
    ConfigError,
    PipelineConfig,
    canonicalize_report,
    run_report,
    scan_alignments,
)
from sandwich_weyl.serialize import (
    BundleError,
    bundle_from_dict,
    bundle_to_dict,
    canonical_json,
    dumps_bundle,
    loads_bundle,
)

GOLDEN = Path(__file__).parent / "golden"


@given(st.integers(1, 4))
def test_bundle_roundtrip(m):
    b = family_bundle(m)
    back = loads_bundle(dumps_bundle(b))
    assert back == b
    assert bundle_to_dict(back) == bundle_to_dict(b)


def test_bundle_rejects_float_and_unreduced():
    d = bundle_to_dict(family_bundle(1))
    d["alignment"]["h_star"][0] = [2, 2]
    with pytest.raises(BundleError):
        bundle_from_dict(d)
    d["alignment"]["h_star"][0] = 1.0
    with pytest.raises(BundleError):
        bundle_from_dict(d)
    with pytest.raises(BundleError):
        loads_bundle("{not json")
    with pytest.raises(BundleError):
        bundle_from_dict({"schema": "other"})


def test_golden_bundle(tmp_path):
    out = tmp_path / "b.json"
    assert main(["build", "--ambient", "C", "--rank", "2", "--hstar", "1,0", "--out", str(out)]) == 0
    assert json.loads(out.read_text()) == json.loads((GOLDEN / "c2_bundle.json").read_text())


def test_golden_report(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", str(GOLDEN / "c2_bundle.json"), "--out", str(out)]) == 0
    got = canonicalize_report(json.loads(out.read_text()))
    assert got == json.loads((GOLDEN / "c2_report.json").read_text())


def test_build_c3(tmp_path, capsys):
    assert main(["build", "--ambient", "C", "--rank", "3", "--hstar", "1,0,0"]) == 0
    assert loads_bundle(capsys.readouterr().out).hat.M == 2


def test_build_rejects_b3_and_a2(capsys):
    assert main(["build", "--ambient", "B", "--rank", "3", "--hstar", "1,0,0"]) == 2
    assert json.loads(capsys.readouterr().err)["center"]["dimension"] == 5
    assert main(["build", "--ambient", "A", "--rank", "2", "--hstar", "2,-1,-1"]) == 2
    assert json.loads(capsys.readouterr().err)["center"]["dimension"] == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["build", "--ambient", "C", "--rank", "3"],
        ["build", "--ambient", "C", "--rank", "3", "--hstar", "1,0"],
        ["build", "--ambient", "C", "--rank", "x", "--hstar", "1,0"],
        ["build", "--ambient", "Q", "--rank", "3", "--hstar", "1,0,0"],
        ["verify", str(GOLDEN / "c2_bundle.json"), "--checks", "axioms,nonsense"],
        ["verify", "/nonexistent/bundle.json"],
        ["scan", "--ambient", "C", "--rank", "3", "--bound", "0"],
        ["report", "--ambient", "C", "--rank", "2", "--hstar", "1,0", "--format", "xml"],
    ],
)
def test_usage_errors_exit_64(argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 64


def test_partial_checks_are_skipped(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", str(GOLDEN / "c2_bundle.json"), "--checks", "axioms", "--out", str(out)]) == 0
    v = json.loads(out.read_text())["verdicts"]
    assert v["axioms"]["status"] == "pass"
    assert all(v[c]["status"] == "skipped" for c in CHECKS if c != "axioms")


def test_corrupted_bundle_exits_1(tmp_path):
    d = bundle_to_dict(family_bundle(2))
    d["hat"]["phi"] = [p for p in d["hat"]["phi"] if p != [[-1, 1], [0, 1]]]
    src = tmp_path / "bad.json"
    src.write_text(json.dumps(d))
    out = tmp_path / "r.json"
    assert main(["verify", str(src), "--out", str(out)]) == 1
    axioms = json.loads(out.read_text())["verdicts"]["axioms"]
    failed = {c["name"]: c for c in axioms["checks"] if c["status"] == "fail"}
    assert failed["hat.axiom2_symmetric"]["witness"]["missing"] == [[-1, 1], [0, 1]]


def test_report_text(capsys):
    assert main(["report", "--ambient", "C", "--rank", "3", "--hstar", "1,0,0", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "M = 2" in out and out.strip().endswith("PASS")


def test_report_rejects_b3():
    assert main(["report", "--ambient", "B", "--rank", "3", "--hstar", "1,0,0"]) == 2


def test_scan_examples():
    c3 = scan_alignments("C", 3, 1)
    assert {"h_star": [1, 0, 0], "M": 2, "r_zero": 8, "r_minus": 5} in c3
    assert all(r["h_star"] != [1, 0, 0] for r in scan_alignments("B", 3, 1))
    assert scan_alignments("A", 2, 1) == []


def test_scan_deduplicates_scaling():
    rows = scan_alignments("C", 2, 2)
    assert [2, 0] not in [r["h_star"] for r in rows]
    assert [1, 0] in [r["h_star"] for r in rows]


def test_scan_cli(capsys):
    assert main(["scan", "--ambient", "C", "--rank", "3", "--bound", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["alignments"]


def test_config_validation():
    PipelineConfig("C", 3, [1, 0, 0]).validate()
    with pytest.raises(ConfigError):
        PipelineConfig("C", 3, [1, 0, 0], checks=["bogus"]).validate()
    with pytest.raises(ConfigError):
        PipelineConfig("C", 3, [1, 0, 0], workers=0).validate()


def test_cap_env_reaches_pipeline(monkeypatch):
    monkeypatch.setenv("SANDWICH_CAP", "3")
    rep = run_report(family_bundle(2), ["relations"])
    assert rep["verdicts"]["relations"]["status"] == "fail"
    assert "ClosureCapExceeded" in rep["verdicts"]["relations"]["error"]


def test_report_determinism_in_process():
    a = run_report(family_bundle(2), CHECKS, workers=1)
    b = run_report(family_bundle(2), CHECKS, workers=3)
    assert canonical_json(canonicalize_report(a)) == canonical_json(canonicalize_report(b))
