import json
import subprocess
import sys

import pytest

from fms.cli import main
from fms.homology import format_groups, homology
from fms.models import NAMED_MODELS, named_model
from fms.poset import is_isomorphic, poset_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_json_round_trip(capsys, tmp_path):
    for name in NAMED_MODELS:
        code, out, _ = run(capsys, "construct", "--model", name)
        assert code == 0
        p = poset_from_json(out)
        assert p == named_model(name)
        f = tmp_path / f"{name}.json"
        f.write_text(out)
        code, again, _ = run(capsys, "export", "--in", str(f))
        assert code == 0 and again == out


def test_json_is_byte_stable(capsys):
    outs = {run(capsys, "construct", "--model", "t2_11")[1] for _ in range(3)}
    assert len(outs) == 1
    a = run(capsys, "enumerate", "--n", "5", "--filter", "connected", "--check", "h1-torsion-free")[1]
    b = run(capsys, "enumerate", "--n", "5", "--filter", "connected", "--check", "h1-torsion-free", "--workers", "2")[1]
    assert a == b
    assert "wall_time" not in json.loads(a)


def test_homology_text_matches_library(capsys):
    code, out, _ = run(capsys, "homology", "--model", "t2_00", "--format", "text")
    assert code == 0 and out.strip() == "H0=Z H1=Z^2 H2=Z"
    assert out.strip() == format_groups(homology(named_model("t2_00")))
    code, out, _ = run(capsys, "homology", "--model", "p2_1", "--method", "direct")
    assert "Z/2" in out


def test_core_reports_removed_points(capsys, tmp_path):
    f = tmp_path / "fence.json"
    f.write_text(json.dumps({"elements": ["a", "b", "c", "x", "y"],
                             "relations": [["x", "a"], ["x", "b"], ["y", "b"], ["y", "c"]]}))
    code, out, _ = run(capsys, "core", "--in", str(f), "--format", "text")
    assert code == 0 and "removed 4 beat points" in out and out.startswith("1 points")


def test_exit_codes(capsys):
    assert run(capsys, "splitting", "--model", "p2_1", "--property", "S2")[0] == 0
    assert run(capsys, "splitting", "--model", "t2_00", "--property", "S2")[0] == 1
    assert run(capsys, "enumerate", "--n", "6", "--filter", "connected", "--check", "h1-torsion-free")[0] == 0
    code, _, err = run(capsys, "construct", "--model", "nope")
    assert code == 2 and "unknown model" in err
    assert run(capsys, "construct", "--in", "/does/not/exist.json")[0] == 2
    assert run(capsys, "enumerate", "--n", "11")[0] == 2
    assert run(capsys, "homology", "--model", "p2_1", "--rel", "a1")[0] == 2  # not open
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "enumerate", "--n", "4", "--che", "any-torsion")[0] == 2  # no abbreviations


def test_workers_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("FMS_WORKERS", "2")
    a = run(capsys, "enumerate", "--n", "6", "--check", "any-torsion")[1]
    monkeypatch.setenv("FMS_WORKERS", "1")
    b = run(capsys, "enumerate", "--n", "6", "--check", "any-torsion")[1]
    assert a == b and json.loads(a)["counts"] == {"6": 318}


def test_witness_dir(capsys, tmp_path):
    d = tmp_path / "w"
    code, out, _ = run(capsys, "enumerate", "--n", "4", "--check", "homology-signature:S1", "--witness-dir", str(d))
    assert code == 0
    files = sorted(d.iterdir())
    assert len(files) == json.loads(out)["tallies"]["fail"] == 15
    poset_from_json(files[0].read_text())


def test_splitting_json_and_lemmas(capsys):
    code, out, _ = run(capsys, "splitting", "--model", "p2_1", "--property", "S2", "--format", "json")
    cert = json.loads(out)
    assert code == 0 and cert["verdict"] == "certified"
    code, out, _ = run(capsys, "splitting", "--model", "k_10", "--property", "S2", "--lemmas", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["applicable"] and all(c["holds"] for c in rep["checks"])
    C, D = (",".join(cert["triad"][k]) for k in ("C", "D"))
    assert run(capsys, "splitting", "--model", "p2_1", "--C", C, "--D", D, "--property", "triad-validity")[0] == 0
    # X - {a1} still carries the fundamental group
    code, out, _ = run(capsys, "splitting", "--model", "p2_1", "--C", "a1", "--property", "triad-validity")
    assert code == 1 and "NontrivialOnH1" in out


def test_cover_and_pi1(capsys):
    code, out, _ = run(capsys, "cover", "--model", "p2_1", "--order", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["cover"]["elements"]) == 26
    code, out, _ = run(capsys, "pi1", "--model", "sphere:1")
    assert code == 0 and "free_of_rank 1" in out


def test_dot_export(capsys):
    code, out, _ = run(capsys, "export", "--model", "sphere:1", "--format", "dot")
    assert code == 0 and out.startswith("digraph") and out.count("->") == 4


def test_module_entry_point(tmp_path):
    out = tmp_path / "s2.json"
    r = subprocess.run([sys.executable, "-m", "fms", "construct", "--model", "sphere:2", "--out", str(out)],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == ""
    p = poset_from_json(out.read_text())
    from fms.models import sphere_model

    assert is_isomorphic(p, sphere_model(2))[0]


@pytest.mark.parametrize("spec", ["sphere:3", "pn:2", "torus:2", "moore:3,1"])
def test_model_specs(capsys, spec):
    code, out, _ = run(capsys, "construct", "--model", spec)
    assert code == 0 and poset_from_json(out).n > 0
