"""Command line interface: exit codes, report envelopes, seed resolution."""

from __future__ import annotations

import json

import numpy as np
import pytest

from framecert import (
    BodmannHammenParams,
    ComplexFrame,
    bodmann_hammen,
    certify_complex,
    dump_frame,
    load_frame,
    r3_example,
    trivial_non_retrievable,
)
from framecert.cli import main


@pytest.fixture()
def frames(tmp_path):
    paths = {}
    for name, fr in (("r3", r3_example()),
                     ("bh2", bodmann_hammen(BodmannHammenParams(n=2))),
                     ("triv", trivial_non_retrievable(2, 4))):
        p = tmp_path / f"{name}.json"
        dump_frame(fr, str(p))
        paths[name] = str(p)
    return paths


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_certify_real_frame_routes_to_complement(frames, capsys):
    code, doc = run_json(capsys, ["certify", "--frame", frames["r3"]])
    assert code == 0
    assert doc["report"]["verdict"] == "Retrievable"
    assert doc["report"]["method"] == "complement"
    assert doc["version"]
    assert doc["config"]["seed"] == 42


def test_certify_complex_frame_routes_to_eigen(frames, capsys):
    code, doc = run_json(capsys, ["certify", "--frame", frames["bh2"], "--starts", "16"])
    assert code == 0
    assert doc["report"]["method"] == "eigen"
    assert doc["report"]["a0"] > 1e-6


def test_certify_exit_codes_by_verdict(frames, capsys, tmp_path):
    code, _ = run_json(capsys, ["certify", "--frame", frames["triv"], "--starts", "8"])
    assert code == 1
    inconclusive = bodmann_hammen(BodmannHammenParams(n=3, angle_variant="verbatim"))
    p = tmp_path / "inc.json"
    dump_frame(inconclusive, str(p))
    code, doc = run_json(capsys, ["certify", "--frame", str(p), "--starts", "16"])
    assert code == 2
    assert doc["report"]["verdict"] == "Inconclusive"


def test_certify_forced_method_overrides_routing(frames, capsys):
    code, doc = run_json(capsys, ["certify", "--frame", frames["r3"],
                                  "--method", "eigen", "--starts", "8"])
    assert doc["report"]["method"] == "eigen"
    # a real frame treated over C is not retrievable
    assert code == 1


def test_certify_complement_on_complex_frame_is_usage_error(frames, capsys):
    code = main(["certify", "--frame", frames["bh2"], "--method", "complement"])
    assert code == 64
    assert "real" in capsys.readouterr().err


def test_rho_reports_radius(frames, capsys):
    code, doc = run_json(capsys, ["rho", "--frame", frames["bh2"], "--starts", "16"])
    assert code == 0
    radius = doc["report"]["stability_radius"]
    assert radius["rho"] > 0.0
    assert radius["rho"] <= 1.0 / np.sqrt(4)
    assert doc["report"]["certification"]["verdict"] == "Retrievable"


def test_rho_on_non_retrievable_frame(frames, capsys):
    code, doc = run_json(capsys, ["rho", "--frame", frames["triv"], "--starts", "8"])
    assert code == 1
    assert doc["report"]["stability_radius"] is None


def test_construct_families_roundtrip(tmp_path, capsys):
    for family, extra in (("bodmann-hammen", ["--n", "3"]),
                          ("r3-example", []),
                          ("trivial", ["--n", "2", "--m", "4"]),
                          ("random", ["--n", "2", "--m", "6", "--seed", "3"])):
        out = tmp_path / f"{family}.json"
        code = main(["construct", "--family", family, *extra, "--output", str(out)])
        assert code == 0
        fr = load_frame(str(out))
        assert fr.m >= 2


def test_construct_strict_denied_angle(capsys):
    code = main(["construct", "--family", "bodmann-hammen", "--n", "2",
                 "--a", str(np.pi / 2), "--strict-angles"])
    assert code == 64
    assert "denied" in capsys.readouterr().err


def test_construct_random_is_seed_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["construct", "--family", "random", "--n", "2", "--m", "5",
                 "--seed", "21", "--output", str(a)]) == 0
    assert main(["construct", "--family", "random", "--n", "2", "--m", "5",
                 "--seed", "21", "--output", str(b)]) == 0
    np.testing.assert_array_equal(load_frame(str(a)).vectors,
                                  load_frame(str(b)).vectors)


def test_experiment_perturb_csv(frames, capsys):
    code = main(["experiment", "perturb", "--frame", frames["bh2"],
                 "--trials", "3", "--starts", "8", "--format", "csv"])
    assert code == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "trial,seed,max_delta,B_prime,verdict,a0_estimate"
    assert len(lines) == 4
    assert all(line.split(",")[4] == "Retrievable" for line in lines[1:])


def test_experiment_perturb_json(frames, capsys):
    code, doc = run_json(capsys, ["experiment", "perturb", "--frame", frames["bh2"],
                                  "--trials", "2", "--starts", "8"])
    assert code == 0
    assert doc["report"]["failures"] == 0
    assert len(doc["report"]["trials"]) == 2


def test_experiment_perturb_non_retrievable_base(frames, capsys):
    code = main(["experiment", "perturb", "--frame", frames["triv"],
                 "--trials", "2", "--starts", "8"])
    assert code == 1


def test_experiment_path(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["construct", "--family", "random", "--n", "2", "--m", "4",
          "--seed", "1", "--output", str(a)])
    main(["construct", "--family", "random", "--n", "2", "--m", "4",
          "--seed", "2", "--output", str(b)])
    code, doc = run_json(capsys, ["experiment", "path", "--frame", str(a),
                                  "--frame2", str(b), "--grid", "9"])
    assert code == 0
    report = doc["report"]
    assert report["endpoints_exact"] == {"start": True, "end": True}
    assert report["min_lower_bound"] > 1e-8
    assert len(report["t_values"]) == 9


def test_experiment_path_requires_second_frame(frames, capsys):
    code = main(["experiment", "path", "--frame", frames["bh2"]])
    assert code == 64


def test_bounds_command(capsys):
    code, doc = run_json(capsys, ["bounds", "--n", "4"])
    assert code == 0
    assert doc["report"]["hmw_lower"] == 10
    assert doc["report"]["generic_upper"] == 14
    assert main(["bounds", "--n", "0"]) == 64


def test_missing_and_malformed_inputs(tmp_path, capsys):
    assert main(["certify", "--frame", str(tmp_path / "absent.json")]) == 64
    bad = tmp_path / "bad.json"
    bad.write_text("{]")
    assert main(["certify", "--frame", str(bad)]) == 64


def test_usage_errors(capsys):
    assert main([]) == 64
    assert main(["nonsense"]) == 64
    assert main(["certify"]) == 64
    assert main(["certify", "--frame", "x", "--method", "psychic"]) == 64


def test_version_flag(capsys):
    assert main(["--version"]) == 0
    assert "framecert" in capsys.readouterr().out


def test_seed_env_override(frames, capsys, monkeypatch):
    monkeypatch.setenv("FRAME_CERTIFY_SEED", "99")
    _, doc = run_json(capsys, ["certify", "--frame", frames["triv"], "--starts", "4"])
    assert doc["config"]["seed"] == 99
    _, doc = run_json(capsys, ["certify", "--frame", frames["triv"],
                               "--starts", "4", "--seed", "5"])
    assert doc["config"]["seed"] == 5


def test_seed_env_invalid(frames, capsys, monkeypatch):
    monkeypatch.setenv("FRAME_CERTIFY_SEED", "not-a-number")
    assert main(["certify", "--frame", frames["triv"], "--starts", "4"]) == 64


def test_output_file_writing(frames, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["certify", "--frame", frames["r3"], "--output", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    doc = json.loads(out.read_text())
    assert doc["report"]["verdict"] == "Retrievable"


def test_rho_on_single_vector_line(tmp_path, capsys):
    one = ComplexFrame.from_vectors(np.array([[1.0 + 0j]]))
    p = tmp_path / "one.json"
    dump_frame(one, str(p))
    code, doc = run_json(capsys, ["rho", "--frame", str(p), "--starts", "8"])
    assert code == 0
    assert doc["report"]["certification"]["verdict"] == "Retrievable"
    rho = doc["report"]["stability_radius"]["rho"]
    assert abs(rho - 1.0 / (4.0 * 5.0**1.5)) < 1e-7
    assert abs(rho - 0.0223607) < 1e-6


def test_empty_vector_list_is_usage_error(tmp_path, capsys):
    p = tmp_path / "empty.json"
    p.write_text(json.dumps({"n": 2, "m": 0, "field": "complex", "vectors": []}))
    assert main(["certify", "--frame", str(p)]) == 64


def test_report_survives_serialization_round_trip(tmp_path, capsys):
    out = tmp_path / "frame.json"
    code = main(["construct", "--family", "bodmann-hammen", "--n", "2",
                 "--output", str(out)])
    assert code == 0
    reloaded = load_frame(str(out))
    direct = certify_complex(bodmann_hammen(BodmannHammenParams(n=2)),
                             starts=16, seed=11)
    roundtrip = certify_complex(reloaded, starts=16, seed=11)
    assert roundtrip.a0 == direct.a0
    assert roundtrip.verdict == direct.verdict
    np.testing.assert_array_equal(np.asarray(roundtrip.witness_xi),
                                  np.asarray(direct.witness_xi))
