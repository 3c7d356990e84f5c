"""End-to-end command checks driven through main(argv)."""

import json

import pytest

from ddestab.cli import main


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


WRIGHT_OK = {"family": "wright", "params": {"p": 1.4}}
WRIGHT_SHARP = {"family": "wright", "params": {"p": 1.5}}


# ---------------------------------------------------------------------------
# check

def test_check_stable_exits_zero(tmp_path, capsys):
    cfg = write_config(tmp_path, "m.json", WRIGHT_OK)
    assert main(["check", "--config", cfg]) == 0
    blob = json.loads(capsys.readouterr().out)
    assert blob["status"] == "GloballyStable"
    assert blob["theorem"] == "apl"
    assert blob["certificate"]["a"] == -1.4


def test_check_boundary_exits_two(tmp_path, capsys):
    cfg = write_config(tmp_path, "m.json", WRIGHT_SHARP)
    assert main(["check", "--config", cfg]) == 2
    blob = json.loads(capsys.readouterr().out)
    assert blob["status"] == "Inconclusive"


def test_missing_config_exits_one(tmp_path, capsys):
    assert main(["check", "--config", str(tmp_path / "nope.json")]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error:")


def test_bad_family_exits_one(tmp_path, capsys):
    cfg = write_config(tmp_path, "m.json", {"family": "lorenz", "params": {}})
    assert main(["check", "--config", cfg]) == 1
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# simulate

def test_simulate_writes_csv_and_metrics(tmp_path, capsys):
    cfg = write_config(tmp_path, "m.json", WRIGHT_OK)
    out = tmp_path / "traj.csv"
    code = main(["simulate", "--config", cfg, "--t-end", "60", "--dt", "0.05",
                 "--seed", "3", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,x"
    assert len(lines) == 1 + 1201  # header + nodes at dt = 0.05
    metrics = json.loads(capsys.readouterr().out)
    assert set(metrics) == {"sup_dev", "M_est", "m_est"}
    assert metrics["sup_dev"] < 0.5


def test_simulate_stdout_and_resample(tmp_path, capsys):
    cfg = write_config(tmp_path, "m.json",
                       dict(WRIGHT_OK, history={"kind": "constant", "value": 1.0}))
    code = main(["simulate", "--config", cfg, "--t-end", "10", "--dt", "0.1",
                 "--resample", "20"])
    assert code == 0
    out = capsys.readouterr().out
    csv_part = out[:out.index("{")]
    lines = csv_part.strip().splitlines()
    assert lines[0] == "t,x"
    assert len(lines) == 22  # header + 21 resampled rows
    assert lines[1].split(",")[0] == "0.0"


def test_simulate_blowup_exits_three(tmp_path, capsys):
    cfg = write_config(tmp_path, "m.json",
                       {"family": "toy_unstable", "params": {"q": 2.0},
                        "history": {"kind": "constant", "value": 1.0}})
    out = tmp_path / "traj.csv"
    code = main(["simulate", "--config", cfg, "--t-end", "80", "--dt", "0.05",
                 "--out", str(out)])
    assert code == 3
    blob = json.loads(capsys.readouterr().out)
    assert blob["status"] == "event"
    assert blob["events"][0]["kind"] == "blowup"
    assert out.read_text().splitlines()[-1].startswith("# event: blowup")


def test_simulate_determinism(tmp_path, capsys):
    cfg = write_config(tmp_path, "m.json", WRIGHT_OK)
    o1, o2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for o in (o1, o2):
        assert main(["simulate", "--config", cfg, "--t-end", "40",
                     "--dt", "0.05", "--seed", "11", "--out", str(o)]) == 0
    capsys.readouterr()
    assert o1.read_bytes() == o2.read_bytes()


def test_simulate_seed_changes_history(tmp_path, capsys):
    cfg = write_config(tmp_path, "m.json", WRIGHT_OK)
    o1, o2 = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["simulate", "--config", cfg, "--t-end", "40", "--dt", "0.05",
          "--seed", "1", "--out", str(o1)])
    main(["simulate", "--config", cfg, "--t-end", "40", "--dt", "0.05",
          "--seed", "2", "--out", str(o2)])
    capsys.readouterr()
    assert o1.read_bytes() != o2.read_bytes()


def test_simulate_knot_history(tmp_path, capsys):
    cfg = write_config(tmp_path, "m.json", dict(
        WRIGHT_OK,
        history={"kind": "knots", "times": [-1.0, -0.5, 0.0],
                 "values": [0.5, 2.0, -0.5]},
    ))
    code = main(["simulate", "--config", cfg, "--t-end", "20", "--dt", "0.05"])
    assert code == 0
    first = capsys.readouterr().out.splitlines()[1]
    assert first == "0.0,-0.5"


def test_simulate_bad_dt_exits_one(tmp_path, capsys):
    cfg = write_config(tmp_path, "m.json", WRIGHT_OK)
    assert main(["simulate", "--config", cfg, "--dt", "0.3"]) == 1
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# sweep

def test_sweep_single_axis(tmp_path, capsys):
    cfg = write_config(tmp_path, "s.json", {
        "family": "wright", "params": {"p": 1.0},
        "sweep": [{"param": "p", "range": [0.5, 1.0], "steps": 2}],
        "trials_per_cell": 2,
    })
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--config", cfg, "--t-end", "60", "--dt", "0.05",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "p,fraction_converged,verdict,n_events"
    assert len(lines) == 3
    for line in lines[1:]:
        p, frac, verdict, n_events = line.split(",")
        assert float(frac) == 1.0  # well inside the stable region
        assert verdict == "GloballyStable"
        assert n_events == "0"


def test_sweep_two_axes_and_values(tmp_path, capsys):
    cfg = write_config(tmp_path, "s.json", {
        "family": "logistic_vd", "params": {"p": 1.0, "h_max": 1.0},
        "sweep": [{"param": "p", "values": [0.5, 0.8]},
                  {"param": "h_max", "range": [0.5, 1.0], "steps": 2}],
        "trials_per_cell": 1,
    })
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--config", cfg, "--t-end", "80", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "p,h_max,fraction_converged,verdict,n_events"
    assert len(lines) == 5  # 2x2 grid
    assert lines[1].startswith("0.5,0.5,")


def test_sweep_degenerate_range_repeats_the_cell(tmp_path, capsys):
    cfg = write_config(tmp_path, "s.json", {
        "family": "wright", "params": {"p": 1.0},
        "sweep": [{"param": "p", "range": [1.0, 1.0], "steps": 2}],
        "trials_per_cell": 1,
    })
    code = main(["sweep", "--config", cfg, "--t-end", "60", "--dt", "0.05"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    assert lines[1].split(",")[0] == lines[2].split(",")[0] == "1.0"
    # distinct per-cell seeds: the convergence flag may agree, the cell
    # index feeding the seed must differ; determinism is locked elsewhere


def test_sweep_rejects_bad_axes(tmp_path, capsys):
    cfg = write_config(tmp_path, "s.json", {
        "family": "wright", "params": {"p": 1.0},
        "sweep": [{"param": "p", "range": [0.5, 1.0], "steps": 1}],
    })
    assert main(["sweep", "--config", cfg]) == 1
    assert "steps" in capsys.readouterr().err

    cfg = write_config(tmp_path, "s2.json", {"family": "wright",
                                             "params": {"p": 1.0}})
    assert main(["sweep", "--config", cfg]) == 1
    assert "sweep" in capsys.readouterr().err


def test_sweep_rejects_bad_tol(tmp_path, capsys):
    cfg = write_config(tmp_path, "s.json", {
        "family": "wright", "params": {"p": 1.0},
        "sweep": [{"param": "p", "values": [1.0]}],
    })
    assert main(["sweep", "--config", cfg, "--tol", "0"]) == 1
    assert "tol" in capsys.readouterr().err


def test_sweep_counts_events_without_aborting(tmp_path, capsys):
    cfg = write_config(tmp_path, "s.json", {
        "family": "toy_unstable", "params": {"q": 2.0},
        "sweep": [{"param": "q", "values": [2.0, 3.0]}],
        "trials_per_cell": 2,
    })
    code = main(["sweep", "--config", cfg, "--t-end", "80", "--dt", "0.05"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "q,fraction_converged,verdict,n_events"
    for line in lines[1:]:
        q, frac, verdict, n_events = line.split(",")
        assert float(frac) == 0.0
        assert verdict == "Inconclusive"
        assert int(n_events) == 2


# ---------------------------------------------------------------------------
# bounds

def test_bounds_writes_table_and_sidecar(tmp_path, capsys):
    out = tmp_path / "table.csv"
    code = main(["bounds", "--a", "-1.5", "--b", "1.0", "--x-max", "3.0",
                 "--n", "41", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,A,B,D,R,branch,reason"
    assert len(lines) >= 42  # grid rows plus the forced zero row
    assert any(line.startswith("0.0,") for line in lines[1:])
    meta = json.loads((tmp_path / "table.csv.meta.json").read_text())
    consts = meta["constants"]
    assert consts["A_prime0"] == -1.0
    assert consts["B_prime0"] == -1.125
    assert consts["x2"] == 0.5
    assert meta["notes"] == []


def test_bounds_stdout_includes_constants(tmp_path, capsys):
    code = main(["bounds", "--a", "-0.5", "--b", "1.0", "--x-max", "2.0",
                 "--n", "11"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("x,A,B,D,R,branch,reason")
    meta = json.loads(out[out.index("{"):])
    assert meta["notes"]  # shallow slope: R column is outside its range
    assert "x2" in meta["constants"]


def test_bounds_rejects_bad_envelope(capsys):
    assert main(["bounds", "--a", "0.5", "--b", "1.0"]) == 1
    assert "error:" in capsys.readouterr().err


def test_bounds_no_crossing_reason(tmp_path, capsys):
    out = tmp_path / "table.csv"
    code = main(["bounds", "--a", "-0.9", "--b", "1.0", "--x-max", "2.0",
                 "--n", "11", "--out", str(out)])
    assert code == 0
    meta = json.loads((tmp_path / "table.csv.meta.json").read_text())
    assert meta["constants"]["x2"] is None
    assert meta["constants"]["x2_reason"] == "no-crossing"
