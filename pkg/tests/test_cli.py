import hashlib
import json

import pytest

from sqrw.cli import (
    ExperimentConfig,
    _parse_coords,
    _parse_counts,
    _parse_marked,
    _parse_pairs,
    main,
    run,
    validate,
)


def good_snapshot(**over):
    base = dict(kind="snapshot", n=8, f=(3, 4), steps=10)
    base.update(over)
    return ExperimentConfig(**base)


def test_validate_accepts_good_configs():
    assert validate(good_snapshot()) == []
    assert validate(ExperimentConfig(kind="blind", n=6)) == []
    assert (
        validate(ExperimentConfig(kind="walls", n=40, f=(10, 15), wall_counts=(0, 1521)))
        == []
    )
    assert validate(ExperimentConfig(kind="trend", sides=(8, 12))) == []
    assert validate(ExperimentConfig(kind="lattice-compare", pairs=((10, 5),))) == []


def test_validate_catches_problems():
    def bad(config):
        msgs = validate(config)
        assert msgs
        return " | ".join(msgs)

    assert "unknown kind" in bad(ExperimentConfig(kind="bogus"))
    assert "n must be >= 2" in bad(ExperimentConfig(kind="snapshot", steps=1))
    assert "outside the 1..8" in bad(good_snapshot(f=(0, 5)))
    assert "must have 2 coordinates" in bad(good_snapshot(f=(1, 2, 3)))
    assert "must have 3 coordinates" in bad(good_snapshot(dims=3, n=4, f=(1, 2)))
    assert "steps" in bad(good_snapshot(steps=None))
    assert "steps" in bad(good_snapshot(steps=-1))
    assert "u_max" in bad(good_snapshot(u_max=-1))
    assert "r_max" in bad(good_snapshot(r_max=-3))
    assert "samples" in bad(good_snapshot(samples=0))
    assert "threads" in bad(good_snapshot(threads=0))
    assert "dims must be 2 or 3" in bad(good_snapshot(dims=5, f=(1, 1)))
    assert "outside 0..1521" in bad(
        ExperimentConfig(kind="walls", n=40, f=(10, 15), wall_counts=(1600,))
    )
    assert "wall_counts is required" in bad(
        ExperimentConfig(kind="walls", n=40, f=(10, 15))
    )
    assert "sides is required" in bad(ExperimentConfig(kind="trend"))
    assert "pairs is required" in bad(ExperimentConfig(kind="lattice-compare"))
    assert "marked node" in bad(good_snapshot(marked=((9, 1),)))


def test_parse_helpers():
    assert _parse_coords("40,50") == (40, 50)
    assert _parse_marked("6,20;12,20") == ((6, 20), (12, 20))
    assert _parse_counts("0..10:5") == (0, 5, 10)
    assert _parse_counts("0..3") == (0, 1, 2, 3)
    assert _parse_counts("1,4,9") == (1, 4, 9)
    assert _parse_pairs("100:22,64:16") == ((100, 22), (64, 16))


def test_config_roundtrip_and_unknown_keys():
    config = good_snapshot(marked=((5, 5),), wall_counts=(1, 2))
    back = ExperimentConfig.from_dict(json.loads(json.dumps(config.to_dict())))
    assert back == config
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"kind": "snapshot", "walls": 3})


def sha256(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_snapshot_end_to_end(tmp_path):
    out = tmp_path / "snap"
    assert run(good_snapshot(out=str(out))) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["kind"] == "snapshot"
    assert manifest["config"]["f"] == [3, 4]
    assert set(manifest["outputs"]) == {"snapshot.csv", "profile.csv"}
    for name, digest in manifest["outputs"].items():
        assert sha256(out / name) == digest
    lines = (out / "profile.csv").read_text().splitlines()
    assert lines[0] == "r,shell_P,cumulative_P"
    assert float(lines[-1].split(",")[2]) == pytest.approx(1.0, abs=1e-12)


def test_overwrite_refusal_and_flag(tmp_path):
    out = tmp_path / "snap"
    argv = ["snapshot", "--n", "8", "--f", "3,4", "--steps", "10", "--out", str(out)]
    assert main(argv) == 0
    assert main(argv) == 1  # refuses to clobber
    assert main(argv + ["--overwrite"]) == 0


def test_output_dir_env_var(tmp_path, monkeypatch):
    target = tmp_path / "from_env"
    monkeypatch.setenv("SQRW_OUTPUT_DIR", str(target))
    assert main(["snapshot", "--n", "6", "--f", "2,2", "--steps", "4"]) == 0
    assert (target / "manifest.json").exists()


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 8, "f": [3, 4], "steps": 10}))
    out = tmp_path / "run"
    argv = [
        "snapshot",
        "--config",
        str(cfg),
        "--steps",
        "5",
        "--out",
        str(out),
    ]
    assert main(argv) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["steps"] == 5  # flag wins
    assert manifest["config"]["n"] == 8  # file value kept


def test_bad_config_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["snapshot", "--config", str(bad)]) == 1
    lst = tmp_path / "list.json"
    lst.write_text("[1,2]")
    assert main(["snapshot", "--config", str(lst)]) == 1
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"n": 8, "bogus_key": 1}))
    assert main(["snapshot", "--config", str(unknown)]) == 1
    assert main(["snapshot", "--config", str(tmp_path / "missing.json")]) == 1


def test_invalid_config_exits_1(tmp_path):
    assert run(good_snapshot(f=(0, 5), out=str(tmp_path / "x"))) == 1
    assert not (tmp_path / "x").exists()


def test_runtime_error_exits_2(tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("i am a file, not a directory")
    assert run(good_snapshot(out=str(blocker))) == 2


def test_walls_run_deterministic_across_dirs(tmp_path):
    argv = lambda out: [
        "walls",
        "--n",
        "6",
        "--f",
        "2,3",
        "--counts",
        "0,3",
        "--samples",
        "2",
        "--seed",
        "7",
        "--out",
        str(out),
    ]
    assert main(argv(tmp_path / "a")) == 0
    assert main(argv(tmp_path / "b")) == 0
    for name in ("walls_samples.csv", "walls_summary.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (
            tmp_path / "b" / name
        ).read_bytes()
    ma = json.loads((tmp_path / "a" / "manifest.json").read_text())
    mb = json.loads((tmp_path / "b" / "manifest.json").read_text())
    assert ma["outputs"] == mb["outputs"]


def test_sweep_kind(tmp_path):
    out = tmp_path / "sweep"
    config = ExperimentConfig(
        kind="sweep", n=6, f=(2, 3), u_max=5, r_max=4, out=str(out)
    )
    assert run(config) == 0
    data = json.loads((out / "sweep.json").read_text())
    assert data["target"] == [2, 3]
    assert len(data["stable_curve"]) == 6
    assert len(data["optimal_surface"][0]) == 5
    assert data["optimal_best"]["r"] <= 4


def test_blind_kind(tmp_path):
    out = tmp_path / "blind"
    assert run(ExperimentConfig(kind="blind", n=6, u_max=14, out=str(out))) == 0
    plan = json.loads((out / "blind_plan.json").read_text())
    assert set(plan) == {
        "stable_Us",
        "optimal_Us",
        "optimal_r",
        "mean_stable_speed",
        "mean_optimal_speed",
        "mean_success_probability",
    }
    assert (out / "blind_classes.csv").exists()
    header = (out / "blind_eval.csv").read_text().splitlines()[0]
    assert header == "x,y,multiplicity,stable_speed,optimal_speed,p_success,search_steps"


def test_maze_kind(tmp_path):
    out = tmp_path / "maze"
    config = ExperimentConfig(
        kind="maze", n=5, f=(2, 2), samples=2, u_max=12, out=str(out)
    )
    assert run(config) == 0
    hist = json.loads((out / "maze_histogram.json").read_text())
    assert sum(hist.values()) == 2
    assert (out / "maze_samples.csv").exists()


def test_trend_kind(tmp_path):
    out = tmp_path / "trend"
    config = ExperimentConfig(kind="trend", sides=(6, 8), u_max=12, out=str(out))
    assert run(config) == 0
    lines = (out / "trend.csv").read_text().splitlines()
    assert len(lines) == 3  # header + 2 sizes


def test_lattice_compare_kind(tmp_path):
    out = tmp_path / "cmp"
    config = ExperimentConfig(
        kind="lattice-compare", pairs=((8, 4),), u_max=10, out=str(out)
    )
    assert run(config) == 0
    lines = (out / "lattice_compare.csv").read_text().splitlines()
    assert len(lines) == 2


def test_manifest_regeneration_is_stable(tmp_path):
    out = tmp_path / "re"
    config = ExperimentConfig(
        kind="maze", n=5, f=(2, 2), samples=2, u_max=12, seed=3, out=str(out)
    )
    assert run(config) == 0
    first = json.loads((out / "manifest.json").read_text())["outputs"]
    config.overwrite = True
    assert run(config) == 0
    second = json.loads((out / "manifest.json").read_text())["outputs"]
    assert first == second
