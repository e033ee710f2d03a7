import json

import pytest

from wpb import boolfn
from wpb.boolfn import BooleanFunction, is_wpb
from wpb.cli import RunConfig, main, parse_ks
from wpb.construction import best_base8


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_family(tmp_path, capsys):
    p = tmp_path / "f.wpbf"
    code, out, _ = run(capsys, "construct", "--n", "8", "--seed", "1", "-o", str(p))
    assert code == 0
    assert "wpb: yes" in out and out.startswith("assignment: ")
    assert is_wpb(boolfn.load(p))


def test_construct_rejects_n6(capsys):
    code, _, err = run(capsys, "construct", "--n", "6")
    assert code == 2 and "power of 2" in err


def test_construct_stdout_is_wpbf(capsys):
    code, out, err = run(capsys, "construct", "--n", "4", "--spec", "a")
    assert code == 0
    assert boolfn.loads(out).n == 4
    assert "assignment: a" in err


def test_construct_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for p in (a, b):
        run(capsys, "construct", "--n", "16", "--seed", "3", "--method", "construction1",
            "--base", "random", "-o", str(p))
    assert a.read_bytes() == b.read_bytes()


def test_construct_construction1_best(tmp_path, capsys):
    p = tmp_path / "c.wpbf"
    code, out, _ = run(capsys, "construct", "--n", "16", "--seed", "1",
                       "--method", "construction1", "--base", "best", "-o", str(p))
    assert code == 0
    assert "forced pair on every base: yes" in out
    code, out, _ = run(capsys, "profile", "--in", str(p), "--ks", "2..8",
                       "--base", "9,22,27", "--json")
    report = json.loads(out)
    assert code == 0 and report["schema"] == 1 and report["within_bounds"]
    for row in report["rows"]:
        assert row["lower"] <= row["nl"] <= row["upper"]


def test_trace_round_trip(tmp_path, capsys):
    p = tmp_path / "t.wpbf"
    assert run(capsys, "construct", "--n", "8", "--method", "trace", "--spec", "2f", "-o", str(p))[0] == 0
    code, out, _ = run(capsys, "verify", "--in", str(p))
    assert code == 0 and "family member: yes" in out and "degree: 7" in out


def test_verify_family_and_field(tmp_path, capsys):
    p = tmp_path / "f.wpbf"
    run(capsys, "construct", "--n", "8", "--seed", "4", "-o", str(p))
    code, out, _ = run(capsys, "verify", "--in", str(p), "--show-field")
    assert code == 0
    assert "wpb: yes" in out and "anf structure: yes" in out and "modulus 0x11b" in out


def test_verify_corrupted(tmp_path, capsys):
    p = tmp_path / "f.wpbf"
    run(capsys, "construct", "--n", "8", "--seed", "4", "-o", str(p))
    f = boolfn.load(p)
    t = f.table.copy()
    t[0b00111000] ^= 1
    boolfn.save(BooleanFunction(8, t), p)
    code, out, _ = run(capsys, "verify", "--in", str(p), "--json")
    report = json.loads(out)
    assert code == 2 and report["unbalanced_weights"] == [3] and not report["wpb"]


def test_profile_best_base8(tmp_path, capsys):
    p = tmp_path / "b.wpbf"
    boolfn.save(best_base8(), p)
    code, out, _ = run(capsys, "profile", "--in", str(p))
    assert code == 0
    row = next(line.split() for line in out.splitlines() if line.split()[:1] == ["4"])
    assert row[:3] == ["4", "27", "30"]


def test_profile_paths_match(tmp_path, capsys):
    p = tmp_path / "f.wpbf"
    run(capsys, "construct", "--n", "8", "--seed", "9", "-o", str(p))
    outs = [json.loads(run(capsys, "profile", "--in", str(p), flag, "--json")[1])["rows"]
            for flag in ("--naive", "--reduced")]
    assert outs[0] == outs[1]


def test_profile_require_wpb(tmp_path, capsys):
    p = tmp_path / "z.wpbf"
    boolfn.save(BooleanFunction.zero(8), p)
    code, _, err = run(capsys, "profile", "--in", str(p), "--require-wpb")
    assert code == 2 and "not WPB" in err


def test_io_errors(tmp_path, capsys):
    assert run(capsys, "verify", "--in", str(tmp_path / "missing"))[0] == 3
    bad = tmp_path / "bad.wpbf"
    bad.write_text("not a function\n")
    assert run(capsys, "profile", "--in", str(bad))[0] == 3


def test_orbits(capsys):
    code, out, _ = run(capsys, "orbits", "--n", "8", "--weight", "2")
    assert code == 0
    assert "# weight 2: 4 orbits" in out and "# total orbits (necklace formula): 36" in out
    code, out, _ = run(capsys, "orbits", "--n", "16", "--weight", "1")
    assert "4116" in out


def test_table1(capsys):
    code, out, _ = run(capsys, "table1", "--json")
    rows = {r["k"]: r for r in json.loads(out)["rows"]}
    assert rows[2]["values"] == [6, 9] and rows[4]["upper"] == 30
    assert rows[3]["values"] == [0, 8, 14, 16, 18, 20, 21, 22]


def test_table2(capsys):
    code, out, _ = run(capsys, "table2", "--base", "9,22,27")
    assert code == 0
    lines = [line.split() for line in out.splitlines()[1:]]
    assert [int(r[1]) for r in lines] == [5, 144, 472, 1056, 2184, 1296, 2184]
    assert [int(r[2]) for r in lines] == [54, 268, 888, 2150, 3959, 5666, 6378]


def test_config_round_trip(tmp_path, capsys):
    cfg_path = tmp_path / "run.json"
    out_a = tmp_path / "a.wpbf"
    run(capsys, "--dump-config", str(cfg_path), "construct", "--n", "8", "--seed", "2", "-o", str(out_a))
    cfg = RunConfig.from_json(cfg_path.read_text())
    assert cfg.command == "construct" and cfg.seed == 2
    out_a.unlink()
    assert run(capsys, "--config", str(cfg_path))[0] == 0
    assert out_a.exists()
    with pytest.raises(ValueError):
        RunConfig.from_json('{"command": "x", "bogus": 1}')


def test_threads_env(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("WPB_THREADS", "2")
    p = tmp_path / "f.wpbf"
    run(capsys, "construct", "--n", "8", "--seed", "1", "-o", str(p))
    code, out, _ = run(capsys, "profile", "--in", str(p), "--json")
    assert code == 0


def test_parse_ks():
    assert parse_ks("2..4,7", 8) == [2, 3, 4, 7]
    assert parse_ks(None, 4) == [1, 2, 3]
