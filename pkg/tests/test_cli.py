import json
import os

import pytest

from signalprice.cli import CSV_COLUMNS, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def fx(fixtures_dir, name):
    return os.path.join(fixtures_dir, name)


def test_solve_public_json(fixtures_dir, capsys):
    code, out, _ = run(["solve", fx(fixtures_dir, "two_type.json"), "--mode", "public", "--q", "2",
                        "--b", "4", "--exact-coefficients"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == pytest.approx(0.35, abs=1e-9)
    assert doc["no_signaling"] == pytest.approx(0.3)
    assert "runtime_ms" not in doc and "scheme" in doc


def test_solve_public_one_type(fixtures_dir, capsys):
    code, out, _ = run(["solve", fx(fixtures_dir, "one_type.json"), "--mode", "public"], capsys)
    assert code == 0 and json.loads(out)["value"] == pytest.approx(0.3, abs=1e-9)


def test_solve_private(fixtures_dir, capsys):
    code, out, _ = run(["solve", fx(fixtures_dir, "two_type.json"), "--mode", "private", "--q", "2",
                        "--b", "4", "--delta", "0.1", "--beta", "0.1", "--exact-coefficients"],
                       capsys)
    assert code == 0
    assert json.loads(out)["value"] >= 0.35 - 0.2


def test_csv_is_reproducible(fixtures_dir, capsys):
    argv = ["solve", fx(fixtures_dir, "two_type.json"), "--q", "2", "--b", "4", "--K", "300",
            "--seed", "5", "--format", "csv", "--no-timing"]
    first = run(argv, capsys)[1]
    second = run(argv, capsys)[1]
    assert first == second
    header, row = first.strip().split("\n")
    assert header.split(",") == CSV_COLUMNS
    assert row.endswith(",")


def test_json_is_reproducible(fixtures_dir, capsys):
    argv = ["solve", fx(fixtures_dir, "two_type.json"), "--q", "2", "--b", "4", "--K", "300",
            "--seed", "5"]
    assert run(argv, capsys)[1] == run(argv, capsys)[1]


def test_baseline(fixtures_dir, capsys):
    code, out, _ = run(["baseline", fx(fixtures_dir, "two_type.json"), "--q", "1"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["no_signaling"] == pytest.approx(0.3)
    assert doc["public"] == pytest.approx(doc["full_revelation"])


def test_gen_random_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["gen", "random", "--seed", "7", "--n", "2", "--d", "2", "--support", "3",
                     "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_gen_hardness_then_solve(fixtures_dir, tmp_path, capsys):
    out = tmp_path / "tri.json"
    assert main(["gen", "hardness", "--graph", fx(fixtures_dir, "triangle.json"),
                 "--out", str(out)]) == 0
    code, text, _ = run(["baseline", str(out), "--q", "1"], capsys)
    assert code == 0 and json.loads(text)["no_signaling"] > 0


def test_gen_hardness_rejects_m1(tmp_path, capsys):
    g = tmp_path / "g.json"
    g.write_text('{"m": 1, "edges": []}')
    code, _, err = run(["gen", "hardness", "--graph", str(g)], capsys)
    assert code == 2 and "m >= 2" in err


def test_eval(fixtures_dir, capsys):
    code, out, _ = run(["eval", fx(fixtures_dir, "two_type.json"),
                        fx(fixtures_dir, "two_type_scheme.json")], capsys)
    assert code == 0 and float(out) == pytest.approx(0.35, abs=1e-12)


def test_eval_bad_kernel(fixtures_dir, tmp_path, capsys):
    doc = json.load(open(fx(fixtures_dir, "two_type_scheme.json")))
    doc["kernel"]["H"][0]["prob"] = 0.5
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _, _ = run(["eval", fx(fixtures_dir, "two_type.json"), str(bad)], capsys)
    assert code == 2


def test_exit_codes(fixtures_dir, capsys):
    assert run(["solve", "/no/such/file.json"], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["solve", fx(fixtures_dir, "two_type.json"), "--lambda", "0.3", "--q", "2"])
    assert exc.value.code == 2
    capsys.readouterr()
    code, _, err = run(["solve", fx(fixtures_dir, "two_type.json"), "--mode", "private",
                        "--lambda", "0.2"], capsys)
    assert code == 3 and "TooLarge" in err
