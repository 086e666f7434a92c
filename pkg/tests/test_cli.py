import json
import os
import subprocess
import sys

import pytest

from bicrossed import cli, fixtures


@pytest.fixture(autouse=True)
def no_epoch(monkeypatch):
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)


def run(argv, out_dir):
    code = cli.main(list(argv) + ["--output", str(out_dir)])
    if not os.path.isdir(out_dir):
        return code, []
    files = sorted(p for p in os.listdir(out_dir) if not p.startswith("."))
    return code, files


def load(out_dir, name):
    with open(os.path.join(out_dir, name)) as fh:
        return json.load(fh)


def fx(fixture_dir, name):
    return os.path.join(fixture_dir, name)


def test_shipped_fixtures_match_generated(fixture_dir):
    docs = fixtures.fixture_documents()
    assert sorted(docs) == sorted(os.listdir(fixture_dir))
    for name, doc in docs.items():
        with open(fx(fixture_dir, name)) as fh:
            assert fh.read() == fixtures.dump(doc), name


def test_factorize(tmp_path, fixture_dir):
    code, files = run(["factorize", fx(fixture_dir, "s3.json")], tmp_path)
    assert code == 0 and files == ["factorize-s3.json"]
    rep = load(tmp_path, files[0])
    res = rep["result"]
    assert res["count"] == 8
    assert sum(r["g1_order"] == 3 and r["g2_order"] == 2 for r in res["factorizations"]) == 3
    man = rep["manifest"]
    assert man["command"] == "factorize" and man["timestamp"] is None
    assert len(man["inputs"]["s3.json"]) == 64


def test_matched_and_cocycles(tmp_path, fixture_dir):
    code, _ = run(["matched", fx(fixture_dir, "s3_pair.json")], tmp_path)
    assert code == 0
    assert load(tmp_path, "matched-s3_pair.json")["result"]["identities_hold"]
    code, _ = run(["cocycles", fx(fixture_dir, "s3_pair.json"), "--n", "2"], tmp_path)
    assert code == 0
    assert "extension_group_order" in load(tmp_path, "cocycles-s3_pair-n2.json")["result"]
    code, _ = run(["cocycles", "d4_pair", "--n", "4"], tmp_path)
    res = load(tmp_path, "cocycles-d4_pair-n4.json")["result"]
    assert code == 0 and len(res["classes"]) == res["extension_group_order"]


def test_build_nontrivial(tmp_path, fixture_dir):
    code, files = run(["build", fx(fixture_dir, "d4_pair.json"), "--cocycle", fx(fixture_dir, "nontrivial.json"),
                       "--n", "2"], tmp_path)
    assert code == 0
    res = load(tmp_path, files[0])["result"]
    assert res["pentagon"] and res["kac"] and res["all_axioms_hold"]
    assert res["commutative"] is False and res["cocommutative"] is False


def test_build_rejects_mismatched_n(tmp_path, fixture_dir):
    code, files = run(["build", "d4_pair", "--cocycle", fx(fixture_dir, "nontrivial.json"), "--n", "4"], tmp_path)
    assert code == 2 and files == []


def test_cohomology_and_kac_check(tmp_path, fixture_dir):
    code, _ = run(["cohomology", fx(fixture_dir, "z2xz2.json"), "--degree", "2", "--n", "2"], tmp_path)
    assert code == 0
    assert load(tmp_path, "cohomology-z2xz2-degree2-n2.json")["result"]["invariant_factors"] == [2, 2, 2]
    code, _ = run(["kac-check", fx(fixture_dir, "d4_pair.json"), "--n", "2"], tmp_path)
    res = load(tmp_path, "kac-check-d4_pair-n2.json")["result"]
    assert code == 0 and res["exactness_consistent"]
    # beyond the cochain scale bound is an input error
    code, files = run(["kac-check", fx(fixture_dir, "s4_pair.json"), "--n", "2"], tmp_path / "s4")
    assert code == 2


def test_lie_commands(tmp_path, fixture_dir):
    for name in ("axb_pair.json", "family2_pair.json"):
        code, _ = run(["lie", "double", fx(fixture_dir, name)], tmp_path)
        assert code == 0
    res = load(tmp_path, "lie-double-axb_pair.json")["result"]
    assert res["jacobi"]["defects"] == [] and res["restriction_consistent"]
    for name in ("axb_algebra.json", "axb_bialgebra.json", "axb_pair.json"):
        code, _ = run(["lie", "verify", fx(fixture_dir, name)], tmp_path)
        assert code == 0
    bad = {"dim": 3, "c": [[["0"] * 3 for _ in range(3)] for _ in range(3)]}
    bad["c"][1][2][1] = "1"
    bad["c"][2][1][1] = "-1"
    bad["c"][0][1][2] = "1"
    bad["c"][1][0][2] = "-1"
    path = tmp_path / "bad_algebra.json"
    path.write_text(json.dumps(bad))
    code, _ = run(["lie", "verify", str(path)], tmp_path / "out")
    assert code == 3
    assert load(tmp_path / "out", "lie-verify-bad_algebra.json")["result"]["report"]["defects"]


def test_itpfi_commands(tmp_path, fixture_dir):
    code, _ = run(["itpfi", "classify", fx(fixture_dir, "all_primes.json")], tmp_path)
    assert code == 0
    assert load(tmp_path, "itpfi-classify-all_primes.json")["result"]["verdict"]["type"] == "III"
    code, _ = run(["itpfi", "classify", fx(fixture_dir, "above_powers.json")], tmp_path)
    assert load(tmp_path, "itpfi-classify-above_powers.json")["result"]["verdict"]["type"] == "I"
    code, _ = run(["itpfi", "measure", fx(fixture_dir, "two_three.json")], tmp_path)
    assert code == 0 and load(tmp_path, "itpfi-measure-two_three.json")["result"]["measure"] == "1/3"
    code, files = run(["itpfi", "classify", fx(fixture_dir, "all_primes.json"), "--criterion3", "unweighted"],
                      tmp_path / "guard")
    assert code == 4 and "expected III" in load(tmp_path / "guard", files[0])["result"]["error"]


def test_usage_and_input_errors(tmp_path, capsys):
    assert cli.main(["frobnicate"]) == 1
    assert cli.main([]) == 1
    assert cli.main(["cohomology", "Z2", "--degree", "2"]) == 1
    assert cli.main(["cohomology", "Z2", "--degree", "2", "--n", "0"]) == 2
    assert cli.main(["factorize", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"table": [[0, 1], [1, 1]]}))
    assert cli.main(["factorize", str(bad)]) == 2
    bad.write_text("{not json")
    assert cli.main(["factorize", str(bad)]) == 2
    capsys.readouterr()


def test_tabular_format(tmp_path, fixture_dir):
    code = cli.main(["itpfi", "measure", fx(fixture_dir, "two_three.json"), "--format", "tabular",
                     "--output", str(tmp_path)])
    assert code == 0
    lines = (tmp_path / "itpfi-measure-two_three.txt").read_text().splitlines()
    assert 'result.measure\t"1/3"' in lines
    assert any(line.startswith("manifest.inputs.two_three.json\t") for line in lines)


def test_empty_report_has_manifest(tmp_path):
    man = {"command": "none", "inputs": {}, "parameters": {}, "version": "x", "timestamp": None}
    path = cli.emit_report({}, man, "structured", str(tmp_path), "empty")
    doc = json.loads(open(path).read())
    assert doc == {"manifest": man, "result": {}}
    assert [p for p in os.listdir(tmp_path)] == ["empty.json"]  # no temporary left behind
    text = cli.render({"manifest": man, "result": {}}, "tabular")
    assert "result\t{}" in text.splitlines()


def test_seed_does_not_change_results(tmp_path, fixture_dir):
    for seed in ("1", "2"):
        cli.main(["cohomology", "S3", "--degree", "1", "--n", "2", "--seed", seed, "--output", str(tmp_path / seed)])
    a = load(tmp_path / "1", "cohomology-S3-degree1-n2.json")
    b = load(tmp_path / "2", "cohomology-S3-degree1-n2.json")
    assert a["result"] == b["result"] and a["manifest"]["parameters"]["seed"] == 1


def test_console_script_runs(tmp_path, fixture_dir):
    out = subprocess.run([sys.executable, "-m", "bicrossed.cli", "itpfi", "measure", fx(fixture_dir, "two_three.json")],
                         capture_output=True, text=True, env={**os.environ, "SOURCE_DATE_EPOCH": "0"})
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert doc["manifest"]["timestamp"] == "0" and doc["result"]["measure"] == "1/3"
