import json

import pytest

from tpdilog.cli import EXIT_FAILURE, EXIT_INPUT_ERROR, EXIT_PASS, main


@pytest.fixture(autouse=True)
def workspace(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("TPDILOG_THREADS", "2")
    monkeypatch.setenv("TPDILOG_LOG_LEVEL", "WARNING")
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def write_json(path, document):
    path.write_text(json.dumps(document))
    return str(path)


def test_gen_is_deterministic(capsys):
    code, first = run(capsys, "gen", "--n", "4", "--seed", "7")
    _, second = run(capsys, "gen", "--n", "4", "--seed", "7")
    assert code == EXIT_PASS
    assert first == second
    document = json.loads(first)
    assert document["seed"] == 7
    assert document["coords"]["n"] == 4
    assert len(document["coords"]["x"]) == 6
    assert all("/" in v for v in document["coords"]["x"].values())
    assert document["matrix"]["entries"][0][0] == "1/1"


def test_gen_minimal_and_invalid_dimension(capsys):
    code, out = run(capsys, "gen", "--n", "2")
    assert code == EXIT_PASS
    assert list(json.loads(out)["coords"]["x"]) == ["1,2"]
    code, _ = run(capsys, "gen", "--n", "1")
    assert code == EXIT_INPUT_ERROR


def test_verify_tetra(capsys):
    code, out = run(capsys, "verify", "--suite", "tetra", "--n", "4", "--trials", "2")
    assert code == EXIT_PASS
    document = json.loads(out)
    assert document["pass"] is True
    assert document["trials"] == 2
    assert "elapsed_seconds" not in document
    assert all(r["max_residual"] == "0" and r["exact"] for r in document["identities"])


def test_verify_is_byte_stable(capsys):
    _, first = run(capsys, "verify", "--suite", "constant", "--n", "4", "--seed", "5")
    _, second = run(capsys, "verify", "--suite", "constant", "--n", "4", "--seed", "5")
    assert first == second


def test_verify_writes_files(capsys, workspace):
    code, out = run(
        capsys, "verify", "--suite", "function", "--n", "3", "--with-timing",
        "--out", "out/report.json", "--markdown", "out/report.md",
    )
    assert code == EXIT_PASS
    assert out == ""
    document = json.loads((workspace / "out" / "report.json").read_text())
    assert "elapsed_seconds" in document
    assert (workspace / "out" / "report.md").read_text().startswith("# Identity Report - n=3")


@pytest.mark.parametrize("n", ["3", "4"])
def test_verify_wedge_passes(capsys, n):
    code, out = run(capsys, "verify", "--suite", "wedge", "--n", n, "--trials", "2", "--seed", "7")
    assert code == EXIT_PASS
    names = [r["name"] for r in json.loads(out)["identities"]]
    assert "difference step halving X" in names


def test_sabotaged_chain_exits_one(capsys):
    code, out = run(capsys, "verify", "--suite", "chain", "--n", "4", "--sabotage")
    assert code == EXIT_FAILURE
    assert json.loads(out)["pass"] is False


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "bogus"],
    ["verify", "--suite", "script-l", "--n", "5"],
    ["verify", "--precision-bits", "16"],
    ["verify", "--trials", "0"],
])
def test_verify_input_errors(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == EXIT_INPUT_ERROR


def test_transform_prime_is_involutive(capsys, workspace):
    _, generated = run(capsys, "gen", "--n", "5", "--seed", "3")
    source = write_json(workspace / "m.json", json.loads(generated))
    code, once = run(capsys, "transform", "prime", "--input", source, "--out", "m1.json")
    assert code == EXIT_PASS and once == ""
    _, twice = run(capsys, "transform", "prime", "--input", "m1.json")
    assert json.loads(twice) == json.loads(generated)["coords"]
    code, out = run(capsys, "assert", "--relation", "prime", "--input", source, "--output", "m1.json")
    assert code == EXIT_PASS
    assert json.loads(out) == {"pass": True, "relation": "prime"}


def test_transform_matrix_input_stays_a_matrix(capsys, workspace):
    _, generated = run(capsys, "gen", "--n", "4", "--seed", "1")
    source = write_json(workspace / "m.json", json.loads(generated)["matrix"])
    _, out = run(capsys, "transform", "dprime", "--input", source)
    assert "entries" in json.loads(out)


def test_check_g_round_trip(capsys, workspace):
    _, generated = run(capsys, "gen", "--n", "4", "--seed", "2")
    source = write_json(workspace / "g.json", json.loads(generated))
    run(capsys, "transform", "check-g", "--input", source, "--out", "g1.json")
    code, out = run(capsys, "assert", "--relation", "check-g", "--input", source, "--output", "g1.json")
    assert code == EXIT_PASS
    assert json.loads(out)["pass"] is True
    code, _ = run(capsys, "assert", "--relation", "hat-g", "--input", source, "--output", "g1.json")
    assert code == EXIT_FAILURE


def test_transform_l_on_a_triple(capsys, workspace):
    source = write_json(workspace / "c.json", {"n": 3, "x": {"1,2": "2/1", "1,3": "3/1", "2,3": "5/1"}})
    code, out = run(capsys, "transform", "l", "--input", source, "--triple", "1,2,3")
    assert code == EXIT_PASS
    assert json.loads(out)["x"] == {"1,2": "3/1", "1,3": "2/1", "2,3": "15/2"}
    code, _ = run(capsys, "transform", "l", "--input", source)
    assert code == EXIT_INPUT_ERROR


def test_transform_s3_word(capsys, workspace):
    source = write_json(workspace / "c.json", {"n": 3, "x": {"1,2": "2", "1,3": "3", "2,3": "5"}})
    _, direct = run(capsys, "transform", "prime", "--input", source)
    _, via_word = run(capsys, "transform", "s3", "--input", source, "--word", "s1")
    assert direct == via_word
    code, _ = run(capsys, "transform", "s3", "--input", source, "--word", "s1s1")
    assert code == EXIT_INPUT_ERROR


def test_non_totally_positive_input(capsys, workspace):
    source = write_json(
        workspace / "bad.json",
        {"n": 3, "entries": [["1", "1", "1"], ["0", "1", "1"], ["0", "0", "1"]]},
    )
    code, out = run(capsys, "transform", "prime", "--input", source)
    assert code == EXIT_INPUT_ERROR
    assert out == ""


def test_missing_input_file(capsys):
    code, _ = run(capsys, "transform", "bar", "--input", "nowhere.json")
    assert code == EXIT_INPUT_ERROR


def test_unknown_transform_is_rejected_by_parser():
    with pytest.raises(SystemExit):
        main(["transform", "twist", "--input", "m.json"])


def test_report_merge(capsys, workspace):
    for seed in (0, 4):
        run(capsys, "verify", "--suite", "function", "--n", "3", "--seed", str(seed), "--out", f"r{seed}.json")
    code, out = run(
        capsys, "report-merge", "r0.json", "r4.json", "--markdown", "digest.md", "--html", "digest.html",
    )
    assert code == EXIT_PASS
    merged = json.loads(out)
    assert merged["trials"] == 2
    assert merged["seed"] == 0
    assert "| Identity |" in (workspace / "digest.md").read_text()
    assert "<table>" in (workspace / "digest.html").read_text()

    _, reversed_order = run(capsys, "report-merge", "r4.json", "r0.json")
    assert reversed_order == out


def test_report_merge_rejects_mismatched_dimensions(capsys):
    run(capsys, "verify", "--suite", "function", "--n", "3", "--out", "a.json")
    run(capsys, "verify", "--suite", "function", "--n", "4", "--out", "b.json")
    code, _ = run(capsys, "report-merge", "a.json", "b.json")
    assert code == EXIT_INPUT_ERROR
