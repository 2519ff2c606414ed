import json

import pytest

from smallball.canon import dumps
from smallball.cli import RunConfig, RunReport, emit, main, parse, run
from smallball.errors import FormatError, UsageError
from smallball.groups import make_cyclic
from smallball.prob import FiniteDist
from smallball.sets import GroupSet

Z5 = make_cyclic(5)


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(dumps(obj.to_json() if hasattr(obj, "to_json") else obj))
        return str(path)

    return {
        "dist": write("x.json", FiniteDist.uniform(Z5, [0, 1])),
        "f": write("f.json", GroupSet(Z5, [1])),
        "k": write("k.json", GroupSet(Z5, [0, 2, 3])),
        "bad_k": write("bad_k.json", GroupSet(Z5, [0, 1])),
        "write": write,
        "dir": tmp_path,
    }


def run_main(argv, capsysbinary):
    code = main(argv)
    out = capsysbinary.readouterr()
    return code, out.out, out.err.decode()


def test_verify_equality_example(files, capsysbinary):
    code, out, _ = run_main(["verify", "3.2", "--dist", files["dist"], "--f", files["f"], "--k", files["k"]],
                            capsysbinary)
    assert code == 0
    report = json.loads(out)
    (item,) = report["items"]
    assert (item["lhs"], item["rhs"], item["constant"], item["status"]) == ("1/2", "1/2", 1, "pass")
    assert report["summary"] == {"pass": 1, "fail": 0, "inconclusive": 0, "rejected": 0}


def test_output_is_byte_identical(files, capsysbinary):
    argv = ["lln", "--dist", files["dist"], "--tuples", "[[0, 1]]", "--seed", "9", "--schedule", "10", "200"]
    _, first, _ = run_main(argv, capsysbinary)
    _, second, _ = run_main(argv, capsysbinary)
    assert first == second
    assert json.loads(first)["items"][0]["p"] == "1/4"


def test_rejected_input_becomes_an_item(files, capsysbinary):
    code, out, _ = run_main(["verify", "3.2", "--dist", files["dist"], "--f", files["f"], "--k", files["bad_k"]],
                            capsysbinary)
    assert code == 0
    assert json.loads(out)["summary"]["rejected"] == 1


def test_usage_errors_exit_two(files, capsysbinary):
    code, _, err = run_main(["verify", "3.2", "--dist", files["dist"], "--f", files["f"]], capsysbinary)
    assert code == 2 and "--k" in err
    code, _, err = run_main(["lln", "--dist", files["dist"], "--tuples", "[[0, 1]]"], capsysbinary)
    assert code == 2 and "seed" in err
    code, _, _ = run_main(["frobnicate"], capsysbinary)
    assert code == 2


def test_carrier_mismatch_surfaces_verbatim(files, capsysbinary):
    other = files["write"]("g.json", GroupSet(make_cyclic(6), [1]))
    code, _, err = run_main(["verify", "3.2", "--dist", files["dist"], "--f", other, "--k", files["k"]],
                            capsysbinary)
    assert code == 2 and "CarrierMismatchError" in err


def test_csv_only_for_sweeps(files, capsysbinary):
    code, out, _ = run_main(["tightness", "--construction", "dll", "--grid", "1", "5", "--emit", "csv"], capsysbinary)
    assert code == 0
    assert out.decode().splitlines() == ["n,ratio_num,ratio_den,constant,gap", "1,0,1,4,4", "5,28,9,4,8/9"]
    code, _, err = run_main(["verify", "3.2", "--dist", files["dist"], "--f", files["f"], "--k", files["k"],
                             "--format", "csv"], capsysbinary)
    assert code == 2 and "CSV" in err


def test_config_file_and_env(files, capsysbinary, monkeypatch):
    cfg = files["write"]("cfg.json", {"schema_version": 1, "command": "verify",
                                      "args": {"theorem": "3.2", "dist": [files["dist"]], "f": files["f"], "k": files["k"]}})
    code, out, _ = run_main(["--config", cfg], capsysbinary)
    assert code == 0
    monkeypatch.setenv("SMALLBALL_CONFIG", cfg)
    code, env_out, _ = run_main([], capsysbinary)
    assert code == 0 and env_out == out
    code, override, _ = run_main(["verify", "3.4"], capsysbinary)
    assert json.loads(override)["items"][0]["theorem"] == "3.4"


def test_config_errors_point_at_the_field(files, capsysbinary):
    bad = files["write"]("bad.json", {"schema_version": 1, "command": "verify", "tolerance": -1})
    code, _, err = run_main(["--config", bad], capsysbinary)
    assert code == 2 and "/tolerance" in err
    bad = files["write"]("bad2.json", {"schema_version": 1, "args": {"nonsense": 1}})
    code, _, err = run_main(["--config", bad], capsysbinary)
    assert code == 2 and "/args" in err and "nonsense" in err


def test_out_flag_writes_file(files, capsysbinary):
    target = files["dir"] / "report.json"
    code, out, _ = run_main(["tightness", "--construction", "symkat", "--out", str(target)], capsysbinary)
    assert code == 0 and out == b""
    assert json.loads(target.read_text())["summary"]["pass"] == 3


def test_empty_sweep_grid(files, capsysbinary):
    desc = files["write"]("sweep.json", {"carrier": {"kind": "cyclic", "n": 5}, "m_max": 3, "pairs": []})
    code, out, _ = run_main(["lemma", "3.1", "--sweep", desc], capsysbinary)
    assert code == 0
    report = json.loads(out)
    assert report["items"] == [] and set(report["summary"].values()) == {0}


def test_lemma_preset_counts(capsysbinary):
    code, out, _ = run_main(["lemma", "4.1", "--sweep", "exhaustive-d3-m4"], capsysbinary)
    report = json.loads(out)
    assert code == 0 and report["summary"]["fail"] == 0
    # 209 multisets of size <= 4 over six elements, 63 nonempty F, 3 normal K
    assert report["summary"]["pass"] == 209 * 63 * 3


def test_packing_and_table(files, capsysbinary):
    code, out, _ = run_main(["packing", "--f", files["f"], "--k", files["k"], "--exact"], capsysbinary)
    assert code == 0 and json.loads(out)["items"][0]["value"] == 1


def test_moments_reverse_needs_seed(capsysbinary):
    code, _, _ = run_main(["moments", "reverse", "--samples", "2000"], capsysbinary)
    assert code == 2
    code, out, _ = run_main(["moments", "reverse", "--samples", "2000", "--seed", "4"], capsysbinary)
    assert code == 0 and json.loads(out)["items"][0]["theorem"] == "reverse-holder"


def test_strict_makes_inconclusive_fail(capsysbinary):
    argv = ["moments", "reverse", "--samples", "50", "--seed", "4"]
    assert run_main(argv, capsysbinary)[0] == 0
    assert run_main(argv + ["--strict"], capsysbinary)[0] == 1


def test_emit_parse_round_trip():
    cfg = RunConfig("tightness", {"construction": "dll", "grid": [2, 3]})
    report = run(cfg)
    assert parse(emit(report)) == report
    assert all(isinstance(item["ratio"], str) for item in report.items)
    assert sum(report.summary.values()) == len(report.items)
    with pytest.raises(FormatError):
        emit(report, "xml")


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig("verify", tolerance=0)
    with pytest.raises(UsageError):
        RunConfig("dance")


def test_failure_exit_code():
    report = RunReport("0", "x", [{"status": "fail"}], {"pass": 0, "fail": 1, "inconclusive": 0, "rejected": 0})
    assert report.exit_code() == 1
    assert parse(emit(report)) == report


def test_malformed_input_files_exit_two(files, capsysbinary):
    hist = files["write"]("h.json", {"origin": 0, "width": 1, "masses": [1, 2, 1]})
    code, _, err = run_main(["verify", "renyi", "--hist", hist], capsysbinary)
    assert code == 2 and "sum to 1" in err
    dist = files["write"]("neg.json", {"carrier": {"kind": "cyclic", "n": 5}, "support": [0], "weights": [-1]})
    code, _, err = run_main(["verify", "3.2", "--dist", dist, "--f", files["f"], "--k", files["k"]], capsysbinary)
    assert code == 2 and "malformed" in err
