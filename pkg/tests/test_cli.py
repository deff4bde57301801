import json

import pytest

from freyhyper.cli import EXIT_COMPUTATION, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, main

TRIPLE = ["-a", "1", "-b", "-1", "-c", "0", "-p", "7"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_disc(capsys):
    code, out, _ = run(capsys, "disc", "--sign", "minus", *TRIPLE)
    assert code == EXIT_OK
    assert "Delta(P) = 2^8 * 5^5" in out


def test_construct_json_manifest(capsys):
    code, out, _ = run(capsys, "construct", "--json", "--sign", "minus", *TRIPLE)
    assert code == EXIT_OK
    doc = json.loads(out)
    man = doc["manifest"]
    assert set(man) >= {"command", "parameters", "input_hashes", "tool_version", "timestamp"}
    assert man["command"] == "construct" and man["parameters"]["a"] == 1


def test_selmer_lists_eight_classes(capsys):
    code, out, _ = run(capsys, "selmer", "--json", "--support", "2")
    assert code == EXIT_OK
    res = json.loads(out)["result"]
    assert len(res["representatives"]) == 8


def test_traces(capsys):
    code, out, _ = run(capsys, "traces", "--sign", "minus", *TRIPLE, "--primes", "11")
    assert code == EXIT_OK
    assert "11.1" in out and "11.2" in out


def test_obstructions_ray(capsys):
    code, out, _ = run(capsys, "obstructions", "--case", "I", "--ray", "1", "5.1", "5.1^3")
    assert code == EXIT_OK
    assert "order 1" in out and "order 2" in out and "order 10" in out


def test_eliminate_exit_codes(capsys):
    code, out, _ = run(capsys, "eliminate", "--case", "I", "--aux", "3")
    assert code == EXIT_OK and "contradiction for every p" in out
    code, out, _ = run(capsys, "eliminate", "--case", "II", "--aux", "3")
    assert code == EXIT_NEGATIVE and "unbounded" in out


def test_eliminate_with_forms_file(tmp_path, capsys):
    rec = {"label": "r", "level": [], "field_poly": [0, 1], "eigs": {"9.1": [2]}}
    path = tmp_path / "f.jsonl"
    path.write_text(json.dumps(rec) + "\n")
    code, out, _ = run(capsys, "eliminate", "--json", "--case", "I", "--aux", "3",
                       "--forms", str(path))
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["result"]["forms"][0]["gcd"] == "56623104"
    assert str(path) in doc["manifest"]["input_hashes"]


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["construct", "--sign", "sideways", *TRIPLE])
    assert exc.value.code == EXIT_USAGE


def test_computation_error(capsys):
    code, _, err = run(capsys, "selmer", "--support", "9.9")
    assert code == EXIT_COMPUTATION and err.startswith("error [")
    code, out, _ = run(capsys, "eliminate", "--json", "--case", "I", "--source", "/nonexistent")
    assert code == EXIT_COMPUTATION and json.loads(out)["error"]["kind"] == "EndpointError"


def test_config_supplies_flags(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"sign": "minus", "a": 1, "b": -1, "c": 0, "p": 7}))
    code, out, _ = run(capsys, "disc", "--config", str(cfg))
    assert code == EXIT_OK and "2^8 * 5^5" in out


def test_paper_check_passes(capsys):
    code, out, _ = run(capsys, "paper-check")
    assert code == EXIT_OK and "FAIL" not in out
