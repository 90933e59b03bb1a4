import json
from fractions import Fraction

import pytest

from heckeplane import cli
from heckeplane.report import VerificationReport, emit, parse


def _sample():
    r = VerificationReport("demo", {"K": 3, "x": Fraction(1, 3)}, seed=4)
    r.add("a", 1.5e-12, 1e-9, True)
    r.add("b", {"b_p": "3+1*sqrt(5)", "n": 2 ** 70}, "exact", False, "note")
    r.add("c", 0.25 + 1j, None, True)
    return r


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_roundtrip(fmt):
    r = _sample()
    back = parse(emit(r, fmt), fmt)
    assert [(e.id, e.value, e.budget, e.passed) for e in back.entries] == \
        [(e.id, e.value, e.budget, e.passed) for e in r.entries]
    if fmt == "json":
        assert back == r


def test_empty_report():
    d = json.loads(emit(VerificationReport("empty")))
    assert d["entries"] == [] and d["summary"] == "pass"


def test_summary_and_exact_values():
    r = _sample()
    assert not r.passed and r.summary == "fail"
    d = json.loads(emit(r))
    assert d["params"]["x"] == "1/3"
    assert d["entries"][1]["value"]["n"] == str(2 ** 70)


def test_exit_codes(tmp_path, capsys):
    assert cli.main(["alpha-table", "--trunc", "6"]) == 0
    assert cli.main(["nope"]) == 2
    assert cli.main(["verify-lemma22", "--tol", "-1"]) == 2
    assert cli.main(["ramanujan", "--prime", "4"]) == 2
    # an impossible tolerance is a verification failure, not a usage error
    assert cli.main(["verify-lemma22", "--cutoff", "3", "--tol", "1e-300"]) == 1
    capsys.readouterr()


def test_deterministic_output(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert cli.main(["verify-intertwine", "--seed", "3", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert "wall_time" not in json.loads(outs[0])


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# test\ncutoff = 4\ntol.closed_form = 1e-8\nprimes = 2, 3\nformat = csv\n")
    c = cli.load_config(str(cfg))
    assert c.cutoff == 4 and c.tolerances["closed_form"] == 1e-8 and c.primes == (2, 3) and c.format == "csv"
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    with pytest.raises(cli.ConfigError):
        cli.load_config(str(bad))
    assert cli.main(["verify-lemma22", "--config", str(bad)]) == 2


def test_threads_env(monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "zero")
    assert cli.main(["alpha-table", "--trunc", "2"]) == 2


def test_alpha_csv_output(tmp_path, capsys):
    path = tmp_path / "alpha.csv"
    assert cli.main(["alpha-table", "--trunc", "4", "--alpha-csv", str(path), "--format", "csv"]) == 0
    assert "2,1,0,1" in path.read_text().splitlines()
    assert capsys.readouterr().out.startswith("command,id,value,budget,verdict,note")


def test_help_lists_defaults(capsys):
    assert cli.main(["--help"]) == 0
    out = capsys.readouterr().out
    assert "--cutoff" in out and "default" in out
