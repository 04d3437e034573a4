import json

import pytest

from fibertypes.cli import EXIT_CONFIG, EXIT_OK, main
from fibertypes.verify import ConfigError, RunConfig, expected_counts, run


def test_expected_counts():
    assert expected_counts(3, 0) == (2, 2, 1, 1)
    assert expected_counts(3, 1) == (8, 12, 1, 5)
    assert expected_counts(3, 2) == (12, 18, 2, 8)
    assert expected_counts(3, 3) == (72, 108, 12, 48)


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(p=2).validate()
    with pytest.raises(ConfigError):
        RunConfig(p=9).validate()
    with pytest.raises(ConfigError):
        RunConfig(p=11).validate()
    assert RunConfig(p=11, suites=("combinatorics",), n_max=1).validate().radius == 3
    cfg = RunConfig(radius=1).validate()
    assert cfg.radius == 4 and cfg.warnings


def test_run_q3():
    rep = run(RunConfig(p=3, n_max=3))
    assert rep.summary()["fail"] == 0
    checks = {c.id: c for c in rep.checks}
    assert checks["h1.2"].observed == [2, 8]
    assert checks["h1.3"].observed == [12, 48]
    assert all(c.anchor for c in rep.checks)


def test_run_n_max_0_ledger():
    rep = run(RunConfig(p=3, n_max=0, suites=("ledger",)))
    assert [(e["label"], e["total"]) for e in rep.ledger["entries"]] == [("1[Itilde]", 1)]


def test_exit_codes(tmp_path, capsys):
    assert main(["verify", "--p", "2"]) == EXIT_CONFIG
    assert main(["verify", "--p", "4"]) == EXIT_CONFIG
    assert main(["verify", "--p", "3", "--n-max", "1", "--suite", "cohomology"]) == EXIT_OK
    assert main(["ledger", "--n-max", "0", "--out", str(tmp_path / "no" / "such" / "file")]) == EXIT_CONFIG


def test_verify_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["verify", "--p", "3", "--n-max", "2", "--out", str(out)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["summary"]["fail"] == 0
    assert list(data) == sorted(data)


def test_fiber_dump(capsys):
    assert main(["fiber", "--n", "3"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert json.loads(lines[0])["components"] == 12
    assert len(lines) == 1 + 108


def test_table_csv(capsys):
    assert main(["table", "--p", "5", "--format", "csv"]) == EXIT_OK
    rows = capsys.readouterr().out.splitlines()
    assert len(rows) == 1 + 7


def test_ledger_csv(capsys):
    assert main(["ledger", "--n-max", "1", "--format", "csv"]) == EXIT_OK
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "level,label,kind,dim,multiplicity"
    assert sum(",level0-cuspidal," in r for r in rows) == 1
