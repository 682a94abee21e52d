import json
import subprocess
import sys

import pytest

from pglekr import cli
from pglekr.cache import TableCache
from pglekr.finite_field import field_of_order


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv("EKR_CACHE_DIR", raising=False)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_ekr_q5(capsys):
    code, out, _ = run(["verify", "ekr", "--q", "5"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert set(rep) >= {"version", "config", "results", "summary"}
    ekr = next(e for e in rep["results"] if e["name"] == "ekr_pgl")
    assert ekr["passed"] and ekr["observed"]["num_cosets"] == 36
    assert rep["summary"]["failed"] == 0


def test_invalid_prime_power(capsys):
    code, _, err = run(["verify", "ekr", "--q", "6"], capsys)
    assert code == 2 and "prime power" in err


@pytest.mark.parametrize("argv", [
    ["verify", "nonsense", "--q", "3"],
    ["verify", "ekr", "--q", "9"],
    ["verify", "spectrum", "--q", "3", "--tolerance", "0"],
    ["verify", "spectrum", "--q", "11", "--max-group-order", "100"],
    ["verify", "spectrum", "--q", "x"],
    ["spectrum"],
])
def test_config_errors(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_argparse_error_exit_code(capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["verify", "--format", "xml"])
    assert err.value.code == 2


def test_failed_verification_exit_code(capsys):
    code, out, _ = run(["verify", "psl", "--q", "3"], capsys)
    assert code == 1
    e = json.loads(out)["results"][0]
    assert not e["passed"] and e["status"] == "evidence, not proof"


def test_spectrum_q11(capsys):
    code, out, _ = run(["spectrum", "--q", "11", "--format", "json"], capsys)
    assert code == 0
    spec = json.loads(out)["spectra"][0]
    got = {e["eigenvalue"]: e["multiplicity"] for e in spec["entries"]}
    assert got == {"605": 1, "11": 500, "5": 121, "0": 576, "-55": 122}
    assert sum(got.values()) == 1320 and spec["ratio_bound"] == "110"


def test_reports_are_byte_stable(capsys):
    argv = ["verify", "spectrum", "matrices", "frobenius", "--q", "3,4"]
    a = run(argv, capsys)[1]
    b = run(argv + ["--threads", "4"], capsys)[1]
    c = run(argv, capsys)[1]
    assert a == b == c


def test_markdown_is_rendered_from_the_same_report(capsys):
    argv = ["verify", "ekr", "frobenius", "--q", "3"]
    rep = json.loads(run(argv, capsys)[1])
    md = run(argv + ["--format", "md"], capsys)[1]
    assert md == cli.to_markdown(rep)
    assert md.count("| PASS |") == rep["summary"]["passed"]


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert run(["verify", "frobenius", "--q", "5", "--out", str(path)], capsys)[0] == 0
    assert json.loads(path.read_text())["summary"]["all_passed"]


def test_timings_only_on_request(capsys):
    rep = json.loads(run(["verify", "frobenius", "--q", "3"], capsys)[1])
    assert "runtime_s" not in rep["results"][0]
    rep = json.loads(run(["verify", "frobenius", "--q", "3", "--timings"], capsys)[1])
    assert "runtime_s" in rep["results"][0]


def test_checks_flag_and_all(capsys):
    rep = json.loads(run(["verify", "--checks", "frobenius,spectrum", "--q", "3"], capsys)[1])
    assert rep["config"]["checks"] == ["frobenius", "spectrum"]
    cfg = cli.RunConfig(checks=list(cli.CHECKS))
    assert cfg.sweep("ekr") == [2, 3, 4, 5, 7]
    assert cfg.sweep("matrices") == [2, 3, 4, 5, 7, 8, 9]


def test_table_edges_matrix(capsys):
    doc = json.loads(run(["table", "--q", "5"], capsys)[1])
    assert doc["tables"][0]["group_order"] == 120
    edges = run(["edges", "--q", "3"], capsys)[1].splitlines()
    assert len(edges) == 24 * 9 // 2
    agl = run(["edges", "--q", "4", "--group", "agl"], capsys)[1].splitlines()
    assert len(agl) == 3 * 6
    text = run(["matrix", "--q", "3", "--which", "Abar"], capsys)[1]
    assert text.startswith("# A-bar 24x10")


def test_cache_hit_and_rebuild(tmp_path, monkeypatch):
    F = field_of_order(7)
    c1 = TableCache(tmp_path)
    t1 = c1.pgl(F)
    assert (c1.hits, c1.misses) == (0, 1)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert len(files) == 2
    blob = next(tmp_path.glob("*.npz")).read_bytes()
    c2 = TableCache(tmp_path)
    t2 = c2.pgl(F)
    assert (c2.hits, c2.misses) == (1, 0)
    assert (t1.perms == t2.perms).all() and (t1.mats == t2.mats).all()
    npz = next(tmp_path.glob("*.npz"))
    npz.write_bytes(blob[:-10] + b"0123456789")
    c3 = TableCache(tmp_path)
    with pytest.warns(UserWarning, match="rebuilt"):
        t3 = c3.pgl(F)
    assert c3.rebuilt == 1 and (t3.perms == t1.perms).all()
    assert npz.read_bytes() == blob  # rewritten deterministically
    assert TableCache(tmp_path).pgl(F) is not None


def test_no_cache_writes_nothing(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("EKR_CACHE_DIR", str(tmp_path / "c"))
    assert run(["verify", "matrices", "--q", "3", "--no-cache"], capsys)[0] == 0
    assert not (tmp_path / "c").exists()
    assert run(["verify", "matrices", "--q", "3"], capsys)[0] == 0
    assert len(list((tmp_path / "c").iterdir())) == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "pglekr", "verify", "frobenius", "--q", "3", "--format", "md"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "1 / 1 checks passed" in out.stdout
