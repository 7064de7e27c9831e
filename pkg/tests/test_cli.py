import json
import math

import pytest

from polyrmf.cli import main
from polyrmf.sieve import kappa_euler
from polyrmf.poly import IntPolynomial


def run(capsys, *args):
    code = main(list(args))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_json(capsys, *args):
    code, out, err = run(capsys, *args)
    assert code == 0, err
    return json.loads(out)


def test_no_command_is_usage_error(capsys):
    code, _, err = run(capsys)
    assert code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


@pytest.mark.parametrize(
    "args",
    [
        ("kappa", "--poly", "1,0,1"),
        ("sieve-dump", "--poly", "1,0,1", "--n-max", "10"),
        ("moments", "--poly", "1,0,1", "--n-max", "30"),
        ("quadruples", "--poly", "1,0,1"),
        ("clt", "--poly", "1,0,1", "--n-max", "100"),
        ("curves", "--poly", "1,0,1", "--n-grid", "50"),
        ("fluctuations",),
        ("smooth", "--x", "100", "--y", "2"),
    ],
)
def test_dry_run_resolves_without_working(capsys, args):
    plan = run_json(capsys, *args, "--dry-run")
    assert plan["data"] == {"dry_run": True}
    assert "wall_time_s" not in plan
    assert plan["config"]["command"] == args[0]


def test_kappa_envelope(capsys):
    env = run_json(capsys, "kappa", "--poly", "1,0,1", "--prime-bound", "2000")
    assert env["schema_version"] == 1
    assert env["tool"]["name"] == "polyrmf"
    assert env["config"]["prime_bound"] == 2000
    d = env["data"]
    assert d["admissible"] is True
    assert d["fixed_divisor"] == 1
    assert d["kappa"] == kappa_euler(IntPolynomial((1, 0, 1)), 2000)
    assert "wall_time_s" in env


def test_kappa_data_is_rerun_stable(capsys):
    a = run_json(capsys, "kappa", "--poly", "1,0,1", "--prime-bound", "500")
    b = run_json(capsys, "kappa", "--poly", "1,0,1", "--prime-bound", "500")
    assert json.dumps(a["data"], sort_keys=True) == json.dumps(b["data"], sort_keys=True)
    assert a["config"] == b["config"]


def test_sieve_dump_csv(capsys):
    code, out, err = run(capsys, "sieve-dump", "--poly", "1,0,1", "--n-max", "10")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# polyrmf sieve-dump")
    assert "n,value,is_squarefree,largest_prime,factors" in lines
    assert "1,2,1,2,2^1" in lines
    assert "7,50,0,5,2^1*5^2" in lines
    body = [l for l in lines if not l.startswith("#")]
    assert len(body) == 11  # header plus one row per n


def test_sieve_dump_stable_modulo_timing(capsys):
    args = ("sieve-dump", "--poly", "0,1,1", "--n-max", "25")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    strip = lambda s: [l for l in s.splitlines() if not l.startswith("# wall_time_s")]
    assert strip(out1) == strip(out2)


def test_sieve_dump_max_rows(capsys):
    code, out, _ = run(capsys, "sieve-dump", "--poly", "1,0,1", "--n-max", "50",
                       "--max-rows", "3")
    body = [l for l in out.splitlines() if not l.startswith("#")]
    assert len(body) == 4


def test_quadruples_csv(capsys):
    code, out, _ = run(capsys, "quadruples", "--poly", "1,0,1", "--n-grid", "100,200")
    assert code == 0
    lines = out.splitlines()
    slope_line = next(l for l in lines if l.startswith("# loglog_slope:"))
    assert float(slope_line.split(":")[1]) < 0  # off-diagonal ratio decays
    assert "n,fourth_moment,diagonal,off_diagonal,ratio" in lines
    body = [l for l in lines if l and not l.startswith(("#", "n,"))]
    assert len(body) == 2
    n, f4, diag, off, ratio = body[0].split(",")
    assert int(f4) == int(diag) + int(off)


def test_smooth_output(capsys):
    env = run_json(capsys, "smooth", "--x", "100", "--y", "2")
    assert env["data"]["count"] == 7
    assert env["data"]["proportion"] == pytest.approx(0.07)
    assert env["data"]["log_ratio"] == pytest.approx(math.log(100) / math.log(2))


def test_clt_run_and_histogram_csv(capsys, tmp_path):
    hist = tmp_path / "hist.csv"
    env = run_json(capsys, "clt", "--poly", "1,0,1", "--n-max", "200",
                   "--trials", "50", "--seed", "1", "--histogram-csv", str(hist))
    d = env["data"]
    assert d["trials"] == 50
    assert d["ks_vacuous"] is True  # below the reliability floor
    assert math.isfinite(d["m2"])
    text = hist.read_text().splitlines()
    assert "bin_left,bin_right,count" in text
    assert len([l for l in text if not l.startswith(("#", "bin_"))]) == 40


def test_moments_with_gcd_histogram(capsys, tmp_path):
    out_csv = tmp_path / "gcd.csv"
    env = run_json(capsys, "moments", "--poly", "1,0,1", "--n-max", "60",
                   "--gcd-threshold", "1", "--histogram-csv", str(out_csv))
    d = env["data"]
    assert d["n_max"] == 60
    assert d["fourth_moment"] == 8777
    assert d["off_diagonal"] == 456
    assert "gcd_histogram" in d
    assert "gcd,count" in out_csv.read_text()


def test_curves_fixed_pair(capsys, tmp_path):
    pts_csv = tmp_path / "pts.csv"
    env = run_json(capsys, "curves", "--poly", "1,0,1", "--a", "1", "--b", "2",
                   "--n-max", "100", "--points-csv", str(pts_csv))
    d = env["data"]
    assert [3, 2] in d["points"]  # 3^2 + 1 = 2 * (2^2 + 1)
    assert d["truncated"] is False
    assert d["count"] == len(d["points"])
    for x, y in d["points"]:
        assert x * x + 1 == 2 * (y * y + 1)
    assert "x,y" in pts_csv.read_text().splitlines()


def test_curves_scan_mode(capsys):
    env = run_json(capsys, "curves", "--poly", "1,0,1", "--n-grid", "50,100",
                   "--ab-samples", "20", "--ab-max", "50", "--seed", "0")
    d = env["data"]
    assert d["n_values"] == [50, 100]
    assert len(d["counts_by_n"]) == 2
    assert len(d["counts_by_n"][0]) == len(d["pairs"])


def test_curves_needs_a_mode(capsys):
    code, _, err = run(capsys, "curves", "--poly", "1,0,1")
    assert code == 2
    assert json.loads(err)["error"]["type"] == "UsageError"


def test_config_file_supplies_options(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"poly": "1,0,1", "n_max": 40}))
    env = run_json(capsys, "moments", "--config", str(cfg))
    assert env["data"]["n_max"] == 40


def test_flags_override_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"poly": "1,0,1", "n_max": 100, "trials": 50}))
    env = run_json(capsys, "clt", "--config", str(cfg), "--trials", "10", "--dry-run")
    assert env["config"]["trials"] == 10
    assert env["config"]["n_max"] == 100


def test_unknown_config_key_rejected(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"poly": "1,0,1", "n_max": 40, "bogus": 1}))
    code, _, err = run(capsys, "moments", "--config", str(cfg))
    assert code == 2
    assert "bogus" in json.loads(err)["error"]["message"]


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("RCL_SEED", "42")
    env = run_json(capsys, "clt", "--poly", "1,0,1", "--n-max", "50", "--dry-run")
    assert env["config"]["seed"] == 42
    env = run_json(capsys, "clt", "--poly", "1,0,1", "--n-max", "50",
                   "--seed", "7", "--dry-run")
    assert env["config"]["seed"] == 7


def test_missing_required_option(capsys):
    code, _, err = run(capsys, "kappa")
    assert code == 2
    assert "poly" in json.loads(err)["error"]["message"]


def test_bad_polynomial_string(capsys):
    code, _, err = run(capsys, "kappa", "--poly", "1,,x")
    assert code == 2


def test_threads_must_be_positive(capsys):
    code, _, _ = run(capsys, "smooth", "--x", "10", "--y", "2", "--threads", "0")
    assert code == 2


def test_kappa_inadmissible_is_domain_error(capsys):
    code, _, err = run(capsys, "kappa", "--poly", "0,6,11,6,1")
    assert code == 3
    assert json.loads(err)["error"]["type"] == "DomainError"


def test_sieve_negative_values_is_domain_error(capsys):
    code, _, err = run(capsys, "sieve-dump", "--poly=-4,1", "--n-max", "10")
    assert code == 3


def test_fluctuations_infeasible_schedule(capsys):
    code, _, err = run(capsys, "fluctuations", "--mode", "theoretical",
                       "--base", "16", "--scales", "8", "--cap", "1000000")
    assert code == 4
    assert json.loads(err)["error"]["type"] == "InfeasibleScaleError"


def test_fluctuations_small_run(capsys, tmp_path):
    csv = tmp_path / "scales.csv"
    env = run_json(capsys, "fluctuations", "--base", "16", "--scales", "3",
                   "--cap", "400", "--c", "0.05", "--trials", "20",
                   "--verify", "--scale-csv", str(csv))
    d = env["data"]
    assert d["partition_exact"] is True
    assert all(d["invariants"].values())
    body = [l for l in csv.read_text().splitlines() if not l.startswith(("#", "i,"))]
    assert len(body) == 3


def test_output_file(capsys, tmp_path):
    out = tmp_path / "result.json"
    code, stdout, _ = run(capsys, "smooth", "--x", "77", "--y", "77",
                          "--output", str(out))
    assert code == 0
    assert stdout == ""
    assert json.loads(out.read_text())["data"]["count"] == 77
