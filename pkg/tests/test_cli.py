import json
import subprocess
import sys

from rmlab import Word, monomial_poly

RMLAB = [sys.executable, "-m", "rmlab"]


def run_cli(*args, env=None):
    return subprocess.run(
        RMLAB + list(args), capture_output=True, text=True, env=env
    )


def test_min_distance_example():
    proc = run_cli("min-distance", "--p", "2", "--n", "4", "--d", "2")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1/4"


def test_usage_error_exit_2():
    proc = run_cli("min-distance", "--p", "2")
    assert proc.returncode == 2


def test_unknown_flag_rejected():
    proc = run_cli("min-distance", "--p", "2", "--n", "4", "--d", "2", "--bogus")
    assert proc.returncode == 2


def test_infeasible_exit_3():
    proc = run_cli(
        "--limits", "table=10,exhaustive=10", "min-distance", "--p", "2", "--n", "4", "--d", "2"
    )
    assert proc.returncode == 3
    assert "infeasible" in proc.stderr


def test_verify_pass_and_fail_exit_codes():
    ok = run_cli("verify", "--claim", "DELTA_PRODUCT", "--p", "3", "--dmax", "20")
    assert ok.returncode == 0
    payload = json.loads(ok.stdout)
    assert payload["status"] == "pass" and payload["casesChecked"] == 40
    bad = run_cli(
        "verify", "--claim", "THM1_DESK", "--p", "2", "--d", "1",
        "--eps", "1/16", "--samples", "50", "--seed", "0", "--ns", "3,4",
    )
    assert bad.returncode == 1
    assert json.loads(bad.stdout)["status"] == "fail"


def test_verify_infeasible_exit_3():
    proc = run_cli("verify", "--claim", "LUCAS", "--p", "2", "--r", "40", "--A", "1", "--k", "1")
    assert proc.returncode == 3


def test_list_size_csv_schema_and_determinism():
    args = (
        "list-size", "--p", "2", "--n", "3", "--d", "1",
        "--radius", "3/8", "--center", "random", "--samples", "10", "--seed", "7",
    )
    a = run_cli(*args)
    b = run_cli(*args)
    assert a.returncode == 0
    assert a.stdout == b.stdout  # byte-identical under identical argv
    lines = a.stdout.strip().splitlines()
    assert lines[0] == "# rm-list-lab v1 list-size"
    assert lines[1] == "p,n,d,radius,center_id,count"
    assert len(lines) == 12


def test_jobs_do_not_change_output():
    base = (
        "list-size", "--p", "2", "--n", "3", "--d", "1",
        "--radius", "7/16", "--center", "random", "--samples", "8", "--seed", "3",
    )
    one = run_cli("--jobs", "1", *base)
    eight = run_cli("--jobs", "8", *base)
    assert one.stdout == eight.stdout


def test_json_format():
    proc = run_cli(
        "--format", "json",
        "list-size", "--p", "2", "--n", "2", "--d", "1",
        "--radius", "1/4", "--center", "zero",
    )
    rows = json.loads(proc.stdout)
    assert rows[0]["center_id"] == "zero"
    assert rows[0]["radius"] == "1/4"


def test_decimal_radius_is_exact():
    a = run_cli(
        "list-size", "--p", "2", "--n", "3", "--d", "1",
        "--radius", "0.375", "--center", "zero",
    )
    b = run_cli(
        "list-size", "--p", "2", "--n", "3", "--d", "1",
        "--radius", "3/8", "--center", "zero",
    )
    assert a.stdout.replace("0.375", "3/8") == b.stdout


def test_list_size_members_out(tmp_path):
    out = tmp_path / "members.jsonl"
    proc = run_cli(
        "list-size", "--p", "2", "--n", "3", "--d", "1",
        "--radius", "3/8", "--center", "zero", "--members-out", str(out),
    )
    assert proc.returncode == 0
    payload = json.loads(out.read_text().strip())
    assert payload["eta"] == "3/8"
    assert payload["count"] == len(payload["members"])


def test_max_list_and_argmax_out(tmp_path):
    out = tmp_path / "argmax.txt"
    proc = run_cli(
        "max-list", "--p", "2", "--n", "3", "--d", "1",
        "--radius", "7/16", "--samples", "10", "--seed", "0",
        "--argmax-out", str(out),
    )
    assert proc.returncode == 0
    word = Word.from_text(out.read_text())
    assert word.length == 8


def test_tightness_rows():
    proc = run_cli("tightness", "--p", "3", "--d", "3", "--e", "2", "--n", "4")
    lines = proc.stdout.strip().splitlines()
    assert lines[0] == "# rm-list-lab v1 tightness"
    assert len(lines) == 2 + 9
    assert all(line.endswith("2/9") for line in lines[2:])


def test_weak_reg_json_deterministic():
    args = ("weak-reg", "--p", "2", "--n", "3", "--d", "1", "--eps", "2/5", "--seed", "5")
    a = run_cli(*args)
    b = run_cli(*args)
    assert a.stdout == b.stdout
    payload = json.loads(a.stdout)
    assert "trace" in payload and "gamma" in payload


def test_rank_and_atoms_roundtrip(tmp_path):
    poly_path = tmp_path / "prod.poly"
    poly_path.write_text(monomial_poly(2, 2, (1, 1)).to_text())
    proc = run_cli("rank", "--poly", str(poly_path), "--d", "2", "--budget", "3")
    assert proc.stdout.strip() == "exact 2"
    proc = run_cli("atoms", "--poly", str(poly_path))
    lines = proc.stdout.strip().splitlines()
    assert lines[1] == "definers,norm,deviation,worst_atom"
    assert lines[2].startswith("1,2,1/4")


def test_canonical_fit_roundtrip(tmp_path):
    poly = monomial_poly(2, 1, (1,), k=1)
    word_path = tmp_path / "word.txt"
    word_path.write_text(poly.to_word().to_text())
    proc = run_cli("canonical-fit", "--word", str(word_path), "--max-depth", "2")
    assert proc.stdout == poly.to_text()


def test_verify_all_subset_with_config(tmp_path):
    config = tmp_path / "runs.cfg"
    config.write_text(
        "claims=APK,DELTA_PRODUCT,JOHNSON_GAP\n"
        "APK.amax=10\nAPK.kmax=5\nAPK.pmax=7\n"
        "DELTA_PRODUCT.dmax=10\n"
    )
    csv_path = tmp_path / "summary.csv"
    one = run_cli("--jobs", "1", "verify-all", "--config", str(config), "--csv", str(csv_path))
    eight = run_cli("--jobs", "8", "verify-all", "--config", str(config), "--csv", str(csv_path))
    assert one.returncode == 0
    assert one.stdout == eight.stdout
    assert csv_path.read_text().startswith("# rm-list-lab v1 verify-all")
    for line in one.stdout.strip().splitlines():
        assert json.loads(line)["status"] == "pass"


def test_env_limits_respected():
    import os

    env = dict(os.environ)
    env["RMLAB_LIMITS"] = "table=10,exhaustive=10"
    proc = run_cli("min-distance", "--p", "2", "--n", "4", "--d", "2", env=env)
    assert proc.returncode == 3
