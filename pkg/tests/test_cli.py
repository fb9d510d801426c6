import io
import json
import os

import pytest

from wqt import cli


def run(args, tmp_path, env=None):
    out = io.StringIO()
    env = {} if env is None else env
    if "--cache-dir" not in args and "--no-cache" not in args and cli.ENV_CACHE not in env and args[0] != "expand":
        args = args + ["--cache-dir", str(tmp_path / "cache")]
    rc = cli.run(args, environ=env, stdout=out)
    return rc, out.getvalue()


def body(text):
    return text.split("== timing")[0]


def test_pass_exit_code_and_text(tmp_path):
    rc, out = run(["screening", "--case", "2", "--order", "4"], tmp_path)
    assert rc == 0
    assert out.startswith("schema: wqt-report/1")
    assert "claim screening[case2]" in out
    assert "== timing" in out


def test_failure_exit_code_still_writes_report(tmp_path):
    path = tmp_path / "rep.json"
    rc, _ = run(["quadratic", "--case", "3", "--i", "1", "--j", "1", "--order", "6",
                 "--construction", "literal", "-o", str(path)], tmp_path)
    assert rc == 1
    doc = json.loads(path.read_text())
    assert doc["schema"] == "wqt-report/1"
    assert doc["summary"]["failed"] >= 1
    bad = [r for r in doc["records"] if r["status"] == "fail"]
    assert bad[0]["witness"]["pattern"]


@pytest.mark.parametrize("args", [["nonsense"], ["params", "--order", "0"], ["params", "--degree", "0"],
                                  ["all", "--claims", "params,bogus"], ["params", "--case", "7"],
                                  ["classical", "--betas", "1e-3,1e-2"], ["classical", "--betas", "x"],
                                  ["quadratic", "--i", "1"]])
def test_usage_errors_exit_2(args, tmp_path):
    rc, _ = run(args, tmp_path)
    assert rc == 2


def test_cache_hit_gives_identical_report(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    args = ["prop22", "--case", "1", "--order", "3"]
    assert run(args + ["-o", str(a)], tmp_path)[0] == 0
    files = list((tmp_path / "cache").rglob("*.json"))
    assert len(files) == 1
    assert run(args + ["-o", str(b)], tmp_path)[0] == 0
    assert body(a.read_text()) == body(b.read_text())
    assert "cached" in b.read_text().split("== timing")[1]


def test_cache_key_depends_on_order(tmp_path):
    run(["prop22", "--case", "1", "--order", "3", "-q"], tmp_path)
    run(["prop22", "--case", "1", "--order", "4", "-q"], tmp_path)
    assert len(list((tmp_path / "cache").rglob("*.json"))) == 2


def test_cache_dir_precedence(tmp_path):
    env = {cli.ENV_CACHE: str(tmp_path / "env")}
    run(["screening", "--case", "1", "--order", "2", "-q"], tmp_path, env)
    assert list((tmp_path / "env").rglob("*.json"))
    run(["screening", "--case", "1", "--order", "2", "-q", "--cache-dir", str(tmp_path / "flag")], tmp_path, env)
    assert list((tmp_path / "flag").rglob("*.json"))
    run(["screening", "--case", "1", "--order", "3", "-q", "--no-cache"], tmp_path, env)
    assert len(list((tmp_path / "env").rglob("*.json"))) == 1


def test_corrupt_cache_entry_is_recomputed(tmp_path):
    args = ["screening", "--case", "1", "--order", "2", "-q"]
    run(args, tmp_path)
    (f,) = list((tmp_path / "cache").rglob("*.json"))
    f.write_text("{not json")
    rc, _ = run(args, tmp_path)
    assert rc == 0
    json.loads(f.read_text())


def test_json_and_text_formats(tmp_path):
    path = tmp_path / "r.out"
    run(["fusion-f", "--case", "2", "--order", "4", "--format", "json", "-o", str(path)], tmp_path)
    doc = json.loads(path.read_text())
    assert [r["claim"] for r in doc["records"]] == ["fusion-f"]
    assert doc["timing"][0]["key"].startswith("fusion-f[case2]")


def test_atomic_write_leaves_no_temporaries(tmp_path):
    p = tmp_path / "d" / "x.txt"
    cli.atomic_write(p, "hello")
    cli.atomic_write(p, "world")
    assert p.read_text() == "world"
    assert os.listdir(p.parent) == ["x.txt"]


def test_expand_f(tmp_path):
    rc, out = run(["expand", "f", "--i", "1", "--j", "1", "--order", "2", "--case", "2"], tmp_path)
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[1] == "0\t1*x^([0]/[1])"
    assert len(lines) == 4


def test_expand_other_targets(tmp_path):
    for args in (["expand", "T", "--i", "2", "--case", "3", "--pretty"], ["expand", "kernel", "--i", "1", "--j", "2"],
                 ["expand", "phi", "--v", "L1", "--w", "S1"], ["expand", "delta", "--i", "2", "--order", "1"]):
        rc, out = run(args, tmp_path)
        assert rc == 0 and out.strip()


def test_build_jobs_covers_all_groups():
    cfg = cli.RunConfig(command="all")
    claims = {j.claim for j in cli.build_jobs(cfg)}
    assert claims == set(cli.CLAIM_GROUPS)


def test_report_round_trip():
    from wqt.verify import verify_screening_exchange
    r = verify_screening_exchange(2, N=3)
    assert cli.report_from_dict(r.to_dict()).to_dict() == r.to_dict()


def test_job_pool_matches_serial_run(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    args = ["screening", "--order", "3", "--no-cache"]
    run(args + ["-o", str(a)], tmp_path)
    run(args + ["-j", "3", "-o", str(b)], tmp_path)
    assert body(a.read_text()) == body(b.read_text())
