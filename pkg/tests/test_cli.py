"""Exit codes, file plumbing, report determinism, bench CSV shape."""

from __future__ import annotations

import json

import pytest

from zerotri.cli import bench_ladder, run_command
from zerotri.campaigns import UsageError
from zerotri.instances import (
    ThreeSumInstance,
    UnweightedTripartiteGraph,
    WeightedTripartiteGraph,
    parse_instance,
)
from zerotri.oracles import brute_exact_triangles


def test_verify_known_campaign_exits_zero(capsys):
    assert run_command(["verify", "digit-identity", "--q", "3"]) == 0
    out = capsys.readouterr().out
    payload = json.loads(out)
    assert payload["ok"] is True
    assert payload["campaign"] == "digit-identity"


def test_unknown_subcommand_exits_two_with_usage(capsys):
    assert run_command(["frobnicate"]) == 2
    err = capsys.readouterr().err
    assert "usage:" in err


def test_unknown_campaign_exits_two(capsys):
    assert run_command(["verify", "no-such-campaign"]) == 2
    assert "no-such-campaign" in capsys.readouterr().err


def test_zero_trials_is_usage_error(capsys):
    assert run_command(["verify", "equiv-detect", "--trials", "0"]) == 2
    assert "trials" in capsys.readouterr().err


def test_bad_flag_value_exits_two(capsys):
    assert run_command(["gen", "--kind", "exact-tri", "--parts", "a,b,c"]) == 2
    capsys.readouterr()


def test_missing_input_file_exits_two(capsys):
    assert run_command(["solve", "--pipeline", "detect",
                        "--in", "/nonexistent/x.json"]) == 2
    capsys.readouterr()


def test_gen_writes_parseable_instance(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert run_command(["gen", "--kind", "exact-tri", "--parts", "5,4,3",
                        "--weight-bound", "20", "--planted", "1",
                        "--seed", "6", "--out", str(out)]) == 0
    g = parse_instance(out.read_text())
    assert isinstance(g, WeightedTripartiteGraph)
    assert g.part_sizes == (5, 4, 3)
    wits, _ = brute_exact_triangles(g)
    assert wits
    capsys.readouterr()


def test_gen_3sum_and_fewc4_kinds(tmp_path, capsys):
    ts_path = tmp_path / "ts.json"
    assert run_command(["gen", "--kind", "3sum", "--n", "7",
                        "--seed", "2", "--out", str(ts_path)]) == 0
    ts = parse_instance(ts_path.read_text())
    assert isinstance(ts, ThreeSumInstance) and ts.n == 7

    f4_path = tmp_path / "f4.json"
    assert run_command(["gen", "--kind", "fewc4", "--n", "5",
                        "--weight-bound", "9", "--out", str(f4_path)]) == 0
    g = parse_instance(f4_path.read_text())
    assert isinstance(g, WeightedTripartiteGraph) and g.antisymmetric
    capsys.readouterr()


def test_reduce_modes_produce_parseable_outputs(tmp_path, capsys):
    src = tmp_path / "g.json"
    run_command(["gen", "--kind", "exact-tri", "--parts", "4,4,4",
                 "--weight-bound", "27", "--planted", "1", "--seed", "3",
                 "--out", str(src)])
    for mode, expect in (("sparse-exact", UnweightedTripartiteGraph),
                         ("mod-p", WeightedTripartiteGraph),
                         ("degree-bounded", UnweightedTripartiteGraph)):
        dst = tmp_path / f"{mode}.json"
        assert run_command(["reduce", "--mode", mode, "--in", str(src),
                            "--out", str(dst)]) == 0
        assert isinstance(parse_instance(dst.read_text()), expect)

    ts = tmp_path / "ts.json"
    run_command(["gen", "--kind", "3sum", "--n", "6", "--seed", "1",
                 "--out", str(ts)])
    dst = tmp_path / "sp3.json"
    assert run_command(["reduce", "--mode", "sparse-3sum", "--in", str(ts),
                        "--out", str(dst)]) == 0
    sp = parse_instance(dst.read_text())
    assert isinstance(sp, UnweightedTripartiteGraph)
    capsys.readouterr()


def test_reduce_mode_instance_mismatch_exits_two(tmp_path, capsys):
    ts = tmp_path / "ts.json"
    run_command(["gen", "--kind", "3sum", "--n", "5", "--out", str(ts)])
    assert run_command(["reduce", "--mode", "sparse-exact",
                        "--in", str(ts)]) == 2
    capsys.readouterr()


@pytest.mark.parametrize("pipeline", ["listing", "an", "detect", "det", "fewc4"])
def test_solve_pipelines_answer_matches_brute(pipeline, tmp_path, capsys):
    src = tmp_path / "g.json"
    kind = "fewc4" if pipeline == "fewc4" else "exact-tri"
    argv = ["gen", "--kind", kind, "--weight-bound", "16", "--planted", "1",
            "--seed", "4", "--out", str(src)]
    if kind == "exact-tri":
        argv += ["--parts", "5,5,5"]
    else:
        argv += ["--n", "5"]
    run_command(argv)
    out = tmp_path / "ans.json"
    assert run_command(["solve", "--pipeline", pipeline, "--in", str(src),
                        "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    g = parse_instance(src.read_text())
    wits, _ = brute_exact_triangles(g, cap=1)
    if pipeline == "det":
        # The det table flags |4w| <= 3 pairs, i.e., exact zero triangles.
        assert payload["answer"] == bool(wits)
        for a, b, c, s in payload["table"]:
            assert abs(s) <= payload["tol"]
    else:
        assert payload["answer"] == bool(wits)
    capsys.readouterr()


def test_solve_3sum_pipeline(tmp_path, capsys):
    src = tmp_path / "ts.json"
    run_command(["gen", "--kind", "3sum", "--n", "9", "--planted", "1",
                 "--seed", "5", "--out", str(src)])
    assert run_command(["solve", "--pipeline", "3sum", "--in", str(src)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["answer"] is True


def test_solve_timings_flag_controls_wall_ms(tmp_path, capsys):
    src = tmp_path / "g.json"
    run_command(["gen", "--kind", "exact-tri", "--parts", "4,4,4",
                 "--weight-bound", "8", "--out", str(src)])
    run_command(["solve", "--pipeline", "detect", "--in", str(src)])
    plain = json.loads(capsys.readouterr().out)
    assert "wall_ms" not in plain
    run_command(["solve", "--pipeline", "detect", "--in", str(src),
                 "--timings"])
    timed = json.loads(capsys.readouterr().out)
    assert "wall_ms" in timed


def test_solve_rejects_pathological_t_exponent(tmp_path, capsys):
    src = tmp_path / "g.json"
    run_command(["gen", "--kind", "exact-tri", "--parts", "4,4,4",
                 "--weight-bound", "50", "--out", str(src)])
    assert run_command(["solve", "--pipeline", "listing", "--in", str(src),
                        "--t-exponent", "9"]) == 2
    capsys.readouterr()


def test_verify_reports_are_byte_identical(tmp_path, capsys):
    a = tmp_path / "r1.json"
    b = tmp_path / "r2.json"
    argv = ["verify", "equiv-modp", "--n", "16", "--trials", "200",
            "--seed", "7"]
    assert run_command(argv + ["--out", str(a)]) == 0
    assert run_command(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    payload = json.loads(a.read_text())
    assert payload["config"] == {"n": 16, "seed": 7, "trials": 200}
    capsys.readouterr()


def test_verify_csv_format_is_flat_key_value(capsys):
    assert run_command(["verify", "digit-identity", "--q", "2",
                        "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "# zerotri verify v1"
    assert lines[1] == "key,value"
    keys = [line.split(",", 1)[0] for line in lines[2:]]
    assert "campaign" in keys and "ok" in keys
    assert all(keys[i] <= keys[i + 1] or "." in keys[i] for i in range(len(keys) - 1))


def test_bench_empty_ladder_header_only(capsys):
    assert run_command(["bench", "--family", "sparse-exact-q",
                        "--sizes", ""]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "# zerotri bench v1"
    assert lines[2].startswith("family,size,")
    assert len(lines) == 3


def test_bench_ladder_rows_and_slope_fit():
    text = bench_ladder("sparse-exact-q", [2, 4, 8], seed=0)
    lines = text.strip().splitlines()
    data = [line for line in lines if not line.startswith("#")
            and not line.startswith("family,")]
    assert len(data) == 3
    fit = [line for line in lines if line.startswith("# fit")]
    assert len(fit) == 1
    slope = float(fit[0].split("slope=")[1])
    assert 0.85 <= slope <= 1.15


def test_bench_rejects_unsorted_sizes():
    with pytest.raises(UsageError):
        bench_ladder("sparse-exact-q", [8, 4], seed=0)
    assert run_command(["bench", "--family", "sparse-exact-q",
                        "--sizes", "8,4"]) == 2


def test_estimate_outputs_count(tmp_path, capsys):
    src = tmp_path / "f4.json"
    run_command(["gen", "--kind", "fewc4", "--n", "4", "--weight-bound", "6",
                 "--seed", "3", "--out", str(src)])
    assert run_command(["estimate", "--in", str(src),
                        "--error-target", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["estimate"] >= 0
    assert run_command(["estimate", "--in", str(src),
                        "--error-target", "0"]) == 2
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert run_command(["--help"]) == 0
    capsys.readouterr()
