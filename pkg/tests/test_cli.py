from __future__ import annotations

import json
import random

import pytest

from cliquelab import verify as verify_mod
from cliquelab.cli import main
from cliquelab.formats import dump_graph, load_family, load_graph, load_steiner
from cliquelab.graph import Graph
from cliquelab.verify import INVARIANT_FAIL, STATISTICAL_FAIL, TrialReport

from _util import random_graph


def _write_graph(path, g: Graph) -> str:
    path.write_text(dump_graph(g))
    return str(path)


# -- usage-level failures -------------------------------------------------------------


def test_no_arguments_is_usage_error():
    assert main([]) == 1


def test_unknown_subcommand_is_usage_error():
    assert main(["frobnicate"]) == 1


def test_unknown_flag_is_usage_error():
    assert main(["params", "--n", "8", "--delta", "0.25", "--k", "2", "--zap"]) == 1


def test_gen_missing_required_parameter(capsys):
    assert main(["gen", "er", "--seed", "1"]) == 1
    assert "requires --n" in capsys.readouterr().err


def test_solve_missing_required_flag(tmp_path, capsys):
    path = _write_graph(tmp_path / "g.txt", Graph.complete(4))
    assert main(["solve", "densest-k-subgraph", "--in", path]) == 1
    assert "requires --k" in capsys.readouterr().err


def test_solve_missing_input_file(tmp_path):
    assert main(["solve", "max-clique", "--in", str(tmp_path / "nope.txt")]) == 1


# -- gen -------------------------------------------------------------------------------


def test_gen_er_rerun_is_byte_identical(tmp_path):
    out = tmp_path / "g.txt"
    argv = ["gen", "er", "--n", "30", "--p", "1/2", "--seed", "11", "--out", str(out)]
    assert main(argv) == 0
    first = out.read_bytes()
    assert main(argv) == 0
    assert out.read_bytes() == first
    g = load_graph(first.decode())
    assert g.n == 30


def test_gen_seed_changes_output(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    base = ["gen", "er", "--n", "30", "--p", "1/2"]
    assert main(base + ["--seed", "1", "--out", str(a)]) == 0
    assert main(base + ["--seed", "2", "--out", str(b)]) == 0
    assert load_graph(a.read_text()).edges() != load_graph(b.read_text()).edges()


def test_gen_planted_records_clique(tmp_path):
    out = tmp_path / "p.txt"
    argv = [
        "gen", "planted", "--n", "20", "--kappa", "6",
        "--seed", "4", "--out", str(out),
    ]
    assert main(argv) == 0
    text = out.read_text()
    g = load_graph(text)
    meta_line = next(ln for ln in text.splitlines() if ln.startswith("# clique:"))
    clique = [int(tok) for tok in meta_line.split(":", 1)[1].split()]
    assert len(clique) == 6
    assert g.is_clique(clique)


def test_gen_pattern_writes_graph(tmp_path):
    out = tmp_path / "h.txt"
    assert main(["gen", "pattern", "--k", "5", "--seed", "3", "--out", str(out)]) == 0
    assert load_graph(out.read_text()).n == 5


# -- rgp -------------------------------------------------------------------------------


def test_rgp_writes_product_and_family(tmp_path):
    src = _write_graph(tmp_path / "src.txt", Graph.complete(9))
    gout, fout = tmp_path / "prod.txt", tmp_path / "fam.txt"
    argv = [
        "rgp", "--in", src, "--n", "9", "--ell", "2", "--N", "15",
        "--seed", "7", "--check", "--out-graph", str(gout),
        "--out-family", str(fout),
    ]
    assert main(argv) == 0
    product = load_graph(gout.read_text())
    fam = load_family(fout.read_text())
    assert product.n == 15
    assert fam.N == 15 and fam.source_n == 9
    # complete source: every product pair is an edge
    assert product.m == 15 * 14 // 2


def test_rgp_source_size_mismatch(tmp_path):
    src = _write_graph(tmp_path / "src.txt", Graph.complete(9))
    argv = [
        "rgp", "--in", src, "--n", "10", "--ell", "2", "--N", "5",
        "--seed", "7", "--out-graph", str(tmp_path / "a"),
        "--out-family", str(tmp_path / "b"),
    ]
    assert main(argv) == 1


# -- solve -----------------------------------------------------------------------------


def test_solve_max_clique_stdout_payload(tmp_path, capsys):
    path = _write_graph(tmp_path / "g.txt", Graph.cycle(5))
    assert main(["solve", "max-clique", "--in", path]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["problem"] == "max-clique"
    assert payload["size"] == 2
    assert payload["run"]["subcommand"] == "solve max-clique"
    assert payload["run"]["inputs"] == [path]


def test_solve_infeasible_exits_4(tmp_path):
    path = _write_graph(tmp_path / "g.txt", Graph.cycle(3))
    assert main(["solve", "smallest-k-edge-subgraph", "--in", path, "--k", "5"]) == 4


def test_solve_budget_exhaustion_exits_4(tmp_path):
    host = random_graph(50, 0.5, random.Random(1))
    hp = _write_graph(tmp_path / "host.txt", host)
    pp = _write_graph(tmp_path / "pat.txt", Graph.empty(13))
    argv = [
        "solve", "detect-pattern", "--in", hp, "--pattern", pp,
        "--induced", "--budget-ms", "60",
    ]
    assert main(argv) == 4


def test_solve_den_leq_k_value(tmp_path, capsys):
    path = _write_graph(tmp_path / "g.txt", Graph.complete(4))
    assert main(["solve", "den-leq-k", "--in", path, "--k", "4"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == "3/2"
    assert payload["value_float"] == 1.5


# -- reduce ----------------------------------------------------------------------------


def test_reduce_star_then_solve(tmp_path, capsys):
    path = _write_graph(tmp_path / "g.txt", Graph.cycle(5))
    inst, cert = tmp_path / "inst.json", tmp_path / "cert.json"
    argv = [
        "reduce", "skes-to-steiner-forest", "--in", path, "--k", "3",
        "--out-instance", str(inst), "--out-cert", str(cert),
    ]
    assert main(argv) == 0
    parsed = load_steiner(inst.read_text())
    assert parsed.k == 3
    cert_payload = json.loads(cert.read_text())
    assert cert_payload["data"]["center"] == 5
    assert cert_payload["run"]["subcommand"] == "reduce skes-to-steiner-forest"
    assert main(["solve", "steiner-k-forest", "--in", str(inst)]) == 0
    solved = json.loads(capsys.readouterr().out)
    assert solved["cost"] == "4"


def test_reduce_dks_via_skes_solution(tmp_path, capsys):
    path = _write_graph(tmp_path / "g.txt", Graph.complete(6))
    argv = [
        "reduce", "dks-via-skes", "--in", path, "--k", "3",
        "--solution", "0,1,2",
    ]
    assert main(argv) == 0
    payload = json.loads(capsys.readouterr().out)
    assert sorted(payload["solution"]) == [0, 1, 2]


# -- verify ----------------------------------------------------------------------------


def test_verify_lemma44_documented_invocation():
    argv = [
        "verify", "lemma44", "--kappa", "32", "--t", "2", "--ell", "1",
        "--trials", "50", "--seed", "1",
    ]
    assert main(argv) == 0


def test_verify_missing_lemma_parameter(capsys):
    argv = ["verify", "completeness", "--trials", "5", "--seed", "1"]
    assert main(argv) == 1
    assert "verify completeness requires --n" in capsys.readouterr().err


def test_verify_output_files(tmp_path):
    out_json, out_csv = tmp_path / "r.json", tmp_path / "r.csv"
    argv = [
        "verify", "averaging", "--n", "10", "--s-size", "8", "--k", "3",
        "--trials", "6", "--seed", "2",
        "--out-json", str(out_json), "--out-csv", str(out_csv),
    ]
    assert main(argv) == 0
    payload = json.loads(out_json.read_text())
    assert payload["lemma"] == "averaging"
    assert payload["run"]["subcommand"] == "verify averaging"
    lines = out_csv.read_text().splitlines()
    assert lines[0].startswith("# version:")
    assert lines[1].startswith("# run:")
    assert lines[2].split(",")[:2] == ["lemma", "verdict"]
    assert len(lines) == 3 + 6


def test_verify_threads_flag_does_not_change_bytes(tmp_path):
    outs = []
    for threads, name in ((1, "a.csv"), (3, "b.csv")):
        out = tmp_path / name
        argv = [
            "verify", "disperser", "--n", "30", "--ell", "2", "--N", "40",
            "--delta", "1/2", "--max-set-size", "3",
            "--trials", "8", "--seed", "5", "--threads", str(threads),
            "--out-csv", str(out),
        ]
        assert main(argv) == 0
        # strip the run line: it records the differing output path and threads
        outs.append(
            [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
        )
    assert outs[0] == outs[1]


def _doctored(verdict: str) -> TrialReport:
    return TrialReport(
        lemma="averaging",
        config={"trials": 1},
        trials=({"trial": 0, "success": False},),
        aggregates={"success_rate": 0.0},
        verdict=verdict,
    )


@pytest.mark.parametrize(
    "verdict,code", [(STATISTICAL_FAIL, 2), (INVARIANT_FAIL, 3)]
)
def test_verify_verdict_exit_codes(monkeypatch, verdict, code):
    monkeypatch.setattr(
        verify_mod, "verify_averaging_trials", lambda **kw: _doctored(verdict)
    )
    argv = [
        "verify", "averaging", "--n", "8", "--s-size", "6", "--k", "3",
        "--trials", "1", "--seed", "1",
    ]
    assert main(argv) == code


# -- params ----------------------------------------------------------------------------


def test_params_formula_scale(capsys):
    argv = ["params", "--n", "1048576", "--delta", "0.5", "--k", "20", "--C", "1"]
    assert main(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "ell = 400000000"
    assert lines[1] == "d = 2 (exact)"
    assert any(ln == "k_ell_at_most_n_pow_099delta = False" for ln in lines)


def test_params_exact_flags_hit_bit_cap_at_scale():
    argv = [
        "params", "--n", "1048576", "--delta", "0.5", "--k", "20",
        "--exact-side-conditions",
    ]
    assert main(argv) == 4


def test_params_exact_flags_small(capsys):
    # huge k keeps ell at 1 so the exact big-int check stays cheap
    argv = [
        "params", "--n", "2", "--delta", "1/2", "--k", "1000000000",
        "--exact-side-conditions",
    ]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "ell = 1" in out
    assert "exact:N_at_least_10k_pow = True" in out
    assert "exact:ell_at_least_k = False" in out


def test_params_conflicting_modes():
    argv = ["params", "--n", "16", "--delta", "1/2", "--k", "3", "--C", "1", "--g", "2"]
    assert main(argv) == 1


# -- report ----------------------------------------------------------------------------


def _run_averaging_csv(tmp_path, name: str, seed: int) -> str:
    out = tmp_path / name
    argv = [
        "verify", "averaging", "--n", "10", "--s-size", "8", "--k", "3",
        "--trials", "10", "--seed", str(seed), "--out-csv", str(out),
    ]
    assert main(argv) == 0
    return str(out)


def test_report_single_file_matches_run_verdict(tmp_path, capsys):
    path = _run_averaging_csv(tmp_path, "one.csv", seed=3)
    assert main(["report", path]) == 0
    summary = json.loads(capsys.readouterr().out)
    entry = summary["lemmas"]["averaging"]
    assert entry["verdict"] == "pass"
    assert entry["trials"] == 10
    assert entry["pooled_success_rate"] == entry["hits"] / 10


def test_report_pools_rate_as_weighted_mean(tmp_path, capsys):
    a = _run_averaging_csv(tmp_path, "a.csv", seed=3)
    b = _run_averaging_csv(tmp_path, "b.csv", seed=4)
    assert main(["report", a, b]) == 0
    summary = json.loads(capsys.readouterr().out)
    entry = summary["lemmas"]["averaging"]
    assert entry["trials"] == 20
    assert entry["pooled_success_rate"] == entry["hits"] / 20
    assert sorted(entry["files"]) == sorted([a, b])


def test_report_empty_input_is_usage_error(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# a comment, no rows\n")
    assert main(["report", str(empty)]) == 1


def test_report_missing_required_column(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("lemma,success\naveraging,True\n")
    assert main(["report", str(bad)]) == 1


def test_report_schema_mismatch_names_column(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    a.write_text("lemma,verdict,trial,success\nx,pass,0,True\n")
    b.write_text("lemma,verdict,trial,extra\nx,pass,0,7\n")
    assert main(["report", str(a), str(b)]) == 1
    err = capsys.readouterr().err
    assert "schema mismatch" in err
    assert "on column 'extra'" in err


def test_report_long_csv(tmp_path):
    path = _run_averaging_csv(tmp_path, "one.csv", seed=3)
    long_out = tmp_path / "long.csv"
    argv = [
        "report", path,
        "--out-summary", str(tmp_path / "s.json"), "--out-long", str(long_out),
    ]
    assert main(argv) == 0
    lines = [
        ln for ln in long_out.read_text().splitlines() if not ln.startswith("#")
    ]
    assert lines[0] == "lemma,param,trial,value"
    body = [ln.split(",") for ln in lines[1:]]
    assert all(row[0] == "averaging" and row[1] == "success" for row in body)
    assert len(body) == 10
