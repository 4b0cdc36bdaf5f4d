"""Command-line surface: exit codes, JSON shape, determinism."""

import json

from unramified.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_builtins_lists_required_names(capsys):
    code, out, _ = run(capsys, "builtins")
    assert code == 0
    for name in ("peyre6", "heisenberg3", "heisenberg5", "elem9", "elem27"):
        assert name in out


def test_analyze_peyre6_json(capsys):
    code, out, _ = run(capsys, "analyze", "--builtin", "peyre6", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["b0_dim"] == 0 and data["h3_dim"] == 1
    assert data["brauer_trivial"] and data["degree3_obstruction_nonzero"]
    assert data["s3_dec"]["text"] == ["u[1,3,5]"]
    assert data["verdict"] == ("unramified Brauer group trivial; "
                               "degree-3 unramified obstruction nonzero; "
                               "invariant field NOT rational")


def test_analyze_text_verdict_line(capsys):
    code, out, _ = run(capsys, "analyze", "--builtin", "peyre6")
    assert code == 0
    assert "invariant field NOT rational" in out
    assert "dim K^3 = 18" in out


def test_analyze_heisenberg(capsys):
    code, out, _ = run(capsys, "analyze", "--builtin", "heisenberg3", "--json")
    data = json.loads(out)
    assert code == 0 and data["b0_dim"] == 0 and data["h3_dim"] == 0


def test_analyze_bad_spec_file(tmp_path, capsys):
    bad = {"p": 3, "dimU": 3, "dimV": 1,
           "gamma": [{"i": 1, "j": 2, "v": [1]}, {"i": 1, "j": 3, "v": [1]},
                     {"i": 2, "j": 3, "v": [1]}, {"i": 2, "j": 2, "v": [1]}]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, _, err = run(capsys, "analyze", "--spec", str(path))
    assert code == 1
    assert "gamma term 4: i<j required" in err


def test_exactly_one_input_source_required(capsys):
    code, _, err = run(capsys, "analyze")
    assert code == 1
    code, _, err = run(capsys, "analyze", "--builtin", "peyre6",
                       "--spec", "x.json")
    assert code == 1


def test_unknown_builtin(capsys):
    code, _, err = run(capsys, "analyze", "--builtin", "nope")
    assert code == 1 and "unknown builtin" in err


def test_verify_group_heisenberg_exhaustive(capsys):
    code, out, _ = run(capsys, "verify-group", "--builtin", "heisenberg3")
    assert code == 0
    assert "associativity" in out and "FAIL" not in out


def test_verify_group_peyre6_sampled_and_seed_stamped(capsys):
    code, out, _ = run(capsys, "verify-group", "--builtin", "peyre6",
                       "--samples", "5000", "--seed", "11")
    assert code == 0
    assert "seed=11" in out


def test_verify_group_rejects_nonstrict_spec(tmp_path, capsys):
    # gamma = 0 with m = 1 fails strict validation: exit 1
    data = {"p": 3, "dimU": 2, "dimV": 1, "gamma": []}
    path = tmp_path / "degenerate.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "verify-group", "--spec", str(path))
    assert code == 1


def test_verify_lemmas_elem9_skips_df_and_reports_tau_gap(capsys):
    code, out, _ = run(capsys, "verify-lemmas", "--builtin", "elem9")
    assert "skipped: requires m >= 1" in out
    # the p = 3 tau agreement gap is reported honestly as a counterexample
    assert "FAIL  tau_agree" in out
    assert code == 2


def test_verify_lemmas_heisenberg5_all_pass(capsys):
    code, out, _ = run(capsys, "verify-lemmas", "--builtin", "heisenberg5")
    assert code == 0
    assert "FAIL" not in out


def test_oracle_cohomology_elem9(capsys):
    code, out, _ = run(capsys, "oracle", "cohomology", "--builtin", "elem9",
                       "--degree", "3", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["qz_orders"]["3"] == 27


def test_oracle_cohomology_guard(capsys):
    code, _, err = run(capsys, "oracle", "cohomology", "--builtin",
                       "heisenberg3", "--degree", "3")
    assert code == 3
    assert "allow_heavy" in err or "heavy" in err


def test_oracle_cohomology_explicit_modulus(capsys):
    code, out, _ = run(capsys, "oracle", "cohomology", "--builtin", "elem3",
                       "--degree", "2", "--modulus", "9", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["mod_orders_requested"]["2"] == 3


def test_oracle_cohomology_bad_modulus(capsys):
    code, _, err = run(capsys, "oracle", "cohomology", "--builtin", "elem3",
                       "--degree", "1", "--modulus", "10")
    assert code == 1


def test_oracle_decomposables_peyre6_degree2(capsys):
    code, out, _ = run(capsys, "oracle", "decomposables", "--builtin",
                       "peyre6", "--degree", "2")
    assert code == 0
    assert out.startswith("fast = brute = span{")


def test_oracle_decomposables_brute_guard(capsys):
    code, _, err = run(capsys, "oracle", "decomposables", "--builtin",
                       "peyre6", "--degree", "3", "--max-work", "1000")
    assert code == 3


def test_json_output_is_deterministic(capsys):
    a = run(capsys, "analyze", "--builtin", "peyre6", "--json", "--seed", "7")
    b = run(capsys, "analyze", "--builtin", "peyre6", "--json", "--seed", "7")
    assert a == b
    c = run(capsys, "verify-group", "--builtin", "peyre6", "--json",
            "--seed", "3", "--samples", "2000")
    d = run(capsys, "verify-group", "--builtin", "peyre6", "--json",
            "--seed", "3", "--samples", "2000")
    assert c == d


def test_report_json_round_trips_through_cli(capsys):
    from unramified.obstruction import report_from_json_dict, report_to_json_dict
    code, out, _ = run(capsys, "analyze", "--builtin", "peyre6", "--json",
                       "--seed", "0")
    data = json.loads(out)
    rep = report_from_json_dict(data)
    assert report_to_json_dict(rep, seed=0) == data


def test_guard_env_var_is_honored(monkeypatch, capsys):
    from unramified.cli import build_parser, parse_guard
    monkeypatch.setenv("UNRAMIFIED_GUARD", "12345/6.5")
    args = build_parser().parse_args(["analyze", "--builtin", "elem9"])
    assert parse_guard(args.guard) == (12345, 6.5)
    monkeypatch.delenv("UNRAMIFIED_GUARD")
    args = build_parser().parse_args(["analyze", "--builtin", "elem9"])
    gb, gs = parse_guard(args.guard)
    assert gb > 10 ** 8 and gs > 0


def test_parse_guard_formats():
    from unramified.cli import parse_guard
    assert parse_guard("2e8/600") == (200_000_000, 600.0)
    assert parse_guard("1000") == (1000, parse_guard(None)[1])
    assert parse_guard("/9") == (parse_guard(None)[0], 9.0)


def test_oracle_decomposables_peyre6_degree3_headline(capsys):
    code, out, _ = run(capsys, "oracle", "decomposables", "--builtin",
                       "peyre6", "--degree", "3")
    assert code == 0
    assert out.strip() == "fast = brute = span{u[1,3,5]}"


def test_oracle_cohomology_text_output(capsys):
    code, out, _ = run(capsys, "oracle", "cohomology", "--builtin", "elem3",
                       "--degree", "2")
    assert code == 0
    assert "|H^1(G, Q/Z)| = 3" in out
    assert "|H^2(G, Q/Z)| = 1" in out


def test_console_script_entry_point():
    import subprocess
    proc = subprocess.run(["unramified", "analyze", "--builtin",
                           "heisenberg3", "--json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    import json as _json
    assert _json.loads(proc.stdout)["h3_dim"] == 0
