import hashlib
import json
from pathlib import Path

import pytest

from centering.cli import main
from util import FIXTURE_NAMES, FIXTURES, fixture_path

GOLDEN = Path(__file__).resolve().parent / "golden"


def run_cli(capsys, *args):
    status = main(list(args))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_resolve_pretty_babar2(capsys):
    status, out, _ = run_cli(capsys, "resolve", fixture_path("babar2"),
                             "--model", "salience")
    assert status == 0
    assert "he → Baker (weak; PARA)" in out


def test_resolve_bfp_model(capsys):
    status, out, _ = run_cli(capsys, "resolve", fixture_path("babar2"),
                             "--model", "bfp")
    assert status == 0
    assert "s3m1 → Babar" in out


def test_compare_reports_single_divergence(capsys):
    status, out, _ = run_cli(capsys, "compare", fixture_path("babar2"))
    assert status == 0
    assert "1 divergence(s)" in out
    assert "salience=Baker" in out and "bfp=Babar" in out


def test_trace_jsonl_is_self_describing(capsys):
    status, out, _ = run_cli(capsys, "trace", fixture_path("glendora"),
                             "--format", "jsonl")
    assert status == 0
    records = [json.loads(line) for line in out.splitlines()]
    kinds = {r["type"] for r in records}
    assert kinds == {"unit", "pronoun"}
    units = [r for r in records if r["type"] == "unit"]
    assert [u["transition"] for u in units if u["unit"].startswith("g3")] == \
        ["CHAIN", "ESTABLISH", "CHAIN", "CHAIN", "NULL", "ESTABLISH"]


def test_stats_tsv(capsys):
    status, out, _ = run_cli(capsys, "stats", fixture_path("sutherland"),
                             "--format", "tsv")
    assert status == 0
    assert out.startswith("record\tgranularity\tcategory\tvalue\textra")
    assert "chi_square" in out


def test_validate_ok(capsys):
    status, out, _ = run_cli(capsys, "validate", fixture_path("babar1"))
    assert status == 0
    assert out.endswith("OK\n")


def test_validate_rejects_garbage(tmp_path, capsys):
    bad = tmp_path / "garbage.cda"
    bad.write_text("#DOC g\n#SENT s\n#CL c parent=- rel=matrix tense=zz\n",
                   encoding="utf-8")
    status, out, _ = run_cli(capsys, "validate", str(bad))
    assert status == 1
    assert "INVALID" in out and "line 3" in out


def test_missing_file_is_input_error(capsys):
    status, _, err = run_cli(capsys, "resolve", "no/such/file.cda")
    assert status == 1
    assert "error" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["resolve", fixture_path("babar1"), "--bogus"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "report.tsv"
    status, out, _ = run_cli(capsys, "resolve", fixture_path("babar1"),
                             "--format", "tsv", "--out", str(target))
    assert status == 0 and out == ""
    assert target.read_text(encoding="utf-8").startswith("doc\tunit")


def test_multiple_inputs_in_order(capsys):
    status, out, _ = run_cli(capsys, "resolve", fixture_path("babar1"),
                             fixture_path("babar2"))
    assert status == 0
    assert out.index("== babar1") < out.index("== babar2")


def test_strict_flag_propagates(tmp_path, capsys):
    loose = tmp_path / "loose.cda"
    loose.write_text("#DOC d\n#SENT s\n#CL c parent=- rel=matrix tense=t\n"
                     "M m1 exp=def gf=subj mood=happy\n", encoding="utf-8")
    status, _, _ = run_cli(capsys, "validate", str(loose))
    assert status == 0
    status, out, _ = run_cli(capsys, "validate", str(loose), "--strict")
    assert status == 1
    assert "unknown key" in out


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_golden_traces(capsys, name):
    status, out, _ = run_cli(capsys, "trace", fixture_path(name))
    assert status == 0
    golden = (GOLDEN / f"{name}.trace.txt").read_text(encoding="utf-8")
    assert out == golden


@pytest.mark.parametrize("command", [
    ("resolve",), ("resolve", "--model", "bfp"), ("trace",),
    ("trace", "--format", "jsonl"), ("compare", "--format", "tsv"),
    ("stats", "--format", "tsv"), ("validate",),
])
def test_byte_identical_across_runs(capsys, command):
    for name in FIXTURE_NAMES:
        args = [command[0], fixture_path(name), *command[1:]]
        status1, out1, _ = run_cli(capsys, *args)
        status2, out2, _ = run_cli(capsys, *args)
        assert status1 == status2 == 0
        assert out1 == out2


def test_stats_figures_deterministic(tmp_path, capsys):
    digests = []
    for sub in ("a", "b"):
        outdir = tmp_path / sub
        status, out, _ = run_cli(capsys, "stats", fixture_path("sutherland"),
                                 "--format", "tsv", "--figures", str(outdir))
        assert status == 0
        assert "figure\t" in out
        files = sorted(outdir.glob("*.png"))
        assert [f.name for f in files] == ["locality_sentence.png",
                                           "locality_utterance.png"]
        digests.append([hashlib.sha256(f.read_bytes()).hexdigest()
                        for f in files])
    assert digests[0] == digests[1]
