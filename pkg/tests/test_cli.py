import io
import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from kleingeom import cli, klein

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def schema():
    text = resources.files("kleingeom").joinpath("schema/report.schema.json").read_text()
    return json.loads(text)


def run(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    buf = io.StringIO()
    code = cli.main(list(argv) + ["--out", str(out)], stdout=buf)
    return code, out, buf.getvalue()


@pytest.mark.parametrize("argv,golden", [
    (["theorem1", "5", "1", "1"], "theorem1_p1_f5.json"),
    (["lemma1", "2", "1", "2"], "lemma1_p2_f2.json"),
])
def test_golden_reports(tmp_path, argv, golden):
    code, out, _ = run(tmp_path, *argv)
    assert code == 0
    assert out.read_text() == (GOLDEN / golden).read_text()


def test_theorem1_report(tmp_path, schema):
    code, out, text = run(tmp_path, "theorem1", "5", "1", "1")
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, schema)
    assert code == 0 and "PASS" in text
    assert doc["orders"]["normalizer"] == doc["orders"]["reference"] == 120
    assert doc["orders"]["conjugates"] == 6


def test_lemma1_report(tmp_path, schema):
    code, out, text = run(tmp_path, "lemma1", "2", "1", "2")
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, schema)
    assert "35/35" in text and doc["agreements"] == 35 and doc["disagreements"] == []


def test_s6_outer_report(tmp_path, schema):
    code, out, _ = run(tmp_path, "s6-outer")
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, schema)
    assert code == 0 and len(doc["table"]) == 720 and all(doc["flags"].values())


@pytest.mark.parametrize("argv", [
    ["field", "3", "2"], ["space", "2", "1", "2"], ["group", "2", "2", "1", "pgammal"],
    ["group", "3", "1", "2", "aff"], ["affine", "2", "1", "2"], ["lemma2", "5", "1"],
    ["lemma2", "2", "2"], ["collineations", "2", "1", "2"],
])
def test_reports_match_schema(tmp_path, schema, argv):
    code, out, _ = run(tmp_path, *argv)
    assert code == 0
    jsonschema.validate(json.loads(out.read_text()), schema)


def test_schema_rejects_broken_report(schema):
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"report": "theorem1", "version": 1, "passed": True}, schema)


def test_byte_stable(tmp_path):
    _, a, _ = run(tmp_path, "affine", "2", "2", "1", name="a.json")
    _, b, _ = run(tmp_path, "affine", "2", "2", "1", name="b.json")
    assert a.read_bytes() == b.read_bytes()


def test_timings_are_opt_in(tmp_path):
    _, out, _ = run(tmp_path, "lemma1", "5", "1", "1", "--timings")
    assert "duration_ms" in json.loads(out.read_text())


def test_sampled_seed_determinism(tmp_path):
    argv = ["theorem1", "2", "1", "2", "--strategy", "sampled", "--samples", "500"]
    _, a, _ = run(tmp_path, *argv, "--seed", "7", name="a.json")
    _, b, _ = run(tmp_path, *argv, "--seed", "7", name="b.json")
    _, c, _ = run(tmp_path, *argv, "--seed", "8", name="c.json")
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["sampling"] != json.loads(c.read_text())["sampling"]


@pytest.mark.parametrize("argv", [
    ["field", "2", "7"],                      # 128 > field cap
    ["field", "6", "1"],                      # not a prime
    ["space", "3", "1", "6"],                 # 1093 points > point cap
    ["theorem1", "2", "1", "3"],              # 15! > factorial cap
    ["theorem1", "5", "1", "1", "--max-factorial", "100"],
    ["group", "3", "1", "2", "pgl", "--max-matrices", "1000"],
])
def test_cap_violations_exit_2(argv, capsys):
    assert cli.main(argv, stdout=io.StringIO()) == 2
    assert "error" in capsys.readouterr().err


def test_bad_usage_exits_2():
    for argv in (["bogus"], ["theorem1", "5"], []):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv, stdout=io.StringIO())
        assert exc.value.code == 2


def test_failed_flag_exits_1(monkeypatch, tmp_path):
    real = klein.automorphism_group

    def broken(*args, **kwargs):
        rep = real(*args, **kwargs)
        rep.set_flag("normalizer_in_reference", False, (0, 1, 2, 3, 4, 5))
        return rep

    monkeypatch.setattr(klein, "automorphism_group", broken)
    code, out, text = run(tmp_path, "theorem1", "5", "1", "1")
    assert code == 1 and "FAIL" in text
    assert json.loads(out.read_text())["witnesses"]["normalizer_in_reference"] == list(range(6))


def test_excluded_case_exits_0(tmp_path):
    code, out, text = run(tmp_path, "affine", "2", "1", "1")
    assert code == 0 and "not asserted" in text
    assert json.loads(out.read_text())["asserted"] is False


def test_suite_plan_shapes():
    names = [n for n, _ in cli._suite_plan(False, True, 10)]
    assert "theorem1 P1(F9)" in names and "theorem1 P1(F8)" in names
    quick = [n for n, _ in cli._suite_plan(True, False, 10)]
    assert "theorem1 P1(F8)" not in quick and "theorem1 P1(F9)" not in quick
    parser = cli.build_parser()
    for _, argv in cli._suite_plan(False, True, 10):
        parser.parse_args(argv)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "kleingeom", "space", "2", "1", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "7" in proc.stdout
