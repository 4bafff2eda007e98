import json
from pathlib import Path

from suppsets.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"
FIRST_REPEAT = str(DATA / "first_repeat.json")
ASCENT = str(DATA / "ascent_after_first.json")
PAIRS = str(DATA / "unordered_pairs.json")


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


class TestValidate:
    def test_ok(self, capsys):
        code, out, _ = run_cli(capsys, "validate", FIRST_REPEAT)
        assert code == 0 and out == "ok"

    def test_bad_automaton(self, capsys, tmp_path):
        doc = json.loads(Path(FIRST_REPEAT).read_text())
        doc["locations"]["elements"][0]["support"] = [0]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        code, _, _ = run_cli(capsys, "validate", str(bad))
        assert code == 2

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "validate", "no-such-file.json")
        assert code == 2 and "no-such-file" in err

    def test_json_error_list(self, capsys, tmp_path):
        bad = tmp_path / "broken.json"
        bad.write_text("{")
        code, out, _ = run_cli(capsys, "--format", "json", "validate", str(bad))
        assert code == 2
        assert json.loads(out)["errors"]


class TestRun:
    def test_accept(self, capsys):
        code, out, _ = run_cli(capsys, "run", FIRST_REPEAT, str(DATA / "word_repeat.txt"))
        assert (code, out) == (0, "accept")

    def test_reject(self, capsys):
        code, out, _ = run_cli(capsys, "run", FIRST_REPEAT, str(DATA / "word_norepeat.txt"))
        assert (code, out) == (1, "reject")

    def test_rational_word(self, capsys, tmp_path):
        w = tmp_path / "w.txt"
        w.write_text("1/2\n3/4\n")
        code, out, _ = run_cli(capsys, "run", ASCENT, str(w))
        assert (code, out) == (0, "accept")

    def test_bad_atom(self, capsys, tmp_path):
        w = tmp_path / "w.txt"
        w.write_text("abc\n")
        code, _, _ = run_cli(capsys, "run", FIRST_REPEAT, str(w))
        assert code == 2


class TestOrbits:
    def test_summary(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "json", "orbits", FIRST_REPEAT, "--depth", "3")
        assert code == 0
        assert json.loads(out)["per_location"] == {"q0": 1, "q1": 1, "qa": 1}


class TestLambda:
    def test_to_db(self, capsys):
        code, out, _ = run_cli(capsys, "lambda", "to-db", r"\v0. v0 v5")
        assert (code, out) == (0, r"\ #0 #6")

    def test_from_db(self, capsys):
        code, out, _ = run_cli(capsys, "lambda", "from-db", r"\ #0 #6")
        assert (code, out) == (0, r"\v0. v0 v5")

    def test_alpha_eq_true(self, capsys):
        code, out, _ = run_cli(capsys, "lambda", "alpha-eq", r"\v0. v0 v2", r"\v1. v1 v2")
        assert (code, out) == (0, "alpha-equivalent")

    def test_alpha_eq_false(self, capsys):
        code, out, _ = run_cli(capsys, "lambda", "alpha-eq", r"\v0. v1", r"\v1. v0")
        assert (code, out) == (1, "not alpha-equivalent")

    def test_syntax_error(self, capsys):
        code, _, err = run_cli(capsys, "lambda", "to-db", "(v0")
        assert code == 2 and "v0" in err


class TestQuot:
    def test_count_with_pool_3(self, capsys):
        code, out, _ = run_cli(capsys, "quot", "count", PAIRS, "--pool", "3")
        assert (code, out) == (0, "3")

    def test_orbits(self, capsys):
        code, out, _ = run_cli(capsys, "quot", "orbits", PAIRS, "--pool", "3")
        assert (code, out) == (0, "1")

    def test_eq(self, capsys):
        e1 = '{"pi": {"0": 0, "1": 1}, "base": "g"}'
        e2 = '{"pi": {"0": 1, "1": 0}, "base": "g"}'
        code, out, _ = run_cli(capsys, "quot", "eq", PAIRS, e1, e2)
        assert (code, out) == (0, "equal")

    def test_eq_distinct(self, capsys):
        e1 = '{"pi": {"0": 0, "1": 1}, "base": "g"}'
        e2 = '{"pi": {"0": 0, "1": 2}, "base": "g"}'
        code, out, _ = run_cli(capsys, "quot", "eq", PAIRS, e1, e2)
        assert (code, out) == (1, "distinct")

    def test_supp(self, capsys):
        e = '{"pi": {"0": 4, "1": 7}, "base": "g"}'
        code, out, _ = run_cli(capsys, "quot", "supp", PAIRS, e)
        assert (code, out) == (0, "4 7")

    def test_bad_element_json(self, capsys):
        code, _, _ = run_cli(capsys, "quot", "supp", PAIRS, "{nope")
        assert code == 2


class TestSelfcheck:
    def test_budget_zero_is_empty_and_ok(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "json", "selfcheck", "--budget", "0")
        assert code == 0
        doc = json.loads(out)
        assert doc["ok"] and doc["suites"] == []

    def test_seed_determinism(self, capsys):
        code1, out1, _ = run_cli(capsys, "--format", "json", "selfcheck", "--seed", "9")
        code2, out2, _ = run_cli(capsys, "--format", "json", "selfcheck", "--seed", "9")
        assert code1 == code2 == 0
        assert out1 == out2


class TestJsonRoundTrips:
    def test_emitted_json_reparses(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "json", "lambda", "from-db", r"\ #0 #6")
        doc = json.loads(out)
        from suppsets.binding import named_from_json, named_to_json

        t = named_from_json(doc["term"])
        assert named_to_json(t) == doc["term"]
