import io
import json

import pytest
from hypothesis import given

from fnfm.cli import (ParseError, UnknownGenerator, WordSyntaxError, WrongAlphabet, format_endo, parse_endo,
                      parse_oracle, parse_word, render_plain, run)
from fnfm.endo import validate_and_classify
from helpers import A2, B2, SAMPLES, all_type_fixtures, w, words


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def sample(name):
    return str(SAMPLES / name)


def test_parse_word_examples():
    assert parse_word("a1 a1^-1", A2).is_identity()
    assert parse_word("1", A2).is_identity()
    assert parse_word("a2 a1^-1 a2", A2) == w(A2, 2, -1, 2)
    assert parse_word("a1^3 a2^-2", A2) == w(A2, 1, 1, 1, -2, -2)


def test_parse_word_errors():
    with pytest.raises(UnknownGenerator):
        parse_word("a1 a3", A2)
    with pytest.raises(WrongAlphabet):
        parse_word("a1 b2^-1", A2)
    with pytest.raises(WordSyntaxError) as exc:
        parse_word("a1  a2^x", A2)
    assert exc.value.column == 5


@given(words(A2, 10))
def test_word_round_trip(x):
    assert parse_word(str(x), A2) == x


def test_endo_round_trip():
    for e in all_type_fixtures().values():
        text = format_endo(e.spec)
        assert parse_endo(text) == e.spec
        assert format_endo(parse_endo(text)) == text


def test_endo_formats_agree():
    with open(sample("swap.json")) as fh:
        from_json = parse_endo(fh.read())
    assert parse_endo(format_endo(from_json)) == from_json
    assert validate_and_classify(from_json).etype.value == "VII"


def test_endo_errors():
    with pytest.raises(ParseError):
        parse_endo("n: 2\nm: 2\na1: a1 | b1\n")
    with pytest.raises(ParseError):
        parse_endo("n: 2\nm: 2\na1: a1 b1\na2: 1|1\nb1: 1|1\nb2: 1|1\n")
    with pytest.raises(ParseError):
        parse_endo('{"n": 2}')


def test_oracle_parsing():
    orc = parse_oracle("# basis\npsi: b2, b1 b2 b1^-1\nphi:\n", A2, B2)
    assert orc["psi"].words == (w(B2, 2), w(B2, 1, 2, -1))
    assert orc["phi"].words == ()
    with pytest.raises(ParseError):
        parse_oracle("chi: a1", A2, B2)


def test_classify_type_I():
    code, out, _ = cli("classify", sample("type1.endo"))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "type: I"
    for field in ("u: a1", "v: b1", "P: 2 1", "Q: 1 1", "R: -1 0", "S: 0 1"):
        assert field in lines


def test_fix_counterexample():
    code, out, _ = cli("fix", sample("type3_nonfg.endo"))
    assert code == 0
    assert "verdict: NOT finitely generated" in out.splitlines()
    assert "constraint: tau1(y) - tau2(y) = 0" in out


def test_whitehead_a_no():
    code, out, _ = cli("whitehead", "--variant", "a", "--source", "a1 | b1", "--target", "a1 a1 | b1")
    assert code == 0 and out.splitlines()[0] == "answer: No"


def test_exit_codes():
    assert cli("fix", sample("type4.endo"))[0] == 2
    assert cli("fix", sample("type4.endo"), "--oracle", sample("type4.oracle"))[0] == 0
    assert cli("per", sample("swap.json"))[0] == 0
    assert cli("dynamics", "uc", sample("type1.endo"))[0] == 0
    assert cli("dynamics", "iterate", sample("type1.endo"), "--point", "a1 | b1")[0] == 1
    assert cli("classify", sample("missing.endo"))[0] == 1
    assert cli("word", "reduce", "a1 x1")[0] == 1
    assert cli("whitehead", "--variant", "e", "--source", "a1 a2 a1^-1 a2^-1 | 1",
               "--target", "a1 a1 a2 a1^-1 a1^-1 a2^-1 | 1", "--bound", "2")[0] == 2
    assert cli("nonsense")[0] == 1
    code, _, err = cli("dynamics", "classify-boundary", sample("type4.endo"), "--point", "a2 a1 a1 a1 | b2 b1 b1 b1")
    assert code == 2 and not err


COMMANDS = [
    ("classify", "type1.endo"), ("fix", "type1.endo"), ("fix", "type3_nonfg.endo"), ("per", "type1.endo"),
    ("per", "swap.json"), ("fix", "type4.endo"),
]


def test_json_matches_plain():
    for cmd, name in COMMANDS:
        code1, plain, _ = cli(cmd, sample(name))
        code2, js, _ = cli("--json", cmd, sample(name))
        code3, js2, _ = cli(cmd, sample(name), "--json")
        assert code1 == code2 == code3 and js == js2
        report = json.loads(js)
        assert render_plain(report) + "\n" == plain
        if "verdict" in report:
            assert f"verdict: {report['verdict']}" in plain.splitlines()
            for g in report["generators"]:
                assert f"  - {g}" in plain.splitlines()


def test_output_is_deterministic():
    outs = {cli("per", sample("swap.json"))[1] for _ in range(3)}
    assert len(outs) == 1
    _, out, _ = cli("fix", sample("type6_aut.endo"), "--oracle", sample("type6_aut.oracle"))
    gens = [l[4:] for l in out.splitlines() if l.startswith("  - ")]
    assert gens == ["(1 | b1)", "(1 | b2)", "(a2 | 1)", "(a1 a2 a1^-1 | 1)"]


def test_dynamics_commands():
    code, out, _ = cli("dynamics", "iterate", sample("type4.endo"), "--point", "1 | b2 b1", "--steps", "2")
    assert code == 0 and "point: (a2 a1 a1 ... | b2 b1 b1 b1 b1 ...)" in out
    code, out, _ = cli("dynamics", "classify-boundary", sample("type6_aut.endo"), "--oracle",
                       sample("type6_aut.oracle"), "--point", "a1 a2 a2 a2 a2 a2 a2 a2 a2 a2 | b1", "--depth", "6")
    assert code == 0 and "classification: SingularAtDepth" in out


def test_word_commands():
    assert cli("word", "reduce", "a2 a1^-1 a1 a2")[1] == "word: a2 a2\nlength: 2\n"
    assert "exponent: 2" in cli("word", "root", "a1 a2 a1 a2")[1]
    assert "powers: all integers" in cli("word", "powers", "1")[1]
