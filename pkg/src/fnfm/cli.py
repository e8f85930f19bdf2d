"""Command-line front end.

Endomorphism files are line oriented::

    # comments start with '#'
    n: 2
    m: 2
    a1: a1 a1 | b1
    a2: a1 | b1
    b1: a1^-1 | 1
    b2: 1 | b2

Each generator line gives the image pair "x-word | y-word".  A file whose
first non-blank character is ``{`` is read as JSON instead, with keys n, m,
images_a and images_b (lists of [x-word, y-word]).  Oracle files list bases
of free-group fixed (or periodic) subgroups, one component per line::

    psi: b2, b1 b2 b1^-1

Exit status: 0 for decided answers, 2 for Unknown / conditional /
inconclusive results, 1 for input errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence

from . import dynamics, fixed, periodic, whitehead
from .endo import EndoError, EndoSpec, PairElement, ProductEndo, morphism_flags, validate_and_classify
from .freeword import AllIntegers, Alphabet, FreeWord, power_exponents, primitive_root

EXIT_OK, EXIT_INPUT, EXIT_UNDECIDED = 0, 1, 2


class ParseError(ValueError):
    pass


class UnknownGenerator(ParseError):
    pass


class WrongAlphabet(ParseError):
    pass


class WordSyntaxError(ParseError):
    def __init__(self, message: str, column: int):
        self.column = column
        super().__init__(f"{message} at column {column}")


_TOKEN = re.compile(r"([A-Za-z])(\d+)(?:\^(-?\d+))?$")


def parse_word(text: str, alphabet: Alphabet) -> FreeWord:
    """Parse "a1 a2^-1 a1" (or "1" for the identity) over ``alphabet``.

    Columns in error messages are 1-based.
    """
    letters: list[int] = []
    for m in re.finditer(r"\S+", text):
        tok, col = m.group(), m.start() + 1
        if tok == "1":
            continue
        t = _TOKEN.match(tok)
        if not t:
            raise WordSyntaxError(f"cannot read token {tok!r}", col)
        tag, idx, exp = t.group(1), int(t.group(2)), t.group(3)
        if tag != alphabet.tag:
            raise WrongAlphabet(f"generator {tok!r} at column {col} is not in the {alphabet.tag}-alphabet")
        if not 1 <= idx <= alphabet.rank:
            raise UnknownGenerator(f"generator {tag}{idx} at column {col} is outside rank {alphabet.rank}")
        k = 1 if exp is None else int(exp)
        letters.extend([idx if k > 0 else -idx] * abs(k))
    return FreeWord(alphabet, tuple(letters))


def format_word(w: FreeWord) -> str:
    return str(w)


def parse_pair(text: str, A: Alphabet, B: Alphabet) -> PairElement:
    if text.count("|") != 1:
        raise WordSyntaxError("expected 'x-word | y-word'", 1)
    left, right = text.split("|")
    try:
        y = parse_word(right, B)
    except WordSyntaxError as exc:
        raise WordSyntaxError(str(exc).rsplit(" at column", 1)[0], exc.column + len(left) + 1) from None
    return PairElement(parse_word(left, A), y)


def _check_rank(key: str, value: str) -> int:
    try:
        r = int(value)
    except ValueError:
        raise ParseError(f"{key} must be an integer, got {value!r}") from None
    if r < 1:
        raise ParseError(f"{key} must be positive")
    return r


def parse_endo(text: str) -> EndoSpec:
    if text.lstrip().startswith("{"):
        return _parse_endo_json(text)
    fields: dict[str, tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"line {lineno}: expected 'key: value'")
        key, value = (s.strip() for s in line.split(":", 1))
        if key in fields:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = (lineno, value)
    for key in ("n", "m"):
        if key not in fields:
            raise ParseError(f"missing '{key}:' line")
    n = _check_rank("n", fields.pop("n")[1])
    m = _check_rank("m", fields.pop("m")[1])
    A, B = Alphabet(n, "a"), Alphabet(m, "b")
    images = {}
    for key, (lineno, value) in fields.items():
        if not re.fullmatch(r"[ab]\d+", key) or not 1 <= int(key[1:]) <= (n if key[0] == "a" else m):
            raise ParseError(f"line {lineno}: unknown generator {key!r}")
        try:
            images[key] = parse_pair(value, A, B)
        except ParseError as exc:
            raise type(exc)(f"line {lineno}: {exc}") if not isinstance(exc, WordSyntaxError) \
                else WordSyntaxError(f"line {lineno}: {str(exc).rsplit(' at column', 1)[0]}",
                                     exc.column + len(key) + 2) from None
    missing = [f"a{i}" for i in range(1, n + 1) if f"a{i}" not in images] + \
              [f"b{j}" for j in range(1, m + 1) if f"b{j}" not in images]
    if missing:
        raise ParseError(f"missing images for {', '.join(missing)}")
    return EndoSpec(A, B, [images[f"a{i}"] for i in range(1, n + 1)],
                    [images[f"b{j}"] for j in range(1, m + 1)])


def _parse_endo_json(text: str) -> EndoSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    try:
        n, m = _check_rank("n", str(doc["n"])), _check_rank("m", str(doc["m"]))
        A, B = Alphabet(n, "a"), Alphabet(m, "b")
        ia = [PairElement(parse_word(x, A), parse_word(y, B)) for x, y in doc["images_a"]]
        ib = [PairElement(parse_word(x, A), parse_word(y, B)) for x, y in doc["images_b"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed endomorphism document: {exc}") from None
    try:
        return EndoSpec(A, B, ia, ib)
    except EndoError as exc:
        raise ParseError(str(exc)) from None


def format_endo(spec: EndoSpec) -> str:
    """Canonical text form; parse_endo(format_endo(s)) == s."""
    lines = [f"n: {spec.n}", f"m: {spec.m}"]
    lines += [f"a{i}: {g.x} | {g.y}" for i, g in enumerate(spec.images_a, 1)]
    lines += [f"b{j}: {g.x} | {g.y}" for j, g in enumerate(spec.images_b, 1)]
    return "\n".join(lines) + "\n"


def parse_oracle(text: str, A: Alphabet, B: Alphabet) -> dict[str, fixed.SubgroupBasisInput]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"line {lineno}: expected 'component: word, word, ...'")
        key, value = (s.strip() for s in line.split(":", 1))
        if key not in ("phi", "psi", "phipsi", "psiphi"):
            raise ParseError(f"line {lineno}: unknown component {key!r}")
        words = [w.strip() for w in value.split(",") if w.strip()]
        alpha = None
        for w in words:
            tag = w.lstrip()[:1]
            alpha = A if tag == "a" else B if tag == "b" else alpha
        if words and alpha is None:
            raise ParseError(f"line {lineno}: cannot tell which alphabet the words use")
        alpha = alpha or A
        try:
            out[key] = fixed.SubgroupBasisInput(alpha, tuple(parse_word(w, alpha) for w in words))
        except ParseError as exc:
            raise type(exc)(f"line {lineno}: {exc}") if not isinstance(exc, WordSyntaxError) \
                else WordSyntaxError(f"line {lineno}: {str(exc).rsplit(' at column', 1)[0]}", exc.column) from None
    return out


# --- rendering ---------------------------------------------------------------------

def _sorted_strs(items) -> list[str]:
    return [str(g) for g in sorted(items, key=lambda g: g.sort_key())]


def render_plain(report: dict) -> str:
    lines = []

    def emit(key, value, indent):
        pad = "  " * indent
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for k, v in value.items():
                emit(k, v, indent + 1)
        elif isinstance(value, list) and any(isinstance(v, (dict, list)) or isinstance(v, str) for v in value):
            lines.append(f"{pad}{key}:" + ("" if value else " (none)"))
            for v in value:
                if isinstance(v, dict):
                    lines.append(f"{pad}  -")
                    for k2, v2 in v.items():
                        emit(k2, v2, indent + 2)
                else:
                    lines.append(f"{pad}  - {v}")
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: " + (" ".join(str(v) for v in value) if value else "(none)"))
        elif isinstance(value, bool):
            lines.append(f"{pad}{key}: {'yes' if value else 'no'}")
        elif value is None:
            lines.append(f"{pad}{key}: -")
        else:
            lines.append(f"{pad}{key}: {value}")

    for k, v in report.items():
        emit(k, v, 0)
    return "\n".join(lines)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if v is None or isinstance(v, (bool, int, str)):
        return v
    return str(v)


def _emit(report: dict, as_json: bool, out) -> None:
    report = _jsonable(report)
    if as_json:
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write(render_plain(report) + "\n")


def classify_report(e: ProductEndo) -> dict:
    d = e.describe()
    rep = {"type": d.pop("type"), "swapped": d.pop("swapped")}
    rep.update(d)
    flags = morphism_flags(e)
    rep["injective"] = flags.injective
    rep["surjective"] = flags.surjective
    rep["automorphism"] = flags.automorphism
    if flags.aut_coset:
        rep["coset"] = flags.aut_coset
    return rep


def fix_report_dict(r: fixed.FixReport) -> dict:
    rep = {"type": str(r.etype), "verdict": str(r.verdict), "structure": r.structure_note,
           "generators": _sorted_strs(r.generators)}
    if r.witness:
        rep["witness"] = r.witness
    return rep


def per_report_dict(r: periodic.PerReport) -> dict:
    rep = {"type": str(r.etype), "verdict": str(r.verdict), "structure": r.structure_note,
           "period_bound": r.period_bound, "generators": _sorted_strs(r.generators),
           "periods": {f"period {k}": _sorted_strs(v) for k, v in r.per_period_data.items()}}
    if r.odd_period_points:
        rep["odd_period_points"] = _sorted_strs(r.odd_period_points)
    if r.witness:
        rep["witness"] = r.witness
    return rep


def whitehead_report(v: whitehead.WhVerdict) -> dict:
    rep = {"answer": str(v.answer), "path": v.path}
    if v.answer is whitehead.Answer.UNKNOWN:
        rep["bound"] = v.bound
    cert = v.certificate
    if isinstance(cert, ProductEndo):
        rep["certificate"] = {"type": str(cert.etype),
                              "images_a": [str(g) for g in cert.spec.images_a],
                              "images_b": [str(g) for g in cert.spec.images_b]}
    elif cert is not None:
        rep["certificate"] = [f"{cert.domain.tag}{i} -> {w}" for i, w in enumerate(cert.images, 1)]
    if "stages" in v.detail:
        rep["stages"] = [f"{name}: {ans}" for name, ans in v.detail["stages"]]
    for k, val in v.detail.items():
        if k != "stages":
            rep[k] = val
    return rep


# --- commands ----------------------------------------------------------------------

def _load_endo(path: str) -> ProductEndo:
    with open(path, encoding="utf-8") as fh:
        return validate_and_classify(parse_endo(fh.read()))


def _load_oracle(path: str | None, e: ProductEndo):
    if path is None:
        return None
    with open(path, encoding="utf-8") as fh:
        return parse_oracle(fh.read(), e.spec.A, e.spec.B)


def _infer_alphabet(text: str, tag: str | None, rank: int | None) -> Alphabet:
    toks = re.findall(r"([A-Za-z])(\d+)", text)
    if tag is None:
        tag = toks[0][0] if toks else "a"
    hi = max((int(i) for t, i in toks if t == tag), default=1)
    return Alphabet(rank if rank is not None else max(2, hi), tag)


def _ranks_for(args, *texts) -> tuple[Alphabet, Alphabet]:
    joined = " ".join(texts)
    na = max([int(i) for i in re.findall(r"a(\d+)", joined)] + [2])
    nb = max([int(i) for i in re.findall(r"b(\d+)", joined)] + [2])
    return Alphabet(args.n or na, "a"), Alphabet(args.m or nb, "b")


def cmd_classify(args, out) -> int:
    e = _load_endo(args.endo)
    _emit(classify_report(e), args.json, out)
    return EXIT_OK


def cmd_fix(args, out) -> int:
    e = _load_endo(args.endo)
    r = fixed.fixed_subgroup(e, _load_oracle(args.oracle, e))
    _emit(fix_report_dict(r), args.json, out)
    return EXIT_OK if r.verdict.decided else EXIT_UNDECIDED


def cmd_per(args, out) -> int:
    e = _load_endo(args.endo)
    r = periodic.periodic_subgroup(e, _load_oracle(args.oracle, e), limit=args.limit)
    _emit(per_report_dict(r), args.json, out)
    return EXIT_OK if r.verdict.decided else EXIT_UNDECIDED


def cmd_whitehead(args, out) -> int:
    A, B = _ranks_for(args, args.source, args.target)
    src, tgt = parse_pair(args.source, A, B), parse_pair(args.target, A, B)
    v = whitehead.whp_product(src, tgt, args.variant, args.bound)
    _emit(whitehead_report(v), args.json, out)
    return EXIT_UNDECIDED if v.answer is whitehead.Answer.UNKNOWN else EXIT_OK


def _point(args, e: ProductEndo) -> dynamics.TruncatedPoint:
    """The point is known to ``--point-depth`` letters (default: its longest
    component, which is then read as a truncated infinite word)."""
    g = parse_pair(args.point, e.spec.A, e.spec.B)
    depth = args.point_depth or max(len(g.x), len(g.y), 1)
    return dynamics.TruncatedPoint.of(g.x, g.y, depth)


def cmd_dynamics(args, out) -> int:
    e = _load_endo(args.endo)
    if args.action == "uc":
        r = dynamics.uniform_continuity(e)
        rep = {"type": str(e.etype), "uniformly_continuous": r.uniformly_continuous, "reason": r.reason.value}
        if r.which:
            rep["component"] = r.which
        _emit(rep, args.json, out)
        return EXIT_OK
    p = _point(args, e)
    if args.action == "iterate":
        orbit = dynamics.iterate_truncated(e, p, args.steps)
        rep = {"type": str(e.etype),
               "orbit": [{"step": i, "point": str(q), "depth": [q.x_depth, q.y_depth]} for i, q in enumerate(orbit)]}
        _emit(rep, args.json, out)
        return EXIT_OK
    r = dynamics.boundary_fixed_classify(e, p, args.depth, _load_oracle(args.oracle, e), k=args.k,
                                         budget=args.budget, probe_depth=args.probe_depth)
    w = r.witnesses
    rep = {"type": str(e.etype), "classification": r.classification, "depth": r.depth,
           "finite_fixed_point": w.get("finite_fixed_point"),
           "attractor_probe": _probe_summary(w.get("attractor_probe")),
           "repeller_probe": _probe_summary(w.get("repeller_probe"))}
    if "singularity" in w:
        rep["singularity"] = w["singularity"]
    _emit(rep, args.json, out)
    return EXIT_OK if r.conclusive else EXIT_UNDECIDED


def _probe_summary(probe):
    if probe is None or isinstance(probe, str):
        return probe
    done = [o for o in probe if o["steps"] is not None]
    text = f"{len(done)} of {len(probe)} perturbations returned"
    if len(done) < len(probe):
        text += f"; first failure from {probe[len(done)]['start']}"
    return text


def cmd_word(args, out) -> int:
    alpha = _infer_alphabet(args.word, args.tag, args.rank)
    w = parse_word(args.word, alpha)
    if args.action == "reduce":
        rep = {"word": str(w), "length": len(w)}
    elif args.action == "root":
        if w.is_identity():
            rep = {"word": "1", "root": "none (identity)"}
        else:
            r, k = primitive_root(w)
            rep = {"word": str(w), "root": str(r), "exponent": k}
    else:
        ks = power_exponents(w)
        rep = {"word": str(w), "powers": "all integers" if ks is AllIntegers else sorted(ks)}
    _emit(rep, args.json, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fnfm", description="Endomorphisms of products of two free groups.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")

    c = sub.add_parser("classify", help="validate and classify an endomorphism")
    c.add_argument("endo")
    common(c)
    c.set_defaults(func=cmd_classify)

    for name, func, what in (("fix", cmd_fix, "fixed"), ("per", cmd_per, "periodic")):
        c = sub.add_parser(name, help=f"{what} subgroup")
        c.add_argument("endo")
        c.add_argument("--oracle", help="file with bases of component subgroups")
        if name == "per":
            c.add_argument("--limit", type=int, default=periodic.DEFAULT_PERIOD_LIMIT,
                           help="iteration limit when checking component periods")
        common(c)
        c.set_defaults(func=func)

    c = sub.add_parser("whitehead", help="Whitehead problems in Fn x Fm")
    c.add_argument("--variant", choices=("a", "m", "e"), required=True)
    c.add_argument("--source", required=True, help='pair "x-word | y-word"')
    c.add_argument("--target", required=True, help='pair "x-word | y-word"')
    c.add_argument("--bound", type=int, default=whitehead.DEFAULT_BOUND)
    c.add_argument("-n", type=int, help="rank of the first factor (default: inferred, at least 2)")
    c.add_argument("-m", type=int, help="rank of the second factor (default: inferred, at least 2)")
    common(c)
    c.set_defaults(func=cmd_whitehead)

    c = sub.add_parser("dynamics", help="uniform continuity and boundary dynamics")
    c.add_argument("action", choices=("uc", "iterate", "classify-boundary"))
    c.add_argument("endo")
    c.add_argument("--point", help='truncated point "x-prefix | y-prefix"')
    c.add_argument("--point-depth", type=int, help="number of letters of the point that are known")
    c.add_argument("--depth", type=int, help="prefix length checked by classify-boundary (default: what the point allows)")
    c.add_argument("--steps", type=int, default=4)
    c.add_argument("--oracle")
    c.add_argument("--k", type=int, help="perturbation position for attractor probes")
    c.add_argument("--budget", type=int, default=dynamics.DEFAULT_BUDGET)
    c.add_argument("--probe-depth", type=int, default=dynamics.DEFAULT_PROBE_DEPTH)
    common(c)
    c.set_defaults(func=cmd_dynamics)

    c = sub.add_parser("word", help="free-group word utilities")
    c.add_argument("action", choices=("reduce", "root", "powers"))
    c.add_argument("word")
    c.add_argument("--tag", help="generator letter (default: inferred)")
    c.add_argument("--rank", type=int, help="alphabet rank (default: inferred)")
    common(c)
    c.set_defaults(func=cmd_word)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "dynamics" and args.action != "uc" and not args.point:
        err.write("error: --point is required for this action\n")
        return EXIT_INPUT
    try:
        return args.func(args, out)
    except (ParseError, EndoError, OSError, fixed.OracleMismatch, dynamics.NotUniformlyContinuous,
            dynamics.NotFixedAtDepth, periodic.PeriodBoundExceeded, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
