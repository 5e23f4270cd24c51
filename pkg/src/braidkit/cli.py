"""Command-line workbench: problem documents in, deterministic reports out.

A problem document is a single JSON object::

    {
      "field": "Q" | "GF(p)",
      "dimension": d,
      "labels": ["e", "h", "f"],                     (optional)
      "braiding": {"diagonal": [[q11, ...], ...]}    (d x d grid)
                | {"matrix": [[...], ...]},          (d^2 x d^2 grid)
      "bracket": {"kind": "trivial"}
               | {"kind": "lie_flip", "constants": {"i,j": {"k": s}}}
               | {"kind": "restricted_flip", "constants": ..., "pmap": [{"k": s}, ...]}
               | {"kind": "rank1_map", "pairs": [{"element": {"deg:lex": s},
                                                  "image": {"k": s}}]}
               | {"kind": "primitive_envelope"},
      "truncation": N,
      "headroom": H,                                 (optional, default 2)
      "margin": m                                    (optional, default 1)
    }

All scalars are exact string literals ("2", "-1", "3/4"); floating point
is never read or written.  Reports are JSON with sorted keys, so
repeated runs on the same document are byte-identical; timing goes to
stderr only.

Exit codes: 0 success, 1 expectation violated, 2 invalid input or
budget/stability error.
"""

import argparse
import json
import sys
import time

from .fields import Field, FieldError, RATIONALS, GF, is_prime
from .braided import BraidedSpace, BraidingError, qybe_witness
from .tower import (
    combinatorial_rank,
    free_presentation,
    nichols_dims_symmetrizer,
    nichols_dims_tower,
    primitives_of_degree,
)
from .enveloping import (
    BracketSpec,
    Envelope,
    EnvelopingError,
    HeadroomInstability,
    coradical_filtration,
    cosymmetric_check,
    envelope_of_primitives,
    pbw_basis,
    pbw_check,
    relations_from_bracket,
    teopbw_crosscheck,
    tower_envelope,
)
from .corpus import CORPUS

SUBCOMMANDS = (
    "qybe", "nichols", "rank", "primitives", "envelope", "pbw",
    "pbw-basis", "corad", "cosym", "crosscheck", "corpus",
)


class SpecError(ValueError):
    pass


def parse_field(descriptor: str) -> Field:
    text = descriptor.strip()
    if text == "Q":
        return RATIONALS
    for prefix, suffix in (("GF(", ")"), ("GF:", "")):
        if text.startswith(prefix) and text.endswith(suffix):
            body = text[len(prefix):len(text) - len(suffix) or None]
            try:
                p = int(body)
            except ValueError:
                raise SpecError(f"bad field descriptor {descriptor!r}")
            if not is_prime(p):
                raise SpecError(f"GF modulus {p} is not prime")
            return GF(p)
    raise SpecError(f"bad field descriptor {descriptor!r} (want \"Q\" or \"GF(p)\")")


def _parse_grid(field: Field, grid, nrows, ncols, what):
    if not isinstance(grid, list) or len(grid) != nrows:
        raise SpecError(f"{what} must be a {nrows}x{ncols} grid")
    out = []
    for row in grid:
        if not isinstance(row, list) or len(row) != ncols:
            raise SpecError(f"{what} must be a {nrows}x{ncols} grid")
        try:
            out.append([field.parse(str(s)) for s in row])
        except (FieldError, ValueError) as exc:
            raise SpecError(f"{what}: {exc}")
    return out


def _parse_scalar_map(field: Field, obj, what):
    if not isinstance(obj, dict):
        raise SpecError(f"{what} must be an object of scalar literals")
    out = {}
    for key, val in obj.items():
        try:
            out[key] = field.parse(str(val))
        except (FieldError, ValueError) as exc:
            raise SpecError(f"{what}[{key}]: {exc}")
    return out


def _int_keys(mapping, what):
    out = {}
    for key, val in mapping.items():
        try:
            out[int(key)] = val
        except ValueError:
            raise SpecError(f"{what}: key {key!r} is not a letter index")
    return out


def _parse_bracket(field: Field, dim: int, obj) -> BracketSpec | None:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SpecError("bracket must be an object with a \"kind\"")
    kind = obj["kind"]
    if kind == "trivial":
        return BracketSpec.trivial()
    if kind == "primitive_envelope":
        return None  # handled by envelope_of_primitives
    if kind == "lie_flip" or kind == "restricted_flip":
        constants = {}
        for key, val in obj.get("constants", {}).items():
            try:
                i, j = (int(t) for t in key.split(","))
            except ValueError:
                raise SpecError(f"bracket constant key {key!r} is not \"i,j\"")
            if not (0 <= i < j < dim):
                raise SpecError(f"bracket constant key {key!r} needs 0 <= i < j < d")
            constants[(i, j)] = _int_keys(
                _parse_scalar_map(field, val, f"constants[{key}]"), "constants")
        if kind == "lie_flip":
            return BracketSpec.lie_flip(constants)
        pmap_doc = obj.get("pmap")
        if not isinstance(pmap_doc, list) or len(pmap_doc) != dim:
            raise SpecError("restricted_flip needs a pmap entry per basis letter")
        pmap = [
            _int_keys(_parse_scalar_map(field, entry, f"pmap[{i}]"), "pmap")
            for i, entry in enumerate(pmap_doc)
        ]
        return BracketSpec.restricted_flip(constants, pmap)
    if kind == "rank1_map":
        pairs = []
        for idx, entry in enumerate(obj.get("pairs", [])):
            if not isinstance(entry, dict) or "element" not in entry:
                raise SpecError(f"pairs[{idx}] needs \"element\" and \"image\"")
            element = {}
            for key, val in _parse_scalar_map(
                    field, entry["element"], f"pairs[{idx}].element").items():
                try:
                    deg, lex = (int(t) for t in key.split(":"))
                except ValueError:
                    raise SpecError(f"element key {key!r} is not \"degree:lex\"")
                element[(deg, lex)] = val
            image = _int_keys(
                _parse_scalar_map(field, entry.get("image", {}), f"pairs[{idx}].image"),
                "image")
            pairs.append((element, image))
        return BracketSpec.rank1_map(pairs)
    raise SpecError(f"unknown bracket kind {kind!r}")


class ProblemSpec:
    __slots__ = ("doc", "field", "space", "bracket", "bracket_kind", "N", "H", "margin")

    def __init__(self, doc, field, space, bracket, bracket_kind, N, H, margin):
        self.doc = doc
        self.field = field
        self.space = space
        self.bracket = bracket
        self.bracket_kind = bracket_kind
        self.N = N
        self.H = H
        self.margin = margin


def parse_spec(doc: dict) -> ProblemSpec:
    if not isinstance(doc, dict):
        raise SpecError("problem document must be a JSON object")
    for key in ("field", "dimension", "braiding", "truncation"):
        if key not in doc:
            raise SpecError(f"missing required key {key!r}")
    field = parse_field(str(doc["field"]))
    dim = doc["dimension"]
    if not isinstance(dim, int) or dim < 1:
        raise SpecError("dimension must be a positive integer")
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != dim:
            raise SpecError("labels must list one name per basis letter")
        labels = [str(s) for s in labels]
    braiding = doc["braiding"]
    if not isinstance(braiding, dict) or len(braiding) != 1:
        raise SpecError("braiding must be {\"diagonal\": grid} or {\"matrix\": grid}")
    try:
        if "diagonal" in braiding:
            grid = _parse_grid(field, braiding["diagonal"], dim, dim, "diagonal grid")
            space = BraidedSpace.diagonal(field, grid, labels=labels)
        elif "matrix" in braiding:
            grid = _parse_grid(field, braiding["matrix"], dim * dim, dim * dim,
                               "braiding matrix")
            space = BraidedSpace.from_matrix(field, dim, grid, labels=labels)
        else:
            raise SpecError("braiding must be {\"diagonal\": grid} or {\"matrix\": grid}")
    except BraidingError as exc:
        raise SpecError(str(exc))
    bracket_doc = doc.get("bracket", {"kind": "trivial"})
    bracket = _parse_bracket(field, dim, bracket_doc)
    bracket_kind = bracket_doc["kind"]
    if bracket is not None:
        try:
            bracket.validate(space)
        except EnvelopingError as exc:
            raise SpecError(str(exc))
    N = doc["truncation"]
    H = doc.get("headroom", 2)
    margin = doc.get("margin", 1)
    for name, val in (("truncation", N), ("headroom", H), ("margin", margin)):
        if not isinstance(val, int) or val < 0:
            raise SpecError(f"{name} must be a non-negative integer")
    return ProblemSpec(doc, field, space, bracket, bracket_kind, N, H, margin)


def _raw_braiding(doc: dict, field: Field, dim: int):
    """Pair action straight from the document, without the QYBE check."""
    braiding = doc["braiding"]
    action = {}
    if "diagonal" in braiding:
        grid = _parse_grid(field, braiding["diagonal"], dim, dim, "diagonal grid")
        for i in range(dim):
            for j in range(dim):
                if grid[i][j]:
                    action[(i, j)] = {(j, i): grid[i][j]}
    else:
        grid = _parse_grid(field, braiding["matrix"], dim * dim, dim * dim,
                           "braiding matrix")
        for i in range(dim):
            for j in range(dim):
                row = grid[i * dim + j]
                img = {}
                for k in range(dim):
                    for l in range(dim):
                        if row[k * dim + l]:
                            img[(k, l)] = row[k * dim + l]
                action[(i, j)] = img
    return action


def build_envelope(spec: ProblemSpec) -> Envelope:
    if spec.bracket_kind == "primitive_envelope":
        return envelope_of_primitives(spec.space, spec.N)
    if spec.bracket_kind == "trivial":
        # one-shot presentations of the trivial bracket only reach the
        # first tower stage when the rank exceeds 1; drive the tower
        env, _ = tower_envelope(spec.space, spec.bracket, spec.N, H=spec.H)
        return env
    rels = relations_from_bracket(spec.space, spec.bracket, spec.N)
    return Envelope.from_relations(spec.space, rels, spec.N, H=spec.H)


# -- report helpers ------------------------------------------------------

def _word_str(space: BraidedSpace, word: tuple) -> str:
    return " ".join(space.labels[a] for a in word) if word else "1"


def _spec_echo(spec: ProblemSpec) -> dict:
    return {
        "field": str(spec.doc["field"]),
        "dimension": spec.space.dim,
        "bracket": spec.bracket_kind,
        "truncation": spec.N,
        "headroom": spec.H,
        "margin": spec.margin,
    }


def run(subcommand: str, spec: ProblemSpec) -> dict:
    space = spec.space
    report = {"subcommand": subcommand, "spec": _spec_echo(spec)}
    if subcommand == "qybe":
        report["qybe"] = True
        report["invertible"] = True
        return report
    if subcommand == "nichols":
        tower = nichols_dims_tower(space, spec.N)
        sym = nichols_dims_symmetrizer(space, spec.N)
        report["nichols"] = {"tower": tower, "symmetrizer": sym,
                             "agree": tower == sym}
        return report
    if subcommand == "rank":
        rank, trace = combinatorial_rank(space, spec.N)
        report["rank"] = {"rank": rank, "certified_degree": spec.N,
                          "stage_dims": trace}
        return report
    if subcommand == "primitives":
        pres = free_presentation(space, spec.N)
        dims = [0, space.dim]
        for n in range(2, spec.N + 1):
            sub = primitives_of_degree(pres, n)
            dims.append(sub.dim)
        report["primitives"] = {"dims_by_degree": dims}
        return report
    env = build_envelope(spec)
    if subcommand == "envelope":
        graded = env.graded_dims()
        out = {"graded_dims": graded, "filtration_dims": env.u_dims(),
               "stable": env.stable}
        if graded[-1] == 0:
            out["total_dim"] = sum(graded)
        report["envelope"] = out
        return report
    if subcommand == "pbw":
        pb = pbw_check(env)
        report["pbw"] = {
            "pbw_type": pb["pbw_type"],
            "omega_exists": pb["omega_exists"],
            "graded_dims": pb["graded_dims"],
            "nichols_dims": pb["nichols_dims"],
        }
        if pb["witness"] is not None:
            report["pbw"]["witness_degree"] = pb["witness"][0]
        return report
    if subcommand == "pbw-basis":
        words = pbw_basis(env)
        report["pbw-basis"] = {
            f"degree_{n}": [_word_str(env.gen_space, w) for w in words[n]]
            for n in range(len(words))
        }
        return report
    corad = coradical_filtration(env, margin=spec.margin)
    if subcommand == "corad":
        report["corad"] = {
            "level_dims": [lv.dim for lv in corad.levels],
            "validity": corad.validity,
            "primitive_dim": corad.p_space.dim,
            "primitive_weights": list(corad.p_space.weights),
        }
        return report
    if subcommand == "cosym":
        verdict, witness = cosymmetric_check(env, corad)
        out = {"cosymmetric": verdict}
        if witness is not None:
            out["witness_level"] = witness[0]
        report["cosym"] = out
        return report
    if subcommand == "crosscheck":
        rep = teopbw_crosscheck(env, margin=spec.margin)
        report["crosscheck"] = {
            "pbw_type": rep.pbw_type,
            "strictly_generated": rep.strictly_generated,
            "cosymmetric": rep.cosymmetric,
            "lifting_ok": rep.lifting_ok,
            "graded_dims": rep.graded_dims,
            "nichols_dims": rep.nichols_dims,
        }
        return report
    raise SpecError(f"unknown subcommand {subcommand!r}")


def check_expect(expected, actual, path="") -> list[str]:
    """Recursive subset comparison: every expected leaf must match."""
    problems = []
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            problems.append(f"{path or '.'}: expected an object")
            return problems
        for key, val in expected.items():
            if key not in actual:
                problems.append(f"{path}/{key}: missing")
            else:
                problems.extend(check_expect(val, actual[key], f"{path}/{key}"))
    elif expected != actual:
        problems.append(f"{path or '.'}: expected {expected!r}, got {actual!r}")
    return problems


def run_corpus() -> tuple[dict, list[str]]:
    """Run every built-in entry against its embedded expectations."""
    report = {"subcommand": "corpus", "entries": {}}
    problems: list[str] = []
    for name in sorted(CORPUS):
        entry = CORPUS[name]
        spec = parse_spec(entry["spec"])
        results = {}
        for sub, expected in entry["expect"].items():
            actual = run(sub, spec)[sub]
            results[sub] = actual
            problems.extend(check_expect(expected, actual, f"{name}/{sub}"))
        report["entries"][name] = results
    report["drift"] = problems
    report["ok"] = not problems
    return report, problems


def render_table(report: dict, out) -> None:
    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for key in sorted(obj):
                val = obj[key]
                if isinstance(val, (dict, list)) and val and not _is_flat(val):
                    print(f"{pad}{key}:", file=out)
                    walk(val, indent + 1)
                else:
                    print(f"{pad}{key}: {_flat(val)}", file=out)
        elif isinstance(obj, list):
            for item in obj:
                print(f"{pad}- {_flat(item)}", file=out)

    def _is_flat(val):
        if isinstance(val, list):
            return all(not isinstance(x, (dict, list)) for x in val)
        return False

    def _flat(val):
        if isinstance(val, list):
            return "(" + ", ".join(str(x) for x in val) + ")"
        return val

    walk(report, 0)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="braidkit",
        description="Braided-algebra workbench: Nichols towers, enveloping "
                    "algebras, PBW bases, and coradical filtrations over "
                    "exact fields.")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--spec", help="problem document (JSON file, or - for stdin)")
    parser.add_argument("--corpus-entry", help="use a built-in corpus entry as the spec")
    parser.add_argument("--degree", type=int, help="override the truncation degree N")
    parser.add_argument("--headroom", type=int, help="override the headroom H")
    parser.add_argument("--field", help="override the field (Q or GF:p)")
    parser.add_argument("--expect", help="JSON file of expected values (subset match)")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--table", action="store_true", help="human-readable output")
    args = parser.parse_args(argv)

    started = time.monotonic()
    try:
        if args.subcommand == "corpus":
            report, problems = run_corpus()
        else:
            if args.corpus_entry:
                if args.corpus_entry not in CORPUS:
                    raise SpecError(f"no corpus entry named {args.corpus_entry!r}; "
                                    f"choose from {', '.join(sorted(CORPUS))}")
                doc = dict(CORPUS[args.corpus_entry]["spec"])
            elif args.spec:
                text = sys.stdin.read() if args.spec == "-" else open(args.spec).read()
                try:
                    doc = json.loads(text)
                except json.JSONDecodeError as exc:
                    raise SpecError(f"spec is not valid JSON: {exc}")
            else:
                raise SpecError("provide --spec FILE or --corpus-entry NAME")
            if args.field:
                doc["field"] = args.field.replace("GF:", "GF(") + (
                    ")" if args.field.startswith("GF:") else "")
            if args.degree is not None:
                doc["truncation"] = args.degree
            if args.headroom is not None:
                doc["headroom"] = args.headroom
            if args.subcommand == "qybe":
                # report the violating basis triple instead of a bare error
                field = parse_field(str(doc.get("field", "Q")))
                dim = doc.get("dimension")
                if not isinstance(dim, int) or dim < 1:
                    raise SpecError("dimension must be a positive integer")
                action = _raw_braiding(doc, field, dim)
                witness = qybe_witness(field, dim, action)
                if witness is not None:
                    print(
                        "error: braiding fails the quantum Yang-Baxter equation "
                        f"c1 c2 c1 = c2 c1 c2 on basis triple {witness}",
                        file=sys.stderr)
                    return 2
            spec = parse_spec(doc)
            report = run(args.subcommand, spec)
            problems = []
            if args.expect:
                expected = json.loads(open(args.expect).read())
                problems = check_expect(expected, report)
    except (SpecError, FieldError, BraidingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HeadroomInstability as exc:
        print(f"error: {exc} (hint: raise --headroom)", file=sys.stderr)
        return 2
    except EnvelopingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    elapsed = time.monotonic() - started
    if args.table:
        render_table(report, sys.stdout)
    else:
        json.dump(report, sys.stdout, sort_keys=True, indent=2, default=str)
        print()
    print(f"elapsed: {elapsed:.2f}s", file=sys.stderr)
    if problems:
        for line in problems:
            print(f"expectation violated: {line}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
