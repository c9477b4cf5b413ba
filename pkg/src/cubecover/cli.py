"""``cubecover`` command line.

Exit status: 0 on success, 1 when the mathematics says no (an obstruction, a
failed certificate or verification, a bounded search that gave up), 2 on bad
input (unparsable or structurally invalid files, unknown commands).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import fixtures as FX
from . import perm as P
from . import serialize as S
from .complex import CubeComplex, assign_links, check_assignment, check_npc
from .cover import (
    CoverMap,
    NotFound,
    VoltageAssignment,
    compose_chain,
    davis_quotient,
    search_trivializing_cover,
    verify_cover,
    voltage_cover,
)
from .deltacat import (
    DeltaCategory,
    PreDeltaCategory,
    build_pre_delta,
    extend_to_delta,
    verify_delta,
    verify_pre_delta,
)
from .errors import CubeCoverError, ParseError, UnknownCommand, ValidationError
from .holonomy import global_holonomy, kernel_cover
from .hyperplane import certify_all
from .kneser import KneserComplex, build_kneser
from .leighton import LColoring, build_orbicover, common_cover, fiber_product, orbicover_pipeline, verify_lcoloring

OK, FAIL, BAD_INPUT = 0, 1, 2


# ---------------------------------------------------------------- helpers


def _say(*lines) -> None:
    for line in lines:
        print(line)


def load_complex(source: str) -> CubeComplex:
    """A complex file, or ``fixture:NAME`` for a built-in example."""
    if source.startswith("fixture:"):
        name = source.split(":", 1)[1]
        if name not in FX.FIXTURES:
            raise ParseError(f"unknown fixture {name!r}; choose from {', '.join(sorted(FX.FIXTURES))}")
        return FX.FIXTURES[name]()
    return S.read(source, "complex")


def load_kneser(source: str) -> KneserComplex:
    """A kneser file, or ``kN_M`` for ``K_N`` on ``{1..M}``."""
    if not Path(source).exists():
        m = re.fullmatch(r"k(\d+)_(\d+)", Path(source).stem)
        if m:
            return build_kneser(int(m.group(2)), int(m.group(1)))
    return S.read(source, "kneser")


def _parse_choice(text: str) -> tuple[int, tuple[int, ...]]:
    try:
        h, perm = text.split(":")
        return int(h), tuple(int(a) for a in perm.split(","))
    except ValueError:
        raise ParseError(f"--choice expects H:P0,P1,..., got {text!r}") from None


def _choices(args) -> dict[int, tuple[int, ...]] | None:
    if not getattr(args, "choice", None):
        return None
    return dict(_parse_choice(c) for c in args.choice)


def _write(path, obj) -> None:
    if path:
        S.write(path, obj)
        _say(f"wrote {path}")


def to_dot(X: CubeComplex, colors: np.ndarray | None = None, L: KneserComplex | None = None) -> str:
    lines = ["graph cubecover {"]
    for v in range(X.n_vertices):
        lines.append(f"  {v};")
    for e in X.undirected.tolist():
        attr = ""
        if colors is not None:
            lab = L.label(int(colors[e])) if L is not None else int(colors[e])
            attr = f' [label="{lab}", colorscheme=set312, color={int(colors[e]) % 12 + 1}]'
        lines.append(f"  {int(X.src[e])} -- {int(X.dst[e])}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _emit_dot(args, X: CubeComplex, colors=None, L=None) -> None:
    if getattr(args, "emit_dot", None):
        Path(args.emit_dot).write_text(to_dot(X, colors, L), encoding="utf-8")
        _say(f"wrote {args.emit_dot}")


def _status(report: list[str]) -> int:
    _say(*report)
    _say("ok" if not report else f"{len(report)} violation(s)")
    return OK if not report else FAIL


# ---------------------------------------------------------------- kneser


def cmd_kneser_gen(args) -> int:
    delta = int(args.delta) if args.delta.isdigit() else tuple(args.delta.split(","))
    L = build_kneser(delta, args.n)
    _say(f"K_{args.n} on {L.size} labels: {L.num_vertices} vertices, {len(L.edges)} edges, dimension {L.dimension}")
    _write(args.output, L)
    if args.emit_dot:
        X = CubeComplex(L.num_vertices, *_graph_arrays(L))
        Path(args.emit_dot).write_text(to_dot(X), encoding="utf-8")
        _say(f"wrote {args.emit_dot}")
    return OK


def _graph_arrays(L: KneserComplex):
    src, dst, rev = [], [], []
    for i, (u, v) in enumerate(L.edges):
        src += [u, v]
        dst += [v, u]
        rev += [2 * i + 1, 2 * i]
    return np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64), np.array(rev, dtype=np.int64)


# ---------------------------------------------------------------- complex


def cmd_complex_check(args) -> int:
    X = load_complex(args.input)
    _say(f"cells: {X.n_vertices} 0-cubes, {X.n_edges // 2} 1-cubes, {X.n_squares} squares, {X.n_cubes} 3-cubes")
    report = check_npc(X)
    if args.L and not report:
        L = load_kneser(args.L)
        A = assign_links(X, L)
        report = check_assignment(X, A)
    _emit_dot(args, X)
    return _status(report)


def cmd_complex_gen(args) -> int:
    X = load_complex(f"fixture:{args.name}")
    if args.cover_degree:
        rng = np.random.default_rng(args.seed)
        X = FX.random_graph_cover(X, args.cover_degree, rng).total
    _say(f"{args.name}: {X.cell_counts()}")
    _write(args.output, X)
    _emit_dot(args, X)
    return OK


# ---------------------------------------------------------------- hyperplanes


def cmd_hyperplanes_certify(args) -> int:
    X = load_complex(args.input)
    certs = certify_all(X)
    report = [line for c in certs for line in c.lines()]
    _say(f"{len(certs)} hyperplane(s)")
    return _status(report)


# ---------------------------------------------------------------- delta


def cmd_delta_build(args) -> int:
    X = load_complex(args.input)
    A = assign_links(X, load_kneser(args.L))
    pre = build_pre_delta(X, A)
    report = verify_pre_delta(X, pre)
    _write(args.output, pre)
    return _status(report)


def cmd_delta_extend(args) -> int:
    pre = S.read(args.input, "delta")
    if not isinstance(pre, PreDeltaCategory):
        raise ParseError(f"{args.input}: expected a partial (pre) category")
    dc = extend_to_delta(pre.complex, pre, _choices(args))
    report = verify_delta(pre.complex, dc)
    _write(args.output, dc)
    return _status(report)


def cmd_delta_verify(args) -> int:
    dc = S.read(args.input, "delta")
    if isinstance(dc, PreDeltaCategory):
        return _status(verify_pre_delta(dc.complex, dc))
    return _status(verify_delta(dc.complex, dc))


# ---------------------------------------------------------------- holonomy


def _total_delta(path) -> DeltaCategory:
    dc = S.read(path, "delta")
    if not isinstance(dc, DeltaCategory):
        raise ParseError(f"{path}: expected a total category (run `delta extend` first)")
    return dc


def cmd_holonomy_compute(args) -> int:
    dc = _total_delta(args.input)
    hol = global_holonomy(dc.complex, dc, args.basepoint)
    _say(f"holonomy image at 0-cube {args.basepoint}: order {len(hol.image)}")
    for e in hol.loop_edges.tolist():
        g = tuple(int(a) for a in hol.gains[e])
        if g != P.identity(len(g)):
            _say(f"CELL edge/{e}: loop gain {list(g)}")
    _say("flat" if hol.trivial else "not flat")
    return OK


def cmd_holonomy_flatten(args) -> int:
    dc = _total_delta(args.input)
    f, lifted = kernel_cover(dc.complex, dc, args.basepoint)
    report = verify_cover(f)
    flat = global_holonomy(f.total, lifted).trivial
    if not flat:
        report.append("CELL complex/0: lifted category is not flat")
    _say(f"kernel cover of degree {f.degree}")
    _write(args.output, f)
    _write(args.delta_out, lifted)
    return _status(report)


# ---------------------------------------------------------------- cover


def cmd_cover_voltage(args) -> int:
    X = load_complex(args.input)
    raw = json.loads(Path(args.gains).read_text(encoding="utf-8"))
    gains = {int(e): tuple(int(a) for a in p) for e, p in raw.items()}
    f = voltage_cover(X, VoltageAssignment.from_dict(X, args.degree, gains))
    _say(f"voltage cover of degree {f.degree}: {f.total.cell_counts()}")
    _write(args.output, f)
    _emit_dot(args, f.total)
    return _status(verify_cover(f))


def cmd_cover_davis(args) -> int:
    L = load_kneser(args.L)
    if args.images:
        images = [tuple(p) for p in json.loads(Path(args.images).read_text(encoding="utf-8"))]
    else:
        images = P.elementary_abelian_generators(L.num_vertices)
    X = davis_quotient(L, images)
    _say(f"Davis quotient: {X.cell_counts()}")
    _write(args.output, X)
    _emit_dot(args, X)
    return OK


def cmd_cover_trivialize(args) -> int:
    pre = S.read(args.input, "delta")
    if not isinstance(pre, PreDeltaCategory):
        raise ParseError(f"{args.input}: expected a partial (pre) category")
    f = search_trivializing_cover(pre.complex, pre, args.trivial_budget)
    if isinstance(f, NotFound):
        _say(f"not found: {f.reason} (budget {f.budget}, tried {f.tried})", *f.details)
        return FAIL
    _say(f"trivializing cover of degree {f.degree}")
    _write(args.output, f)
    return _status(verify_cover(f))


def cmd_cover_verify(args) -> int:
    docs = [S.read(p) for p in args.input]
    covers: list[CoverMap] = []
    for p, d in zip(args.input, docs):
        if isinstance(d, list):
            base = Path(p).parent
            covers += [S.read(base / q, "cover") for q in d]
        elif isinstance(d, CoverMap):
            covers.append(d)
        else:
            raise ParseError(f"{p}: expected a cover or a chain")
    report = []
    for i, f in enumerate(covers):
        report += [f"step {i}: {line}" for line in verify_cover(f)]
    if len(covers) > 1 and not report:
        total = compose_chain(covers)
        report += verify_cover(total)
        _say(f"composite degree {total.degree}")
    return _status(report)


# ---------------------------------------------------------------- leighton


def _write_chain(out_dir: Path, prefix: str, chain: list[CoverMap]) -> None:
    names = []
    for i, f in enumerate(chain):
        name = f"{prefix}_cover_{i}.json"
        S.write(out_dir / name, f)
        names.append(name)
    S.write(out_dir / f"{prefix}_chain.json", S.chain_doc(names))


def cmd_leighton_color(args) -> int:
    X = load_complex(args.input)
    L = load_kneser(args.L)
    oc = orbicover_pipeline(X, L, 1, args.clean_budget, args.trivial_budget, _choices(args))
    _say(*oc.stages)
    _say(f"orbi-cover on a degree-{compose_chain(oc.chain).degree} cover: {oc.complex.cell_counts()}")
    _write(args.output, oc.coloring)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_chain(out, "input", oc.chain)
    _emit_dot(args, oc.complex, oc.coloring.colors, L)
    return _status(verify_lcoloring(oc.complex, oc.coloring, L))


def cmd_leighton_verify(args) -> int:
    col: LColoring = S.read(args.input, "coloring")
    return _status(verify_lcoloring(col.complex, col, col.L))


def cmd_leighton_product(args) -> int:
    c1: LColoring = S.read(args.first, "coloring")
    c2: LColoring = S.read(args.second, "coloring")
    out = Path(args.out_dir) if args.out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    pairs = [tuple(args.base_pair)]
    if args.all_components:
        pairs = [(a, b) for a in range(c1.complex.n_vertices) for b in range(c2.complex.n_vertices)]
    seen = np.zeros((c1.complex.n_vertices, c2.complex.n_vertices), dtype=bool)
    report, k = [], 0
    for a, b in pairs:
        if seen[a, b]:
            continue
        fp = fiber_product(c1.complex, c1, c2.complex, c2, (a, b))
        seen[fp.pairs[:, 0], fp.pairs[:, 1]] = True
        _say(f"component {k} at ({a}, {b}): {fp.complex.cell_counts()}, degrees {fp.p1.degree} and {fp.p2.degree}")
        report += [f"component {k} p1: {line}" for line in verify_cover(fp.p1)]
        report += [f"component {k} p2: {line}" for line in verify_cover(fp.p2)]
        if out:
            S.write(out / f"product_{k}.json", fp.coloring)
            S.write(out / f"product_{k}_p1.json", fp.p1)
            S.write(out / f"product_{k}_p2.json", fp.p2)
        k += 1
    return _status(report)


def cmd_leighton_common(args) -> int:
    X1 = load_complex(args.first)
    X2 = load_complex(args.second)
    L = load_kneser(args.L)
    cc = common_cover(X1, X2, L, args.clean_budget, args.trivial_budget, tuple(args.base_pair))
    for i, oc in enumerate(cc.inputs, 1):
        _say(*(f"input {i}: {s}" for s in oc.stages))
    _say(f"common cover: {cc.complex.cell_counts()}")
    lines = cc.report()
    _say(*lines)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        S.write(out / "common.json", cc.complex)
        S.write(out / "common_coloring.json", cc.product.coloring)
        _write_chain(out, "x1", cc.chain1)
        _write_chain(out, "x2", cc.chain2)
        (out / "report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
        _say(f"wrote {out}/")
    _emit_dot(args, cc.complex, cc.product.coloring.colors, L)
    bad = [line for line in lines if not line.endswith("verified")]
    return OK if not bad else FAIL


# ---------------------------------------------------------------- manifests

_INPUTS = ("input", "first", "second", "name")
_OUTPUTS = ("output", "out_dir", "emit_dot", "delta_out")
_BUDGETS = ("clean_budget", "trivial_budget")
_SKIP = ("func", "group", "action", "manifest_out")


def manifest_from_args(args, base: Path) -> dict:
    ns = vars(args)

    def rel(p):
        if p is None or str(p).startswith("fixture:") or not isinstance(p, str):
            return p
        return os.path.relpath(os.path.abspath(p), base.resolve())

    inputs = []
    for k in _INPUTS:
        v = ns.get(k)
        if isinstance(v, list):
            inputs += [rel(x) for x in v]
        elif v is not None:
            inputs.append(v if k == "name" else rel(v))
    doc = {
        "format": S.FORMAT,
        "kind": "manifest",
        "command": [args.group, args.action],
        "inputs": inputs,
        "outputs": {k: rel(ns[k]) for k in _OUTPUTS if ns.get(k)},
        "seed": ns.get("seed"),
        "budgets": {k: ns[k] for k in _BUDGETS if k in ns},
        "base_choices": list(ns.get("choice") or []),
    }
    skip = set(_INPUTS + _OUTPUTS + _BUDGETS + _SKIP + ("seed", "choice"))
    options = {}
    for k, v in ns.items():
        if k in skip or v is None or v is False:
            continue
        options[k] = rel(v) if k in ("L", "gains", "images") else v
    doc["options"] = options
    return doc


def argv_from_manifest(m: dict) -> list[str]:
    try:
        argv = list(m["command"]) + [str(x) for x in m.get("inputs", [])]
    except (KeyError, TypeError):
        raise ParseError("manifest needs a command list") from None

    def flag(k, v):
        name = "--" + k.replace("_", "-")
        if v is True:
            return [name]
        if isinstance(v, list):
            return [name] + [str(x) for x in v]
        return [name, str(v)]

    for k, v in m.get("options", {}).items():
        argv += flag(k, v)
    for k, v in m.get("outputs", {}).items():
        argv += flag(k, v)
    for k, v in m.get("budgets", {}).items():
        argv += flag(k, v)
    if m.get("seed") is not None:
        argv += ["--seed", str(m["seed"])]
    for c in m.get("base_choices", []):
        argv += ["--choice", c]
    return argv


def cmd_run(args) -> int:
    path = Path(args.manifest)
    try:
        m = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ParseError(f"{path}: {err.msg}", err.lineno, err.colno) from None
    if not isinstance(m, dict) or m.get("kind") != "manifest" or m.get("format") != S.FORMAT:
        raise ParseError(f"{path}: not a format-1 manifest", 1, 1)
    argv = argv_from_manifest(m)
    if argv[:1] == ["run"]:
        raise ParseError(f"{path}: manifests cannot nest")
    _say("run: cubecover " + " ".join(argv))
    cwd = os.getcwd()
    os.chdir(path.parent.resolve())
    try:
        return main(argv)
    finally:
        os.chdir(cwd)


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UnknownCommand(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cubecover", description="Common finite covers of cube complexes with Kneser links.")
    groups = p.add_subparsers(dest="group", metavar="GROUP", parser_class=_Parser)
    groups.required = True

    def action(group, name, func, help_text):
        sp = group.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--manifest-out", metavar="PATH", help="write a manifest that reproduces this run")
        return sp

    def group(name, help_text):
        g = groups.add_parser(name, help=help_text)
        sub = g.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
        sub.required = True
        return sub

    def out(sp, dot=True):
        sp.add_argument("-o", "--output", metavar="PATH")
        if dot:
            sp.add_argument("--emit-dot", metavar="PATH", help="write a DOT drawing of the 1-skeleton")

    def budgets(sp):
        sp.add_argument("--clean-budget", type=int, default=8)
        sp.add_argument("--trivial-budget", type=int, default=8)

    def choice(sp):
        sp.add_argument("--choice", action="append", metavar="H:P0,P1,...",
                        help="base bijection for hyperplane H as positions of the sorted label")

    g = group("kneser", "Kneser complexes")
    sp = action(g, "gen", cmd_kneser_gen, "build K_n on a ground set")
    sp.add_argument("--delta", required=True, help="ground set size, or comma-separated labels")
    sp.add_argument("--n", type=int, required=True)
    out(sp)

    g = group("complex", "cube complexes")
    sp = action(g, "check", cmd_complex_check, "validate, check links, optionally match against L")
    sp.add_argument("input")
    sp.add_argument("--L", metavar="KNESER")
    sp.add_argument("--emit-dot", metavar="PATH")
    sp = action(g, "gen", cmd_complex_gen, "write a built-in example complex")
    sp.add_argument("name", choices=sorted(FX.FIXTURES))
    sp.add_argument("--cover-degree", type=int, help="replace a graph by a random cover of this degree")
    sp.add_argument("--seed", type=int, default=0)
    out(sp)

    g = group("hyperplanes", "hyperplane certificates")
    sp = action(g, "certify", cmd_hyperplanes_certify, "cleanliness certificate for every hyperplane")
    sp.add_argument("input")

    g = group("delta", "Δ-categories")
    sp = action(g, "build", cmd_delta_build, "pre-category from link labels")
    sp.add_argument("input")
    sp.add_argument("--L", metavar="KNESER", required=True)
    out(sp, dot=False)
    sp = action(g, "extend", cmd_delta_extend, "complete a pre-category")
    sp.add_argument("input")
    choice(sp)
    out(sp, dot=False)
    sp = action(g, "verify", cmd_delta_verify, "check every axiom")
    sp.add_argument("input")

    g = group("holonomy", "global holonomy")
    for name, func, h in (("compute", cmd_holonomy_compute, "holonomy image and loop gains"),
                          ("flatten", cmd_holonomy_flatten, "kernel cover on which holonomy is trivial")):
        sp = action(g, name, func, h)
        sp.add_argument("input")
        sp.add_argument("--basepoint", type=int, default=0)
        if name == "flatten":
            out(sp, dot=False)
            sp.add_argument("--delta-out", metavar="PATH")

    g = group("cover", "finite covers")
    sp = action(g, "voltage", cmd_cover_voltage, "cover from permutation gains")
    sp.add_argument("input")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--gains", required=True, metavar="JSON", help='{"edge id": [permutation], ...}')
    out(sp)
    sp = action(g, "davis", cmd_cover_davis, "Davis quotient of a right-angled Coxeter group")
    sp.add_argument("--L", metavar="KNESER", required=True)
    sp.add_argument("--images", metavar="JSON", help="generator images as permutations (default (Z/2)^V)")
    out(sp)
    sp = action(g, "trivialize", cmd_cover_trivialize, "cover killing every parallel holonomy")
    sp.add_argument("input")
    sp.add_argument("--trivial-budget", type=int, default=8)
    out(sp, dot=False)
    sp = action(g, "verify", cmd_cover_verify, "verify covers or a chain (composed)")
    sp.add_argument("input", nargs="+")

    g = group("leighton", "orbi-covers and common covers")
    sp = action(g, "color", cmd_leighton_color, "full pipeline to an L-colouring")
    sp.add_argument("input")
    sp.add_argument("--L", metavar="KNESER", required=True)
    sp.add_argument("--out-dir", metavar="DIR", help="also write the cover chain")
    budgets(sp)
    choice(sp)
    out(sp)
    sp = action(g, "verify", cmd_leighton_verify, "check an L-colouring")
    sp.add_argument("input")
    sp = action(g, "product", cmd_leighton_product, "colour-matched fibre product")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--base-pair", type=int, nargs=2, default=[0, 0])
    sp.add_argument("--all-components", action="store_true")
    sp.add_argument("--out-dir", metavar="DIR")
    sp = action(g, "common", cmd_leighton_common, "common finite cover of two complexes")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--L", metavar="KNESER", required=True)
    sp.add_argument("--base-pair", type=int, nargs=2, default=[0, 0])
    sp.add_argument("--out-dir", metavar="DIR")
    sp.add_argument("--emit-dot", metavar="PATH")
    budgets(sp)

    sp = groups.add_parser("run", help="replay a manifest")
    sp.add_argument("manifest")
    sp.set_defaults(func=cmd_run, action=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "manifest_out", None):
            path = Path(args.manifest_out)
            m = manifest_from_args(args, path.parent)
            path.write_text(json.dumps(m, indent=2) + "\n", encoding="utf-8")
        return args.func(args)
    except (ParseError, ValidationError, UnknownCommand, FileNotFoundError, IsADirectoryError, ValueError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return BAD_INPUT
    except CubeCoverError as err:
        print(f"obstruction: {type(err).__name__}: {err}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
