"""Command-line interface: pipeline documents in, reports out.

This is the only module that touches files.  Pipeline documents are strict
JSON (unknown fields rejected) with case-insensitive hex truth tables;
reports are JSON with sorted keys, so identical invocations produce
byte-identical files.  Exit status: 0 on success, 1 on validation or usage
errors, 2 when a computation hit a configured cap or bound.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .boolfn import BoolFunc
from .coxeter import (
    BOUND_EXCEEDED,
    DEFAULT_COSET_CAP,
    DegenerateGenerators,
    claimed_coxeter_matrix,
    coxeter_matrix,
    verify_pipeline,
    _presentation_for_steps,
)
from .lifting import PipelineSpec, Perm, forward_perm, layout, run_classical, step_involution
from .permgroup import (
    ClosureCapExceeded,
    DEFAULT_ELEMENT_CAP,
    closure,
    element_order_histogram,
    is_dihedral_8,
    nondegeneracy_defects,
    perm_compose,
    perm_order,
)
from .quantum import PermUnitary, apply, basis_state, marginal_distribution, measure, uniform_superposition

FORMAT_VERSION = 1
REPORT_VERSION = 1
# one-letter step aliases, accepted only for pipelines of up to four steps
WORD_ALIASES = {"f": 1, "g": 2, "h": 3, "r": 4}


class PipelineFormatError(ValueError):
    """Malformed or invalid pipeline document."""


def parse_pipeline(source: str | Path | bytes) -> PipelineSpec:
    """Parse a pipeline document from a path or raw bytes, strictly."""
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise PipelineFormatError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    return pipeline_from_document(document)


def pipeline_from_document(document: object) -> PipelineSpec:
    """Validate a decoded pipeline document and build the PipelineSpec."""
    if not isinstance(document, dict):
        raise PipelineFormatError("top level must be an object")
    unknown = set(document) - {"format_version", "registers", "functions", "name"}
    if unknown:
        raise PipelineFormatError(f"unknown field(s): {', '.join(sorted(unknown))}")
    for required in ("format_version", "registers", "functions"):
        if required not in document:
            raise PipelineFormatError(f"missing field: {required}")
    if document["format_version"] != FORMAT_VERSION:
        raise PipelineFormatError(
            f"format_version {document['format_version']!r} is not supported (expected {FORMAT_VERSION})"
        )
    if "name" in document and not isinstance(document["name"], str):
        raise PipelineFormatError("name must be a string")
    registers = document["registers"]
    if (
        not isinstance(registers, list)
        or len(registers) < 2
        or not all(isinstance(w, int) and not isinstance(w, bool) for w in registers)
    ):
        raise PipelineFormatError("registers must be a list of at least two integers")
    functions = document["functions"]
    if not isinstance(functions, list):
        raise PipelineFormatError("functions must be a list")
    if len(functions) != len(registers) - 1:
        raise PipelineFormatError(
            f"{len(registers)} registers need {len(registers) - 1} functions, got {len(functions)}"
        )
    steps = []
    for i, obj in enumerate(functions):
        if not isinstance(obj, dict):
            raise PipelineFormatError(f"functions[{i}] must be an object")
        extra = set(obj) - {"table"}
        if extra:
            raise PipelineFormatError(f"functions[{i}]: unknown field(s): {', '.join(sorted(extra))}")
        if "table" not in obj:
            raise PipelineFormatError(f"functions[{i}]: missing field: table")
        entries = obj["table"]
        if not isinstance(entries, list):
            raise PipelineFormatError(f"functions[{i}].table must be a list of hex strings")
        values = []
        for k, entry in enumerate(entries):
            if not isinstance(entry, str):
                raise PipelineFormatError(f"functions[{i}].table[{k}] must be a hex string")
            try:
                value = int(entry, 16)
            except ValueError:
                raise PipelineFormatError(f"functions[{i}].table[{k}] is not valid hex: {entry!r}") from None
            if value < 0:
                raise PipelineFormatError(f"functions[{i}].table[{k}] must be nonnegative")
            values.append(value)
        try:
            steps.append(BoolFunc(registers[i], registers[i + 1], tuple(values)))
        except ValueError as e:
            raise PipelineFormatError(f"functions[{i}]: {e}") from None
    try:
        return PipelineSpec(tuple(registers), tuple(steps))
    except ValueError as e:
        raise PipelineFormatError(str(e)) from None


def emit_pipeline(pipeline: PipelineSpec, name: str | None = None) -> str:
    """Serialize a pipeline to document JSON; parsing it back is lossless."""
    document: dict[str, object] = {
        "format_version": FORMAT_VERSION,
        "registers": list(pipeline.widths),
        "functions": [{"table": [format(v, "x") for v in f.table]} for f in pipeline.steps],
    }
    if name is not None:
        document["name"] = name
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def _hex(value: int) -> str:
    return format(value, "x")


def _parse_hex(text: str, what: str) -> int:
    try:
        value = int(text, 16)
    except ValueError:
        raise ValueError(f"{what} is not valid hex: {text!r}") from None
    if value < 0:
        raise ValueError(f"{what} must be nonnegative")
    return value


def _step_index(symbol: str, n_steps: int) -> int:
    s = symbol.lower()
    if s in WORD_ALIASES and n_steps <= 4:
        index = WORD_ALIASES[s]
        if index <= n_steps:
            return index
        raise ValueError(f"word symbol {symbol!r} names step {index}, but the pipeline has {n_steps}")
    if s.startswith("f") and s[1:].isdigit():
        index = int(s[1:])
        if 1 <= index <= n_steps:
            return index
    raise ValueError(f"unknown word symbol {symbol!r} (use f1..f{n_steps})")


def _word_perm(pipeline: PipelineSpec, symbols: Sequence[str]) -> tuple[Perm, list[str]]:
    """Resolve word symbols and compose them; the rightmost symbol applies
    first (functional composition order)."""
    indices = [_step_index(s, pipeline.n_steps) for s in symbols]
    acc = Perm.identity(pipeline.total_width)
    for index in indices:
        acc = perm_compose(acc, step_involution(pipeline, index))
    return acc, [f"f{index}" for index in indices]


def _matrix_rows(orders) -> list[list[object]]:
    return [["inf" if v is None else v for v in row] for row in orders]


def _print_matrix(label: str, orders) -> None:
    print(f"{label}:")
    for row in orders:
        print("  [" + ", ".join("inf" if v is None else str(v) for v in row) + "]")


def _render_word(word: Sequence[int]) -> list[str]:
    return [f"f{s + 1}" for s in word]


# ---------------------------------------------------------------------------
# subcommands


def _cmd_lift(args, pipeline: PipelineSpec):
    lay = layout(pipeline)
    print(f"registers: widths {tuple(lay.widths)}, offsets {tuple(lay.offsets)}, total width {lay.total_width}")
    steps = []
    for i in range(1, pipeline.n_steps + 1):
        f = pipeline.steps[i - 1]
        perm = step_involution(pipeline, i)
        order = perm_order(perm)
        steps.append(
            {
                "step": i,
                "symbol": f"f{i}",
                "arity_in": f.arity_in,
                "arity_out": f.arity_out,
                "order": order,
                "is_identity": perm.is_identity,
            }
        )
        note = "identity (degenerate)" if perm.is_identity else f"order {order}"
        print(f"step {i} (f{i}): {f.arity_in} -> {f.arity_out} bits, lifted involution: {note}")
    results = {
        "layout": {
            "widths": list(lay.widths),
            "offsets": list(lay.offsets),
            "total_width": lay.total_width,
        },
        "steps": steps,
    }
    return 0, results


def _cmd_group(args, pipeline: PipelineSpec):
    gens = [step_involution(pipeline, i) for i in range(1, pipeline.n_steps + 1)]
    group = closure(gens, element_cap=args.element_cap)
    histogram = element_order_histogram(group)
    defects = nondegeneracy_defects(gens)
    witness = is_dihedral_8(group)
    print(f"closure order: {len(group)}")
    print("element order histogram: {" + ", ".join(f"{k}: {v}" for k, v in histogram.items()) + "}")
    if defects:
        print("degenerate:")
        for d in defects:
            print(f"  - {d}")
    else:
        print("nondegenerate: yes")
    if witness is not None:
        rotation = " ".join(_render_word(group.words[witness.rotation])) or "e"
        reflection = " ".join(_render_word(group.words[witness.reflection])) or "e"
        print(f"dihedral of order 8: yes (rotation {rotation}, reflection {reflection})")
    else:
        print("dihedral of order 8: no")
    results: dict[str, object] = {
        "order": len(group),
        "order_histogram": {str(k): v for k, v in histogram.items()},
        "nondegenerate": not defects,
        "defects": list(defects),
        "dihedral_8": witness is not None,
    }
    if witness is not None:
        results["dihedral_8_witness"] = {
            "rotation": witness.rotation,
            "reflection": witness.reflection,
            "from_generators": witness.from_generators,
        }
    if args.cayley:
        results["cayley"] = [list(row) for row in group.cayley]
        results["words"] = [_render_word(w) for w in group.words]
    return 0, results


def _cmd_coxeter(args, pipeline: PipelineSpec):
    gens = [step_involution(pipeline, i) for i in range(1, pipeline.n_steps + 1)]
    presentation = _presentation_for_steps(pipeline.n_steps)
    relators = [" ".join(_render_word(w)) for w in presentation.relators]
    try:
        empirical = coxeter_matrix(gens)
    except DegenerateGenerators as e:
        print("degenerate generator set; no Coxeter matrix:")
        for d in e.defects:
            print(f"  - {d}")
        return 0, {"degenerate": True, "defects": list(e.defects)}
    claimed = claimed_coxeter_matrix(pipeline.n_steps)
    matches = empirical.orders == claimed.orders
    _print_matrix("empirical matrix (orders of pairwise products)", empirical.orders)
    _print_matrix("claimed matrix (adjacent 4, distant 2)", claimed.orders)
    print(f"match: {'yes' if matches else 'NO (surfaced, not an error)'}")
    generators = ", ".join(f"f{i}" for i in range(1, pipeline.n_steps + 1))
    print(f"claimed presentation: <{generators} | {', '.join(relators)}>")
    results = {
        "degenerate": False,
        "empirical_matrix": _matrix_rows(empirical.orders),
        "claimed_matrix": _matrix_rows(claimed.orders),
        "matches_claimed": matches,
        "relators": relators,
    }
    return 0, results


def _cmd_verify(args, pipeline: PipelineSpec):
    report = verify_pipeline(pipeline, coset_cap=args.coset_cap, element_cap=args.element_cap)
    held = sum(1 for c in report.relation_checks if c.holds)
    print(f"relations: {held}/{len(report.relation_checks)} hold")
    print(f"concrete group order: {report.concrete_order}")
    if report.abstract_order is None:
        print(f"abstract group order: not reached within {report.coset_cap} cosets")
    else:
        print(f"abstract group order: {report.abstract_order}")
    print(f"verdict: {report.verdict}")
    if report.verdict == "CONFIRMED":
        print(
            "the relations give a surjection from the abstract group onto the concrete one;"
            " equal finite orders make it an isomorphism"
        )
    for d in report.defects:
        print(f"  - {d}")
    results = {
        "verdict": report.verdict,
        "relations_hold": report.relations_hold,
        "concrete_order": report.concrete_order,
        "abstract_order": report.abstract_order,
        "coset_cap": report.coset_cap,
        "relations": [
            {"relator": _render_word(c.relator), "holds": c.holds} for c in report.relation_checks
        ],
        "product_orders": [list(row) for row in report.product_orders],
        "defects": list(report.defects),
        "isomorphism_established": report.isomorphism_established,
    }
    return (2 if report.verdict == BOUND_EXCEEDED else 0), results


def _cmd_run(args, pipeline: PipelineSpec):
    x = _parse_hex(args.input, "--input")
    trace = run_classical(pipeline, x)
    lay = layout(pipeline)
    final = forward_perm(pipeline)(x)
    # the reversed word f1 f2 .. fn inverts the forward composition
    reverse = Perm.identity(pipeline.total_width)
    for i in range(1, pipeline.n_steps + 1):
        reverse = perm_compose(reverse, step_involution(pipeline, i))
    restored = lay.unpack_registers(reverse(final))
    initial = (x,) + (0,) * pipeline.n_steps
    restoration_ok = restored == initial
    print(f"input: 0x{_hex(x)}")
    print("trace: (" + ", ".join("0x" + _hex(v) for v in trace.registers) + ")")
    print("direct evaluation matches: yes")
    print(
        f"reversed word restores the initial state: {'yes' if restoration_ok else 'NO'}"
        f" ({', '.join('0x' + _hex(v) for v in restored)})"
    )
    results = {
        "input": _hex(x),
        "trace": [_hex(v) for v in trace.registers],
        "direct": [_hex(v) for v in trace.direct],
        "restored": [_hex(v) for v in restored],
        "restoration_ok": restoration_ok,
    }
    return 0, results


def _cmd_qrun(args, pipeline: PipelineSpec):
    lay = layout(pipeline)
    perm, word = _word_perm(pipeline, args.word)
    if len(args.input) != len(lay.widths):
        raise ValueError(f"--input needs {len(lay.widths)} register values, got {len(args.input)}")
    values = [_parse_hex(v, f"--input register {i}") for i, v in enumerate(args.input)]
    state = basis_state(lay, values)
    if args.superpose is not None:
        state = uniform_superposition(lay, args.superpose, state)
    state = apply(PermUnitary(perm), state)
    result = measure(state, lay, args.measure, seed=args.seed, shots=args.shots)
    distribution = marginal_distribution(state, lay, args.measure)
    print(f"word: {' '.join(word)} (rightmost symbol applied first)")
    print("initial registers: (" + ", ".join("0x" + _hex(v) for v in values) + ")")
    if args.superpose is not None:
        print(f"register {args.superpose} prepared in uniform superposition")
    counts_text = ", ".join(f"0x{_hex(v)}: {c}" for v, c in sorted(result.counts.items()))
    print(f"measured register {args.measure} over {args.shots} shots (seed {args.seed}): {{{counts_text}}}")
    results = {
        "word": word,
        "input": [_hex(v) for v in values],
        "superpose": args.superpose,
        "measured_register": args.measure,
        "seed": args.seed,
        "shots": args.shots,
        "counts": {_hex(v): c for v, c in sorted(result.counts.items())},
        "distribution": {_hex(v): p for v, p in sorted(distribution.items())},
    }
    return 0, results


# ---------------------------------------------------------------------------
# dispatch


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="involift", description="Boolean pipeline lifting and group analysis")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("pipeline", help="pipeline document (JSON)")
    common.add_argument("--json", metavar="PATH", help="also write a JSON report")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("lift", parents=[common], help="layout and per-step involution summary")
    p.set_defaults(handler=_cmd_lift)

    p = sub.add_parser("group", parents=[common], help="closure order and element order histogram")
    p.add_argument("--element-cap", type=int, default=DEFAULT_ELEMENT_CAP, metavar="N")
    p.add_argument("--cayley", action="store_true", help="include the Cayley table and words in the report")
    p.set_defaults(handler=_cmd_group)

    p = sub.add_parser("coxeter", parents=[common], help="empirical matrix and claimed presentation")
    p.set_defaults(handler=_cmd_coxeter)

    p = sub.add_parser("verify", parents=[common], help="test the claimed presentation against the group")
    p.add_argument("--coset-cap", type=int, default=DEFAULT_COSET_CAP, metavar="N")
    p.add_argument("--element-cap", type=int, default=DEFAULT_ELEMENT_CAP, metavar="N")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("run", parents=[common], help="classical trace plus inverse-run restoration check")
    p.add_argument("--input", required=True, metavar="HEX", help="value of register 0")
    p.set_defaults(handler=_cmd_run)

    p = sub.add_parser("qrun", parents=[common], help="apply a generator word to a state and measure")
    p.add_argument("--word", required=True, nargs="+", metavar="SYM",
                   help="generator symbols f1..fn (aliases f g h r for up to 4 steps), rightmost applied first")
    p.add_argument("--input", required=True, nargs="+", metavar="HEX", help="per-register initial values")
    p.add_argument("--superpose", type=int, metavar="REG", help="prepare this register in uniform superposition")
    p.add_argument("--measure", required=True, type=int, metavar="REG")
    p.add_argument("--seed", type=int, default=0, metavar="U64")
    p.add_argument("--shots", type=int, default=1000, metavar="N")
    p.set_defaults(handler=_cmd_qrun)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    try:
        data = Path(args.pipeline).read_bytes()
    except OSError as e:
        print(f"error: cannot read {args.pipeline}: {e}", file=sys.stderr)
        return 1
    try:
        pipeline = parse_pipeline(data)
        exit_code, results = args.handler(args, pipeline)
    except (PipelineFormatError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ClosureCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.json:
        report = {
            "report_version": REPORT_VERSION,
            "toolkit_version": __version__,
            "command": argv,
            "input_digest": "sha256:" + hashlib.sha256(data).hexdigest(),
            "results": results,
        }
        Path(args.json).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return exit_code


def entry() -> None:
    raise SystemExit(main())
