#   Copyright 2024 The tannakit Authors
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.

"""Command-line front end: python -m tannakit <command> <spec> [options]."""

import argparse
import json
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

from sympy.polys.domains import QQ

from . import logging
from .bilform import comorita_components, hb_presentation, matrix_form_relations, quantum_dimension
from .coendc import (algebra_to_json, describe, eliminate_defined_generators, gl2_rename, to_json, to_latex, torus_is_commutative,
                     uaut_presentation, uend_direct, uend_into_uaut_check, uend_presentation)
from .comodrep import comodule_table, structure_maps
from .errors import InputError, InvariantViolationError, TannakitError
from .exactlin import DEFAULT_PRIME, Field, field_from_descriptor, is_rational_field
from .moncat import enumerate_words, format_word, interval, lambda_invertible, leq_search, parse_word
from .ncpoly import graded_dims as presented_graded_dims, span_equal
from .quadalg import as_regular_check, graded_dims, koszul_dual
from .self_monitoring import RunOutcome, SelfMonitoring
from .spec_schema import AlgebraSpec, FormsSpec, Spec, parse_spec
from .util.util_misc import get_positive_int_environment_value

COMMANDS = ("analyze", "uend", "uaut", "comod", "poset", "hb", "classify", "hilbert")
FORMATS = ("json", "text", "latex")


@dataclass(frozen=True)
class RunConfig:
    nmax: int = 6
    length_bound: int = 3
    maxlen: int = 5
    max_passes: int = 10000
    output_format: str = "json"
    seed: int = 1729
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        for name in ("nmax", "length_bound", "maxlen", "max_passes", "prime"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise InputError(f"{name} must be a positive integer, got {value!r}")
        if self.output_format not in FORMATS:
            raise InputError(f"Unknown output format '{self.output_format}', expected one of {', '.join(FORMATS)}")

    @classmethod
    def from_environment(cls, **overrides) -> "RunConfig":
        values = {
            "nmax": get_positive_int_environment_value("TANNAKIT_NMAX", cls.nmax),
            "length_bound": get_positive_int_environment_value("TANNAKIT_LENGTH_BOUND", cls.length_bound),
            "maxlen": get_positive_int_environment_value("TANNAKIT_MAXLEN", cls.maxlen),
            "max_passes": get_positive_int_environment_value("TANNAKIT_MAX_PASSES", cls.max_passes),
            "prime": DEFAULT_PRIME,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


class CommandResult(NamedTuple):
    document: Dict
    text: str
    latex: Optional[str] = None


def render(result: CommandResult, output_format: str) -> str:
    if output_format == "json":
        return json.dumps(result.document, indent=2, ensure_ascii=False)
    if output_format == "latex":
        if result.latex is None:
            raise InputError("LaTeX output is available for presentations only (uend, uaut, hb)")
        return result.latex
    return result.text


def _require_algebra(spec: Spec) -> AlgebraSpec:
    if not isinstance(spec, AlgebraSpec):
        raise InputError("This command needs an algebra spec, got a forms spec")
    return spec


def _require_forms(spec: Spec) -> FormsSpec:
    if not isinstance(spec, FormsSpec):
        raise InputError("This command needs a forms spec, got an algebra spec")
    return spec


# Commands

def analyze(spec: Spec, args: argparse.Namespace, config: RunConfig, self_monitoring: SelfMonitoring) -> CommandResult:
    a = _require_algebra(spec).to_algebra()
    report = as_regular_check(a, config.nmax)
    document = {
        "dim_v": a.dim_v,
        "relations": a.relation_strings(),
        "graded_dims": list(graded_dims(a, config.nmax)),
        "dual_graded_dims": list(graded_dims(koszul_dual(a), config.nmax)),
        "d": report.d,
        "dims": list(report.dims),
        "frobenius_top_one": report.frobenius_top_one,
        "pairings_nondegenerate": report.pairings_nondegenerate,
        "koszul_series_consistent": report.koszul_series_consistent,
        "as_regular": report.as_regular,
        "pairings": [pairing.to_strings() for pairing in report.pairings],
    }
    text = "\n".join(f"{key}: {value}" for key, value in document.items())
    return CommandResult(document, text)


def uend(spec: Spec, args: argparse.Namespace, config: RunConfig, self_monitoring: SelfMonitoring) -> CommandResult:
    a = _require_algebra(spec).to_algebra()
    direct = uend_direct(a)
    eliminated = eliminate_defined_generators(uend_presentation(a))
    if not span_equal(eliminated.relations, direct.relations, config.length_bound, direct.generators, field=a.field):
        raise InvariantViolationError("The compiled presentation of uend(A) disagrees with the direct one")
    self_monitoring.relations_emitted += len(direct.relations)
    document = {"presentation": algebra_to_json(direct), "compiled_cross_check": True}
    text = "\n".join([f"generators: {', '.join(direct.generators)}", "relations:"] + [f"  {r} = 0" for r in direct.relation_strings()])
    return CommandResult(document, text, to_latex(direct.relations, direct.generators))


def uaut(spec: Spec, args: argparse.Namespace, config: RunConfig, self_monitoring: SelfMonitoring) -> CommandResult:
    a = _require_algebra(spec).to_algebra()
    b = uaut_presentation(a, args.a, config.nmax, not args.no_antipode, config.max_passes, self_monitoring)
    checks = {}
    if a.dim_v == 2 and b.category.d == 2:
        # bounded span checks run for the two-variable case only
        checks["uend_maps_into_uaut"] = not uend_into_uaut_check(a, b, config.length_bound)
        b = gl2_rename(b)
        checks["torus_commutative"] = torus_is_commutative(b, config.length_bound)
    self_monitoring.relations_emitted += len(b.relations)
    document = dict(to_json(b), d=b.category.d, **checks)
    return CommandResult(document, describe(b), to_latex(b.relations, b.generators))


def comod(spec: Spec, args: argparse.Namespace, config: RunConfig, self_monitoring: SelfMonitoring) -> CommandResult:
    a = _require_algebra(spec).to_algebra()
    d = structure_maps(a, config.nmax).d
    if args.words:
        words = [parse_word(text, d, lambda_invertible(d)) for text in args.words]
    else:
        words = enumerate_words(d, config.maxlen)
    rows = comodule_table(a, words)
    self_monitoring.comodule_rows += len(rows)
    document = {"d": d, "simple_is_rank_only": not is_rational_field(a.field), "rows": [row.as_dict() for row in rows]}
    lines = ["word\tM\tnabla\tdelta\tL" + ("\twt" if d == 2 else "")]
    for row in rows:
        cells = [format_word(row.word), row.dim_m, row.dim_nabla, row.dim_delta, row.dim_simple]
        if row.weight is not None:
            cells.append(str(row.weight))
        lines.append("\t".join(str(cell) for cell in cells))
    return CommandResult(document, "\n".join(lines))


def poset(spec: Spec, args: argparse.Namespace, config: RunConfig, self_monitoring: SelfMonitoring) -> CommandResult:
    a = _require_algebra(spec).to_algebra()
    d = as_regular_check(a, config.nmax).d
    if not args.leq and not args.interval:
        raise InputError("poset needs --leq LOWER UPPER or --interval LOWER UPPER")
    document, lines = {"d": d}, []
    if args.leq:
        lower, upper = (parse_word(text, d) for text in args.leq)
        result = leq_search(lower, upper, d)
        self_monitoring.visited_words += result.visited
        document["leq"] = {"lower": format_word(lower), "upper": format_word(upper), "result": result.reachable}
        lines.append(f"{format_word(lower)} <= {format_word(upper)}: {str(result.reachable).lower()}")
    if args.interval:
        lower, upper = (parse_word(text, d) for text in args.interval)
        between = interval(lower, upper, d)
        document["interval"] = [format_word(w) for w in between]
        lines.append(f"[{format_word(lower)}, {format_word(upper)}]: " + ", ".join(document["interval"]))
    return CommandResult(document, "\n".join(lines))


def hb(spec: Spec, args: argparse.Namespace, config: RunConfig, self_monitoring: SelfMonitoring) -> CommandResult:
    forms = _require_forms(spec).to_forms()
    if not 0 <= args.index < len(forms):
        raise InputError(f"Form index {args.index} out of range for {len(forms)} forms")
    bf = forms[args.index]
    b = hb_presentation(bf, not args.no_antipode, config.max_passes, self_monitoring)
    q = quantum_dimension(bf)
    matrix_form = span_equal(b.relations, matrix_form_relations(bf), config.length_bound, b.generators, field=bf.field)
    self_monitoring.relations_emitted += len(b.relations)
    document = dict(to_json(b), q=str(q), minus_q=str(q.negated()), convention=q.convention, matrix_form_span_equal=matrix_form)
    text = "\n".join([describe(b), f"q(b) = {q} ({q.convention}), -q(b) = {q.negated()}",
                      f"matrix form span equal: {str(matrix_form).lower()}"])
    return CommandResult(document, text, to_latex(b.relations, b.generators))


def classify(spec: Spec, args: argparse.Namespace, config: RunConfig, self_monitoring: SelfMonitoring) -> CommandResult:
    classes = comorita_components(_require_forms(spec).to_forms())
    document = {"classes": [{"q": str(c.q), "minus_q": str(c.q.negated()), "members": list(c.members)} for c in classes]}
    text = "\n".join(f"q = {c.q}: forms {', '.join(str(m) for m in c.members)}" for c in classes)
    return CommandResult(document, text)


def _uend_degree(config: RunConfig, dim_v: int) -> int:
    # uend(A) has dim_v² generators, so the ambient tensor powers grow as dim_v^(2n)
    return min(config.nmax, 4 if dim_v <= 2 else 3)


def hilbert(spec: Spec, args: argparse.Namespace, config: RunConfig, self_monitoring: SelfMonitoring) -> CommandResult:
    a = _require_algebra(spec).to_algebra()
    algebra_dims = list(graded_dims(a, config.nmax))
    uend_dims = list(presented_graded_dims(uend_direct(a), _uend_degree(config, a.dim_v)))
    document = {"algebra": algebra_dims, "uend": uend_dims}
    text = f"A: {', '.join(map(str, algebra_dims))}\nuend(A): {', '.join(map(str, uend_dims))}"
    return CommandResult(document, text)


COMMAND_HANDLERS: Dict[str, Callable[[Spec, argparse.Namespace, RunConfig, SelfMonitoring], CommandResult]] = {
    "analyze": analyze,
    "uend": uend,
    "uaut": uaut,
    "comod": comod,
    "poset": poset,
    "hb": hb,
    "classify": classify,
    "hilbert": hilbert,
}


# Entry point

class _ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="tannakit", description="Coend presentations and comodules for quadratic algebras")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("spec", help="path to a JSON spec, inline JSON, or a bundled fixture name such as kxy.json")
    parser.add_argument("--bound", type=int, help="length bound for span comparisons")
    parser.add_argument("--nmax", type=int, help="degree bound for R_l and Hilbert series")
    parser.add_argument("--maxlen", type=int, help="word length bound for comodule tables")
    parser.add_argument("--max-passes", type=int, help="rewrite pass cap")
    parser.add_argument("--format", choices=FORMATS, help="output format (default json)")
    parser.add_argument("--out", help="write the output here instead of stdout")
    parser.add_argument("--field", help="override the spec field: Q, Fp or Fp:<prime>")
    parser.add_argument("--a", type=int, default=1, help="index a of the pairing r_a r_d^-1 r_(d-a) for uaut")
    parser.add_argument("--no-antipode", action="store_true", help="skip antipode derivation for uaut and hb")
    parser.add_argument("--words", nargs="+", help="words for comod, e.g. 'r1 r2^-1 r1'")
    parser.add_argument("--leq", nargs=2, metavar=("LOWER", "UPPER"))
    parser.add_argument("--interval", nargs=2, metavar=("LOWER", "UPPER"))
    parser.add_argument("--index", type=int, default=0, help="which form of a forms spec hb uses")
    parser.add_argument("--verbose", action="store_true")
    return parser


def field_override(text: Optional[str], prime: int) -> Optional[Field]:
    if text is None:
        return None
    if text in ("Q", "QQ"):
        return QQ
    if text == "Fp":
        return field_from_descriptor({"Fp": prime})
    if text.startswith("Fp:") and text[3:].isdigit():
        return field_from_descriptor({"Fp": int(text[3:])})
    raise InputError(f"Unsupported --field value '{text}', expected Q, Fp or Fp:<prime>")


def write_output(output: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8") as out_file:
            out_file.write(output + "\n")
        logging.info(f"Wrote {len(output)} characters to {path}")
    else:
        print(output)


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except InputError as e:
        logging.error(f"Invalid command line: {e}", "command-line-error")
        return e.exit_code

    logging.configure(args.verbose)
    logging.throttling_counter.reset_throttling_counter()
    self_monitoring = SelfMonitoring(execution_time=datetime.now(timezone.utc))
    self_monitoring.command = args.command
    start_time = time.perf_counter()
    try:
        config = RunConfig.from_environment(nmax=args.nmax, length_bound=args.bound, maxlen=args.maxlen,
                                            max_passes=args.max_passes, output_format=args.format)
        spec = parse_spec(args.spec, field_override(args.field, config.prime))
        result = COMMAND_HANDLERS[args.command](spec, args, config, self_monitoring)
        write_output(render(result, config.output_format), args.out)
        self_monitoring.outcomes.append(RunOutcome.Ok)
        return 0
    except TannakitError as e:
        self_monitoring.outcomes.append(RunOutcome.MathematicalFailure if e.exit_code == 2 else RunOutcome.InputError)
        logging.exception(f"Command '{args.command}' failed: {e}", "command-failed-exception")
        return e.exit_code
    except OSError as e:
        self_monitoring.outcomes.append(RunOutcome.InputError)
        logging.exception(f"Command '{args.command}' could not write its output: {e}", "output-write-exception")
        return InputError.exit_code
    finally:
        self_monitoring.computation_time = time.perf_counter() - start_time
        self_monitoring.discarded_logs = logging.throttling_counter.discarded()
        self_monitoring.log_self_monitoring_data()


def main(argv: Optional[List[str]] = None):
    sys.exit(run(argv))
