"""
Command-line interface of the affine TL engine.

Subcommands read words (``"3 2 1 2"``, ``"s3*s2*s1*s2"`` or ``"e"``) or
diagram JSON files and write text, JSON, ASCII or SVG to stdout. Logs go to
stderr. The exit status is 0 on success, 1 on a domain error or a negative
verdict, and 2 on a usage error.
"""

import argparse
import json
import logging
import re
import sys
from typing import Callable, Dict, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from .coxeter import (
    CoxeterContext,
    FCElement,
    Word,
    canonical_form,
    enumerate_fc,
    left_descents,
    right_descents,
)
from .diagram import Diagram, DiagramElement, from_model, is_admissible, to_model
from .elements import classify_non_cancellable, is_type_I, n_value, reduction_path
from .errors import AffineTLError, InvalidRankError, MalformedWordError
from .heap import build, convex_violations
from .heap import render_ascii as render_heap
from .models import (
    AdmissibilityReport,
    CensusEntry,
    CensusReport,
    CliConfig,
    DiagramElementModel,
    DiagramModel,
    DiagramTermModel,
    FcCheckResult,
    MonomialModel,
    MonomialTermModel,
    VerificationSummary,
    WordReport,
)
from .render import render_ascii, render_svg
from .suites import SuiteManager, SuiteStatus, load_config
from .theta import census, theta
from .tl import DeltaPoly, MonomialElement, basis, from_word, mul

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

_LETTER = re.compile(r"s(\d+)")

Handler = Callable[[CliConfig, TextIO], int]


def parse_word(text: str) -> Word:
    """
    Read a word in one of the accepted spellings.

    ``"3 2 1 2"`` and ``"3,2,1,2"`` list indices, ``"s3*s2*s1*s2"`` names
    generators, and ``"e"`` or an empty string is the empty word.

    Raises:
        MalformedWordError: If the text is not a word
    """
    stripped = text.strip()
    if stripped in ("", "e"):
        return ()
    if stripped.startswith("s"):
        letters = []
        for token in stripped.split("*"):
            match = _LETTER.fullmatch(token.strip())
            if match is None:
                raise MalformedWordError(
                    f"Malformed generator {token.strip()!r} in {text!r}"
                )
            letters.append(int(match.group(1)))
        return tuple(letters)
    tokens = stripped.replace(",", " ").split()
    if not all(token.isdigit() for token in tokens):
        raise MalformedWordError(f"Malformed word {text!r}")
    return tuple(int(token) for token in tokens)


def _context(config: CliConfig) -> CoxeterContext:
    return CoxeterContext(config.rank if config.rank is not None else 2)


def _words(config: CliConfig, ctx: CoxeterContext) -> List[Word]:
    return [ctx.validate_word(parse_word(text)) for text in config.words]


def _monomial_model(x: MonomialElement) -> MonomialModel:
    return MonomialModel(
        rank=x.rank,
        terms=[
            MonomialTermModel(
                coefficients=list(c.coefficients), word=list(fc.canonical)
            )
            for fc, c in x.terms
        ],
    )


def _element_model(x: DiagramElement) -> DiagramElementModel:
    return DiagramElementModel(
        rank=x.rank,
        terms=[
            DiagramTermModel(coefficients=list(c.coefficients), diagram=to_model(d))
            for d, c in x.terms
        ],
    )


def _read_diagram(config: CliConfig) -> Diagram:
    path = config.input_file or "-"
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    d = from_model(DiagramModel.model_validate_json(text))
    if config.rank is not None and config.rank != d.rank:
        raise InvalidRankError(f"Diagram has rank {d.rank}, --rank is {config.rank}")
    return d


def _emit(out: TextIO, text: str) -> None:
    out.write(text + "\n")


def word_report(ctx: CoxeterContext, fc: FCElement) -> WordReport:
    """Descents, n-value, type and classification facts of one element."""
    path = reduction_path(ctx, fc)
    final = path[-1].result if path else fc
    return WordReport(
        word=list(fc.canonical),
        length=fc.length,
        left_descents=sorted(left_descents(fc)),
        right_descents=sorted(right_descents(fc)),
        n_value=n_value(ctx, fc),
        type_I=is_type_I(ctx, fc),
        non_cancellable=not path,
        classification=classify_non_cancellable(ctx, final).describe(),
        reduction_path=[move.describe() for move in path],
    )


def _cmd_fc_check(config: CliConfig, out: TextIO) -> int:
    ctx = _context(config)
    status = 0
    for word in _words(config, ctx):
        violations = convex_violations(ctx, build(ctx, word))
        if violations:
            status = 1
            result = FcCheckResult(
                word=list(word),
                fully_commutative=False,
                reason=violations[0].describe(),
            )
        else:
            canonical = list(canonical_form(ctx, word).canonical)
            result = FcCheckResult(
                word=list(word), fully_commutative=True, canonical=canonical
            )
        if config.output_format == "json":
            _emit(out, result.model_dump_json())
        elif result.fully_commutative:
            _emit(out, f"FC [{' '.join(str(i) for i in result.canonical or [])}]")
        else:
            _emit(out, f"not-FC ({result.reason})")
    return status


def _cmd_normalize(config: CliConfig, out: TextIO) -> int:
    ctx = _context(config)
    for word in _words(config, ctx):
        fc = canonical_form(ctx, word)
        if config.output_format == "json":
            _emit(out, _monomial_model(basis(fc)).model_dump_json())
        else:
            _emit(out, str(fc))
    return 0


def _cmd_mul(config: CliConfig, out: TextIO) -> int:
    ctx = _context(config)
    product = from_word(ctx, ())
    for word in _words(config, ctx):
        product = mul(ctx, product, from_word(ctx, word))
    if config.output_format == "json":
        _emit(out, _monomial_model(product).model_dump_json(indent=2))
    else:
        _emit(out, product.to_text())
    return 0


def _show_diagram(config: CliConfig, out: TextIO, d: Diagram) -> None:
    if config.output_format == "svg":
        _emit(out, render_svg(d))
    elif config.output_format == "json":
        _emit(out, to_model(d).model_dump_json(indent=2))
    elif config.output_format == "ascii":
        _emit(out, render_ascii(d))
    else:
        _emit(out, d.to_text())


def _cmd_theta(config: CliConfig, out: TextIO) -> int:
    ctx = _context(config)
    (word,) = _words(config, ctx)
    image = theta(ctx, from_word(ctx, word))
    ((d, scalar),) = image.terms
    if scalar == DeltaPoly.one() or config.output_format in ("svg", "ascii"):
        if scalar != DeltaPoly.one():
            logger.info(f"Drawing the diagram of {image}, scalar {scalar} omitted")
        _show_diagram(config, out, d)
    elif config.output_format == "json":
        _emit(out, _element_model(image).model_dump_json(indent=2))
    else:
        _emit(out, image.to_text())
    return 0


def _cmd_admissible(config: CliConfig, out: TextIO) -> int:
    d = _read_diagram(config)
    ok, violations = is_admissible(CoxeterContext(d.rank), d)
    report = AdmissibilityReport(
        admissible=ok, a_value=d.a_value, violations=[str(v) for v in violations]
    )
    if config.output_format == "json":
        _emit(out, report.model_dump_json(indent=2))
    else:
        _emit(out, "admissible" if ok else "not admissible")
        for line in report.violations:
            _emit(out, f"  {line}")
    return 0 if ok else 1


def _cmd_render(config: CliConfig, out: TextIO) -> int:
    _show_diagram(config, out, _read_diagram(config))
    return 0


def _cmd_heap(config: CliConfig, out: TextIO) -> int:
    ctx = _context(config)
    for word in _words(config, ctx):
        _emit(out, render_heap(build(ctx, word)))
    return 0


def _cmd_classify(config: CliConfig, out: TextIO) -> int:
    ctx = _context(config)
    for word in _words(config, ctx):
        report = word_report(ctx, canonical_form(ctx, word))
        if config.output_format == "json":
            _emit(out, report.model_dump_json(indent=2))
            continue
        label = f"[{' '.join(str(i) for i in report.word)}]"
        if report.non_cancellable:
            _emit(out, f"{label} non-cancellable: {report.classification}")
            continue
        _emit(out, f"{label} reduces:")
        for step in report.reduction_path:
            _emit(out, f"  {step}")
        _emit(out, f"  non-cancellable: {report.classification}")
    return 0


def _cmd_enumerate(config: CliConfig, out: TextIO) -> int:
    ctx = _context(config)
    max_len = config.max_len if config.max_len is not None else 6
    count = 0
    for fc in enumerate_fc(ctx, max_len, allowed=config.support):
        count += 1
        if config.output_format == "json":
            _emit(out, word_report(ctx, fc).model_dump_json())
        else:
            _emit(out, str(fc))
    logger.info(f"rank {ctx.n}: {count} FC elements of length <= {max_len}")
    return 0


def _cmd_census(config: CliConfig, out: TextIO) -> int:
    ctx = _context(config)
    max_len = config.max_len if config.max_len is not None else 6
    counts = census(ctx, max_len)
    report = CensusReport(
        rank=ctx.n,
        max_len=max_len,
        entries=[
            CensusEntry(a_value=a, loops=loops, count=count)
            for (a, loops), count in counts.items()
        ],
    )
    if config.output_format == "json":
        _emit(out, report.model_dump_json(indent=2))
    else:
        for entry in report.entries:
            _emit(out, f"a={entry.a_value} loops={entry.loops}: {entry.count}")
    return 0


def _cmd_verify(config: CliConfig, out: TextIO) -> int:
    suites_config = load_config(config.config_path)
    manager = SuiteManager(config.workers)
    manager.plan(
        suites_config.suites,
        max_len=config.max_len,
        only=config.suites or None,
        ranks=[config.rank] if config.rank is not None else None,
    )
    manager.execute()
    if config.output_format == "json":
        summary = VerificationSummary(
            passed=manager.all_passed,
            reports=manager.reports(),
            errors=[
                f"{run.name}: {run.error_message}"
                for run in manager.runs
                if run.status is SuiteStatus.ERROR
            ],
        )
        _emit(out, summary.model_dump_json(indent=2))
    else:
        for run in manager.runs:
            for failure in run.report.failures if run.report else []:
                _emit(out, f"{run.name} {failure.word}: {failure.reason}")
        _emit(out, manager.summary())
    return 0 if manager.all_passed else 1


COMMANDS: Dict[str, Handler] = {
    "fc-check": _cmd_fc_check,
    "normalize": _cmd_normalize,
    "mul": _cmd_mul,
    "theta": _cmd_theta,
    "admissible": _cmd_admissible,
    "render": _cmd_render,
    "heap": _cmd_heap,
    "classify": _cmd_classify,
    "enumerate": _cmd_enumerate,
    "census": _cmd_census,
    "verify": _cmd_verify,
}


def _support(text: str) -> List[int]:
    try:
        return [int(token) for token in text.split(",") if token.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid generator list {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="tl",
        description="Exact computations in the affine Temperley-Lieb algebra "
        "of type C and its decorated diagram calculus",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "--log-level",
        type=str,
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging verbosity level",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(
        name: str, help_text: str, formats: Sequence[str], default_rank: Optional[int]
    ) -> argparse.ArgumentParser:
        sub = commands.add_parser(
            name, help=help_text, formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        sub.add_argument(
            "--rank", type=int, default=default_rank, help="Rank parameter n"
        )
        sub.add_argument(
            "--format",
            dest="output_format",
            default=formats[0],
            choices=list(formats),
            help="Output format",
        )
        return sub

    for name, help_text, formats in (
        ("fc-check", "Test words for full commutativity", ("text", "json")),
        ("normalize", "Canonical (Cartier-Foata) form of FC words", ("text", "json")),
        ("mul", "Product of the monomials of the given words", ("text", "json")),
        ("heap", "Draw the heap of each word", ("text",)),
        ("classify", "Non-cancellable class or reduction path", ("text", "json")),
    ):
        sub = command(name, help_text, formats, 2)
        sub.add_argument("words", nargs="+", help="Words, e.g. '3 2 1 2'")

    sub = command("theta", "Diagram of a word", ("text", "json", "ascii", "svg"), 2)
    sub.add_argument("words", nargs=1, help="Word, e.g. '1 2'")

    for name, help_text, formats in (
        ("admissible", "Check a diagram for admissibility", ("text", "json")),
        ("render", "Draw a diagram", ("ascii", "svg", "json", "text")),
    ):
        sub = command(name, help_text, formats, None)
        sub.add_argument(
            "input_file", nargs="?", default="-", help="Diagram JSON file, - for stdin"
        )

    sub = command("enumerate", "Stream FC elements by length", ("text", "json"), 2)
    sub.add_argument("--max-len", type=int, default=6, help="Length bound")
    sub.add_argument(
        "--support", type=_support, default=None, help="Generator subset, e.g. 1,2"
    )

    sub = command("census", "Count d_w by a-value and loops", ("text", "json"), 2)
    sub.add_argument("--max-len", type=int, default=6, help="Length bound")

    sub = command("verify", "Run verification suites", ("text", "json"), None)
    sub.add_argument(
        "--suite",
        dest="suites",
        action="append",
        default=[],
        help="Suite to run (repeatable); default: every enabled suite",
    )
    sub.add_argument("--max-len", type=int, default=None, help="Length bound")
    sub.add_argument("--workers", type=int, default=None, help="Worker processes")
    sub.add_argument(
        "--config", dest="config_path", default=None, help="Suite configuration file"
    )
    return parser


def _config(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        command=args.command,
        rank=args.rank,
        words=getattr(args, "words", []),
        input_file=getattr(args, "input_file", None),
        output_format=args.output_format,
        max_len=getattr(args, "max_len", None),
        workers=getattr(args, "workers", None),
        suites=getattr(args, "suites", []),
        support=getattr(args, "support", None),
        config_path=getattr(args, "config_path", None),
    )


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Parse arguments, dispatch to a subcommand and map errors to exit codes.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]
        stdout: Output stream; defaults to sys.stdout

    Returns:
        0 on success, 1 on a domain error or negative verdict, 2 on a
        usage error
    """
    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)
    out = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    logging.getLogger().setLevel(getattr(logging, args.log_level.upper(), logging.INFO))

    try:
        config = _config(args)
        logger.debug(f"Running {config.command} with {config}")
        return COMMANDS[config.command](config, out)
    except MalformedWordError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except (AffineTLError, ValidationError, json.JSONDecodeError) as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return 1
    except OSError as e:
        logger.error(f"I/O error: {e}")
        sys.stderr.write(f"error: {e}\n")
        return 1


def main() -> None:
    """Console entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
