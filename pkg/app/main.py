import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Any, NoReturn, Optional, Sequence, Tuple

from core.config import (
    DEFAULT_BUDGET,
    DEFAULT_DEGREE,
    DEFAULT_SEED,
    DEFAULT_WORKERS,
    LOG_FORMAT,
    LOG_LEVEL,
    OUTPUT_FORMATS,
)
from core.derivations import MapKind
from core.errors import (
    LeibnizError,
    LibraryInvariantError,
    MathematicalRejection,
    UsageError,
)
from core.scalars import Field
from core.settings_manager import SettingsManager
from core.validators import (
    validate_budget,
    validate_degree,
    validate_field_spec,
    validate_output_format,
    validate_workers,
)
from infra.events import Report
from services.analysis_service import AnalysisService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REJECTED = 2


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; equal configs give byte-identical reports."""

    command: str
    inputs: Tuple[str, ...] = ()
    degree: int = DEFAULT_DEGREE
    field: Optional[str] = None
    budget: int = DEFAULT_BUDGET
    output_format: str = "json"
    seed: int = DEFAULT_SEED
    force: bool = False
    workers: int = DEFAULT_WORKERS
    verbose: bool = False

    def __post_init__(self) -> None:
        checks = [
            validate_degree(self.degree, self.force),
            validate_budget(self.budget),
            validate_workers(self.workers),
            validate_output_format(self.output_format),
        ]
        if self.field is not None:
            checks.append(validate_field_spec(self.field))
        for ok, msg in checks:
            if not ok:
                raise UsageError(msg)

    def service(self) -> AnalysisService:
        return AnalysisService(
            field=Field.parse(self.field) if self.field else None,
            degree=self.degree,
            budget=self.budget,
            seed=self.seed,
            workers=self.workers,
            force=self.force,
        )


class CliParser(argparse.ArgumentParser):
    """Malformed command lines exit with the usage code, not argparse's 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    common = CliParser(add_help=False)
    common.add_argument(
        "--degree", type=int, help="truncation degree N (1..6 without --force)"
    )
    common.add_argument("--field", help="reinterpret coefficients in Q or gfp:P")
    common.add_argument(
        "--budget", type=int, help="maximum number of assignments to enumerate"
    )
    common.add_argument(
        "--format", dest="output_format", choices=OUTPUT_FORMATS, help="report format"
    )
    common.add_argument("--seed", type=int, help="seed for randomized property samples")
    common.add_argument(
        "--force", action="store_true", help="allow degree bounds above the cap"
    )
    common.add_argument(
        "--workers", type=int, help="threads for exhaustive enumeration"
    )
    common.add_argument(
        "-v", "--verbose", action="store_true", help="debug logging on stderr"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = CliParser(
        prog="leibniz-hnn",
        description="Exact computations in right Leibniz algebras and HNN-extensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check the Leibniz identity")
    p.add_argument("algebra", help="algebra JSON file or shipped fixture name")

    p = sub.add_parser(
        "analyze", parents=[common], help="derived series, simplicity, centralizers"
    )
    p.add_argument("algebra")
    p.add_argument(
        "--subspace",
        action="append",
        metavar="[NAME=]ROWS",
        help="subspace spanned by ';'-separated vectors, e.g. A=1,0;0,1 (repeatable)",
    )

    p = sub.add_parser("derivations", parents=[common], help="derivation-type spaces")
    p.add_argument("algebra")
    p.add_argument(
        "--kind", default="all", choices=("all", "derivation", "anti", "bider")
    )

    p = sub.add_parser(
        "hnn", parents=[common], help="HNN-extension and embedding check"
    )
    p.add_argument("algebra")
    p.add_argument(
        "--subspace", required=True, metavar="ROWS", help="subalgebra A, e.g. 1,0"
    )
    p.add_argument(
        "--map",
        required=True,
        metavar="ROWS|SCALAR",
        help="images of A's basis as dim(L) rows of dim(A) entries, or a scalar c "
        "for c times the inclusion",
    )
    p.add_argument(
        "--kind", default="derivation", choices=[k.value for k in MapKind] + ["anti"]
    )

    p = sub.add_parser(
        "solve", parents=[common], help="solve or check a system; divide by an element"
    )
    p.add_argument("algebra")
    p.add_argument("system", nargs="?", help="system JSON file (solve and check modes)")
    p.add_argument("--mode", default="solve", choices=("solve", "check", "divide"))
    p.add_argument("--x", help="divisor, comma-separated coordinates")
    p.add_argument("--b", help="right-hand side, comma-separated coordinates")
    p.add_argument("--side", default="right", choices=("left", "right"))

    p = sub.add_parser(
        "free", parents=[common], help="normal form of a free expression"
    )
    p.add_argument("expression")
    p.add_argument(
        "--dialgebra", action="store_true", help="parse with -| and |- products"
    )

    sub.add_parser("fixtures", parents=[common], help="list shipped fixtures")
    return parser


def _pick(flag: Any, settings: SettingsManager, key: str, default: Any) -> Any:
    """Flags override settings, settings override config defaults."""
    if flag is not None:
        return flag
    return settings.get_setting(key, default)


def make_config(
    args: argparse.Namespace, settings: Optional[SettingsManager] = None
) -> RunConfig:
    settings = settings or SettingsManager()
    inputs = [getattr(args, name, None) for name in ("algebra", "system", "expression")]
    return RunConfig(
        command=args.command,
        inputs=tuple(i for i in inputs if i is not None),
        degree=_pick(args.degree, settings, "degree", DEFAULT_DEGREE),
        field=_pick(args.field, settings, "field", None),
        budget=_pick(args.budget, settings, "budget", DEFAULT_BUDGET),
        output_format=_pick(args.output_format, settings, "format", "json"),
        seed=_pick(args.seed, settings, "seed", DEFAULT_SEED),
        force=bool(args.force),
        workers=_pick(args.workers, settings, "workers", DEFAULT_WORKERS),
        verbose=bool(args.verbose),
    )


def run(config: RunConfig, args: argparse.Namespace) -> Report:
    service = config.service()
    if config.command == "verify":
        return service.cmd_verify(args.algebra)
    if config.command == "analyze":
        return service.cmd_analyze(args.algebra, args.subspace)
    if config.command == "derivations":
        return service.cmd_derivations(args.algebra, args.kind)
    if config.command == "hnn":
        return service.cmd_hnn(
            args.algebra, args.subspace, args.map, args.kind, config.degree
        )
    if config.command == "solve":
        x = args.x.split(",") if args.x else None
        b = args.b.split(",") if args.b else None
        return service.cmd_solve(args.algebra, args.system, args.mode, x, b, args.side)
    if config.command == "free":
        return service.cmd_free(args.expression, args.dialgebra)
    return service.cmd_fixtures()


def configure_logging(verbose: bool) -> None:
    # Reports go to stdout; logs stay on stderr.
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, LOG_LEVEL),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = make_config(args)
        report = run(config, args)
    except MathematicalRejection as e:
        print(f"rejected: {e}", file=sys.stderr)
        return EXIT_REJECTED
    except LibraryInvariantError:
        raise
    except LeibnizError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    rendered = report.to_json() if config.output_format == "json" else report.to_text()
    print(rendered)
    logger.debug(f"{config.command} finished with status {report.status_label}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
