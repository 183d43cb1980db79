"""instanton 命令行入口：compute / table / verify。"""

import logging
import os
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[2]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import click
from dotenv import load_dotenv

from src.code.config import MIN_NMAX, RunConfig
from src.code.controller import CommandReport, cmd_compute, cmd_table, cmd_verify
from src.code.polycore import TruncationMode

ENV_PATH = PROJECT_ROOT / ".env"


def _configure_logging() -> None:
    level_name = os.getenv("INSTANTON_LOG_LEVEL", "WARNING").strip().upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.WARNING),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
        force=True,
    )


def run_options(fn):
    """所有子命令共享的开关。"""
    fn = click.option("--parallel", is_flag=True, help="Evaluate table rows on worker threads.")(fn)
    fn = click.option("--debug-checks", is_flag=True, help="Assert syzygy, S-pair and origin-support checks.")(fn)
    fn = click.option("--nmax", type=click.IntRange(min=MIN_NMAX), default=None, help="Cap for m-adic stabilization.")(fn)
    fn = click.option("--json", "as_json", is_flag=True, help="Emit one JSON object per computation.")(fn)
    fn = click.option("--strict-truncation", is_flag=True, help="Also drop z-exponents above j-1 in p̄.")(fn)
    return fn


def build_config(
    strict_truncation: bool, as_json: bool, nmax: int | None, debug_checks: bool, parallel: bool
) -> RunConfig:
    """环境变量给出默认值，命令行开关覆盖。"""
    try:
        base = RunConfig.from_env()
        return base.with_overrides(
            truncation=TruncationMode.STRICT if strict_truncation else None,
            output="json" if as_json else None,
            n_max=nmax,
            debug_checks=True if debug_checks else None,
            parallel=True if parallel else None,
        )
    except ValueError as exc:
        raise click.UsageError(f"invalid configuration: {exc}") from exc


def emit(report: CommandReport) -> None:
    for line in report.lines:
        click.echo(line)
    if report.error:
        click.echo(report.error, err=True)
    sys.exit(report.exit_code)


@click.group(name="instanton")
def cli() -> None:
    """Instanton width, height and charge of plane-curve singularities."""
    load_dotenv(ENV_PATH)
    _configure_logging()


@cli.command(context_settings={"ignore_unknown_options": True})
@click.argument("poly")
@click.argument("j", type=int)
@click.option("--classical", is_flag=True, help="Also print multiplicity, Milnor and Tjurina numbers.")
@run_options
def compute(poly: str, j: int, classical: bool, **flags) -> None:
    """Compute (w, h, charge) for POLY at splitting type J."""
    emit(cmd_compute(poly, j, build_config(**flags), classical=classical))


corpus_option = click.option(
    "--corpus",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Golden corpus CSV to use instead of the embedded one.",
)


@cli.command()
@click.argument("table_id", metavar="ID")
@corpus_option
@run_options
def table(table_id: str, corpus: Path | None, **flags) -> None:
    """Recompute every row of table ID (I..VIII) against the stored values."""
    emit(cmd_table(table_id, build_config(**flags), corpus_path=corpus))


@cli.command()
@corpus_option
@run_options
def verify(corpus: Path | None, **flags) -> None:
    """Run the whole golden corpus; exit 0 iff every row matches."""
    emit(cmd_verify(build_config(**flags), corpus_path=corpus))


def main() -> None:
    cli(prog_name="instanton")


if __name__ == "__main__":
    main()
