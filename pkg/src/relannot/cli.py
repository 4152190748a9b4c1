"""Command line: serve the API, validate documents, compute IAA, export, simulate.

Exit codes: 0 success, 1 validation/engine error, 2 usage error.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import EngineError
from .metrics import agreement_from_exports
from .model import parse_document
from .session import AnnotationSession, validate_export
from .simulate import SimulationConfig, run_simulation


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@click.group()
def main() -> None:
    """Complete and consistent event-relation annotation toolkit."""


@main.command()
@click.option("--port", default=8000, show_default=True, envvar="RELANNOT_PORT",
              help="Listen port.")
@click.option("--host", default="127.0.0.1", show_default=True, envvar="RELANNOT_HOST",
              help="Bind address.")
@click.option("--data", type=click.Path(file_okay=False), default=None,
              envvar="RELANNOT_DATA", help="Directory for document/session persistence.")
@click.option("--static", type=click.Path(exists=True, file_okay=False), default=None,
              envvar="RELANNOT_STATIC", help="Static asset directory for the UI bundle.")
def serve(port: int, host: str, data: str | None, static: str | None) -> None:
    """Run the annotation HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(
        data_dir=Path(data) if data else None,
        static_dir=Path(static) if static else None,
    )
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def validate(file: str) -> None:
    """Parse and validate a document file."""
    try:
        doc = parse_document(Path(file).read_bytes())
    except EngineError as exc:
        _fail(str(exc))
        return
    click.echo(
        json.dumps(
            {"doc_id": doc.doc_id, "mentions": len(doc.mentions), "valid": True}
        )
    )


@main.command()
@click.option("--kind", type=click.Choice(["temporal", "coref", "causal"]), required=True)
@click.option("--causal-universe", type=click.Choice(["before-intersection", "all"]),
              default="before-intersection", show_default=True)
@click.option("--human", is_flag=True, help="Tabular text instead of JSON.")
@click.argument("export_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("export_b", type=click.Path(exists=True, dir_okay=False))
def iaa(kind: str, causal_universe: str, human: bool, export_a: str, export_b: str) -> None:
    """Inter-annotator agreement between two export files."""
    try:
        exports = []
        for path in (export_a, export_b):
            export = json.loads(Path(path).read_bytes())
            validate_export(export)
            exports.append(export)
        report = agreement_from_exports(exports, kind, causal_universe=causal_universe)
    except (EngineError, json.JSONDecodeError) as exc:
        _fail(str(exc))
        return
    if human:
        click.echo(f"kind           {report.kind}")
        click.echo(f"universe size  {report.universe_size}")
        if report.kappa is not None:
            click.echo(f"observed p_o   {report.observed_agreement:.4f}")
            click.echo(f"expected p_e   {report.expected_agreement:.4f}")
            click.echo(f"kappa          {report.kappa:.4f}")
        else:
            click.echo(f"B3 precision   {report.bcubed_precision:.4f}")
            click.echo(f"B3 recall      {report.bcubed_recall:.4f}")
            click.echo(f"B3 F1          {report.bcubed_f1:.4f}")
    else:
        click.echo(json.dumps(report.to_dict(), indent=2))


@main.command()
@click.argument("session_file", type=click.Path(exists=True, dir_okay=False))
def export(session_file: str) -> None:
    """Print the export document of a saved (Done) session."""
    try:
        session = AnnotationSession.load(Path(session_file).read_bytes())
        document = session.export_annotation()
    except EngineError as exc:
        _fail(str(exc))
        return
    click.echo(json.dumps(document, indent=2))


@main.command()
@click.option("--events", default=4, show_default=True, help="Number of simulated events.")
@click.option("--policy", type=click.Choice(["chronological", "random", "from-file"]),
              default="chronological", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--equal-prob", default=0.15, show_default=True,
              help="Tie probability for the random timeline.")
@click.option("--vague-prob", default=0.1, show_default=True,
              help="Per-event probability of an independent (vague) axis.")
@click.option("--cause-prob", default=0.3, show_default=True,
              help="Oracle probability of marking a predecessor as cause.")
@click.option("--truth-file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--human", is_flag=True, help="Tabular text instead of JSON.")
def simulate(events: int, policy: str, seed: int, equal_prob: float, vague_prob: float,
             cause_prob: float, truth_file: str | None, human: bool) -> None:
    """Drive a full session with an oracle annotator and report the workload."""
    config = SimulationConfig(
        n_events=events,
        policy=policy,
        seed=seed,
        equal_prob=equal_prob,
        vague_prob=vague_prob,
        cause_prob=cause_prob,
        truth_file=truth_file,
    )
    try:
        result = run_simulation(config)
    except EngineError as exc:
        _fail(str(exc))
        return
    if not result.complete or result.conflicts:
        _fail(
            f"simulation ended inconsistent (complete={result.complete}, "
            f"conflicts={result.conflicts})"
        )
        return
    if human:
        click.echo(f"events={events} policy={policy} seed={seed}")
        click.echo(f"complete={result.complete} conflicts={result.conflicts}")
        for phase, load in result.workload.phases.items():
            click.echo(
                f"{phase:12s} manual={load.manual_steps:g} auto={load.auto_steps:g} "
                f"total={load.total_pairs} reduction={load.reduction * 100:.1f}%"
            )
        click.echo(f"universes: {result.universes}")
    else:
        click.echo(json.dumps(result.to_dict(), indent=2))


if __name__ == "__main__":  # pragma: no cover
    main()
