"""Command-line entry points.

Each subcommand is a thin wrapper over one package module: batch jobs
(ingest, baseline) write files, queries (link, map, eval, recognize)
print tab-separated tables, and `serve` runs the HTTP API over a
snapshot, reloading it on SIGHUP.
"""

from __future__ import annotations

import signal
import sys
from datetime import date
from pathlib import Path

import click

from . import baseline as baseline_mod
from . import evaluator, linker
from . import layout as layout_mod
from . import recognizer as recognizer_mod
from .model import UnknownEntityError
from .service import SnapshotHolder, create_app
from .store import IngestError, Snapshot


def _load_snapshot(path: str) -> Snapshot:
    try:
        return Snapshot.load(path)
    except FileNotFoundError:
        raise click.ClickException(f"snapshot file not found: {path}")
    except (IngestError, OSError) as exc:
        raise click.ClickException(str(exc))


@click.group()
def main() -> None:
    """Person-name link analysis over clustered news."""


@main.command()
@click.option("--occurrences", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--clusters", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--entities", type=click.Path(exists=True, dir_okay=False))
@click.option("--titles", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def ingest(occurrences: str, clusters: str, entities: str | None, titles: str | None, out: str) -> None:
    """Build an index snapshot from occurrence and cluster files."""
    try:
        snapshot = Snapshot.build_from_files(
            occurrences=occurrences, clusters=clusters, entities=entities, titles=titles
        )
    except IngestError as exc:
        raise click.ClickException(str(exc))
    snapshot.save(out)
    index = snapshot.index
    click.echo(
        f"snapshot {out}: {len(index.postings)} entities, "
        f"{len(index.clusters)} clusters, "
        f"{sum(index.cluster_freq.values())} occurrences"
    )


def _pack_file(path: str, lang: str, suffix: str) -> Path:
    """A pack option may name a file directly or a directory holding one
    file per language, selected by --lang."""
    p = Path(path)
    if p.is_dir():
        candidate = p / f"{lang}{suffix}"
        if not candidate.is_file():
            raise click.ClickException(f"no {lang!r} pack in {p} (expected {candidate.name})")
        return candidate
    return p


@main.command()
@click.option("--lang", default="en", show_default=True)
@click.option("--triggers", "trigger_path", type=click.Path(exists=True))
@click.option("--first-names", "first_names_path", type=click.Path(exists=True))
@click.option("--names", "names_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-name-tokens", default=4, show_default=True)
@click.argument("textfile", type=click.Path(exists=True, dir_okay=False), required=False)
def recognize(
    lang: str,
    trigger_path: str | None,
    first_names_path: str | None,
    names_path: str | None,
    max_name_tokens: int,
    textfile: str | None,
) -> None:
    """Recognize person names in a text file (or stdin)."""
    try:
        config = recognizer_mod.RecognizerConfig(
            known_names=recognizer_mod.load_known_names(names_path) if names_path else {},
            first_names=recognizer_mod.load_first_names(_pack_file(first_names_path, lang, ".txt"))
            if first_names_path
            else frozenset(),
            triggers=recognizer_mod.load_trigger_pack(_pack_file(trigger_path, lang, ".tsv"), lang)
            if trigger_path
            else (),
            max_name_tokens=max_name_tokens,
        )
    except recognizer_mod.RecognizerConfigError as exc:
        raise click.ClickException(str(exc))
    text = Path(textfile).read_text(encoding="utf-8") if textfile else sys.stdin.read()
    for m in recognizer_mod.recognize(text, config):
        triggers = ",".join(m.attached_triggers)
        click.echo(f"{m.span[0]}\t{m.span[1]}\t{m.method.value}\t{m.surface}\t{triggers}")


@main.command()
@click.argument("mode", type=click.Choice(["related", "associated"]))
@click.option("--entity", required=True, type=int)
@click.option("--top", default=10, show_default=True)
@click.option("--snapshot", "snapshot_path", required=True, type=click.Path(dir_okay=False))
def link(mode: str, entity: int, top: int, snapshot_path: str) -> None:
    """Print the related or associated list for one entity."""
    snapshot = _load_snapshot(snapshot_path)
    try:
        result = linker.ranked(snapshot.index, entity, top, linker.Mode(mode))
    except (UnknownEntityError, ValueError) as exc:
        raise click.ClickException(f"cannot rank entity {entity}: {exc}")
    for rank, (partner, score) in enumerate(result.entries, start=1):
        name = _canonical(snapshot, partner)
        click.echo(f"{rank}\t{partner}\t{name}\t{score:.6g}")


@main.command("map")
@click.option("--entity", required=True, type=int)
@click.option("--top", default=18, show_default=True)
@click.option("--dot/--coords", "as_dot", default=True, help="Output format.")
@click.option("--snapshot", "snapshot_path", required=True, type=click.Path(dir_okay=False))
@click.option("--epsilon", default=1e-4, show_default=True)
def relation_map(entity: int, top: int, as_dot: bool, snapshot_path: str, epsilon: float) -> None:
    """Lay out the entity's association neighborhood."""
    snapshot = _load_snapshot(snapshot_path)
    labels = {e.id: e.canonical_name for e in snapshot.registry.entities()}
    try:
        graph = layout_mod.neighborhood_graph(snapshot.index, entity, top, labels=labels)
    except UnknownEntityError:
        raise click.ClickException(f"unknown entity {entity}")
    result = layout_mod.kamada_kawai_layout(graph, epsilon=epsilon)
    if as_dot:
        click.echo(layout_mod.export_dot(result.graph), nl=False)
    else:
        click.echo(layout_mod.format_coords(result.graph), nl=False)


@main.command("baseline")
@click.option("--pages", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--snapshot", "snapshot_path", required=True, type=click.Path(dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--min-languages", default=1, show_default=True)
def baseline_cmd(pages: str, snapshot_path: str, out: str, min_languages: int) -> None:
    """Build confirmed person relations from a local page dump."""
    snapshot = _load_snapshot(snapshot_path)
    page_set, errors = baseline_mod.load_page_dump(pages, snapshot.registry)
    for err in errors:
        click.echo(f"skipped {err.path}: {err.reason}", err=True)
    relations = baseline_mod.confirm_relations(page_set)
    relations = baseline_mod.multilingual_subset(relations, min_languages)
    baseline_mod.write_relations(relations, out)
    stats = baseline_mod.baseline_stats(relations)
    click.echo(
        f"{stats.relations} relations over {stats.persons} persons "
        f"(mean {stats.mean_per_person:.2f}, min {stats.min_per_person}, "
        f"max {stats.max_per_person})"
    )


@main.command("eval")
@click.option("--baseline", "baseline_path", required=True, type=click.Path(dir_okay=False))
@click.option("--snapshot", "snapshot_path", required=True, type=click.Path(dir_okay=False))
@click.option("--mode", type=click.Choice(["related", "associated", "both"]), default="both")
@click.option("--ranks", default=",".join(str(r) for r in evaluator.DEFAULT_RANKS), show_default=True)
@click.option("--averaging", type=click.Choice(["macro", "micro"]), default="macro", show_default=True)
def eval_cmd(baseline_path: str, snapshot_path: str, mode: str, ranks: str, averaging: str) -> None:
    """Score rankings against a baseline relation file."""
    snapshot = _load_snapshot(snapshot_path)
    try:
        relations = baseline_mod.read_relations(baseline_path)
    except FileNotFoundError:
        raise click.ClickException(f"baseline file not found: {baseline_path}")
    except ValueError as exc:
        raise click.ClickException(str(exc))
    try:
        rank_list = tuple(int(r) for r in ranks.split(","))
        config = evaluator.EvalConfig(ranks=rank_list, averaging=averaging)
        kinds = {e.id: e.kind for e in snapshot.registry.entities()}
        if mode == "both":
            related_rep, associated_rep = evaluator.compare_modes(
                snapshot.index, relations, config, kinds
            )
            click.echo(evaluator.format_comparison(related_rep, associated_rep), nl=False)
        else:
            cfg = evaluator.EvalConfig(ranks=rank_list, mode=linker.Mode(mode), averaging=averaging)
            report = evaluator.evaluate(snapshot.index, relations, cfg, kinds)
            click.echo("rank\tprecision\trecall")
            for rank in rank_list:
                score = report.per_rank[rank]
                click.echo(f"{rank:02d}\t{score.precision:.2f}\t{score.recall:.2f}")
            click.echo(
                f"# persons={report.persons_evaluated} baseline={report.baseline_size} "
                f"averaging={report.averaging}"
            )
    except (evaluator.EvaluationError, ValueError) as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.option(
    "--snapshot", "snapshot_path", required=True, envvar="NAMEGRAPH_SNAPSHOT",
    type=click.Path(dir_okay=False), show_envvar=True,
)
@click.option("--host", default="127.0.0.1", envvar="NAMEGRAPH_HOST", show_default=True, show_envvar=True)
@click.option("--port", default=8400, envvar="NAMEGRAPH_PORT", show_default=True, show_envvar=True)
def serve(snapshot_path: str, host: str, port: int) -> None:
    """Run the read-only query API; SIGHUP reloads the snapshot."""
    import uvicorn

    holder = SnapshotHolder.from_file(snapshot_path)

    def _reload(signum, frame) -> None:
        holder.reload()

    signal.signal(signal.SIGHUP, _reload)
    uvicorn.run(create_app(holder), host=host, port=port, log_level="info")


def _canonical(snapshot: Snapshot, entity: int) -> str:
    try:
        return snapshot.registry.get(entity).canonical_name
    except UnknownEntityError:
        return str(entity)


if __name__ == "__main__":
    main()
