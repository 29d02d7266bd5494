"""FastAPI application exposing the per-person page data.

All endpoints are read-only and serve from one snapshot reference taken
at the start of the request, so concurrent snapshot swaps never produce
a mixed response.
"""

from __future__ import annotations

from datetime import date as Date

from fastapi import FastAPI, HTTPException, Query

from .. import layout as layout_mod
from .. import linker
from ..model import Entity, EntityId, UnknownEntityError
from ..store import Snapshot
from . import schemas
from .state import SnapshotHolder


def create_app(holder: SnapshotHolder) -> FastAPI:
    app = FastAPI(title="namegraph", description="Person relation queries over clustered news.")

    def snapshot() -> Snapshot:
        return holder.get()

    def entity_or_404(snap: Snapshot, entity_id: EntityId) -> Entity:
        try:
            return snap.registry.get(entity_id)
        except UnknownEntityError:
            raise HTTPException(status_code=404, detail=f"unknown entity {entity_id}")

    @app.get("/entities/{entity_id}", response_model=schemas.PersonPageResponse)
    def person_page(
        entity_id: int,
        n: int = Query(default=10, ge=1),
        clusters: int = Query(default=10, ge=1),
        titles: int = Query(default=10, ge=1),
    ) -> schemas.PersonPageResponse:
        snap = snapshot()
        entity = entity_or_404(snap, entity_id)
        return schemas.PersonPageResponse(
            entity=_summary(entity),
            latest_clusters=_latest_clusters(snap, entity_id, clusters),
            top_titles=[
                schemas.TitleInfo(phrase=t.phrase, language=t.language, count=t.count)
                for t in linker.top_titles(snap.titles, entity_id, titles)
            ],
            related=_ranked_entries(snap, entity_id, n, linker.Mode.RELATED),
            associated=_ranked_entries(snap, entity_id, n, linker.Mode.ASSOCIATED),
        )

    @app.get("/search", response_model=list[schemas.EntitySummary])
    def search(q: str = Query(min_length=1)) -> list[schemas.EntitySummary]:
        snap = snapshot()
        return [_summary(e) for e in snap.registry.search(q)]

    @app.get("/entities/{entity_id}/related", response_model=schemas.RankedListResponse)
    def related_list(entity_id: int, n: int = Query(default=10, ge=1)) -> schemas.RankedListResponse:
        snap = snapshot()
        entity_or_404(snap, entity_id)
        return schemas.RankedListResponse(
            subject=entity_id,
            mode="related",
            entries=_ranked_entries(snap, entity_id, n, linker.Mode.RELATED),
        )

    @app.get("/entities/{entity_id}/associated", response_model=schemas.RankedListResponse)
    def associated_list(entity_id: int, n: int = Query(default=10, ge=1)) -> schemas.RankedListResponse:
        snap = snapshot()
        entity_or_404(snap, entity_id)
        return schemas.RankedListResponse(
            subject=entity_id,
            mode="associated",
            entries=_ranked_entries(snap, entity_id, n, linker.Mode.ASSOCIATED),
        )

    @app.get("/entities/{entity_id}/graph", response_model=schemas.GraphResponse)
    def neighborhood(
        entity_id: int,
        n: int = Query(default=10, ge=1),
        layout: bool = Query(default=False),
    ) -> schemas.GraphResponse:
        snap = snapshot()
        entity_or_404(snap, entity_id)
        index = snap.index
        try:
            partners = [p for p, _ in linker.associated(index, entity_id, n).entries]
        except UnknownEntityError:
            partners = []
        members = sorted({entity_id, *partners})
        positions: dict[int, tuple[float, float]] = {}
        edges: list[schemas.GraphEdge] = []
        if entity_id in index:
            edges = [
                schemas.GraphEdge(a=e.a, b=e.b, weight=e.weight, co_count=e.co_count)
                for e in linker.relation_edges(index, entity_id, partners)
            ]
            if layout:
                graph = layout_mod.neighborhood_graph(index, entity_id, n, labels=_labels(snap, members))
                result = layout_mod.kamada_kawai_layout(graph)
                positions = {node.entity: node.pos for node in result.graph.nodes if node.pos}
        nodes = [
            schemas.GraphNode(
                id=m,
                label=_label(snap, m),
                x=positions.get(m, (None, None))[0],
                y=positions.get(m, (None, None))[1],
            )
            for m in members
        ]
        return schemas.GraphResponse(subject=entity_id, nodes=nodes, edges=edges)

    @app.get("/vip", response_model=schemas.VipResponse)
    def vip(date: Date, k: int = Query(default=10, ge=1)) -> schemas.VipResponse:
        snap = snapshot()
        entries = [
            schemas.VipEntry(id=e, canonical_name=_label(snap, e), cluster_count=c)
            for e, c in linker.vip_list(snap.index, date, k)
        ]
        return schemas.VipResponse(date=date, entries=entries)

    return app


def _summary(entity: Entity) -> schemas.EntitySummary:
    return schemas.EntitySummary(
        id=entity.id,
        canonical_name=entity.canonical_name,
        variants=sorted(entity.variants),
        kind=entity.kind.value,
    )


def _label(snap: Snapshot, entity_id: EntityId) -> str:
    try:
        return snap.registry.get(entity_id).canonical_name
    except UnknownEntityError:
        return str(entity_id)


def _labels(snap: Snapshot, members: list[EntityId]) -> dict[EntityId, str]:
    return {m: _label(snap, m) for m in members}


def _ranked_entries(
    snap: Snapshot, entity_id: EntityId, n: int, mode: linker.Mode
) -> list[schemas.RankedEntry]:
    try:
        result = linker.ranked(snap.index, entity_id, n, mode)
    except UnknownEntityError:
        return []
    return [
        schemas.RankedEntry(rank=i + 1, id=e, canonical_name=_label(snap, e), score=score)
        for i, (e, score) in enumerate(result.entries)
    ]


def _latest_clusters(snap: Snapshot, entity_id: EntityId, limit: int) -> list[schemas.ClusterInfo]:
    index = snap.index
    mine = index.postings.get(entity_id, [])
    metas = sorted(
        (index.clusters[c] for c in mine),
        key=lambda m: (m.date, str(m.id)),
        reverse=True,
    )
    return [
        schemas.ClusterInfo(
            id=str(m.id),
            date=m.date,
            language=m.language,
            article_count=m.article_count,
            medoid_url=m.medoid_url,
        )
        for m in metas[:limit]
    ]
