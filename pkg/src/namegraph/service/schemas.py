"""Pydantic response models for the query API."""

from __future__ import annotations

from datetime import date

from pydantic import BaseModel


class EntitySummary(BaseModel):
    id: int
    canonical_name: str
    variants: list[str]
    kind: str


class ClusterInfo(BaseModel):
    id: str
    date: date
    language: str
    article_count: int
    medoid_url: str | None = None


class TitleInfo(BaseModel):
    phrase: str
    language: str
    count: int


class RankedEntry(BaseModel):
    rank: int
    id: int
    canonical_name: str
    score: float


class RankedListResponse(BaseModel):
    subject: int
    mode: str
    entries: list[RankedEntry]


class PersonPageResponse(BaseModel):
    entity: EntitySummary
    latest_clusters: list[ClusterInfo]
    top_titles: list[TitleInfo]
    related: list[RankedEntry]
    associated: list[RankedEntry]


class GraphNode(BaseModel):
    id: int
    label: str
    x: float | None = None
    y: float | None = None


class GraphEdge(BaseModel):
    a: int
    b: int
    weight: float
    co_count: int


class GraphResponse(BaseModel):
    subject: int
    nodes: list[GraphNode]
    edges: list[GraphEdge]


class VipEntry(BaseModel):
    id: int
    canonical_name: str
    cluster_count: int


class VipResponse(BaseModel):
    date: date
    entries: list[VipEntry]
