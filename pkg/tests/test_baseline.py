from __future__ import annotations

import random

import pytest

from namegraph.baseline import (
    BaselineRelation,
    baseline_stats,
    confirm_relations,
    extract_person_links,
    load_page_dump,
    multilingual_subset,
    read_relations,
    relations_by_person,
    write_relations,
)
from namegraph.model import EntityKind, EntityRegistry


@pytest.fixture
def name_db():
    registry = EntityRegistry()
    registry.add("Alice Aronson", ["A. Aronson"], entity_id=1)
    registry.add("Bob Brandt", entity_id=2)
    registry.add("Carol Chen", entity_id=3)
    registry.add("Dan Dorn", entity_id=4)
    registry.add("World Bank", kind=EntityKind.ORGANIZATION, entity_id=9)
    return registry


def page(*links):
    body = " ".join(f'<a href="{href}">{text}</a>' for href, text in links)
    return f"<html><body><p>{body}</p></body></html>"


def test_extract_keeps_only_known_persons(name_db):
    markup = page(("/wiki/Bob_Brandt", "Bob"), ("/wiki/1975", "1975"))
    result = extract_person_links(markup, 1, "en", name_db)
    assert result.outlinks == frozenset({2})


def test_extract_empty_page(name_db):
    result = extract_person_links("<html><body>no links</body></html>", 1, "en", name_db)
    assert result.outlinks == frozenset()


def test_extract_drops_self_links(name_db):
    markup = page(("/wiki/Alice_Aronson", "Alice Aronson"))
    result = extract_person_links(markup, 1, "en", name_db)
    assert result.outlinks == frozenset()


def test_extract_drops_organizations(name_db):
    markup = page(("/wiki/World_Bank", "World Bank"), ("/wiki/Bob_Brandt", "Bob Brandt"))
    result = extract_person_links(markup, 1, "en", name_db)
    assert result.outlinks == frozenset({2})


def test_extract_falls_back_to_anchor_text(name_db):
    markup = page(("/wiki/Some_Redirect_Page", "Carol Chen"))
    result = extract_person_links(markup, 1, "en", name_db)
    assert result.outlinks == frozenset({3})


def test_extract_target_takes_precedence_over_anchor(name_db):
    markup = page(("/wiki/Bob_Brandt", "Carol Chen"))
    result = extract_person_links(markup, 1, "en", name_db)
    assert result.outlinks == frozenset({2})


def test_extract_decodes_url_escapes(name_db):
    markup = page(("/wiki/A.%20Aronson", "someone"))
    result = extract_person_links(markup, 2, "en", name_db)
    assert result.outlinks == frozenset({1})


def make_page(entity, language, outlinks):
    from namegraph.baseline import PersonPage

    return PersonPage(entity=entity, language=language, outlinks=frozenset(outlinks))


def test_confirm_requires_inverse_link():
    pages = [
        make_page(1, "en", {2, 3}),
        make_page(2, "en", {1}),
        make_page(3, "en", {4}),
    ]
    relations = confirm_relations(pages)
    assert relations == {BaselineRelation(1, 2, frozenset({"en"}))}


def test_confirm_empty():
    assert confirm_relations([]) == set()


def test_confirm_accumulates_languages():
    pages = [
        make_page(1, "en", {2, 3}),
        make_page(2, "en", {1}),
        make_page(3, "en", {1}),
        make_page(1, "fr", {2}),
        make_page(2, "fr", {1}),
    ]
    relations = {(r.a, r.b): r.languages for r in confirm_relations(pages)}
    assert relations[(1, 2)] == frozenset({"en", "fr"})
    assert relations[(1, 3)] == frozenset({"en"})


def test_confirm_is_order_independent():
    pages = [
        make_page(1, "en", {2}),
        make_page(2, "en", {1}),
        make_page(3, "fr", {4}),
        make_page(4, "fr", {3}),
    ]
    rng = random.Random(5)
    reference = confirm_relations(pages)
    for _ in range(5):
        shuffled = pages[:]
        rng.shuffle(shuffled)
        assert confirm_relations(shuffled) == reference


def test_multilingual_subset_filters():
    relations = {
        BaselineRelation(1, 2, frozenset({"en", "fr"})),
        BaselineRelation(1, 3, frozenset({"en"})),
    }
    assert multilingual_subset(relations, 2) == {BaselineRelation(1, 2, frozenset({"en", "fr"}))}
    assert multilingual_subset(relations, 1) == relations


def test_multilingual_subset_nesting():
    rng = random.Random(11)
    langs = ["en", "fr", "de", "it", "es"]
    relations = set()
    for a in range(1, 10):
        for b in range(a + 1, 10):
            if rng.random() < 0.5:
                chosen = rng.sample(langs, rng.randint(1, 5))
                relations.add(BaselineRelation(a, b, frozenset(chosen)))
    previous = relations
    for k in range(1, 6):
        current = multilingual_subset(relations, k)
        assert current <= previous
        previous = current


def test_relation_ordering_enforced():
    with pytest.raises(ValueError):
        BaselineRelation(5, 2, frozenset({"en"}))
    with pytest.raises(ValueError):
        BaselineRelation(1, 2, frozenset())


def test_baseline_stats_counts():
    relations = {
        BaselineRelation(1, 2, frozenset({"en"})),
        BaselineRelation(1, 3, frozenset({"en"})),
    }
    stats = baseline_stats(relations)
    assert stats.relations == 2
    assert stats.persons == 3
    assert stats.mean_per_person == pytest.approx(4 / 3)
    assert stats.min_per_person == 1
    assert stats.max_per_person == 2


def test_baseline_stats_empty():
    stats = baseline_stats(set())
    assert (stats.relations, stats.persons) == (0, 0)


def test_relations_by_person_symmetric():
    relations = {BaselineRelation(1, 2, frozenset({"en"}))}
    partners = relations_by_person(relations)
    assert partners[1] == {2}
    assert partners[2] == {1}


def test_page_dump_round_trip(tmp_path, name_db):
    (tmp_path / "en").mkdir()
    (tmp_path / "fr").mkdir()
    (tmp_path / "en" / "1.html").write_text(page(("/wiki/Bob_Brandt", "Bob")), encoding="utf-8")
    (tmp_path / "en" / "2.html").write_text(page(("/wiki/Alice_Aronson", "Alice")), encoding="utf-8")
    (tmp_path / "fr" / "1.html").write_text(page(("/wiki/Bob_Brandt", "Bob")), encoding="utf-8")
    (tmp_path / "en" / "bogus.html").write_text("x", encoding="utf-8")  # bad entity id

    pages, errors = load_page_dump(tmp_path, name_db)
    assert len(pages) == 3
    assert len(errors) == 1 and "bogus" in errors[0].path

    relations = confirm_relations(pages)
    assert relations == {BaselineRelation(1, 2, frozenset({"en"}))}


def test_relation_file_round_trip(tmp_path):
    relations = {
        BaselineRelation(1, 2, frozenset({"en", "fr"})),
        BaselineRelation(2, 3, frozenset({"de"})),
    }
    path = tmp_path / "relations.tsv"
    write_relations(relations, path)
    assert read_relations(path) == relations
