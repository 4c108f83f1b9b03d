"""Name recognition, variant merging, person registry, networks."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixture_corpus import TABLE2_VARIANTS
from oracles import gram_cosine_oracle
from textatlas.corpus import Document
from textatlas.entities import (
    CoOccurrenceStore,
    EncyclopediaCache,
    PersonStore,
    TriggerPattern,
    canonical_variant,
    encyclopedia_lookup,
    load_known_names,
    load_triggers,
    name_ngrams,
    name_similarity,
    normalize_name,
    recognize_names,
    related_persons,
    variant_groups,
)

# Independently computed character-n-gram cosines.
FROZEN_SIM_CLOSE = 0.9448090244404383   # Mohammed ElBaradei / Mohamed ElBaradei
FROZEN_SIM_BOTTLENECK = 0.6251954041004443  # Muhammad al-Baradai / Mohammed al-Baradei


def doc(body, language="en"):
    return Document(id="d", source="t", language=language, title="t", body=body)


TRIGGERS = [
    TriggerPattern("en", ("president",), "before", "title"),
    TriggerPattern("en", ("director", "general"), "before", "title"),
    TriggerPattern("en", ("quoted",), "before", "verbal"),
    TriggerPattern("en", ("has", "said"), "after", "verbal"),
]


class TestRecognition:
    def test_trigger_before_title(self):
        mentions = recognize_names(doc("Yesterday President George Bush spoke."), {}, TRIGGERS)
        assert [(m.surface, m.trigger) for m in mentions] == [("George Bush", "President")]

    def test_multiword_trigger_inside_capitalized_run(self):
        # The title itself is capitalized and glued to the name run.
        mentions = recognize_names(doc("Director General Mohammed ElBaradei warned."), {}, TRIGGERS)
        assert [m.surface for m in mentions] == ["Mohammed ElBaradei"]
        assert mentions[0].trigger == "Director General"

    def test_trigger_after(self):
        mentions = recognize_names(doc("Angela Merkel has said that."), {}, TRIGGERS)
        assert [(m.surface, m.trigger) for m in mentions] == [("Angela Merkel", "has said")]

    def test_untriggered_run_rejected(self):
        assert recognize_names(doc("Random Capitalized Words here."), {}, TRIGGERS) == []

    def test_lowercase_infix_kept_in_run(self):
        mentions = recognize_names(doc("He quoted Osama bin Laden today."), {}, TRIGGERS)
        assert [m.surface for m in mentions] == ["Osama bin Laden"]

    def test_run_breaks_at_sentence_boundary(self):
        # "Baradei. Inspectors" must not fuse into one name.
        mentions = recognize_names(
            doc("They quoted Mohammed El Baradei. Inspectors left early."), {}, TRIGGERS
        )
        assert [m.surface for m in mentions] == ["Mohammed El Baradei"]

    def test_trigger_not_applied_across_sentence_boundary(self):
        mentions = recognize_names(doc("The report was quoted. Georgia Brown left."), {}, TRIGGERS)
        assert mentions == []

    def test_known_name_longest_subspan(self):
        known = {"angela merkel": (7, "person"), "merkel": (7, "person")}
        mentions = recognize_names(doc("Chancellor Angela Merkel arrived."), known, [])
        assert [m.surface for m in mentions] == ["Angela Merkel"]

    def test_known_organisation_kind(self):
        known = {"world bank": (9, "organisation")}
        mentions = recognize_names(doc("The World Bank reported growth."), known, [])
        assert [(m.surface, m.kind) for m in mentions] == [("World Bank", "organisation")]

    def test_offsets_point_at_surface(self):
        body = "Envoys quoted Muhammad al-Baradai on the freeze."
        m = recognize_names(doc(body), {}, TRIGGERS)[0]
        assert body[m.offset : m.offset + m.length] == m.surface == "Muhammad al-Baradai"

    def test_language_filtered_triggers(self):
        mentions = recognize_names(doc("Le president George Bush.", language="fr"), {}, TRIGGERS)
        assert mentions == []


class TestTriggerLoading:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "triggers.tsv"
        path.write_text("en\tbefore\ttitle\tDirector General\n", encoding="utf-8")
        assert load_triggers(path) == [
            TriggerPattern("en", ("director", "general"), "before", "title")
        ]

    def test_bad_position(self, tmp_path):
        path = tmp_path / "triggers.tsv"
        path.write_text("en\tmiddle\ttitle\tx\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_triggers(path)

    def test_known_names(self, tmp_path):
        path = tmp_path / "known.tsv"
        path.write_text("4\tperson\tAngela Merkel\n", encoding="utf-8")
        assert load_known_names(path) == {"angela merkel": (4, "person")}


class TestSimilarity:
    def test_normalization(self):
        assert normalize_name("Al-Qaïda  x") == "_al_qaida_x_"
        assert normalize_name("  ") == ""

    def test_ngrams_match_oracle(self):
        for a, b in [
            ("Mohammed ElBaradei", "Mohamed ElBaradei"),
            ("Muhammad al-Baradai", "Mohammed al-Baradei"),
            ("Vladimír", "Vladimir"),
        ]:
            assert name_similarity(a, b) == pytest.approx(
                gram_cosine_oracle(a, b), abs=1e-12
            )

    def test_frozen_values(self):
        assert name_similarity("Mohammed ElBaradei", "Mohamed ElBaradei") == pytest.approx(
            FROZEN_SIM_CLOSE, abs=1e-12
        )
        assert name_similarity("Muhammad al-Baradai", "Mohammed al-Baradei") == pytest.approx(
            FROZEN_SIM_BOTTLENECK, abs=1e-12
        )

    def test_unrelated_names_are_zero(self):
        assert name_similarity("John Smith", "Angela Merkel") == 0.0

    def test_identity(self):
        assert name_similarity("Angela Merkel", "angela merkel") == pytest.approx(1.0)

    def test_empty_name_is_fatal(self):
        with pytest.raises(ValueError):
            name_similarity("--", "Merkel")

    @given(st.text(alphabet="abcdef -", min_size=2, max_size=12))
    @settings(max_examples=50)
    def test_similarity_symmetric(self, name):
        other = "Merkel " + name
        try:
            ab = name_similarity(name, other)
            ba = name_similarity(other, name)
        except ValueError:
            return
        assert ab == pytest.approx(ba, abs=1e-12)
        assert 0.0 <= ab <= 1.0 + 1e-12


class TestVariantGroups:
    def test_reference_variants_form_one_identity(self):
        groups = variant_groups(TABLE2_VARIANTS)
        assert len(groups) == 1
        assert groups[0] == set(TABLE2_VARIANTS)

    def test_unrelated_names_stay_apart(self):
        groups = variant_groups(TABLE2_VARIANTS + ["John Smith", "Angela Merkel"])
        assert len(groups) == 3

    def test_merge_monotone_in_threshold(self):
        names = TABLE2_VARIANTS + ["John Smith", "Angela Merkel"]
        sizes = [len(variant_groups(names, t)) for t in (0.6, 0.75, 0.9)]
        assert sizes == sorted(sizes)  # higher threshold => same or more groups

    def test_threshold_validation(self):
        with pytest.raises(ValueError):
            variant_groups(["A B"], 0.0)
        with pytest.raises(ValueError):
            variant_groups(["A B"], 1.0)

    def test_canonical_is_longest_then_lexicographic(self):
        assert canonical_variant({"Bob", "Bobby", "Babby"}) == "Babby"
        assert canonical_variant(set(TABLE2_VARIANTS)) == "Mohammed El Baradei"


class TestPersonStore:
    def test_merge_then_resolve(self):
        store = PersonStore()
        records = store.merge_variants(TABLE2_VARIANTS)
        assert len(records) == 1
        assert store.resolve("mohamed elbaradei").person_id == records[0].person_id

    def test_new_variants_extend_existing_identity(self):
        store = PersonStore()
        first = store.merge_variants(["Mohammed ElBaradei"])[0]
        again = store.merge_variants(["Mohammed ElBaradei", "Mohamed ElBaradei"])
        assert [r.person_id for r in again] == [first.person_id]
        assert "Mohamed ElBaradei" in first.variants

    def test_ids_are_stable_and_sequential(self):
        store = PersonStore()
        a = store.merge_variants(["Angela Merkel"])[0]
        b = store.merge_variants(["John Smith"])[0]
        assert (a.person_id, b.person_id) == (1, 2)

    def test_record_mention_accumulates(self):
        store = PersonStore()
        pid = store.merge_variants(["Angela Merkel"])[0].person_id
        store.record_mention(pid, "doc1", "c1", "Chancellor")
        store.record_mention(pid, "doc1", "c1", "Chancellor")
        record = store.persons[pid]
        assert record.article_ids == ["doc1"]
        assert record.cluster_ids == ["c1"]
        assert record.titles == {"Chancellor"}

    def test_corrections_merge(self):
        store = PersonStore()
        a = store.merge_variants(["Angela Merkel"])[0]
        b = store.merge_variants(["A. Merkel"])[0]
        store.apply_corrections([f"merge {a.person_id} {b.person_id}"])
        assert b.person_id not in store.persons
        assert "A. Merkel" in a.variants
        assert store.resolve("A. Merkel").person_id == a.person_id

    def test_corrections_split(self):
        store = PersonStore()
        pid = store.merge_variants(TABLE2_VARIANTS)[0].person_id
        store.apply_corrections([f'split {pid} "Muhammad al-Baradai"'])
        new = store.resolve("Muhammad al-Baradai")
        assert new.person_id != pid
        assert "Muhammad al-Baradai" not in store.persons[pid].variants

    def test_corrections_reject_garbage(self):
        store = PersonStore()
        store.apply_corrections(["# comment", ""])  # ignored
        with pytest.raises(ValueError):
            store.apply_corrections(["frobnicate 1 2"])

    def test_json_roundtrip(self):
        store = PersonStore()
        pid = store.merge_variants(TABLE2_VARIANTS)[0].person_id
        store.record_mention(pid, "doc1", "c1", "Director General")
        clone = PersonStore.from_json(store.to_json())
        assert clone.to_json() == store.to_json()
        assert clone.resolve("Mohamed ElBaradei").person_id == pid
        assert clone.next_id == store.next_id


class TestCoOccurrence:
    def test_counts_pairs_within_cluster(self):
        cooc = CoOccurrenceStore()
        cooc.update("run1", {"c1": {1, 2, 3}})
        assert cooc.count(1, 2) == cooc.count(2, 1) == 1
        assert cooc.count(1, 3) == 1

    def test_idempotent_per_run_and_cluster(self):
        cooc = CoOccurrenceStore()
        cooc.update("run1", {"c1": {1, 2}})
        cooc.update("run1", {"c1": {1, 2}})
        assert cooc.count(1, 2) == 1
        cooc.update("run2", {"c1": {1, 2}})
        assert cooc.count(1, 2) == 2

    def test_json_roundtrip(self):
        cooc = CoOccurrenceStore()
        cooc.update("r", {"c": {1, 2}})
        clone = CoOccurrenceStore.from_json(cooc.to_json())
        assert clone.counts == cooc.counts and clone.seen == cooc.seen


class TestRelatedPersons:
    def make_world(self):
        store = PersonStore()
        ids = {}
        for name, clusters in [
            ("Alpha One", ["c1", "c2", "c3"]),
            ("Beta Two", ["c1", "c2", "c3"]),
            ("Gamma Three", ["c3"]),
        ]:
            pid = store.merge_variants([name])[0].person_id
            for cid in clusters:
                store.record_mention(pid, f"{cid}-doc", cid)
            ids[name] = pid
        cooc = CoOccurrenceStore()
        cooc.update("r", {
            "c1": {ids["Alpha One"], ids["Beta Two"]},
            "c2": {ids["Alpha One"], ids["Beta Two"]},
            "c3": set(ids.values()),
        })
        return store, cooc, ids

    def test_frequent_ranks_by_raw_count(self):
        store, cooc, ids = self.make_world()
        ranked = related_persons(ids["Alpha One"], cooc, store, "frequent")
        assert ranked[0] == (ids["Beta Two"], 3.0)
        assert ranked[1] == (ids["Gamma Three"], 1.0)

    def test_specific_prefers_exclusive_companion(self):
        # Gamma appears only alongside Alpha; specificity outranks the
        # ubiquitous Beta even though Beta co-occurs more often.
        store, cooc, ids = self.make_world()
        by_pid = dict(related_persons(ids["Alpha One"], cooc, store, "specific"))
        assert by_pid[ids["Gamma Three"]] >= 0.0
        assert set(by_pid) == {ids["Beta Two"], ids["Gamma Three"]}

    def test_unknown_person_and_mode(self):
        store, cooc, ids = self.make_world()
        with pytest.raises(KeyError):
            related_persons(999, cooc, store)
        with pytest.raises(ValueError):
            related_persons(ids["Alpha One"], cooc, store, "magic")

    def test_isolated_person_has_no_neighbours(self):
        store = PersonStore()
        pid = store.merge_variants(["Solo Person"])[0].person_id
        assert related_persons(pid, CoOccurrenceStore(), store) == []


class TestEncyclopedia:
    def make_person(self):
        store = PersonStore()
        return store.merge_variants(["Angela Merkel"])[0]

    def test_lookup_caches_results(self, tmp_path):
        person = self.make_person()
        calls = []

        def fetch(url):
            calls.append(url)
            return "good" in url

        cache = EncyclopediaCache(tmp_path / "cache.json")
        endpoints = ["https://good.example/{slug}", "https://bad.example/{slug}"]
        urls = encyclopedia_lookup(person, endpoints, cache, fetch)
        assert urls == ["https://good.example/Angela_Merkel"]
        assert person.encyclopedia_urls == urls
        # Second lookup answers entirely from cache.
        encyclopedia_lookup(person, endpoints, cache, fetch)
        assert len(calls) == 2
        cache.save()
        reloaded = EncyclopediaCache(tmp_path / "cache.json")
        assert reloaded.data == cache.data

    def test_offline_mode_never_fetches(self):
        person = self.make_person()

        def fetch(url):  # pragma: no cover - must not run
            raise AssertionError("network access in offline mode")

        cache = EncyclopediaCache()
        cache.data["https://known.example/Angela_Merkel"] = True
        urls = encyclopedia_lookup(
            person,
            ["https://known.example/{slug}", "https://unknown.example/{slug}"],
            cache, fetch, offline=True,
        )
        assert urls == ["https://known.example/Angela_Merkel"]

    def test_fetch_failure_is_not_cached(self):
        person = self.make_person()

        def fetch(url):
            raise OSError("network down")

        cache = EncyclopediaCache()
        assert encyclopedia_lookup(person, ["https://x.example/{slug}"], cache, fetch) == []
        assert cache.data == {}  # stays unknown, retried next run
