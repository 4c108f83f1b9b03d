"""End-to-end pipeline stages over run directories, plus the CLI."""

import json

import pytest
from click.testing import CliRunner

from fixture_corpus import (
    EN_DOCS,
    TABLE2_VARIANTS,
    write_collection,
    write_resources,
)
from textatlas import pipeline
from textatlas.cli import main
from textatlas.runio import REQUIRED_ARTIFACTS, RunDir


def read(run_dir, name):
    return json.loads((run_dir / name).read_text(encoding="utf-8"))


class TestStages:
    def test_all_artifacts_written(self, fixture_world):
        run = RunDir(fixture_world["en_run"])
        assert run.missing_artifacts() == []
        for name in REQUIRED_ARTIFACTS:
            assert run.read(name)["schemaVersion"] == 1

    def test_meta_records_resource_hashes(self, fixture_world):
        meta = RunDir(fixture_world["en_run"]).meta()
        assert meta["runId"] == "en-run"
        assert meta["language"] == "en"
        assert meta["documentCount"] == len(EN_DOCS)
        assert {"frequencyModel", "gazetteer", "termList", "triggers"} <= set(
            meta["resources"]
        )

    def test_cluster_structure(self, fixture_world):
        clusters = read(fixture_world["en_run"], "clusters.json")["clusters"]
        members = {c["clusterId"]: c["members"] for c in clusters}
        assert members["en-run-c1"] == [
            "en-a1.txt", "en-a2.txt", "en-a3.txt", "en-a4.txt",
        ]
        assert members["en-run-c2"] == ["en-b1.txt", "en-b2.txt"]

    def test_names_merge_reference_variants(self, fixture_world):
        persons = read(fixture_world["en_run"], "names.json")["persons"]
        baradei = [p for p in persons if len(p["variants"]) == 12]
        assert len(baradei) == 1
        assert set(baradei[0]["variants"]) == set(TABLE2_VARIANTS)
        assert baradei[0]["canonical"] == "Mohammed El Baradei"

    def test_mentions_carry_person_ids(self, fixture_world):
        names = read(fixture_world["en_run"], "names.json")
        for rows in names["mentions"].values():
            for row in rows:
                assert row["personId"] in {p["personId"] for p in names["persons"]}

    def test_france_reference_count(self, fixture_world):
        countries = read(fixture_world["en_run"], "places.json")["countries"]
        fr = [c for c in countries["en-b1.txt"] if c["code"] == "FR"]
        assert fr[0]["rawCount"] == 4

    def test_terms_in_nuclear_cluster(self, fixture_world):
        terms = read(fixture_world["en_run"], "terms.json")
        by_id = {t["termId"]: t for t in terms["terms"]["en-run-c1"]}
        assert by_id["plutonium-en"]["count"] == 7
        assert len(terms["kwic"]["en-run-c1"]["plutonium-en"]) == 7

    def test_links_written_to_both_runs(self, fixture_world):
        for key in ("en_run", "es_run"):
            links = read(fixture_world[key], "links.json")["links"]
            assert (links[0]["clusterA"], links[0]["clusterB"]) == (
                "en-run-c1", "es-run-c1",
            )
            assert links[0]["score"] >= 0.5


class TestDedupStage:
    def test_flag_and_remove(self, tmp_path):
        resources = write_resources(tmp_path / "resources")
        docs = [
            ("one.txt", "First", "alpha beta gamma delta epsilon zeta"),
            ("two.txt", "Second", "alpha beta gamma delta epsilon zeta"),
            ("three.txt", "Third", "totally different words appear here now"),
        ]
        collection = write_collection(tmp_path / "src", docs, "en")
        run_dir = tmp_path / "run"
        pipeline.ingest(collection, "txt", run_dir, run_id="dup-run")
        pairs = pipeline.dedup(run_dir, 0.5)
        assert [(a, b) for a, b, _ in pairs] == [("one.txt", "two.txt")]
        data = read(run_dir, "duplicates.json")
        assert data["removed"] == []

        pipeline.dedup(run_dir, 0.5, remove=True)
        data = read(run_dir, "duplicates.json")
        assert data["removed"] == ["two.txt"]
        remaining = {d["id"] for d in read(run_dir, "documents.json")["documents"]}
        assert remaining == {"one.txt", "three.txt"}
        assert resources  # keep the fixture tree alive for inspection


class TestCli:
    @pytest.fixture()
    def world(self, tmp_path):
        resources = write_resources(tmp_path / "resources")
        collection = write_collection(
            tmp_path / "src",
            [("a.txt", "Title A", "North Korea has restarted its plutonium programme. "
                                  "President George Bush said the freeze must hold.")],
            "en",
        )
        return tmp_path, resources, collection

    def run(self, *args):
        result = CliRunner().invoke(main, [str(a) for a in args])
        assert result.exit_code == 0, result.output
        return result.output

    def test_full_pipeline_via_cli(self, world):
        tmp_path, res, collection = world
        run_dir = tmp_path / "run"
        out = self.run("ingest", "--format", "txt", "--in", collection, "--out", run_dir)
        assert "ingested 1 documents" in out
        self.run("dedup", run_dir)
        self.run("keywords", "--model", res["en_freq"], "--stoplist", res["en_stop"], run_dir)
        out = self.run("names", "--triggers", res["triggers"], run_dir)
        assert "identities" in out
        self.run("geotag", "--gazetteer", res["gazetteer"], "--triggers", res["triggers"], run_dir)
        out = self.run("cluster", run_dir)
        assert "run-c1" in out
        self.run("terms", "--list", res["terms"], run_dir)
        store_dir = tmp_path / "store"
        out = self.run("persist", "--store", store_dir, run_dir)
        assert "persisted" in out
        report_dir = tmp_path / "report"
        out = self.run("report", "--format", "html", "--store", store_dir,
                       "--out", report_dir, "run")
        assert "wrote" in out
        assert (report_dir / "index.html").exists()

    def test_persons_show_and_related(self, fixture_world, tmp_path):
        store_dir = fixture_world["store"].root
        out = self.run("persons", "show", "--store", store_dir, "1")
        payload = json.loads(out)
        assert payload["personId"] == 1
        self.run("persons", "related", "--store", store_dir, "--mode", "specific", "1")

    def test_persons_show_unknown_id_fails(self, fixture_world):
        result = CliRunner().invoke(
            main, ["persons", "show", "--store", str(fixture_world["store"].root), "999"]
        )
        assert result.exit_code != 0
