"""Static JSON and HTML reports rendered from the historical store."""

from __future__ import annotations

import json
import re
from pathlib import Path

from jinja2 import DictLoader, Environment, select_autoescape

from .store import Store

SCHEMA_VERSION = 1


def slug(value: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "-", value).strip("-") or "x"


_TEMPLATES = {
    "base.html": """<!doctype html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{% block title %}{% endblock %}</title>
<style>
 body { font-family: sans-serif; margin: 2em auto; max-width: 60em; }
 .kwic { font-family: monospace; white-space: pre; }
 .keyness { color: #666; }
</style>
</head>
<body>
{% block body %}{% endblock %}
</body>
</html>
""",
    "index.html": """{% extends "base.html" %}
{% block title %}Run {{ run.runId }}{% endblock %}
{% block body %}
<h1>Run {{ run.runId }} ({{ run.language }})</h1>
<p>{{ run.documentCount }} documents, {{ clusters|length }} clusters.</p>
<ol>
{% for c in clusters %}
 <li><a href="cluster-{{ slug(c.clusterId) }}.html">{{ c.title }}</a>
     ({{ c.size }} articles)</li>
{% endfor %}
</ol>
{% if other_runs %}
<h2>Other runs in this store</h2>
<ul>
{% for cid, title in other_runs %}
 <li><a href="cluster-{{ slug(cid) }}.html">{{ title }}</a></li>
{% endfor %}
</ul>
{% endif %}
{% endblock %}
""",
    "cluster.html": """{% extends "base.html" %}
{% block title %}{{ cluster.title }}{% endblock %}
{% block body %}
<p><a href="index.html">Index</a></p>
<h1>{{ cluster.title }}</h1>
<p>Cluster {{ cluster.clusterId }}, {{ cluster.size }} articles,
   language {{ cluster.language }}.</p>

<h2>Keywords</h2>
<p>{% for term, value in cluster.keywords[:20] %}
 {{ term }} <span class="keyness">{{ "%.0f"|format(value) }}</span>{% if not loop.last %}, {% endif %}
{% endfor %}</p>

<h2>Countries</h2>
<ul>
{% for row in cluster.countries %}
 <li>{{ row.code }}: {{ row.rawCount }} references
     <span class="keyness">{{ "%.1f"|format(row.keyness) }}</span></li>
{% endfor %}
</ul>

<h2>Names</h2>
<ul>
{% for row in cluster.names %}
 <li><a href="person-{{ row.personId }}.html">{{ row.surface }}</a>
     {% if row.trigger %}({{ row.trigger }}){% endif %}</li>
{% endfor %}
</ul>

<h2>Terms</h2>
<ul>
{% for row in cluster.terms %}
 <li><a href="#kwic-{{ slug(row.termId) }}">{{ row.displayForm or row.termId }}</a>
     [{{ row.count }}]
     {% if row.forms %}({{ row.forms|join('|') }}){% endif %}
     {% if row.subjectField %}&mdash; {{ row.subjectField }}{% endif %}</li>
{% endfor %}
</ul>

<h2>Places</h2>
<ul>
{% for feature in map.features if feature.properties.kind != 'country-aggregate' %}
 <li>{{ feature.properties.name }} ({{ feature.properties.countryCode }}):
     {{ feature.properties.count }} mentions</li>
{% endfor %}
</ul>
<script type="application/geo+json" id="map-data">
{{ map_json }}
</script>

<h2>Related clusters</h2>
<ul>
{% for link in cluster.links %}
 <li>{% if link.cluster in known_clusters %}
     <a href="cluster-{{ slug(link.cluster) }}.html">{{ link.cluster }}</a>
     {% else %}{{ link.cluster }}{% endif %}
     (score {{ "%.2f"|format(link.score) }})</li>
{% endfor %}
</ul>

<h2>Articles</h2>
<ul>
{% for doc_id in cluster.members %}
 <li><a href="article-{{ slug(doc_id) }}.html">{{ doc_id }}</a></li>
{% endfor %}
</ul>

{% for row in cluster.terms %}
<h3 id="kwic-{{ slug(row.termId) }}">Contexts: {{ row.displayForm or row.termId }}</h3>
{% for hit in kwic.get(row.termId, []) %}
<div class="kwic">{{ hit.left }}<b>{{ hit.matchedForm }}</b>{{ hit.right }}</div>
{% endfor %}
{% endfor %}
{% endblock %}
""",
    "person.html": """{% extends "base.html" %}
{% block title %}{{ person.canonical }}{% endblock %}
{% block body %}
<h1>{{ person.canonical }}</h1>
<h2>Variants</h2>
<ul>{% for v in person.variants %}<li>{{ v }}</li>{% endfor %}</ul>
{% if person.titles %}
<h2>Titles</h2>
<ul>{% for t in person.titles %}<li>{{ t }}</li>{% endfor %}</ul>
{% endif %}
<h2>Encyclopedia</h2>
<ul>{% for url in person.encyclopediaUrls %}
 <li><a href="{{ url }}">{{ url }}</a></li>
{% endfor %}</ul>
<h2>Related (most frequent)</h2>
<ul>{% for pid, score, name in related_frequent %}
 <li><a href="person-{{ pid }}.html">{{ name }}</a> ({{ "%.0f"|format(score) }})</li>
{% endfor %}</ul>
<h2>Related (most specific)</h2>
<ul>{% for pid, score, name in related_specific %}
 <li><a href="person-{{ pid }}.html">{{ name }}</a> ({{ "%.1f"|format(score) }})</li>
{% endfor %}</ul>
<h2>Clusters</h2>
<ul>{% for cid in person.clusterIds if cid in known_clusters %}
 <li><a href="cluster-{{ slug(cid) }}.html">{{ cid }}</a></li>
{% endfor %}</ul>
<h2>Articles</h2>
<ul>{% for doc_id in person.articleIds if doc_id in known_articles %}
 <li><a href="article-{{ slug(doc_id) }}.html">{{ doc_id }}</a></li>
{% endfor %}</ul>
{% endblock %}
""",
    "article.html": """{% extends "base.html" %}
{% block title %}{{ doc.title }}{% endblock %}
{% block body %}
<h1>{{ doc.title }}</h1>
<p>{{ doc.id }} &middot; {{ doc.source }} &middot; {{ doc.language }}
   {% if doc.published %}&middot; {{ doc.published }}{% endif %}</p>
<p>{{ doc.body }}</p>
{% endblock %}
""",
}


def _environment() -> Environment:
    env = Environment(
        loader=DictLoader(_TEMPLATES), autoescape=select_autoescape(["html"])
    )
    env.globals["slug"] = slug
    return env


def run_report(store: Store, run_id: str) -> dict:
    """The versioned JSON report for one run."""
    return {
        "schemaVersion": SCHEMA_VERSION,
        "run": store.run_record(run_id),
        "clusters": store.clusters_of_run(run_id),
    }


def render_json(store: Store, run_id: str, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = run_report(store, run_id)
    written = []
    path = out / f"run-{slug(run_id)}.json"
    path.write_text(
        json.dumps(report, ensure_ascii=False, indent=1, sort_keys=True),
        encoding="utf-8",
    )
    written.append(path)
    for cluster in report["clusters"]:
        path = out / f"cluster-{slug(cluster['clusterId'])}.json"
        path.write_text(
            json.dumps(cluster, ensure_ascii=False, indent=1, sort_keys=True),
            encoding="utf-8",
        )
        written.append(path)
    return written


def render_html(store: Store, run_id: str, out_dir: str | Path) -> list[Path]:
    """Static browsable site: every internal link resolves within out_dir."""
    env = _environment()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    run = store.run_record(run_id)
    clusters = store.clusters_of_run(run_id)
    all_clusters = []
    for rid in store.run_ids():
        all_clusters.extend(store.clusters_of_run(rid))
    known_clusters = {c["clusterId"] for c in all_clusters}

    other_runs = [
        (c["clusterId"], c["title"])
        for c in all_clusters
        if c["runId"] != run_id
    ]
    index_page = env.get_template("index.html").render(
        run=run, clusters=clusters, other_runs=other_runs
    )
    path = out / "index.html"
    path.write_text(index_page, encoding="utf-8")
    written.append(path)

    known_articles = set()
    for rid in store.run_ids():
        for doc in store.documents_of_run(rid):
            known_articles.add(doc["id"])
            page = env.get_template("article.html").render(doc=doc)
            doc_path = out / f"article-{slug(doc['id'])}.html"
            doc_path.write_text(page, encoding="utf-8")
            written.append(doc_path)

    for cluster in all_clusters:
        cid = cluster["clusterId"]
        geo = store.cluster_map(cid)
        kwic = store.cluster_kwic(cid)
        page = env.get_template("cluster.html").render(
            cluster=cluster,
            map=geo,
            map_json=json.dumps(geo),
            kwic=kwic,
            known_clusters=known_clusters,
        )
        cluster_path = out / f"cluster-{slug(cid)}.html"
        cluster_path.write_text(page, encoding="utf-8")
        written.append(cluster_path)

    persons = store.persons()
    cooc = store.cooccurrence()
    from ..entities import related_persons

    for pid, record in sorted(persons.persons.items()):
        related = {}
        for mode in ("frequent", "specific"):
            related[mode] = [
                (other, score, persons.persons[other].canonical)
                for other, score in related_persons(pid, cooc, persons, mode)
            ]
        page = env.get_template("person.html").render(
            person={
                "personId": pid,
                "canonical": record.canonical,
                "variants": sorted(record.variants),
                "titles": sorted(record.titles),
                "encyclopediaUrls": record.encyclopedia_urls,
                "clusterIds": record.cluster_ids,
                "articleIds": record.article_ids,
            },
            related_frequent=related["frequent"],
            related_specific=related["specific"],
            known_clusters=known_clusters,
            known_articles=known_articles,
        )
        person_path = out / f"person-{pid}.html"
        person_path.write_text(page, encoding="utf-8")
        written.append(person_path)

    return written
