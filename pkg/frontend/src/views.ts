import type { SearchParams } from "./api.js";
import { formatHash } from "./routes.js";
import type {
  ClusterRecord,
  DocumentRecord,
  KwicLine,
  MapLayer,
  PersonRecord,
  RunRecord,
  SearchResults,
  TermRow,
} from "./types.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

const clusterHref = (clusterId: string) => formatHash({ kind: "cluster", clusterId });
const personHref = (personId: number, mode: "frequent" | "specific" = "frequent") =>
  formatHash({ kind: "person", personId, mode });
const termHref = (clusterId: string, termId: string) =>
  formatHash({ kind: "cluster", clusterId, termId });

// ---------------------------------------------------------------- run index

/** Front page: every run with its clusters, largest story first. */
export function renderRunIndex(
  runs: RunRecord[],
  clustersByRun: Map<string, ClusterRecord[]>,
): string {
  const sections = runs.map((run) => {
    const clusters = clustersByRun.get(run.runId) ?? [];
    const rows = clusters.map(
      (c) => `<li class="cluster-row">
        <a href="${clusterHref(c.clusterId)}">${escapeHtml(c.title)}</a>
        <span class="size">${c.size} article${c.size === 1 ? "" : "s"}</span>
        <span class="keywords">${escapeHtml(
          c.keywords.slice(0, 5).map(([t]) => t).join(", "),
        )}</span>
      </li>`,
    );
    return `<section class="run" data-run-id="${escapeHtml(run.runId)}">
      <h2>${escapeHtml(run.runId)}
        <small>${escapeHtml(run.language ?? "")} · ${run.documentCount} documents</small>
      </h2>
      <ol class="cluster-index">${rows.join("\n")}</ol>
    </section>`;
  });
  return `<div class="view view-runs">
    <h1>Runs</h1>
    ${searchForm({})}
    ${sections.join("\n") || `<p class="empty">No runs in the store yet.</p>`}
  </div>`;
}

// -------------------------------------------------------------- cluster page

export function renderClusterPage(
  cluster: ClusterRecord,
  map: MapLayer,
  docs: DocumentRecord[],
  kwic: { term: TermRow; lines: KwicLine[] } | null = null,
): string {
  const keywords = cluster.keywords
    .slice(0, 12)
    .map(([term, value]) => `<li>${escapeHtml(term)} <small>${value.toFixed(1)}</small></li>`)
    .join("");

  const names = cluster.names.length
    ? cluster.names
        .map(
          (n) => `<li><a href="${personHref(n.personId)}">${escapeHtml(n.surface)}</a>${
            n.trigger ? ` <small class="trigger">${escapeHtml(n.trigger)}</small>` : ""
          }</li>`,
        )
        .join("")
    : `<li class="empty">no names recognized</li>`;

  const terms = cluster.terms.length
    ? cluster.terms
        .map(
          (t) => `<li><a class="term" href="${termHref(cluster.clusterId, t.termId)}"
            data-term-id="${escapeHtml(t.termId)}">${escapeHtml(t.displayForm)}</a>
            <span class="count">${t.count}</span>${
              t.subjectField ? ` <small class="field">${escapeHtml(t.subjectField)}</small>` : ""
            }</li>`,
        )
        .join("")
    : `<li class="empty">no specialist terms found</li>`;

  const links = cluster.links.length
    ? cluster.links
        .map(
          (l) => `<li><a href="${clusterHref(l.cluster)}">${escapeHtml(l.cluster)}</a>
            <span class="score">${l.score.toFixed(2)}</span></li>`,
        )
        .join("")
    : `<li class="empty">no cross-lingual links</li>`;

  const documents = docs
    .map((d) => `<li>${escapeHtml(d.title)} <small>${escapeHtml(d.id)}</small></li>`)
    .join("");

  return `<div class="view view-cluster" data-cluster-id="${escapeHtml(cluster.clusterId)}">
    <p class="crumbs"><a href="#/runs">runs</a> › ${escapeHtml(cluster.runId)}</p>
    <h1>${escapeHtml(cluster.title)}</h1>
    <p class="meta">${escapeHtml(cluster.language)} · ${cluster.size} articles</p>
    <div class="columns">
      <section><h3>Keywords</h3><ul class="keywords">${keywords}</ul></section>
      <section><h3>Names</h3><ul class="names">${names}</ul></section>
      <section><h3>Terms</h3><ul class="terms">${terms}</ul></section>
      <section><h3>Linked stories</h3><ul class="links">${links}</ul></section>
    </div>
    <section><h3>Map</h3>${renderMapSvg(map)}</section>
    <section><h3>Articles</h3><ul class="documents">${documents}</ul></section>
    ${kwic ? renderKwicPanel(kwic.term, kwic.lines) : ""}
  </div>`;
}

/** Contexts overlay shown when a term is clicked. */
export function renderKwicPanel(term: TermRow, lines: KwicLine[]): string {
  const rows = lines.length
    ? lines
        .map(
          (line) => `<tr>
        <td class="left">${escapeHtml(line.left)}</td>
        <td class="hit">${escapeHtml(line.matchedForm)}</td>
        <td class="right">${escapeHtml(line.right)}</td>
        <td class="doc">${escapeHtml(line.docId)}</td>
      </tr>`,
        )
        .join("\n")
    : `<tr><td class="empty" colspan="4">no contexts</td></tr>`;
  return `<aside class="kwic-panel" data-term-id="${escapeHtml(term.termId)}">
    <h3>${escapeHtml(term.displayForm)} <small>${lines.length} contexts</small>
      <a class="close" href="#close-kwic" data-close-kwic>×</a></h3>
    <table class="kwic">${rows}</table>
  </aside>`;
}

/**
 * Inline SVG map from the GeoJSON layer. Equirectangular projection;
 * circle size and country shading scale with log(count + 1) so one busy
 * capital cannot wash out everything else.
 */
export function renderMapSvg(layer: MapLayer, width = 560, height = 280): string {
  const located = layer.features.filter((f) => f.geometry !== null);
  if (located.length === 0) {
    return `<svg class="geo-map" viewBox="0 0 ${width} ${height}"
      xmlns="http://www.w3.org/2000/svg"><text x="10" y="20">no located places</text></svg>`;
  }
  const maxLog = Math.max(...located.map((f) => Math.log(f.properties.count + 1)));
  const project = ([lon, lat]: [number, number]): [number, number] => [
    ((lon + 180) / 360) * width,
    ((90 - lat) / 180) * height,
  ];
  const shapes = located.map((f) => {
    const [x, y] = project(f.geometry!.coordinates);
    const intensity = Math.log(f.properties.count + 1) / maxLog;
    const isAggregate = f.properties.kind === "country-aggregate";
    const r = (isAggregate ? 14 : 5) * (0.4 + 0.6 * intensity);
    const label = isAggregate
      ? `${f.properties.countryCode}: ${f.properties.count} references`
      : `${f.properties.name ?? f.properties.placeId}: ${f.properties.count}`;
    return `<circle cx="${x.toFixed(1)}" cy="${y.toFixed(1)}" r="${r.toFixed(1)}"
      class="${isAggregate ? "country" : "place"}"
      fill-opacity="${(0.25 + 0.75 * intensity).toFixed(2)}"
      data-count="${f.properties.count}"><title>${escapeHtml(label)}</title></circle>`;
  });
  return `<svg class="geo-map" viewBox="0 0 ${width} ${height}"
    xmlns="http://www.w3.org/2000/svg">${shapes.join("\n")}</svg>`;
}

// --------------------------------------------------------------- person page

export function renderPersonPage(
  person: PersonRecord,
  mode: "frequent" | "specific",
): string {
  const variants = person.variants
    .map((v) => `<li class="variant">${escapeHtml(v)}</li>`)
    .join("");
  const titles = person.titles.map(escapeHtml).join(", ");
  const encyclopedia = person.encyclopediaUrls.length
    ? person.encyclopediaUrls
        .map(
          (url) => `<li><a rel="external" href="${escapeHtml(url)}">${escapeHtml(url)}</a></li>`,
        )
        .join("")
    : `<li class="empty">no encyclopedia entries</li>`;
  const related = person.related[mode].length
    ? person.related[mode]
        .map(
          (r) => `<li><a href="${personHref(r.personId)}">${escapeHtml(r.canonical)}</a>
          <span class="score">${r.score.toFixed(2)}</span></li>`,
        )
        .join("")
    : `<li class="empty">no related names</li>`;
  const clusters = person.clusterIds
    .map((cid) => `<li><a href="${clusterHref(cid)}">${escapeHtml(cid)}</a></li>`)
    .join("");
  const other = mode === "frequent" ? "specific" : "frequent";

  return `<div class="view view-person" data-person-id="${person.personId}">
    <p class="crumbs"><a href="#/runs">runs</a> › persons</p>
    <h1>${escapeHtml(person.canonical)}</h1>
    <p class="meta">${escapeHtml(person.kind)}${titles ? ` · ${titles}` : ""}</p>
    <div class="columns">
      <section><h3>Spelling variants</h3><ul class="variants">${variants}</ul></section>
      <section><h3>Encyclopedia</h3><ul class="encyclopedia">${encyclopedia}</ul></section>
      <section>
        <h3>Related names
          <a class="mode-toggle" href="${personHref(person.personId, other)}">show ${other}</a>
        </h3>
        <ul class="related" data-mode="${mode}">${related}</ul>
      </section>
      <section><h3>Appears in</h3><ul class="postings">${clusters}</ul></section>
    </div>
  </div>`;
}

// -------------------------------------------------------------------- search

function searchForm(params: SearchParams): string {
  const value = (key: keyof SearchParams) => escapeHtml(params[key] ?? "");
  return `<form class="search" data-search>
    <input name="person" placeholder="person" value="${value("person")}">
    <input name="keyword" placeholder="keyword" value="${value("keyword")}">
    <input name="country" placeholder="country code" value="${value("country")}">
    <input name="date" placeholder="YYYY-MM-DD" value="${value("date")}">
    <button type="submit">Search</button>
  </form>`;
}

export function renderSearchPage(
  params: SearchParams,
  results: SearchResults | null,
  error: string | null = null,
): string {
  let body: string;
  if (error !== null) {
    body = `<p class="error">${escapeHtml(error)}</p>`;
  } else if (results === null) {
    body = `<p class="empty">Enter a person, keyword, country code or date.</p>`;
  } else {
    const sections: string[] = [];
    const clusterList = (ids: string[]) =>
      ids.length
        ? `<ul>${ids
            .map((cid) => `<li><a href="${clusterHref(cid)}">${escapeHtml(cid)}</a></li>`)
            .join("")}</ul>`
        : `<p class="empty">nothing found</p>`;
    if (results.person) {
      const articles = results.person.articles.length
        ? `<p class="articles">articles: ${results.person.articles.map(escapeHtml).join(", ")}</p>`
        : "";
      sections.push(`<section><h3>Person</h3>${clusterList(results.person.clusters)}${articles}</section>`);
    }
    if (results.keyword) {
      sections.push(`<section><h3>Keyword</h3>${clusterList(results.keyword.clusters)}</section>`);
    }
    if (results.country) {
      sections.push(`<section><h3>Country</h3>${clusterList(results.country.clusters)}</section>`);
    }
    if (results.date) {
      const runs = results.date.runs.length
        ? `<ul>${results.date.runs
            .map(
              (rid) =>
                `<li><a href="${formatHash({ kind: "run", runId: rid })}">${escapeHtml(rid)}</a></li>`,
            )
            .join("")}</ul>`
        : `<p class="empty">nothing found</p>`;
      sections.push(`<section><h3>Date</h3>${runs}</section>`);
    }
    body = sections.join("\n");
  }
  return `<div class="view view-search">
    <p class="crumbs"><a href="#/runs">runs</a> › search</p>
    <h1>Search</h1>
    ${searchForm(params)}
    ${body}
  </div>`;
}

export function renderNotFound(message: string): string {
  return `<div class="view view-not-found">
    <h1>Not found</h1>
    <p>${escapeHtml(message)}</p>
    <p><a href="#/runs">back to runs</a></p>
  </div>`;
}
