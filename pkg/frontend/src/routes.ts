import type { SearchParams } from "./api.js";

/** Hash-based routes; every view is reproducible from the API alone. */
export type Route =
  | { kind: "runs" }
  | { kind: "run"; runId: string }
  | { kind: "cluster"; clusterId: string; termId?: string }
  | { kind: "person"; personId: number; mode: "frequent" | "specific" }
  | { kind: "search"; params: SearchParams }
  | { kind: "notFound"; message: string };

export function parseHash(hash: string): Route {
  const raw = hash.replace(/^#/, "") || "/";
  const [path, queryString] = raw.split("?", 2);
  const query = new URLSearchParams(queryString ?? "");
  const parts = path.split("/").filter((p) => p !== "").map(decodeURIComponent);

  if (parts.length === 0 || (parts.length === 1 && parts[0] === "runs")) {
    return { kind: "runs" };
  }
  if (parts[0] === "runs" && parts.length === 2) {
    return { kind: "run", runId: parts[1] };
  }
  if (parts[0] === "clusters" && parts.length === 2) {
    return { kind: "cluster", clusterId: parts[1] };
  }
  if (parts[0] === "clusters" && parts.length === 4 && parts[2] === "terms") {
    return { kind: "cluster", clusterId: parts[1], termId: parts[3] };
  }
  if (parts[0] === "persons" && parts.length === 2 && /^\d+$/.test(parts[1])) {
    const mode = query.get("mode") === "specific" ? "specific" : "frequent";
    return { kind: "person", personId: Number(parts[1]), mode };
  }
  if (parts[0] === "search" && parts.length === 1) {
    const params: SearchParams = {};
    for (const key of ["person", "keyword", "country", "date"] as const) {
      const value = query.get(key);
      if (value) params[key] = value;
    }
    return { kind: "search", params };
  }
  return { kind: "notFound", message: `no such page: ${raw}` };
}

export function formatHash(route: Route): string {
  switch (route.kind) {
    case "runs":
      return "#/runs";
    case "run":
      return `#/runs/${encodeURIComponent(route.runId)}`;
    case "cluster":
      return route.termId === undefined
        ? `#/clusters/${encodeURIComponent(route.clusterId)}`
        : `#/clusters/${encodeURIComponent(route.clusterId)}/terms/${encodeURIComponent(route.termId)}`;
    case "person": {
      const suffix = route.mode === "specific" ? "?mode=specific" : "";
      return `#/persons/${route.personId}${suffix}`;
    }
    case "search": {
      const query = new URLSearchParams();
      for (const key of ["person", "keyword", "country", "date"] as const) {
        const value = route.params[key];
        if (value) query.set(key, value);
      }
      const qs = query.toString();
      return qs ? `#/search?${qs}` : "#/search";
    }
    case "notFound":
      return "#/runs";
  }
}
