import type {
  ClusterRecord,
  DocumentRecord,
  KwicLine,
  MapLayer,
  PersonRecord,
  RelatedEntry,
  RunRecord,
  SearchResults,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly url: string,
    detail: string,
  ) {
    super(`${status} for ${url}: ${detail}`);
  }
}

export interface SearchParams {
  person?: string;
  keyword?: string;
  country?: string;
  date?: string;
}

/** Thin typed client; the UI talks to the delivery API and nothing else. */
export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async get<T>(path: string, params?: Record<string, string>): Promise<T> {
    let url = this.baseUrl + path;
    if (params && Object.keys(params).length > 0) {
      url += "?" + new URLSearchParams(params).toString();
    }
    const response = await fetch(url);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        detail = JSON.stringify(await response.json());
      } catch {
        // keep the status text
      }
      throw new ApiError(response.status, url, detail);
    }
    return (await response.json()) as T;
  }

  runs(): Promise<RunRecord[]> {
    return this.get("/runs");
  }

  runClusters(runId: string, sort: "size" | "related" = "size"): Promise<ClusterRecord[]> {
    return this.get(`/runs/${encodeURIComponent(runId)}/clusters`, { sort });
  }

  cluster(clusterId: string): Promise<ClusterRecord> {
    return this.get(`/clusters/${encodeURIComponent(clusterId)}`);
  }

  clusterMap(clusterId: string): Promise<MapLayer> {
    return this.get(`/clusters/${encodeURIComponent(clusterId)}/map`);
  }

  clusterKwic(clusterId: string, termId: string): Promise<KwicLine[]> {
    return this.get(`/clusters/${encodeURIComponent(clusterId)}/kwic`, { term: termId });
  }

  clusterDocuments(clusterId: string): Promise<DocumentRecord[]> {
    return this.get(`/clusters/${encodeURIComponent(clusterId)}/documents`);
  }

  person(personId: number): Promise<PersonRecord> {
    return this.get(`/persons/${personId}`);
  }

  personRelated(personId: number, mode: "frequent" | "specific"): Promise<RelatedEntry[]> {
    return this.get(`/persons/${personId}/related`, { mode });
  }

  search(params: SearchParams): Promise<SearchResults> {
    const query: Record<string, string> = {};
    for (const key of ["person", "keyword", "country", "date"] as const) {
      const value = params[key];
      if (value !== undefined && value !== "") query[key] = value;
    }
    return this.get("/search", query);
  }
}
