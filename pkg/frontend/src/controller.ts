import { ApiClient, ApiError } from "./api.js";
import type { Route } from "./routes.js";
import type { ClusterRecord, KwicLine, TermRow } from "./types.js";
import {
  renderClusterPage,
  renderNotFound,
  renderPersonPage,
  renderRunIndex,
  renderSearchPage,
} from "./views.js";

/**
 * Resolve a route to its HTML using the API alone. Pure with respect to
 * the client: same store state and route always give the same markup,
 * which is what the end-to-end crawl exercises.
 */
export async function renderRoute(api: ApiClient, route: Route): Promise<string> {
  try {
    switch (route.kind) {
      case "runs": {
        const runs = await api.runs();
        const clustersByRun = new Map<string, ClusterRecord[]>();
        for (const run of runs) {
          clustersByRun.set(run.runId, await api.runClusters(run.runId, "size"));
        }
        return renderRunIndex(runs, clustersByRun);
      }
      case "run": {
        const runs = await api.runs();
        const run = runs.find((r) => r.runId === route.runId);
        if (!run) return renderNotFound(`no such run: ${route.runId}`);
        const clustersByRun = new Map([
          [run.runId, await api.runClusters(run.runId, "size")],
        ]);
        return renderRunIndex([run], clustersByRun);
      }
      case "cluster": {
        const cluster = await api.cluster(route.clusterId);
        const [map, docs] = await Promise.all([
          api.clusterMap(route.clusterId),
          api.clusterDocuments(route.clusterId),
        ]);
        let kwic: { term: TermRow; lines: KwicLine[] } | null = null;
        if (route.termId !== undefined) {
          const term = cluster.terms.find((t) => t.termId === route.termId);
          if (!term) return renderNotFound(`no such term in cluster: ${route.termId}`);
          kwic = { term, lines: await api.clusterKwic(route.clusterId, route.termId) };
        }
        return renderClusterPage(cluster, map, docs, kwic);
      }
      case "person": {
        const person = await api.person(route.personId);
        return renderPersonPage(person, route.mode);
      }
      case "search": {
        if (Object.keys(route.params).length === 0) {
          return renderSearchPage(route.params, null);
        }
        try {
          return renderSearchPage(route.params, await api.search(route.params));
        } catch (err) {
          if (err instanceof ApiError && err.status === 400) {
            return renderSearchPage(route.params, null, `invalid query: ${err.message}`);
          }
          throw err;
        }
      }
      case "notFound":
        return renderNotFound(route.message);
    }
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      return renderNotFound(err.message);
    }
    throw err;
  }
}
