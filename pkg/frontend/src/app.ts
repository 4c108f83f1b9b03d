import { ApiClient } from "./api.js";
import { renderRoute } from "./controller.js";
import { formatHash, parseHash } from "./routes.js";
import { renderKwicPanel } from "./views.js";

const api = new ApiClient(
  (window as unknown as { TEXTATLAS_API?: string }).TEXTATLAS_API ?? "",
);
const root = document.getElementById("app")!;

let renderToken = 0;

// Concurrent navigations race; only the newest one may write the view.
async function show(): Promise<void> {
  const token = ++renderToken;
  const route = parseHash(window.location.hash);
  try {
    const html = await renderRoute(api, route);
    if (token === renderToken) root.innerHTML = html;
  } catch (err) {
    if (token === renderToken) {
      root.innerHTML = `<div class="view"><h1>Error</h1><p>${String(err)}</p></div>`;
    }
  }
}

root.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;

  // Term click: open the KWIC overlay in place instead of a full reload.
  const termLink = target.closest<HTMLAnchorElement>("a.term[data-term-id]");
  if (termLink) {
    event.preventDefault();
    const view = termLink.closest<HTMLElement>("[data-cluster-id]");
    const clusterId = view?.dataset.clusterId;
    const termId = termLink.dataset.termId!;
    if (!clusterId) return;
    history.replaceState(null, "", formatHash({ kind: "cluster", clusterId, termId }));
    void (async () => {
      const [cluster, lines] = await Promise.all([
        api.cluster(clusterId),
        api.clusterKwic(clusterId, termId),
      ]);
      const term = cluster.terms.find((t) => t.termId === termId);
      if (!term || !view) return;
      view.querySelector(".kwic-panel")?.remove();
      view.insertAdjacentHTML("beforeend", renderKwicPanel(term, lines));
    })();
    return;
  }

  const close = target.closest("[data-close-kwic]");
  if (close) {
    event.preventDefault();
    const view = close.closest<HTMLElement>("[data-cluster-id]");
    close.closest(".kwic-panel")?.remove();
    if (view) {
      history.replaceState(
        null,
        "",
        formatHash({ kind: "cluster", clusterId: view.dataset.clusterId! }),
      );
    }
  }
});

root.addEventListener("submit", (event) => {
  const form = (event.target as HTMLElement).closest<HTMLFormElement>("form[data-search]");
  if (!form) return;
  event.preventDefault();
  const data = new FormData(form);
  const params: Record<string, string> = {};
  for (const key of ["person", "keyword", "country", "date"]) {
    const value = String(data.get(key) ?? "").trim();
    if (value) params[key] = value;
  }
  window.location.hash = formatHash({ kind: "search", params });
});

window.addEventListener("hashchange", () => void show());
void show();
