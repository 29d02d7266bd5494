import { ApiError, HttpExplorerApi } from "./api.js";
import { ForceSim } from "./force.js";
import { GraphView } from "./render.js";
import { ExplorerState } from "./state.js";

const api = new HttpExplorerApi("");
const state = new ExplorerState(api);
const sim = new ForceSim();

const svg = document.querySelector<SVGSVGElement>("#canvas")!;
const searchBox = document.querySelector<HTMLInputElement>("#search")!;
const resultList = document.querySelector<HTMLUListElement>("#results")!;
const banner = document.querySelector<HTMLDivElement>("#banner")!;

const view = new GraphView(svg, {
  onExpand: (id) => run(() => state.expand(id)),
  onHide: (id) => {
    state.hide(id);
    refresh();
  },
  onNavigate: (id) => window.open(state.navigateOut(id), "_blank"),
});

let ticking = false;

function refresh(): void {
  sim.sync(state.nodes.values());
  if (!ticking) {
    ticking = true;
    let steps = 0;
    const tick = () => {
      const moved = sim.step(state.edges.values());
      view.render(state);
      steps += 1;
      if (moved > 0.15 && steps < 300) {
        requestAnimationFrame(tick);
      } else {
        ticking = false;
      }
    };
    requestAnimationFrame(tick);
  } else {
    view.render(state);
  }
}

async function run(action: () => Promise<void>): Promise<void> {
  banner.hidden = true;
  try {
    await action();
    refresh();
  } catch (err) {
    banner.textContent =
      err instanceof ApiError ? err.message : `unexpected error: ${String(err)}`;
    banner.hidden = false;
  }
}

let searchTimer: ReturnType<typeof setTimeout> | undefined;
searchBox.addEventListener("input", () => {
  clearTimeout(searchTimer);
  const query = searchBox.value.trim();
  if (query.length < 2) {
    resultList.replaceChildren();
    return;
  }
  searchTimer = setTimeout(async () => {
    try {
      const hits = await api.search(query);
      resultList.replaceChildren(
        ...hits.slice(0, 12).map((hit) => {
          const item = document.createElement("li");
          item.textContent = hit.canonical_name;
          item.addEventListener("click", () => {
            resultList.replaceChildren();
            searchBox.value = "";
            run(() => state.addEntity(hit.id));
          });
          return item;
        }),
      );
    } catch {
      // search box errors are non-fatal; the banner is for graph actions
    }
  }, 150);
});
