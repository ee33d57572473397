// @vitest-environment jsdom
//
// End-to-end suggestion flow: a real service process (fixture graph) behind
// the real HTTP API, driven through the controller and SVG view via DOM
// clicks, exactly as the browser would.

import { ChildProcess, spawn, spawnSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { MindMapController } from "../src/mindmap.js";
import { SvgView } from "../src/render.js";

const PORT = 8490 + (process.pid % 400);
const BASE = `http://127.0.0.1:${PORT}`;
const REPO_ROOT = join(__dirname, "..", "..");

// dense fixture (ring distances 1-3 plus chords): triangles everywhere,
// so breadth-biased walks progress instead of oscillating into exhaustion
const MAKE_GRAPH = `
import sys
from ideamap.graph import RawEdge, build_graph
n = 120
name = lambda i: f"concept_{i:03d}"
edges = []
for k in (1, 2, 3):
    edges += [RawEdge(name(i), name((i + k) % n), 1.0) for i in range(n)]
edges += [RawEdge(name(i), name((i * 7 + 3) % n), 1.0) for i in range(0, n, 3)]
build_graph(edges).save_snapshot(sys.argv[1])
`;

let server: ChildProcess;
let workDir: string;

async function until(check: () => boolean, timeoutMs = 10_000): Promise<void> {
  const start = Date.now();
  while (!check()) {
    if (Date.now() - start > timeoutMs) throw new Error("condition not reached");
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

async function serviceReady(): Promise<void> {
  const start = Date.now();
  for (;;) {
    try {
      const resp = await fetch(`${BASE}/autocomplete?q=concept&limit=1`);
      if (resp.ok) return;
    } catch {
      // not listening yet
    }
    if (Date.now() - start > 45_000) throw new Error("service did not come up");
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "ideamap-ui-"));
  const snapshot = join(workDir, "graph.bin");
  const made = spawnSync("python3", ["-c", MAKE_GRAPH, snapshot], { cwd: REPO_ROOT });
  if (made.status !== 0) {
    throw new Error(`fixture graph build failed: ${made.stderr}`);
  }
  server = spawn("python3", ["-m", "ideamap.cli", "serve", "--graph", snapshot,
                             "--port", String(PORT)],
                 { cwd: REPO_ROOT, stdio: "ignore" });
  await serviceReady();
});

afterAll(() => {
  server?.kill();
  rmSync(workDir, { recursive: true, force: true });
});

function setupView() {
  document.body.innerHTML = "";
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  document.body.appendChild(svg);
  const notices: string[] = [];
  const controller = new MindMapController(new ApiClient(BASE), {
    onChange: () => view.sync(),
    onNotice: (message) => notices.push(message),
  });
  const view: SvgView = new SvgView(svg as unknown as SVGSVGElement, controller, {
    onNodeClick: (key) => {
      if (controller.selected === key) {
        void controller.showSuggestions(key);
      } else {
        controller.selected = key;
        view.sync();
      }
    },
    onGhostClick: (key) => void controller.commitGhost(key),
  });
  return { svg, controller, view, notices };
}

function click(el: Element): void {
  el.dispatchEvent(new window.MouseEvent("click", { bubbles: true }));
}

describe("suggestion flow against the live service", () => {
  it("renders 5 ghosts, commits the clicked one, removes its siblings", async () => {
    const { svg, controller } = setupView();
    await controller.start("concept_000", 424242);

    const committedBefore = controller.committedCount();
    expect(committedBefore).toBeGreaterThanOrEqual(2); // root + bootstrap
    expect(svg.querySelectorAll(".node.ghost").length).toBe(0);

    // click root twice: select, then demand suggestions
    const rootGroup = svg.querySelector('[data-key="n0"]')!;
    click(rootGroup);
    click(rootGroup);
    await until(() => svg.querySelectorAll(".node.ghost").length > 0);

    const ghosts = svg.querySelectorAll(".node.ghost");
    expect(ghosts.length).toBe(5);
    expect(svg.querySelectorAll(".ghost-link").length).toBe(5);

    const chosenLabel = (ghosts[2] as SVGGElement).getAttribute("data-label")!;
    click(ghosts[2]);
    await until(() => svg.querySelectorAll(".node.ghost").length === 0);

    expect(controller.committedCount()).toBe(committedBefore + 1);
    const labels = [...svg.querySelectorAll(".node.committed")]
      .map((g) => g.getAttribute("data-label"));
    expect(labels).toContain(chosenLabel);
    expect(svg.querySelectorAll(".node.suggested").length).toBe(1);
  });

  it("dismissing removes every ghost and commits nothing", async () => {
    const { svg, controller } = setupView();
    await controller.start("concept_010", 7);
    const before = controller.committedCount();

    const rootKey = [...controller.nodes.values()]
      .find((n) => n.provenance === "root")!.key;
    const rootGroup = svg.querySelector(`[data-key="${rootKey}"]`)!;
    click(rootGroup);
    click(rootGroup);
    await until(() => svg.querySelectorAll(".node.ghost").length === 5);

    await controller.dismissGhosts();
    expect(svg.querySelectorAll(".node.ghost").length).toBe(0);
    expect(controller.committedCount()).toBe(before);
  });

  it("single-pending discipline: no second request while ghosts pending", async () => {
    const { svg, controller, notices } = setupView();
    await controller.start("concept_020", 100);
    const rootKey = [...controller.nodes.values()]
      .find((n) => n.provenance === "root")!.key;
    await controller.showSuggestions(rootKey);
    await until(() => svg.querySelectorAll(".node.ghost").length === 5);

    await controller.showSuggestions(rootKey); // must not fire a network call
    expect(notices.length).toBe(1);
    expect(svg.querySelectorAll(".node.ghost").length).toBe(5);
    await controller.dismissGhosts();
  });

  it("UI export equals GET /export byte-for-byte and contains no ghosts", async () => {
    const { svg, controller } = setupView();
    await controller.start("concept_030", 1234);
    const rootKey = [...controller.nodes.values()]
      .find((n) => n.provenance === "root")!.key;

    await controller.showSuggestions(rootKey);
    await until(() => svg.querySelectorAll(".node.ghost").length === 5);
    const ghostLabel = (svg.querySelector(".node.ghost") as SVGGElement)
      .getAttribute("data-label")!;
    click(svg.querySelector(".node.ghost")!);
    await until(() => svg.querySelectorAll(".node.ghost").length === 0);

    const uiExport = await controller.exportDocument();
    const direct = await fetch(`${BASE}/sessions/${controller.sessionId}/export`);
    expect(uiExport).toBe(await direct.text());

    const doc = JSON.parse(uiExport);
    const concepts = doc.map.nodes.map((n: { concept: string }) => n.concept);
    expect(concepts).toContain(ghostLabel);
    expect(doc.log.entries.length).toBe(1);
    expect(doc.log.entries[0].accepted).toBe(ghostLabel);
    // ghosts never reach the exported document
    expect(doc.map.nodes.length).toBe(controller.committedCount());
  });

  it("autocomplete narrows to the typed prefix", async () => {
    const api = new ApiClient(BASE);
    const { labels } = await api.autocomplete("concept_00", 10);
    expect(labels.length).toBe(10);
    expect(labels.every((lab) => lab.startsWith("concept_00"))).toBe(true);
  });
});
