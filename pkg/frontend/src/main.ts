/** Application entry: wires the controller, SVG view, toolbar, and the
 *  layout loop together against the backing service. */

import { ApiClient } from "./api.js";
import { DEFAULT_LAYOUT, layoutStep } from "./layout.js";
import { MindMapController } from "./mindmap.js";
import { SvgView } from "./render.js";

function toast(message: string): void {
  const el = document.getElementById("toast")!;
  el.textContent = message;
  el.classList.add("visible");
  window.setTimeout(() => el.classList.remove("visible"), 2600);
}

function bindAutocomplete(input: HTMLInputElement, list: HTMLDataListElement,
                          api: ApiClient): void {
  input.addEventListener("input", async () => {
    const text = input.value.trim();
    if (!text) {
      list.replaceChildren();
      return;
    }
    const { labels } = await api.autocomplete(text);
    list.replaceChildren(...labels.map((label) => {
      const option = document.createElement("option");
      option.value = label;
      return option;
    }));
  });
}

export function boot(): void {
  const api = new ApiClient("");
  const svg = document.getElementById("map") as unknown as SVGSVGElement;

  const controller = new MindMapController(api, {
    onChange: () => view.sync(),
    onNotice: toast,
  });

  const view = new SvgView(svg, controller, {
    onNodeClick: (key) => {
      const linking = (document.getElementById("link-mode") as HTMLInputElement).checked;
      if (linking && controller.selected && controller.selected !== key) {
        void controller.linkSelectedTo(key);
        return;
      }
      if (controller.selected === key) {
        void controller.showSuggestions(key);
      } else {
        controller.selected = key;
        view.sync();
      }
    },
    onGhostClick: (key) => void controller.commitGhost(key),
    onDragEnd: (key) => void controller.persistPosition(key),
  });

  const rootInput = document.getElementById("root-input") as HTMLInputElement;
  const rootForm = document.getElementById("root-form") as HTMLFormElement;
  rootForm.addEventListener("submit", async (event) => {
    event.preventDefault();
    const text = rootInput.value.trim();
    if (!text) return;
    try {
      await controller.start(text);
      (document.getElementById("start-panel") as HTMLElement).hidden = true;
      (document.getElementById("session-panel") as HTMLElement).hidden = false;
    } catch {
      toast(`"${text}" is not in the vocabulary`);
    }
  });

  const manualInput = document.getElementById("manual-input") as HTMLInputElement;
  const manualForm = document.getElementById("manual-form") as HTMLFormElement;
  manualForm.addEventListener("submit", async (event) => {
    event.preventDefault();
    const text = manualInput.value.trim();
    if (!text) return;
    if (await controller.manualAdd(text)) {
      manualInput.value = "";
    }
  });
  manualInput.addEventListener("input", () => {
    (document.getElementById("manual-submit") as HTMLButtonElement).disabled =
      manualInput.value.trim() === "";
  });

  bindAutocomplete(rootInput, document.getElementById("root-options") as HTMLDataListElement, api);
  bindAutocomplete(manualInput, document.getElementById("manual-options") as HTMLDataListElement, api);

  document.getElementById("dismiss")!.addEventListener("click",
    () => void controller.dismissGhosts());
  document.getElementById("remove")!.addEventListener("click",
    () => void controller.removeSelected());
  document.getElementById("export")!.addEventListener("click", async () => {
    const body = await controller.exportDocument();
    const blob = new Blob([body], { type: "application/json" });
    const anchor = document.createElement("a");
    anchor.href = URL.createObjectURL(blob);
    anchor.download = "session-export.json";
    anchor.click();
    URL.revokeObjectURL(anchor.href);
  });

  const step = () => {
    const bodies = [...controller.nodes.values()];
    const index = new Map(bodies.map((node, i) => [node.key, i]));
    const links: [number, number][] = [];
    for (const link of controller.links) {
      const a = index.get(link.a);
      const b = index.get(link.b);
      if (a !== undefined && b !== undefined) links.push([a, b]);
    }
    layoutStep(bodies, links, DEFAULT_LAYOUT);
    view.positions();
    window.requestAnimationFrame(step);
  };
  window.requestAnimationFrame(step);
}

boot();
