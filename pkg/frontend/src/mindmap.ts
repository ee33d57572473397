/** Session controller: server-authoritative state with ghost overlays.
 *
 * Committed nodes always reflect the latest map document from the service;
 * nothing is rendered optimistically. Suggestion ghosts are a purely local
 * overlay that vanishes once the batch is resolved, so an exported document
 * can never contain one.
 */

import { ApiClient, ApiError } from "./api.js";
import { circlePositions } from "./layout.js";
import type { BatchPayload, MapDocument, ViewLink, ViewNode } from "./types.js";

const GHOST_RADIUS = 70;

export interface ControllerEvents {
  onChange?: () => void;                 // view model changed, re-render
  onNotice?: (message: string) => void;  // toasts ("no suggestions", errors)
}

export class MindMapController {
  readonly nodes = new Map<string, ViewNode>();
  links: ViewLink[] = [];
  sessionId: string | null = null;
  selected: string | null = null;
  private ghostSource: string | null = null;

  constructor(private readonly api: ApiClient,
              private readonly events: ControllerEvents = {}) {}

  get hasGhosts(): boolean {
    return this.ghostSource !== null;
  }

  committedCount(): number {
    let count = 0;
    this.nodes.forEach((node) => {
      if (node.kind === "committed") count += 1;
    });
    return count;
  }

  ghostCount(): number {
    return this.nodes.size - this.committedCount();
  }

  // -- session lifecycle ----------------------------------------------------

  async start(root: string, seed?: number): Promise<void> {
    const created = await this.api.createSession(root, seed);
    this.sessionId = created.session_id;
    this.applyMap(created.map);
  }

  /** Reconcile the view with a server map document (the source of truth). */
  applyMap(doc: MapDocument): void {
    this.clearGhosts();
    const seen = new Set<string>();
    for (const node of doc.nodes) {
      const key = `n${node.id}`;
      seen.add(key);
      const existing = this.nodes.get(key);
      if (existing) {
        existing.label = node.concept;
        existing.provenance = node.provenance;
      } else {
        this.nodes.set(key, {
          key,
          nodeId: node.id,
          label: node.concept,
          kind: "committed",
          provenance: node.provenance,
          x: node.x ?? 400 + 120 * Math.cos(node.id * 2.39996),
          y: node.y ?? 300 + 120 * Math.sin(node.id * 2.39996),
          vx: 0,
          vy: 0,
          pinned: false,
        });
      }
    }
    for (const key of [...this.nodes.keys()]) {
      if (!seen.has(key)) this.nodes.delete(key);
    }
    this.links = doc.links.map(([a, b]) => ({ a: `n${a}`, b: `n${b}` }));
    if (this.selected && !this.nodes.has(this.selected)) this.selected = null;
    this.events.onChange?.();
  }

  // -- suggestions ------------------------------------------------------------

  async showSuggestions(nodeKey: string): Promise<void> {
    const source = this.nodes.get(nodeKey);
    if (!source || source.kind !== "committed" || this.sessionId === null) return;
    if (this.hasGhosts) {
      this.events.onNotice?.("resolve the current suggestions first");
      return;
    }
    let batch: BatchPayload;
    try {
      batch = await this.api.requestSuggestions(this.sessionId, source.nodeId!);
    } catch (err) {
      if (err instanceof ApiError && err.code === "exhausted") {
        this.events.onNotice?.("no suggestions for this concept");
        return;
      }
      if (err instanceof ApiError && err.code === "pending_batch") {
        this.events.onNotice?.("resolve the current suggestions first");
        return;
      }
      throw err;
    }
    this.ghostSource = nodeKey;
    const spots = circlePositions(source.x, source.y, batch.suggestions.length, GHOST_RADIUS);
    batch.suggestions.forEach((label, i) => {
      const key = `g${i}`;
      this.nodes.set(key, {
        key,
        nodeId: null,
        label,
        kind: "ghost",
        x: spots[i].x,
        y: spots[i].y,
        vx: 0,
        vy: 0,
        pinned: false,
      });
      this.links.push({ a: nodeKey, b: key });
    });
    this.events.onChange?.();
  }

  async commitGhost(ghostKey: string): Promise<void> {
    const ghost = this.nodes.get(ghostKey);
    if (!ghost || ghost.kind !== "ghost" || this.sessionId === null) return;
    const spot = { x: ghost.x, y: ghost.y };
    try {
      const resolved = await this.api.resolveAccept(this.sessionId, ghost.label);
      this.applyMap(resolved.map);
      // keep the accepted node where its ghost stood
      const committed = [...this.nodes.values()].find(
        (n) => n.kind === "committed" && n.label === ghost.label);
      if (committed) {
        committed.x = spot.x;
        committed.y = spot.y;
      }
      this.events.onChange?.();
    } catch (err) {
      if (err instanceof ApiError && err.code === "stale_batch") {
        await this.refetch();
        return;
      }
      throw err;
    }
  }

  async dismissGhosts(): Promise<void> {
    if (!this.hasGhosts || this.sessionId === null) return;
    try {
      const resolved = await this.api.resolveDismiss(this.sessionId);
      this.applyMap(resolved.map);
    } catch (err) {
      if (err instanceof ApiError && err.code === "stale_batch") {
        await this.refetch();
        return;
      }
      throw err;
    }
  }

  private clearGhosts(): void {
    for (const key of [...this.nodes.keys()]) {
      if (this.nodes.get(key)!.kind === "ghost") this.nodes.delete(key);
    }
    this.links = this.links.filter(
      (lk) => this.nodes.has(lk.a) && this.nodes.has(lk.b));
    this.ghostSource = null;
  }

  /** Drop local overlays and refetch the authoritative map. */
  async refetch(): Promise<void> {
    if (this.sessionId === null) return;
    this.applyMap(await this.api.getMap(this.sessionId));
  }

  // -- edits --------------------------------------------------------------------

  async manualAdd(text: string): Promise<boolean> {
    if (this.sessionId === null || this.selected === null) {
      this.events.onNotice?.("select a node to attach to");
      return false;
    }
    const attach = this.nodes.get(this.selected);
    if (!attach || attach.kind !== "committed") return false;
    try {
      const result = await this.api.manualAdd(this.sessionId, text, attach.nodeId!);
      this.applyMap(result.map);
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.code === "invalid_concept") {
        this.events.onNotice?.(`"${text}" is not in the vocabulary`);
        return false;
      }
      throw err;
    }
  }

  async removeSelected(): Promise<void> {
    const node = this.selected ? this.nodes.get(this.selected) : null;
    if (!node || node.kind !== "committed" || this.sessionId === null) return;
    try {
      const result = await this.api.removeNode(this.sessionId, node.nodeId!);
      this.applyMap(result.map);
    } catch (err) {
      if (err instanceof ApiError) {
        this.events.onNotice?.(err.message);
        return;
      }
      throw err;
    }
  }

  async linkSelectedTo(otherKey: string): Promise<void> {
    const a = this.selected ? this.nodes.get(this.selected) : null;
    const b = this.nodes.get(otherKey);
    if (!a || !b || a.kind !== "committed" || b.kind !== "committed"
        || this.sessionId === null) return;
    try {
      const result = await this.api.addLink(this.sessionId, a.nodeId!, b.nodeId!);
      this.applyMap(result.map);
    } catch (err) {
      if (err instanceof ApiError) {
        this.events.onNotice?.(err.message);
        return;
      }
      throw err;
    }
  }

  async persistPosition(nodeKey: string): Promise<void> {
    const node = this.nodes.get(nodeKey);
    if (!node || node.kind !== "committed" || this.sessionId === null) return;
    await this.api.move(this.sessionId, node.nodeId!, node.x, node.y);
  }

  /** The server's export body, verbatim; the download never re-serializes. */
  async exportDocument(): Promise<string> {
    if (this.sessionId === null) throw new Error("no session");
    return this.api.exportRaw(this.sessionId);
  }
}
