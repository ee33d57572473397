/** Shared payload and view-model types; field names mirror the service API. */

export interface MapNodeDoc {
  id: number;
  concept: string;
  provenance: "root" | "manual" | "suggested" | "bootstrap_neighbor";
  x?: number;
  y?: number;
}

export interface MapDocument {
  version: number;
  map_id: string;
  created_at: string;
  nodes: MapNodeDoc[];
  links: [number, number][];
}

export interface SessionCreated {
  session_id: string;
  map: MapDocument;
}

export interface BatchPayload {
  source: number;
  regime: "bfs" | "dfs";
  p: number;
  q: number;
  suggestions: string[];
}

export interface ApiErrorBody {
  error_code: string;
  message: string;
}

/** A rendered node: either a committed map node or a suggestion ghost. */
export interface ViewNode {
  key: string;            // "n<id>" for committed, "g<i>" for ghosts
  nodeId: number | null;  // server id; null for ghosts
  label: string;
  kind: "committed" | "ghost";
  provenance?: MapNodeDoc["provenance"];
  x: number;
  y: number;
  vx: number;
  vy: number;
  pinned: boolean;
}

export interface ViewLink {
  a: string; // ViewNode key
  b: string;
}
