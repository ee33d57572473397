/** Force-directed layout: inverse-square repulsion, spring links, damping.
 *
 * Massless damped descent: each step recomputes velocity from the net force
 * (v = F * dt * damping) instead of accumulating it. Relaxation is then
 * overdamped, so kinetic energy decays monotonically once a perturbation
 * stops; an inertial integrator would trade potential energy back into
 * kinetic at every spring turn-around. Repulsion distances are clamped
 * below a minimum separation so coincident nodes split instead of
 * exploding, and per-step travel is capped as a safety net.
 */

export interface LayoutConfig {
  spring: number;        // spring constant toward the rest length
  restLength: number;
  repulsion: number;     // inverse-square strength
  damping: number;       // force-to-velocity mobility, in (0, 1)
  timestep: number;
  minSeparation: number; // repulsion distance clamp
  maxStep: number;       // per-step travel cap
}

export const DEFAULT_LAYOUT: LayoutConfig = {
  spring: 0.08,
  restLength: 90,
  repulsion: 60000,
  damping: 0.85,
  timestep: 0.5,
  minSeparation: 8,
  maxStep: 60,
};

export interface BodyNode {
  x: number;
  y: number;
  vx: number;
  vy: number;
  pinned: boolean;
}

export function layoutStep(nodes: BodyNode[], links: [number, number][],
                           cfg: LayoutConfig = DEFAULT_LAYOUT): void {
  const n = nodes.length;
  const fx = new Array<number>(n).fill(0);
  const fy = new Array<number>(n).fill(0);

  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      let dx = nodes[j].x - nodes[i].x;
      let dy = nodes[j].y - nodes[i].y;
      let dist = Math.hypot(dx, dy);
      if (dist < 1e-9) {
        // deterministic nudge so coincident nodes separate
        dx = 1e-3 * (i + 1);
        dy = 1e-3 * (j - i);
        dist = Math.hypot(dx, dy);
      }
      const clamped = Math.max(dist, cfg.minSeparation);
      const force = cfg.repulsion / (clamped * clamped);
      const ux = dx / dist;
      const uy = dy / dist;
      fx[i] -= force * ux;
      fy[i] -= force * uy;
      fx[j] += force * ux;
      fy[j] += force * uy;
    }
  }

  for (const [a, b] of links) {
    const dx = nodes[b].x - nodes[a].x;
    const dy = nodes[b].y - nodes[a].y;
    const dist = Math.max(Math.hypot(dx, dy), 1e-9);
    const force = cfg.spring * (dist - cfg.restLength);
    const ux = dx / dist;
    const uy = dy / dist;
    fx[a] += force * ux;
    fy[a] += force * uy;
    fx[b] -= force * ux;
    fy[b] -= force * uy;
  }

  for (let i = 0; i < n; i++) {
    const node = nodes[i];
    if (node.pinned) {
      node.vx = 0;
      node.vy = 0;
      continue;
    }
    let vx = fx[i] * cfg.timestep * cfg.damping;
    let vy = fy[i] * cfg.timestep * cfg.damping;
    const travel = Math.hypot(vx, vy) * cfg.timestep;
    if (travel > cfg.maxStep) {
      const scale = cfg.maxStep / travel;
      vx *= scale;
      vy *= scale;
    }
    node.vx = vx;
    node.vy = vy;
    node.x += vx * cfg.timestep;
    node.y += vy * cfg.timestep;
  }
}

export function kineticEnergy(nodes: BodyNode[]): number {
  let total = 0;
  for (const node of nodes) {
    total += 0.5 * (node.vx * node.vx + node.vy * node.vy);
  }
  return total;
}

/** Evenly spaced points on a circle around (cx, cy); ghost fan-out. */
export function circlePositions(cx: number, cy: number, count: number,
                                radius: number): { x: number; y: number }[] {
  const out = [];
  for (let i = 0; i < count; i++) {
    const angle = (2 * Math.PI * i) / Math.max(count, 1) - Math.PI / 2;
    out.push({ x: cx + radius * Math.cos(angle), y: cy + radius * Math.sin(angle) });
  }
  return out;
}
