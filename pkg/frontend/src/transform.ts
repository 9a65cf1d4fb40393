// World <-> screen mapping: the disc of radius r centred on the origin maps
// into a square viewport with the Y axis pointing up.

export interface Viewport {
  size: number; // square canvas side in CSS pixels
  radius: number; // world disc radius
}

const MARGIN = 0.88; // fraction of the half-viewport used by the disc

export function scaleOf(view: Viewport): number {
  return (MARGIN * view.size) / 2 / view.radius;
}

export function worldToScreen(view: Viewport, x: number, y: number): [number, number] {
  const s = scaleOf(view);
  return [view.size / 2 + s * x, view.size / 2 - s * y];
}

export function screenToWorld(view: Viewport, px: number, py: number): [number, number] {
  const s = scaleOf(view);
  return [(px - view.size / 2) / s, (view.size / 2 - py) / s];
}

export function insideDisc(view: Viewport, x: number, y: number): boolean {
  return Math.hypot(x, y) < view.radius;
}
