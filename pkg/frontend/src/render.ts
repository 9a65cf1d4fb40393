// SVG scene construction. Vector paths keep cell boundaries crisp at any
// zoom; all numbers come from the service documents.

import { PartitionDoc, EstimateDoc } from './api.js';
import { Viewport, worldToScreen } from './transform.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) {
    node.setAttribute(k, v);
  }
  return node;
}

export interface HoverCallbacks {
  onHover(signature: number[], area: number): void;
  onLeave(): void;
}

export function renderPartition(
  svg: SVGSVGElement,
  doc: PartitionDoc,
  view: Viewport,
  hover: HoverCallbacks,
): void {
  svg.replaceChildren();
  const [cx, cy] = worldToScreen(view, 0, 0);
  const scale = (worldToScreen(view, doc.r, 0)[0] - cx);

  svg.appendChild(
    el('circle', {
      cx: String(cx), cy: String(cy), r: String(scale),
      class: 'disc-outline',
    }),
  );

  const cellLayer = el('g', { class: 'cells' });
  for (const cell of doc.cells) {
    const pts = cell.polygon
      .map(([x, y]) => worldToScreen(view, x, y).map((v) => v.toFixed(2)).join(','))
      .join(' ');
    const poly = el('polygon', { points: pts, class: 'cell' });
    poly.addEventListener('mouseenter', () => {
      poly.classList.add('hovered');
      hover.onHover(cell.signature, cell.area);
    });
    poly.addEventListener('mouseleave', () => {
      poly.classList.remove('hovered');
      hover.onLeave();
    });
    cellLayer.appendChild(poly);
  }
  svg.appendChild(cellLayer);

  svg.appendChild(
    el('circle', {
      cx: String(cx), cy: String(cy),
      r: String((scale * doc.central_radius) / doc.r),
      class: 'central-circle',
    }),
  );

  const cameraLayer = el('g', { class: 'cameras' });
  for (let i = 0; i < doc.m; i++) {
    const alpha = (2 * Math.PI * i) / doc.m;
    const [px, py] = worldToScreen(view, doc.r * Math.cos(alpha), doc.r * Math.sin(alpha));
    cameraLayer.appendChild(
      el('circle', { cx: String(px), cy: String(py), r: '4', class: 'camera' }),
    );
  }
  svg.appendChild(cameraLayer);
}

export function renderProbe(
  svg: SVGSVGElement,
  view: Viewport,
  x: number,
  y: number,
  result: EstimateDoc,
): void {
  svg.querySelector('.probe-layer')?.remove();
  const layer = el('g', { class: 'probe-layer' });
  const [tx, ty] = worldToScreen(view, x, y);
  const [ex, ey] = worldToScreen(view, result.estimate[0], result.estimate[1]);
  layer.appendChild(
    el('line', { x1: String(tx), y1: String(ty), x2: String(ex), y2: String(ey), class: 'error-segment' }),
  );
  layer.appendChild(el('circle', { cx: String(tx), cy: String(ty), r: '4', class: 'true-point' }));
  layer.appendChild(el('circle', { cx: String(ex), cy: String(ey), r: '4', class: 'estimate-point' }));
  svg.appendChild(layer);
}

export function clearProbe(svg: SVGSVGElement): void {
  svg.querySelector('.probe-layer')?.remove();
}
