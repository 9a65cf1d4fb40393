// View state, parameter clamping against the service guardrails, the
// request debouncer, and latest-wins fetch cancellation.

import { ArrayParams, EstimateDoc, EstimatorTag } from './api.js';

export const GUARDRAILS = {
  m: { min: 2, max: 64 },
  n: { min: 1, max: 16 },
  r: { min: 0.05, max: 10 },
  fOverR: { max: 100 },
} as const;

export interface ViewState {
  params: ArrayParams;
  estimator: EstimatorTag;
  hovered: number[] | null; // hovered cell signature
  probe: { x: number; y: number; result: EstimateDoc } | null;
}

export function initialState(): ViewState {
  return {
    params: { m: 12, n: 5, r: 1.0, kind: 'orth', f: null },
    estimator: 'centroid',
    hovered: null,
    probe: null,
  };
}

const clampNum = (v: number, lo: number, hi: number) =>
  Math.min(hi, Math.max(lo, v));

/** Force parameters inside the service guardrails (controls never 400). */
export function clampParams(raw: ArrayParams): ArrayParams {
  const m = Math.round(clampNum(raw.m || GUARDRAILS.m.min, GUARDRAILS.m.min, GUARDRAILS.m.max));
  const n = Math.round(clampNum(raw.n || GUARDRAILS.n.min, GUARDRAILS.n.min, GUARDRAILS.n.max));
  const r = clampNum(raw.r || 1.0, GUARDRAILS.r.min, GUARDRAILS.r.max);
  let f: number | null = null;
  if (raw.kind === 'persp') {
    const fallback = r; // focal length defaults to the ring radius
    f = clampNum(raw.f ?? fallback, 1e-6, GUARDRAILS.fOverR.max * r);
  }
  return { m, n, r, kind: raw.kind, f };
}

type Timer = ReturnType<typeof setTimeout>;

export interface Clock {
  now(): number;
  setTimeout(fn: () => void, ms: number): Timer;
  clearTimeout(t: Timer): void;
}

const realClock: Clock = {
  now: () => Date.now(),
  setTimeout: (fn, ms) => setTimeout(fn, ms),
  clearTimeout: (t) => clearTimeout(t),
};

/**
 * Trailing-edge debouncer with a minimum interval between executions,
 * keeping parameter changes at or below 1000/intervalMs requests a second.
 */
export class Debouncer {
  private timer: Timer | null = null;
  private lastRun = -Infinity;

  constructor(private intervalMs: number, private clock: Clock = realClock) {}

  schedule(fn: () => void): void {
    if (this.timer !== null) {
      this.clock.clearTimeout(this.timer);
    }
    const wait = Math.max(0, this.lastRun + this.intervalMs - this.clock.now());
    this.timer = this.clock.setTimeout(() => {
      this.timer = null;
      this.lastRun = this.clock.now();
      fn();
    }, wait);
  }

  cancel(): void {
    if (this.timer !== null) {
      this.clock.clearTimeout(this.timer);
      this.timer = null;
    }
  }
}

/** Latest-wins gate: starting a new request aborts the one in flight. */
export class LatestFetch {
  private controller: AbortController | null = null;

  async run<T>(task: (signal: AbortSignal) => Promise<T>): Promise<T> {
    if (this.controller !== null) {
      this.controller.abort();
    }
    const controller = new AbortController();
    this.controller = controller;
    try {
      return await task(controller.signal);
    } finally {
      if (this.controller === controller) {
        this.controller = null;
      }
    }
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === 'AbortError';
}

/** Text lines for the probe readout; numbers come from the service. */
export function probeReadout(x: number, y: number, result: EstimateDoc): string[] {
  const sq = result.error * result.error;
  const lines = [
    `p = (${x.toFixed(4)}, ${y.toFixed(4)})`,
    `estimate = (${result.estimate[0].toFixed(4)}, ${result.estimate[1].toFixed(4)})`,
    `|error|^2 = ${sq.toExponential(4)}`,
    `worst-case bound = ${result.bound.worst_case.toExponential(4)}`,
  ];
  if (result.inside_central_circle) {
    lines.push('inside central circle - bound does not apply');
  }
  return lines;
}
