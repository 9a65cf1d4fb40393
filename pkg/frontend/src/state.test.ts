import { describe, expect, it } from 'vitest';

import { EstimateDoc } from './api.js';
import {
  clampParams,
  Clock,
  Debouncer,
  GUARDRAILS,
  LatestFetch,
  probeReadout,
} from './state.js';

describe('clampParams', () => {
  it('clamps the camera count into the guardrails', () => {
    const p = clampParams({ m: 100, n: 3, r: 1, kind: 'orth', f: null });
    expect(p.m).toBe(GUARDRAILS.m.max);
    expect(clampParams({ m: 0, n: 3, r: 1, kind: 'orth', f: null }).m).toBe(
      GUARDRAILS.m.min,
    );
  });

  it('rounds fractional counts', () => {
    const p = clampParams({ m: 7.6, n: 2.2, r: 1, kind: 'orth', f: null });
    expect(p.m).toBe(8);
    expect(p.n).toBe(2);
  });

  it('drops the focal length for orthogonal projection', () => {
    const p = clampParams({ m: 8, n: 3, r: 1, kind: 'orth', f: 2.0 });
    expect(p.f).toBeNull();
  });

  it('defaults the perspective focal length to the radius', () => {
    const p = clampParams({ m: 8, n: 3, r: 2, kind: 'persp', f: null });
    expect(p.f).toBe(2);
  });

  it('caps the focal length at 100 r', () => {
    const p = clampParams({ m: 8, n: 3, r: 1, kind: 'persp', f: 1e6 });
    expect(p.f).toBe(100);
  });
});

class FakeClock implements Clock {
  time = 0;
  private queue: { at: number; fn: () => void; id: number }[] = [];
  private nextId = 1;

  now(): number {
    return this.time;
  }

  setTimeout(fn: () => void, ms: number): never {
    const id = this.nextId++;
    this.queue.push({ at: this.time + ms, fn, id });
    return id as never;
  }

  clearTimeout(t: never): void {
    this.queue = this.queue.filter((item) => item.id !== (t as unknown as number));
  }

  advance(ms: number): void {
    const target = this.time + ms;
    for (;;) {
      const due = this.queue.filter((q) => q.at <= target).sort((a, b) => a.at - b.at)[0];
      if (!due) {
        break;
      }
      this.queue = this.queue.filter((q) => q.id !== due.id);
      this.time = due.at;
      due.fn();
    }
    this.time = target;
  }
}

describe('Debouncer', () => {
  it('runs the first call at once and coalesces the rest of a burst', () => {
    const clock = new FakeClock();
    const deb = new Debouncer(250, clock);
    const runTimes: number[] = [];
    for (let i = 0; i < 10; i++) {
      deb.schedule(() => { runTimes.push(clock.now()); });
      clock.advance(10);
    }
    clock.advance(500);
    expect(runTimes).toEqual([0, 250]); // leading edge, then one trailing call
  });

  it('keeps sustained changes at or under 4 calls per second', () => {
    const clock = new FakeClock();
    const deb = new Debouncer(250, clock);
    let runs = 0;
    for (let i = 0; i < 100; i++) {
      deb.schedule(() => { runs += 1; });
      clock.advance(20); // 2 seconds of continuous slider dragging
    }
    clock.advance(500);
    expect(runs).toBeLessThanOrEqual(10); // 2.5s window -> at most 10
    expect(runs).toBeGreaterThan(0);
  });

  it('cancel drops the pending call', () => {
    const clock = new FakeClock();
    const deb = new Debouncer(250, clock);
    let runs = 0;
    deb.schedule(() => { runs += 1; });
    deb.cancel();
    clock.advance(1000);
    expect(runs).toBe(0);
  });
});

describe('probeReadout', () => {
  const base: EstimateDoc = {
    snapshot: { indices: [0, 1], centers: [0.1, 0.3] },
    estimate: [0.25, -0.5],
    error: 0.1,
    bound: { worst_case: 0.0789, point: 0.01 },
    central_radius: 0.333,
    inside_central_circle: false,
  };

  it('shows the squared error against the worst-case bound', () => {
    const lines = probeReadout(0.2, -0.4, base);
    expect(lines.some((l) => l.includes('|error|^2 = 1.0000e-2'))).toBe(true);
    expect(lines.some((l) => l.includes('worst-case bound'))).toBe(true);
    expect(lines.some((l) => l.includes('bound does not apply'))).toBe(false);
  });

  it('flags probes inside the central circle', () => {
    const lines = probeReadout(0.01, 0.0, { ...base, inside_central_circle: true });
    expect(lines[lines.length - 1]).toBe('inside central circle - bound does not apply');
  });
});

describe('LatestFetch', () => {
  it('aborts the in-flight task when a new one starts', async () => {
    const gate = new LatestFetch();
    const seen: AbortSignal[] = [];
    const never = (signal: AbortSignal) => {
      seen.push(signal);
      return new Promise<string>(() => {});
    };
    void gate.run(never).catch(() => {});
    const second = gate.run(async (signal) => {
      seen.push(signal);
      return 'done';
    });
    expect(await second).toBe('done');
    expect(seen[0].aborted).toBe(true);
    expect(seen[1].aborted).toBe(false);
  });
});
