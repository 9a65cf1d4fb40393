// Control wiring for the partition explorer page.

import {
  ArrayParams,
  EstimatorTag,
  fetchEstimate,
  fetchPartition,
  PartitionDoc,
} from './api.js';
import { clearProbe, renderPartition, renderProbe } from './render.js';
import {
  clampParams,
  Debouncer,
  initialState,
  isAbort,
  LatestFetch,
  probeReadout,
  ViewState,
} from './state.js';
import { insideDisc, screenToWorld, Viewport } from './transform.js';

const svg = document.getElementById('scene') as unknown as SVGSVGElement;
const banner = document.getElementById('banner') as HTMLDivElement;
const tooltip = document.getElementById('tooltip') as HTMLDivElement;
const readout = document.getElementById('readout') as HTMLDivElement;
const cellCount = document.getElementById('cell-count') as HTMLSpanElement;

const controls = {
  m: document.getElementById('ctl-m') as HTMLInputElement,
  n: document.getElementById('ctl-n') as HTMLInputElement,
  kind: document.getElementById('ctl-kind') as HTMLSelectElement,
  f: document.getElementById('ctl-f') as HTMLInputElement,
  estimator: document.getElementById('ctl-estimator') as HTMLSelectElement,
  mLabel: document.getElementById('ctl-m-value') as HTMLSpanElement,
  nLabel: document.getElementById('ctl-n-value') as HTMLSpanElement,
};

const state: ViewState = initialState();
let doc: PartitionDoc | null = null;

const view: Viewport = { size: 640, radius: state.params.r };
const debouncer = new Debouncer(250); // at most 4 partition requests/second
const partitionGate = new LatestFetch();
const estimateGate = new LatestFetch();

function showError(message: string): void {
  banner.textContent = message;
  banner.classList.remove('hidden');
}

function clearError(): void {
  banner.classList.add('hidden');
}

function paramsFromControls(): ArrayParams {
  return clampParams({
    m: Number(controls.m.value),
    n: Number(controls.n.value),
    r: state.params.r,
    kind: controls.kind.value === 'persp' ? 'persp' : 'orth',
    f: controls.f.value === '' ? null : Number(controls.f.value),
  });
}

function syncControls(): void {
  controls.m.value = String(state.params.m);
  controls.n.value = String(state.params.n);
  controls.mLabel.textContent = String(state.params.m);
  controls.nLabel.textContent = String(state.params.n);
  controls.kind.value = state.params.kind;
  controls.f.disabled = state.params.kind !== 'persp';
  if (state.params.kind === 'persp' && state.params.f !== null) {
    controls.f.value = String(state.params.f);
  }
}

async function refreshPartition(): Promise<void> {
  clearError();
  try {
    const fetched = await partitionGate.run((signal) =>
      fetchPartition(state.params, signal),
    );
    doc = fetched;
    view.radius = fetched.r;
    state.probe = null;
    renderPartition(svg, fetched, view, {
      onHover: (signature, area) => {
        tooltip.textContent = `signature [${signature.join(', ')}]  area ${area.toExponential(3)}`;
      },
      onLeave: () => {
        tooltip.textContent = '';
      },
    });
    clearProbe(svg);
    readout.textContent = '';
    cellCount.textContent = `${fetched.cells.length} cells, central radius ${fetched.central_radius.toFixed(4)}`;
  } catch (err) {
    if (!isAbort(err)) {
      showError(`partition request failed: ${(err as Error).message}`);
    }
  }
}

function scheduleRefresh(): void {
  state.params = paramsFromControls();
  syncControls();
  debouncer.schedule(() => {
    void refreshPartition();
  });
}

async function probeAt(px: number, py: number): Promise<void> {
  if (doc === null) {
    return;
  }
  const [wx, wy] = screenToWorld(view, px, py);
  if (!insideDisc(view, wx, wy)) {
    readout.textContent = 'click inside the disc to probe a point';
    return;
  }
  clearError();
  try {
    const result = await estimateGate.run((signal) =>
      fetchEstimate(state.params, wx, wy, state.estimator, signal),
    );
    state.probe = { x: wx, y: wy, result };
    renderProbe(svg, view, wx, wy, result);
    readout.textContent = probeReadout(wx, wy, result).join('   ');
  } catch (err) {
    if (!isAbort(err)) {
      showError(`estimate request failed: ${(err as Error).message}`);
    }
  }
}

function wire(): void {
  controls.m.addEventListener('input', scheduleRefresh);
  controls.n.addEventListener('input', scheduleRefresh);
  controls.kind.addEventListener('change', scheduleRefresh);
  controls.f.addEventListener('change', scheduleRefresh);
  controls.estimator.addEventListener('change', () => {
    state.estimator = controls.estimator.value as EstimatorTag;
  });
  svg.addEventListener('click', (ev) => {
    const rect = svg.getBoundingClientRect();
    const px = ((ev.clientX - rect.left) / rect.width) * view.size;
    const py = ((ev.clientY - rect.top) / rect.height) * view.size;
    void probeAt(px, py);
  });
  syncControls();
  void refreshPartition();
}

wire();
