// Typed client for the explorer service. The UI does no geometry or
// numerics of its own: every displayed number originates here.

export type ProjectionKind = 'orth' | 'persp';
export type EstimatorTag = 'centroid' | 'lsq' | 'twoview';

export interface ArrayParams {
  m: number;
  n: number;
  r: number;
  kind: ProjectionKind;
  f: number | null;
}

export interface CellDoc {
  signature: number[];
  polygon: [number, number][];
  area: number;
  centroid: [number, number];
  diameter: number;
}

export interface PartitionDoc {
  m: number;
  n: number;
  r: number;
  kind: ProjectionKind;
  f: number | null;
  w: number;
  central_radius: number;
  cells: CellDoc[];
}

export interface EstimateDoc {
  snapshot: { indices: number[]; centers: number[] };
  estimate: [number, number];
  error: number;
  bound: { worst_case: number; point: number };
  central_radius: number;
  inside_central_circle: boolean;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** Build the query string for array parameters (orth omits f). */
export function arrayQuery(params: ArrayParams): string {
  const q = new URLSearchParams({
    m: String(params.m),
    n: String(params.n),
    r: String(params.r),
    kind: params.kind,
  });
  if (params.kind === 'persp' && params.f !== null) {
    q.set('f', String(params.f));
  }
  return q.toString();
}

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  const resp = await fetch(url, { signal });
  const text = await resp.text();
  if (!resp.ok) {
    let message = `HTTP ${resp.status}`;
    try {
      const body = JSON.parse(text);
      if (body.error) {
        message = typeof body.error === 'string' ? body.error : JSON.stringify(body.error);
      }
    } catch {
      // keep the status line
    }
    throw new ApiError(resp.status, message);
  }
  return JSON.parse(text) as T;
}

export function fetchPartition(
  params: ArrayParams,
  signal?: AbortSignal,
): Promise<PartitionDoc> {
  return getJson(`/api/partition?${arrayQuery(params)}`, signal);
}

export function fetchEstimate(
  params: ArrayParams,
  x: number,
  y: number,
  estimator: EstimatorTag,
  signal?: AbortSignal,
): Promise<EstimateDoc> {
  const q = new URLSearchParams(arrayQuery(params));
  q.set('x', String(x));
  q.set('y', String(y));
  q.set('estimator', estimator);
  return getJson(`/api/estimate?${q.toString()}`, signal);
}
