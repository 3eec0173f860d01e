/** Typed read-only client for the artifact server endpoints. */

export interface Meta {
  dims: number[];
  method: string;
  alpha: number | null;
  levels: number;
  count: number;
  ensemble: boolean;
}

export interface CurvePayload {
  x: number[];
  y: number[];
  z: number[];
  level: number[];
  ex: number[];
  ey: number[];
  ez: number[];
}

export interface Bands {
  min: number[];
  q25: number[];
  median: number[];
  q75: number[];
  max: number[];
}

export interface ValuesPayload {
  u: number[];
  t: number[] | null;
  bands: Bands | null;
}

export interface SlicePayload {
  z: number;
  dims: number[];
  values: number[];
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function getJson<T>(url: string): Promise<T> {
  const resp = await fetch(url);
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = (await resp.json()) as { error?: string };
      if (body.error) detail = body.error;
    } catch {
      // non-JSON error body: keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(private base: string = "") {}

  meta(): Promise<Meta> {
    return getJson<Meta>(`${this.base}/api/meta`);
  }

  curve(): Promise<CurvePayload> {
    return getJson<CurvePayload>(`${this.base}/api/curve`);
  }

  values(): Promise<ValuesPayload> {
    return getJson<ValuesPayload>(`${this.base}/api/values`);
  }

  slice(z?: number): Promise<SlicePayload> {
    const query = z === undefined ? "" : `?z=${z}`;
    return getJson<SlicePayload>(`${this.base}/api/slice${query}`);
  }
}
