/**
 * Typed client for the local network-diameter service.
 *
 * Every response is validated against a zod schema and returned together
 * with the raw response text, so callers can surface service numbers
 * byte-for-byte instead of re-serializing them.
 */
import { z } from "zod";

export const LocusPointSchema = z.object({
  edge: z.tuple([z.number().int(), z.number().int()]),
  t: z.string(),
  x: z.number(),
  y: z.number(),
});
export type LocusPoint = z.infer<typeof LocusPointSchema>;

export const DiametralPairSchema = z.object({
  p: LocusPointSchema,
  q: LocusPointSchema,
  kind: z.string(),
});

export const ReportSchema = z.object({
  d: z.number(),
  pairs: z.array(DiametralPairSchema),
});
export type Report = z.infer<typeof ReportSchema>;

export const SessionResponseSchema = z.object({
  id: z.string(),
  report: ReportSchema,
});
export type SessionResponse = z.infer<typeof SessionResponseSchema>;

export const PreviewResponseSchema = z.object({ report: ReportSchema });
export type PreviewResponse = z.infer<typeof PreviewResponseSchema>;

export const StackResponseSchema = z.object({
  depth: z.number().int(),
  report: ReportSchema,
});
export type StackResponse = z.infer<typeof StackResponseSchema>;

export const GeometrySchema = z.object({
  vertices: z.array(
    z.object({ id: z.number().int(), x: z.string(), y: z.string() }),
  ),
  edges: z.array(z.tuple([z.number().int(), z.number().int()])),
  diametral_polylines: z.array(z.array(z.tuple([z.number(), z.number()]))),
  report: ReportSchema,
});
export type Geometry = z.infer<typeof GeometrySchema>;

export const SegmentSchema = z.object({
  a: z.object({ x: z.string(), y: z.string() }),
  b: z.object({ x: z.string(), y: z.string() }),
});
export type Segment = z.infer<typeof SegmentSchema>;

export const SearchVerdictSchema = z.object({
  status: z.enum(["FOUND", "NONE"]),
  cells_processed: z.number().int(),
  segment: SegmentSchema.optional(),
  new_d: z.number().optional(),
  certified_gap: z.number().optional(),
});
export type SearchVerdict = z.infer<typeof SearchVerdictSchema>;

export type SearchEvent =
  | { progress: unknown }
  | { verdict: SearchVerdict }
  | { error: string };

/** Endpoint of a candidate segment, addressed on the locus. */
export interface CandidateEndpoint {
  edge: [number, number];
  t: string;
}
export interface CandidateBody {
  p: CandidateEndpoint;
  q: CandidateEndpoint;
}
export interface SearchOptions {
  gap?: number;
  res?: number;
  simple?: boolean;
}

/** A validated response paired with the exact text the service sent. */
export interface Snapshot<T> {
  value: T;
  raw: string;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`service returned ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

/** Raised when a /search stream reports an error event. */
export class SearchFailed extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "SearchFailed";
  }
}

/**
 * Structural interface of the client, so view-model tests can substitute
 * a scripted fake without touching the network.
 */
export interface Service {
  createSession(network: unknown): Promise<Snapshot<SessionResponse>>;
  preview(sid: string, candidate: CandidateBody): Promise<Snapshot<PreviewResponse>>;
  commit(sid: string, candidate: CandidateBody): Promise<Snapshot<StackResponse>>;
  undo(sid: string): Promise<Snapshot<StackResponse>>;
  search(
    sid: string,
    options: SearchOptions,
    onEvent?: (ev: SearchEvent) => void,
  ): Promise<SearchVerdict>;
  geometry(sid: string): Promise<Snapshot<Geometry>>;
}

async function errorDetail(res: Response): Promise<string> {
  const text = await res.text();
  try {
    const body = JSON.parse(text);
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    /* non-JSON error body: fall through to the raw text */
  }
  return text;
}

export class ServiceClient implements Service {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<string> {
    const res = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) throw new ApiError(res.status, await errorDetail(res));
    return res.text();
  }

  private snap<T>(raw: string, schema: z.ZodType<T>): Snapshot<T> {
    return { value: schema.parse(JSON.parse(raw)), raw };
  }

  async createSession(network: unknown): Promise<Snapshot<SessionResponse>> {
    return this.snap(await this.request("POST", "/session", network), SessionResponseSchema);
  }

  async preview(sid: string, candidate: CandidateBody): Promise<Snapshot<PreviewResponse>> {
    return this.snap(
      await this.request("POST", `/session/${sid}/preview`, candidate),
      PreviewResponseSchema,
    );
  }

  async commit(sid: string, candidate: CandidateBody): Promise<Snapshot<StackResponse>> {
    return this.snap(
      await this.request("POST", `/session/${sid}/commit`, candidate),
      StackResponseSchema,
    );
  }

  async undo(sid: string): Promise<Snapshot<StackResponse>> {
    return this.snap(await this.request("POST", `/session/${sid}/undo`), StackResponseSchema);
  }

  async geometry(sid: string): Promise<Snapshot<Geometry>> {
    return this.snap(await this.request("GET", `/session/${sid}/geometry`), GeometrySchema);
  }

  /**
   * Runs a search, forwarding each newline-delimited JSON event to
   * `onEvent` as it arrives, and resolves with the final verdict.
   */
  async search(
    sid: string,
    options: SearchOptions,
    onEvent?: (ev: SearchEvent) => void,
  ): Promise<SearchVerdict> {
    const res = await this.fetchFn(`${this.baseUrl}/session/${sid}/search`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(options),
    });
    if (!res.ok) throw new ApiError(res.status, await errorDetail(res));
    let verdict: SearchVerdict | null = null;
    const handle = (line: string) => {
      if (!line.trim()) return;
      // dispatch on the raw object: zod unions with unknown-typed fields
      // would otherwise swallow the discriminating key
      const obj = JSON.parse(line) as Record<string, unknown>;
      if (typeof obj.error === "string") {
        onEvent?.({ error: obj.error });
        throw new SearchFailed(obj.error);
      }
      if (obj.verdict !== undefined) {
        const v = SearchVerdictSchema.parse(obj.verdict);
        onEvent?.({ verdict: v });
        verdict = v;
        return;
      }
      onEvent?.({ progress: obj.progress });
    };
    if (res.body) {
      const reader = res.body.getReader();
      const decoder = new TextDecoder();
      let buffer = "";
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        buffer += decoder.decode(value, { stream: true });
        const lines = buffer.split("\n");
        buffer = lines.pop() ?? "";
        for (const line of lines) handle(line);
      }
      handle(buffer);
    } else {
      for (const line of (await res.text()).split("\n")) handle(line);
    }
    if (verdict === null) {
      throw new SearchFailed("search stream ended without a verdict");
    }
    return verdict;
  }
}

/**
 * Extracts the diameter exactly as the service spelled it in a response
 * body, so the UI can display it byte-for-byte.
 */
export function rawDiameter(raw: string): string {
  const m = raw.match(/"d":\s*(-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)/);
  if (!m || m[1] === undefined) {
    throw new Error("response carries no diameter");
  }
  return m[1];
}
