/**
 * State machine behind the interactive explorer.
 *
 * All geometry-critical numbers (diameters, diametral pairs) come from the
 * service; this module only does UX-level work: snapping clicks onto the
 * network, debouncing drag previews, and keeping the commit/undo stack in
 * step with the service session.
 */
import {
  ApiError,
  CandidateBody,
  CandidateEndpoint,
  Geometry,
  Report,
  SearchEvent,
  SearchOptions,
  SearchVerdict,
  Service,
  rawDiameter,
} from "./api.js";

export interface WorldPoint {
  x: number;
  y: number;
}

/** A click resolved onto the locus: an edge address plus its coordinates. */
export interface SnappedPoint extends CandidateEndpoint {
  x: number;
  y: number;
}

/** Fraction of the viewport diagonal within which a click snaps. */
export const SNAP_FRACTION = 0.02;
/** Milliseconds a drag must pause before a preview request fires. */
export const PREVIEW_DEBOUNCE_MS = 100;

/** Parses a service coordinate string ("1.5" or "p/q") to a float. */
export function parseCoord(s: string): number {
  const slash = s.indexOf("/");
  if (slash >= 0) {
    return Number(s.slice(0, slash)) / Number(s.slice(slash + 1));
  }
  return Number(s);
}

interface EdgeGeom {
  edge: [number, number];
  ax: number;
  ay: number;
  bx: number;
  by: number;
}

export class ViewModel {
  sessionId: string | null = null;
  geometry: Geometry | null = null;
  /** Report of the committed state currently on screen. */
  report: Report | null = null;
  /** Diameter of the committed state, byte-for-byte as the service sent it. */
  readout = "";
  /** Candidate segment endpoints; always snapped, never raw pixels. */
  candidate: { p: SnappedPoint; q: SnappedPoint } | null = null;
  previewReport: Report | null = null;
  /** Diameter of the live preview, byte-for-byte from the service. */
  previewReadout: string | null = null;
  /** Committed readouts, base state first; last entry is on screen. */
  history: string[] = [];
  commitCount = 0;
  /** Inline message for invalid placements and service errors. */
  hint: string | null = null;
  searchProgress: SearchEvent[] = [];
  lastVerdict: SearchVerdict | null = null;
  banner: string | null = null;

  private edgeGeoms: EdgeGeom[] = [];
  private worldDiagonal = 0;
  private previewGeneration = 0;
  private debounceTimer: ReturnType<typeof setTimeout> | null = null;
  private pendingPreview: Promise<void> | null = null;

  constructor(private readonly api: Service) {}

  /** Diameter to display: the live preview when present, else committed. */
  displayedDiameter(): string {
    return this.previewReadout ?? this.readout;
  }

  /** Creates a session from a Network JSON document and renders it. */
  async loadNetwork(doc: unknown): Promise<boolean> {
    this.hint = null;
    let snap;
    try {
      snap = await this.api.createSession(doc);
    } catch (err) {
      if (err instanceof ApiError) {
        this.hint = err.detail;
        return false;
      }
      throw err;
    }
    this.sessionId = snap.value.id;
    this.report = snap.value.report;
    this.readout = rawDiameter(snap.raw);
    this.history = [this.readout];
    this.commitCount = 0;
    this.candidate = null;
    this.previewReport = null;
    this.previewReadout = null;
    await this.refreshGeometry();
    return true;
  }

  private async refreshGeometry(): Promise<void> {
    if (this.sessionId === null) return;
    const g = await this.api.geometry(this.sessionId);
    this.geometry = g.value;
    this.edgeGeoms = [];
    const coords = new Map<number, WorldPoint>();
    for (const v of g.value.vertices) {
      coords.set(v.id, { x: parseCoord(v.x), y: parseCoord(v.y) });
    }
    let xs: number[] = [];
    let ys: number[] = [];
    for (const p of coords.values()) {
      xs.push(p.x);
      ys.push(p.y);
    }
    const w = Math.max(...xs) - Math.min(...xs);
    const h = Math.max(...ys) - Math.min(...ys);
    this.worldDiagonal = Math.hypot(w, h);
    for (const [u, v] of g.value.edges) {
      const a = coords.get(u);
      const b = coords.get(v);
      if (a === undefined || b === undefined) continue;
      this.edgeGeoms.push({ edge: [u, v], ax: a.x, ay: a.y, bx: b.x, by: b.y });
    }
  }

  /** World-unit radius inside which a click attaches to the network. */
  snapRadius(): number {
    return SNAP_FRACTION * this.worldDiagonal;
  }

  /**
   * Projects a world point onto the nearest edge.  Returns null when the
   * point is farther than the snap radius (or `maxDist`) from every edge.
   */
  snapToLocus(pt: WorldPoint, maxDist?: number): SnappedPoint | null {
    const limit = maxDist ?? this.snapRadius();
    let best: SnappedPoint | null = null;
    let bestDist = Infinity;
    for (const e of this.edgeGeoms) {
      const dx = e.bx - e.ax;
      const dy = e.by - e.ay;
      const len2 = dx * dx + dy * dy;
      let t = len2 > 0 ? ((pt.x - e.ax) * dx + (pt.y - e.ay) * dy) / len2 : 0;
      t = Math.min(1, Math.max(0, t));
      const x = e.ax + t * dx;
      const y = e.ay + t * dy;
      const dist = Math.hypot(pt.x - x, pt.y - y);
      if (dist < bestDist) {
        bestDist = dist;
        best = { edge: e.edge, t: String(t), x, y };
      }
    }
    return bestDist <= limit ? best : null;
  }

  /**
   * Places a candidate segment from two clicks.  Both endpoints must snap;
   * otherwise an inline hint is set and nothing is previewed.
   */
  placeCandidate(click1: WorldPoint, click2: WorldPoint): boolean {
    const p = this.snapToLocus(click1);
    const q = this.snapToLocus(click2);
    if (p === null || q === null) {
      this.hint = "click closer to the network to place an endpoint";
      return false;
    }
    this.hint = null;
    this.candidate = { p, q };
    this.schedulePreview();
    return true;
  }

  /** Moves one endpoint during a drag; the preview re-fires debounced. */
  dragEndpoint(which: "p" | "q", pt: WorldPoint): boolean {
    if (this.candidate === null) return false;
    const snapped = this.snapToLocus(pt);
    if (snapped === null) {
      this.hint = "drag closer to the network";
      return false;
    }
    this.hint = null;
    this.candidate = { ...this.candidate, [which]: snapped };
    this.schedulePreview();
    return true;
  }

  private candidateBody(): CandidateBody {
    if (this.candidate === null) throw new Error("no candidate placed");
    const { p, q } = this.candidate;
    return { p: { edge: p.edge, t: p.t }, q: { edge: q.edge, t: q.t } };
  }

  private schedulePreview(): void {
    if (this.debounceTimer !== null) clearTimeout(this.debounceTimer);
    this.debounceTimer = setTimeout(() => {
      this.debounceTimer = null;
      this.pendingPreview = this.runPreview();
    }, PREVIEW_DEBOUNCE_MS);
  }

  /** Fires any pending debounced preview immediately and awaits it. */
  async flushPreview(): Promise<void> {
    if (this.debounceTimer !== null) {
      clearTimeout(this.debounceTimer);
      this.debounceTimer = null;
      this.pendingPreview = this.runPreview();
    }
    await this.settle();
  }

  /** Awaits the most recently fired preview request, if any. */
  async settle(): Promise<void> {
    while (this.pendingPreview !== null) {
      const p = this.pendingPreview;
      await p;
      if (this.pendingPreview === p) this.pendingPreview = null;
    }
  }

  private async runPreview(): Promise<void> {
    if (this.sessionId === null || this.candidate === null) return;
    const gen = ++this.previewGeneration;
    let snap;
    try {
      snap = await this.api.preview(this.sessionId, this.candidateBody());
    } catch (err) {
      if (gen !== this.previewGeneration) return; // superseded: drop
      if (err instanceof ApiError) {
        this.hint = err.detail;
        this.previewReport = null;
        this.previewReadout = null;
        return;
      }
      throw err;
    }
    if (gen !== this.previewGeneration) return; // superseded: drop
    this.previewReport = snap.value.report;
    this.previewReadout = rawDiameter(snap.raw);
    this.hint = null;
  }

  /** Commits the current candidate; the service stack is authoritative. */
  async commitCandidate(): Promise<boolean> {
    if (this.sessionId === null || this.candidate === null) return false;
    this.previewGeneration++; // any in-flight preview is now stale
    let snap;
    try {
      snap = await this.api.commit(this.sessionId, this.candidateBody());
    } catch (err) {
      if (err instanceof ApiError) {
        this.hint = err.detail;
        return false;
      }
      throw err;
    }
    this.commitCount++;
    if (snap.value.depth !== this.commitCount) {
      throw new Error(
        `history out of step: service depth ${snap.value.depth}, local ${this.commitCount}`,
      );
    }
    this.report = snap.value.report;
    this.readout = rawDiameter(snap.raw);
    this.history.push(this.readout);
    this.candidate = null;
    this.previewReport = null;
    this.previewReadout = null;
    await this.refreshGeometry();
    return true;
  }

  async undo(): Promise<boolean> {
    if (this.sessionId === null) return false;
    this.previewGeneration++;
    let snap;
    try {
      snap = await this.api.undo(this.sessionId);
    } catch (err) {
      if (err instanceof ApiError) {
        this.hint = err.detail;
        return false;
      }
      throw err;
    }
    this.commitCount--;
    if (snap.value.depth !== this.commitCount) {
      throw new Error(
        `history out of step: service depth ${snap.value.depth}, local ${this.commitCount}`,
      );
    }
    this.history.pop();
    this.report = snap.value.report;
    this.readout = rawDiameter(snap.raw);
    this.candidate = null;
    this.previewReport = null;
    this.previewReadout = null;
    await this.refreshGeometry();
    return true;
  }

  /**
   * Runs the automatic shortcut search.  A FOUND segment is staged as the
   * current candidate (snapped, previewed) for the human to commit; a NONE
   * verdict raises a banner with the certified gap.
   */
  async autoSearch(options: SearchOptions = {}): Promise<SearchVerdict> {
    if (this.sessionId === null) throw new Error("no session loaded");
    this.searchProgress = [];
    this.banner = null;
    const verdict = await this.api.search(this.sessionId, options, (ev) => {
      this.searchProgress.push(ev);
    });
    this.lastVerdict = verdict;
    if (verdict.status === "FOUND" && verdict.segment !== undefined) {
      const a = {
        x: parseCoord(verdict.segment.a.x),
        y: parseCoord(verdict.segment.a.y),
      };
      const b = {
        x: parseCoord(verdict.segment.b.x),
        y: parseCoord(verdict.segment.b.y),
      };
      // found endpoints lie on the locus; snap without a radius limit
      const p = this.snapToLocus(a, Infinity);
      const q = this.snapToLocus(b, Infinity);
      if (p !== null && q !== null) {
        this.candidate = { p, q };
        this.schedulePreview();
      }
    } else if (verdict.status === "NONE") {
      this.banner =
        verdict.certified_gap === undefined
          ? "no shortcut exists"
          : `no shortcut exists (certified gap ${verdict.certified_gap})`;
    }
    return verdict;
  }
}
