import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import {
  ApiError,
  CandidateBody,
  Geometry,
  SearchEvent,
  SearchOptions,
  SearchVerdict,
  Service,
  Snapshot,
  rawDiameter,
} from "../src/api.js";
import { PREVIEW_DEBOUNCE_MS, ViewModel, parseCoord } from "../src/viewmodel.js";

const SQUARE_GEOMETRY: Geometry = {
  vertices: [
    { id: 0, x: "0", y: "0" },
    { id: 1, x: "1", y: "0" },
    { id: 2, x: "1", y: "1" },
    { id: 3, x: "0", y: "1" },
  ],
  edges: [
    [0, 1],
    [0, 3],
    [1, 2],
    [2, 3],
  ],
  diametral_polylines: [],
  report: { d: 2.0, pairs: [] },
};

function reportRaw(d: string): string {
  return `{"d":${d},"pairs":[]}`;
}

/** Scripted in-memory stand-in for the HTTP service. */
class FakeService implements Service {
  previewCalls: CandidateBody[] = [];
  commitCalls: CandidateBody[] = [];
  undoCalls = 0;
  depth = 0;
  /** Raw report text per depth; index 0 is the base state. */
  reports: string[] = [reportRaw("2.0")];
  previewRaw: string = reportRaw("1.70710678119");
  /** When set, preview resolution is handed to the test. */
  previewGate: Array<(raw: string) => void> | null = null;
  searchScript: { events: SearchEvent[]; verdict: SearchVerdict } | null = null;

  private snapReport(raw: string): Snapshot<{ report: { d: number; pairs: [] } }> {
    return { value: { report: JSON.parse(raw) }, raw: `{"report":${raw}}` };
  }

  async createSession(_network: unknown) {
    const raw = `{"id":"fake-session","report":${this.reports[0]}}`;
    return { value: JSON.parse(raw), raw };
  }

  async preview(_sid: string, candidate: CandidateBody) {
    this.previewCalls.push(candidate);
    if (this.previewGate !== null) {
      const raw = await new Promise<string>((resolve) => {
        this.previewGate!.push(resolve);
      });
      return this.snapReport(raw);
    }
    return this.snapReport(this.previewRaw);
  }

  async commit(_sid: string, candidate: CandidateBody) {
    this.commitCalls.push(candidate);
    this.depth++;
    const report = this.reports[this.depth] ?? this.previewRaw;
    if (this.reports[this.depth] === undefined) this.reports.push(report);
    const raw = `{"depth":${this.depth},"report":${report}}`;
    return { value: JSON.parse(raw), raw };
  }

  async undo(_sid: string) {
    this.undoCalls++;
    if (this.depth === 0) throw new ApiError(422, "nothing to undo");
    this.depth--;
    this.reports.pop();
    const raw = `{"depth":${this.depth},"report":${this.reports[this.depth]}}`;
    return { value: JSON.parse(raw), raw };
  }

  async search(
    _sid: string,
    _options: SearchOptions,
    onEvent?: (ev: SearchEvent) => void,
  ): Promise<SearchVerdict> {
    if (this.searchScript === null) throw new Error("no search scripted");
    for (const ev of this.searchScript.events) onEvent?.(ev);
    return this.searchScript.verdict;
  }

  async geometry(_sid: string) {
    const geo = { ...SQUARE_GEOMETRY, report: JSON.parse(this.reports[this.depth]!) };
    return { value: geo, raw: JSON.stringify(geo) };
  }
}

async function loadedViewModel(): Promise<{ vm: ViewModel; svc: FakeService }> {
  const svc = new FakeService();
  const vm = new ViewModel(svc);
  await vm.loadNetwork({});
  return { vm, svc };
}

describe("coordinate parsing", () => {
  it("reads decimal and fractional coordinate strings", () => {
    expect(parseCoord("1.5")).toBe(1.5);
    expect(parseCoord("-2")).toBe(-2);
    expect(parseCoord("1/3")).toBeCloseTo(0.3333333333, 9);
  });
});

describe("raw diameter extraction", () => {
  it("returns the service's spelling of the number unchanged", () => {
    expect(rawDiameter('{"id":"x","report":{"d":2.0,"pairs":[]}}')).toBe("2.0");
    expect(rawDiameter('{"report":{"d":1.70710678119,"pairs":[]}}')).toBe(
      "1.70710678119",
    );
  });
});

describe("loading a network", () => {
  it("shows the service diameter byte-for-byte", async () => {
    const { vm } = await loadedViewModel();
    expect(vm.displayedDiameter()).toBe("2.0");
    expect(vm.geometry?.edges).toHaveLength(4);
  });

  it("never reformats the service number, even odd spellings", async () => {
    const svc = new FakeService();
    svc.reports = ['{"d":42.5000000000,"pairs":[]}'];
    const vm = new ViewModel(svc);
    await vm.loadNetwork({});
    expect(vm.displayedDiameter()).toBe("42.5000000000");
  });

  it("surfaces a service rejection as an inline hint", async () => {
    const svc = new FakeService();
    svc.createSession = async () => {
      throw new ApiError(400, "network document is missing 'vertices'");
    };
    const vm = new ViewModel(svc);
    expect(await vm.loadNetwork({ bogus: true })).toBe(false);
    expect(vm.hint).toContain("vertices");
  });
});

describe("snapping", () => {
  it("snaps a nearby click onto the closest edge", async () => {
    const { vm } = await loadedViewModel();
    const s = vm.snapToLocus({ x: 0.5, y: 0.02 });
    expect(s).not.toBeNull();
    expect(s!.edge).toEqual([0, 1]);
    expect(parseCoord(s!.t)).toBeCloseTo(0.5, 12);
    expect(s!.y).toBe(0); // projected exactly onto the edge
  });

  it("rejects clicks beyond 2% of the viewport diagonal", async () => {
    const { vm } = await loadedViewModel();
    expect(vm.snapRadius()).toBeCloseTo(0.02 * Math.SQRT2, 12);
    expect(vm.snapToLocus({ x: 0.5, y: 0.2 })).toBeNull();
    expect(vm.placeCandidate({ x: 0.5, y: 0.2 }, { x: 0.5, y: 0.02 })).toBe(false);
    expect(vm.hint).toContain("closer to the network");
    expect(vm.candidate).toBeNull();
  });

  it("clamps projections to edge endpoints", async () => {
    const { vm } = await loadedViewModel();
    const s = vm.snapToLocus({ x: 1.01, y: -0.01 });
    expect(s).not.toBeNull();
    expect(parseCoord(s!.t)).toBeGreaterThanOrEqual(0);
    expect(parseCoord(s!.t)).toBeLessThanOrEqual(1);
  });
});

describe("debounced previews", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("coalesces a burst of drags into one request", async () => {
    const { vm, svc } = await loadedViewModel();
    vm.placeCandidate({ x: 0.0, y: 0.0 }, { x: 1.0, y: 1.0 });
    for (const t of [0.2, 0.4, 0.6, 0.8]) {
      vi.advanceTimersByTime(PREVIEW_DEBOUNCE_MS / 2);
      vm.dragEndpoint("p", { x: t, y: 0.0 });
    }
    expect(svc.previewCalls).toHaveLength(0); // still inside the debounce
    vi.advanceTimersByTime(PREVIEW_DEBOUNCE_MS);
    await vm.settle();
    expect(svc.previewCalls).toHaveLength(1);
    expect(parseCoord(svc.previewCalls[0]!.p.t)).toBeCloseTo(0.8, 9);
    expect(vm.displayedDiameter()).toBe("1.70710678119");
  });

  it("keeps only the latest of two in-flight previews", async () => {
    const { vm, svc } = await loadedViewModel();
    svc.previewGate = [];
    vm.placeCandidate({ x: 0.0, y: 0.0 }, { x: 1.0, y: 1.0 });
    vi.advanceTimersByTime(PREVIEW_DEBOUNCE_MS);
    vm.dragEndpoint("p", { x: 0.5, y: 0.0 });
    vi.advanceTimersByTime(PREVIEW_DEBOUNCE_MS);
    expect(svc.previewGate).toHaveLength(2);
    // resolve out of order: the newer request first, then the stale one
    svc.previewGate[1]!(reportRaw("1.5"));
    await Promise.resolve();
    svc.previewGate[0]!(reportRaw("9.9"));
    await vm.settle();
    expect(vm.displayedDiameter()).toBe("1.5");
  });

  it("shows an invalid placement as a hint, not a crash", async () => {
    const { vm, svc } = await loadedViewModel();
    svc.preview = async () => {
      throw new ApiError(422, "candidate has zero length");
    };
    vm.placeCandidate({ x: 0.25, y: 0.0 }, { x: 0.25, y: 0.0 });
    vi.advanceTimersByTime(PREVIEW_DEBOUNCE_MS);
    await vm.settle();
    expect(vm.hint).toContain("zero length");
    expect(vm.displayedDiameter()).toBe("2.0"); // falls back to committed
  });
});

describe("commit and undo", () => {
  it("keeps undo depth equal to commit count and restores readouts", async () => {
    const { vm, svc } = await loadedViewModel();
    svc.previewRaw = reportRaw("1.70710678119");
    vm.placeCandidate({ x: 0.0, y: 0.0 }, { x: 1.0, y: 1.0 });
    await vm.flushPreview();
    expect(await vm.commitCandidate()).toBe(true);
    expect(vm.commitCount).toBe(1);
    expect(svc.depth).toBe(1);
    expect(vm.displayedDiameter()).toBe("1.70710678119");

    vm.placeCandidate({ x: 0.5, y: 0.0 }, { x: 0.5, y: 1.0 });
    await vm.flushPreview();
    expect(await vm.commitCandidate()).toBe(true);
    expect(vm.commitCount).toBe(2);
    expect(vm.history).toHaveLength(3);

    expect(await vm.undo()).toBe(true);
    expect(vm.commitCount).toBe(1);
    expect(vm.displayedDiameter()).toBe("1.70710678119");
    expect(await vm.undo()).toBe(true);
    expect(vm.commitCount).toBe(0);
    expect(vm.displayedDiameter()).toBe("2.0");
  });

  it("surfaces undo-at-base as a hint without corrupting history", async () => {
    const { vm } = await loadedViewModel();
    expect(await vm.undo()).toBe(false);
    expect(vm.hint).toContain("nothing to undo");
    expect(vm.commitCount).toBe(0);
    expect(vm.history).toEqual(["2.0"]);
  });

  it("drops a stale preview readout raced against a commit", async () => {
    const { vm, svc } = await loadedViewModel();
    svc.previewGate = [];
    vm.placeCandidate({ x: 0.0, y: 0.0 }, { x: 1.0, y: 1.0 });
    const flushing = vm.flushPreview();
    // the preview is in flight; the user commits before it resolves
    while (svc.previewGate.length === 0) await Promise.resolve();
    await vm.commitCandidate();
    svc.previewGate[0]!(reportRaw("9.9"));
    svc.previewGate = null;
    await flushing;
    expect(vm.displayedDiameter()).toBe(rawDiameter(svc.reports[1]!));
  });
});

describe("auto search", () => {
  it("collects progress and stages a FOUND segment as the candidate", async () => {
    const { vm, svc } = await loadedViewModel();
    svc.searchScript = {
      events: [{ progress: { cells: 10 } }, { progress: { cells: 20 } }],
      verdict: {
        status: "FOUND",
        cells_processed: 25,
        segment: { a: { x: "0.25", y: "0" }, b: { x: "0.75", y: "1" } },
        new_d: 1.8,
      },
    };
    const verdict = await vm.autoSearch({});
    expect(verdict.status).toBe("FOUND");
    expect(vm.searchProgress).toHaveLength(2);
    expect(vm.candidate).not.toBeNull();
    expect(vm.candidate!.p.edge).toEqual([0, 1]);
    expect(parseCoord(vm.candidate!.p.t)).toBeCloseTo(0.25, 9);
    expect(vm.candidate!.q.edge).toEqual([2, 3]);
    await vm.flushPreview();
    expect(svc.previewCalls).toHaveLength(1);
  });

  it("raises a banner with the certified gap on NONE", async () => {
    const { vm, svc } = await loadedViewModel();
    svc.searchScript = {
      events: [{ progress: {} }],
      verdict: { status: "NONE", cells_processed: 40, certified_gap: 0.001 },
    };
    const verdict = await vm.autoSearch({ simple: true });
    expect(verdict.status).toBe("NONE");
    expect(vm.banner).toContain("0.001");
    expect(vm.candidate).toBeNull();
  });
});
