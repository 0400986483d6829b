import { describe, expect, it } from "vitest";

import { initialState, Store } from "../src/state.js";

describe("step navigation", () => {
  it("starts at glyph and walks forward one step at a time", () => {
    const store = new Store();
    expect(store.get().step).toBe("glyph");
    expect(store.goToStep("stroke")).toBe(false); // cannot skip rhythm
    expect(store.get().step).toBe("glyph");
    expect(store.goToStep("rhythm")).toBe(true);
    expect(store.goToStep("stroke")).toBe(true);
  });

  it("allows back-navigation to any earlier step", () => {
    const store = new Store();
    store.goToStep("rhythm");
    store.goToStep("stroke");
    expect(store.goToStep("glyph")).toBe(true);
    expect(store.get().step).toBe("glyph");
    // and forward again from there is still sequential
    expect(store.goToStep("stroke")).toBe(false);
  });

  it("never loses selection state across transitions", () => {
    const store = new Store();
    store.selectPair("t", "s", 5);
    store.selectStroke(3);
    store.goToStep("rhythm");
    store.goToStep("stroke");
    store.goToStep("rhythm");
    expect(store.get().selectedStroke).toBe(3);
    expect(store.get().teacherId).toBe("t");
    expect(store.get().studentId).toBe("s");
  });
});

describe("stroke selection", () => {
  it("clamps to the pair count", () => {
    const store = new Store();
    store.selectPair("t", "s", 3);
    store.selectStroke(99);
    expect(store.get().selectedStroke).toBe(2);
    store.selectStroke(-4);
    expect(store.get().selectedStroke).toBe(0);
  });

  it("re-clamps when a smaller pair is selected", () => {
    const store = new Store();
    store.selectPair("t", "s", 5);
    store.selectStroke(4);
    store.selectPair("t2", "s2", 2);
    expect(store.get().selectedStroke).toBe(1);
  });
});

describe("initial state", () => {
  it("matches the documented defaults", () => {
    const s = initialState();
    expect(s.step).toBe("glyph");
    expect(s.overlayOffset).toEqual({ dx: 0, dy: 0 });
    expect(s.boxToggles).toEqual({ structural: false, form: false });
    expect(s.hoverPos).toBeNull();
    expect(s.rhythmMetric).toBe("pressure");
  });
});
