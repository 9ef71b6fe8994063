import { describe, expect, test } from "vitest";
import { WAIT_CAP_MIN, legendStops, waitColor } from "../src/ramp.js";

function channels(color: string): [number, number, number] {
  const m = color.match(/^rgb\((\d+), (\d+), (\d+)\)$/);
  if (!m) throw new Error(`unexpected color format: ${color}`);
  return [Number(m[1]), Number(m[2]), Number(m[3])];
}

describe("wait color ramp", () => {
  test("zero wait renders the coolest color", () => {
    expect(waitColor(0)).toBe("rgb(43, 111, 217)");
  });

  test("the one-hour cap renders the hottest color", () => {
    expect(waitColor(60)).toBe("rgb(214, 39, 27)");
  });

  test("values outside the band clamp to the ends", () => {
    expect(waitColor(-5)).toBe(waitColor(0));
    expect(waitColor(120)).toBe(waitColor(60));
  });

  test("red rises and blue falls monotonically across the band", () => {
    let [prevR, , prevB] = channels(waitColor(0));
    for (let w = 1; w <= 60; w++) {
      const [r, , b] = channels(waitColor(w));
      expect(r).toBeGreaterThanOrEqual(prevR);
      expect(b).toBeLessThanOrEqual(prevB);
      prevR = r;
      prevB = b;
    }
  });

  test("legend covers the band and names the cap", () => {
    const stops = legendStops();
    expect(stops[0].waitMin).toBe(0);
    expect(stops[0].color).toBe(waitColor(0));
    const last = stops[stops.length - 1];
    expect(last.waitMin).toBe(WAIT_CAP_MIN);
    expect(last.label).toContain("cap");
  });
});
