import { describe, expect, it } from "vitest";

import { ViewTransform } from "../src/transform.js";
import { MaskBuffer } from "../src/mask.js";
import { LABEL_TRACK } from "../src/types.js";

// S2: under several zoom/pan states, a click must edit exactly the image
// pixel whose on-screen rectangle contains the cursor.

const STATES: Array<[string, ViewTransform]> = [
  ["identity", new ViewTransform(1, 0, 0)],
  ["zoomed in, panned", new ViewTransform(3.5, -20.25, 11.75)],
  ["zoomed out", new ViewTransform(0.75, 40, -3)],
  ["deep zoom", new ViewTransform(12, -113.4, -57.9)],
];

describe("screen/image mapping", () => {
  it("round-trips image -> screen -> image", () => {
    for (const [, t] of STATES) {
      for (const [x, y] of [[0, 0], [3.25, 7.5], [63.999, 1.125]]) {
        const { sx, sy } = t.imageToScreen(x, y);
        const back = t.screenToImage(sx, sy);
        expect(back.x).toBeCloseTo(x, 9);
        expect(back.y).toBeCloseTo(y, 9);
      }
    }
  });

  it("maps any point inside a pixel's screen rect back to that pixel", () => {
    let checked = 0;
    for (const [name, t] of STATES) {
      for (let row = 0; row < 20; row++) {
        for (let col = 0; col < 20; col++) {
          const rect = t.pixelScreenRect({ row, col });
          for (const fx of [0.01, 0.5, 0.99]) {
            const sx = rect.sx + fx * rect.size;
            const sy = rect.sy + (1 - fx) * rect.size * 0.98 + 0.001;
            const p = t.pixelAtScreen(sx, sy);
            expect(p, `${name} (${row},${col})`).toEqual({ row, col });
            checked++;
          }
        }
      }
    }
    expect(checked).toBe(STATES.length * 400 * 3);
  });

  it("click paints exactly the pixel under the cursor", () => {
    for (const [name, t] of STATES) {
      const mask = new MaskBuffer(32, 32);
      const target = { row: 13, col: 7 };
      const rect = t.pixelScreenRect(target);
      const clickX = rect.sx + 0.37 * rect.size;
      const clickY = rect.sy + 0.81 * rect.size;
      // the app's click path: screen point -> pixel -> radius-1 stamp
      const p = t.pixelAtScreen(clickX, clickY);
      mask.stamp(p.row, p.col, 1, LABEL_TRACK);

      const { track, unlabeled } = mask.counts();
      expect(track, name).toBe(1);
      expect(unlabeled).toBe(32 * 32 - 1);
      expect(mask.get(target.row, target.col), name).toBe(LABEL_TRACK);
    }
  });

  it("zoomAt keeps the anchor point fixed", () => {
    const t = new ViewTransform(2, 14, -6);
    const anchorScreen = { x: 200, y: 150 };
    const before = t.screenToImage(anchorScreen.x, anchorScreen.y);
    t.zoomAt(anchorScreen.x, anchorScreen.y, 1.8);
    const after = t.screenToImage(anchorScreen.x, anchorScreen.y);
    expect(after.x).toBeCloseTo(before.x, 9);
    expect(after.y).toBeCloseTo(before.y, 9);
    expect(t.scale).toBeCloseTo(3.6, 12);
  });

  it("pan shifts screen coordinates only", () => {
    const t = new ViewTransform(2, 0, 0);
    const before = t.imageToScreen(5, 5);
    t.pan(17, -4);
    const after = t.imageToScreen(5, 5);
    expect(after.sx - before.sx).toBeCloseTo(17, 12);
    expect(after.sy - before.sy).toBeCloseTo(-4, 12);
  });

  it("fit centers the image in the viewport", () => {
    const t = ViewTransform.fit(64, 48, 800, 600);
    const topLeft = t.imageToScreen(0, 0);
    const bottomRight = t.imageToScreen(64, 48);
    expect(topLeft.sx).toBeCloseTo(800 - bottomRight.sx, 6);
    expect(topLeft.sy).toBeCloseTo(600 - bottomRight.sy, 6);
    expect(t.scale).toBeGreaterThan(0);
  });

  it("rejects non-positive scale and zoom factors", () => {
    expect(() => new ViewTransform(0)).toThrow();
    expect(() => new ViewTransform(1).zoomAt(0, 0, 0)).toThrow();
  });
});
