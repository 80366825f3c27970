import { LABEL_UNLABELED } from "./types.js";

// Editable per-pixel label buffer. Brush stamps are discs in pixel space:
// radius 1 paints exactly the center pixel, radius r paints pixels whose
// center is within (r - 1) of the brush center.
export class MaskBuffer {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number, data?: Uint8Array) {
    if (width < 1 || height < 1) throw new Error(`bad mask dimensions ${width}x${height}`);
    this.width = width;
    this.height = height;
    if (data !== undefined) {
      if (data.length !== width * height) {
        throw new Error(`mask payload is ${data.length} bytes, expected ${width * height}`);
      }
      this.data = data;
    } else {
      this.data = new Uint8Array(width * height).fill(LABEL_UNLABELED);
    }
  }

  get(row: number, col: number): number {
    return this.data[row * this.width + col];
  }

  set(row: number, col: number, code: number): void {
    if (row >= 0 && row < this.height && col >= 0 && col < this.width) {
      this.data[row * this.width + col] = code;
    }
  }

  snapshot(): Uint8Array {
    return this.data.slice();
  }

  restore(snapshot: Uint8Array): void {
    if (snapshot.length !== this.data.length) throw new Error("snapshot size mismatch");
    this.data.set(snapshot);
  }

  equals(other: Uint8Array): boolean {
    if (other.length !== this.data.length) return false;
    for (let i = 0; i < other.length; i++) {
      if (this.data[i] !== other[i]) return false;
    }
    return true;
  }

  stamp(row: number, col: number, radius: number, code: number): void {
    const r = Math.max(0, Math.floor(radius) - 1);
    const r2 = r * r;
    for (let dr = -r; dr <= r; dr++) {
      for (let dc = -r; dc <= r; dc++) {
        if (dr * dr + dc * dc <= r2) {
          this.set(row + dr, col + dc, code);
        }
      }
    }
  }

  // stamp continuously along a segment so fast strokes leave no gaps
  strokeSegment(r0: number, c0: number, r1: number, c1: number, radius: number, code: number): void {
    const steps = Math.max(Math.abs(r1 - r0), Math.abs(c1 - c0), 1);
    for (let i = 0; i <= steps; i++) {
      const t = i / steps;
      this.stamp(Math.round(r0 + t * (r1 - r0)), Math.round(c0 + t * (c1 - c0)), radius, code);
    }
  }

  counts(): { noise: number; track: number; unlabeled: number } {
    let noise = 0;
    let track = 0;
    let unlabeled = 0;
    for (const v of this.data) {
      if (v === 0) noise++;
      else if (v === 1) track++;
      else unlabeled++;
    }
    return { noise, track, unlabeled };
  }
}
