import { LABEL_NOISE, LABEL_TRACK } from "./types.js";

// Grayscale amplitude rendering with an adjustable contrast window plus a
// translucent mask overlay (track red, noise blue, unlabeled untouched).

export interface ContrastWindow {
  lo: number;
  hi: number; // amplitudes at/below lo map to black, at/above hi to white
}

export function amplitudesToRGBA(
  amplitudes: Float32Array,
  window: ContrastWindow,
  out?: Uint8ClampedArray<ArrayBuffer>,
): Uint8ClampedArray<ArrayBuffer> {
  const n = amplitudes.length;
  const rgba = out ?? new Uint8ClampedArray(n * 4);
  const span = window.hi > window.lo ? window.hi - window.lo : 1;
  for (let i = 0; i < n; i++) {
    const v = Math.max(0, Math.min(1, (amplitudes[i] - window.lo) / span));
    const g = Math.round(v * 255);
    rgba[4 * i] = g;
    rgba[4 * i + 1] = g;
    rgba[4 * i + 2] = g;
    rgba[4 * i + 3] = 255;
  }
  return rgba;
}

export function overlayMask(
  rgba: Uint8ClampedArray<ArrayBuffer>,
  mask: Uint8Array,
  opacity: number,
): Uint8ClampedArray<ArrayBuffer> {
  const a = Math.max(0, Math.min(1, opacity));
  if (a === 0) return rgba;
  for (let i = 0; i < mask.length; i++) {
    const code = mask[i];
    let r: number;
    let g: number;
    let b: number;
    if (code === LABEL_TRACK) {
      r = 255; g = 64; b = 64;
    } else if (code === LABEL_NOISE) {
      r = 64; g = 96; b = 255;
    } else {
      continue;
    }
    rgba[4 * i] = Math.round((1 - a) * rgba[4 * i] + a * r);
    rgba[4 * i + 1] = Math.round((1 - a) * rgba[4 * i + 1] + a * g);
    rgba[4 * i + 2] = Math.round((1 - a) * rgba[4 * i + 2] + a * b);
  }
  return rgba;
}
