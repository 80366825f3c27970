// Label codes shared with the backing service and its mask files.
export const LABEL_NOISE = 0;
export const LABEL_TRACK = 1;
export const LABEL_UNLABELED = 255;

export type BrushMode = "track" | "noise" | "erase";

export const BRUSH_CODE: Record<BrushMode, number> = {
  track: LABEL_TRACK,
  noise: LABEL_NOISE,
  erase: LABEL_UNLABELED,
};

export interface BrushState {
  mode: BrushMode;
  radius: number; // >= 1; radius 1 paints a single pixel
}

export interface EventSummary {
  id: string;
  width: number;
  height: number;
  status: "unlabeled" | "partial" | "complete";
}

export interface EventImageData {
  id: string;
  width: number;
  height: number;
  amplitudes: Float32Array; // row-major, lossless from the service
  ampMin: number;
  ampMax: number;
}
