import { ApiClient } from "./api.js";
import { amplitudesToRGBA, overlayMask } from "./colormap.js";
import { MaskBuffer } from "./mask.js";
import { ViewTransform } from "./transform.js";
import { UndoStack } from "./undo.js";
import { BRUSH_CODE, BrushState, EventImageData, EventSummary } from "./types.js";

// Single-page labeling app: pick an event, paint track/noise with the brush
// (left drag), pan (right or middle drag), zoom (wheel), save explicitly.
// Mask edits stay client-side until Save, so what the canvas shows is always
// exactly what Save would persist.

const api = new ApiClient("");

class LabelerApp {
  private canvas = document.getElementById("view") as HTMLCanvasElement;
  private ctx = this.canvas.getContext("2d")!;
  private listEl = document.getElementById("events")!;
  private statusEl = document.getElementById("status")!;

  private brush: BrushState = { mode: "track", radius: 2 };
  private overlayOpacity = 0.45;
  private contrastLo = 0;
  private contrastHi = 1;

  private current: EventImageData | null = null;
  private mask: MaskBuffer | null = null;
  private savedState: Uint8Array | null = null;
  private undoStack = new UndoStack();
  private view = new ViewTransform();

  private offscreen = document.createElement("canvas");
  private painting = false;
  private panning = false;
  private lastPixel: { row: number; col: number } | null = null;
  private lastScreen: { x: number; y: number } | null = null;

  constructor() {
    this.bindControls();
    this.bindCanvas();
    void this.refreshEvents();
  }

  private setStatus(text: string) {
    this.statusEl.textContent = text;
  }

  private async refreshEvents(): Promise<void> {
    try {
      const events = await api.listEvents();
      this.renderEventList(events);
      this.setStatus(`${events.length} events`);
    } catch (err) {
      this.setStatus(`failed to list events: ${err}`);
    }
  }

  private renderEventList(events: EventSummary[]): void {
    this.listEl.innerHTML = "";
    for (const ev of events) {
      const item = document.createElement("button");
      item.className = `event status-${ev.status}`;
      item.textContent = `${ev.id} · ${ev.width}x${ev.height} · ${ev.status}`;
      item.addEventListener("click", () => void this.openEvent(ev));
      this.listEl.appendChild(item);
    }
  }

  private async openEvent(ev: EventSummary): Promise<void> {
    try {
      this.setStatus(`loading ${ev.id}…`);
      const image = await api.getImage(ev.id);
      const mask = (await api.getMask(ev.id)) ?? new MaskBuffer(image.width, image.height);
      this.current = image;
      this.mask = mask;
      this.savedState = mask.snapshot();
      this.undoStack.clear();
      this.contrastLo = 0;
      this.contrastHi = 1;
      this.offscreen.width = image.width;
      this.offscreen.height = image.height;
      this.view = ViewTransform.fit(image.width, image.height, this.canvas.width, this.canvas.height);
      this.render();
      this.setStatus(`${ev.id} loaded (amplitudes ${image.ampMin.toFixed(1)}…${image.ampMax.toFixed(1)})`);
    } catch (err) {
      this.setStatus(`failed to open ${ev.id}: ${err}`);
    }
  }

  private contrastWindow() {
    const img = this.current!;
    const span = img.ampMax - img.ampMin || 1;
    return {
      lo: img.ampMin + this.contrastLo * span,
      hi: img.ampMin + this.contrastHi * span,
    };
  }

  render(): void {
    if (!this.current || !this.mask) return;
    const { width, height, amplitudes } = this.current;
    const rgba = amplitudesToRGBA(amplitudes, this.contrastWindow());
    overlayMask(rgba, this.mask.data, this.overlayOpacity);
    this.offscreen.getContext("2d")!.putImageData(new ImageData(rgba, width, height), 0, 0);

    const ctx = this.ctx;
    ctx.setTransform(1, 0, 0, 1, 0, 0);
    ctx.fillStyle = "#11151a";
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
    ctx.imageSmoothingEnabled = false;
    ctx.setTransform(this.view.scale, 0, 0, this.view.scale, this.view.offsetX, this.view.offsetY);
    ctx.drawImage(this.offscreen, 0, 0);
    ctx.setTransform(1, 0, 0, 1, 0, 0);
  }

  private canvasPoint(e: MouseEvent): { x: number; y: number } {
    const rect = this.canvas.getBoundingClientRect();
    return { x: e.clientX - rect.left, y: e.clientY - rect.top };
  }

  private bindCanvas(): void {
    this.canvas.addEventListener("contextmenu", (e) => e.preventDefault());
    this.canvas.addEventListener("wheel", (e) => {
      e.preventDefault();
      const { x, y } = this.canvasPoint(e);
      this.view.zoomAt(x, y, e.deltaY < 0 ? 1.2 : 1 / 1.2);
      this.render();
    }, { passive: false });

    this.canvas.addEventListener("mousedown", (e) => {
      const { x, y } = this.canvasPoint(e);
      if (e.button === 0 && this.mask) {
        this.painting = true;
        this.undoStack.pushState(this.mask.data);
        const p = this.view.pixelAtScreen(x, y);
        this.mask.stamp(p.row, p.col, this.brush.radius, BRUSH_CODE[this.brush.mode]);
        this.lastPixel = p;
        this.render();
      } else if (e.button === 1 || e.button === 2) {
        this.panning = true;
        this.lastScreen = { x, y };
      }
    });

    window.addEventListener("mousemove", (e) => {
      const { x, y } = this.canvasPoint(e);
      if (this.painting && this.mask && this.lastPixel) {
        const p = this.view.pixelAtScreen(x, y);
        this.mask.strokeSegment(
          this.lastPixel.row, this.lastPixel.col, p.row, p.col,
          this.brush.radius, BRUSH_CODE[this.brush.mode],
        );
        this.lastPixel = p;
        this.render();
      } else if (this.panning && this.lastScreen) {
        this.view.pan(x - this.lastScreen.x, y - this.lastScreen.y);
        this.lastScreen = { x, y };
        this.render();
      }
    });

    window.addEventListener("mouseup", () => {
      this.painting = false;
      this.panning = false;
      this.lastPixel = null;
      this.lastScreen = null;
    });

    window.addEventListener("keydown", (e) => {
      if (e.ctrlKey && e.key === "z") {
        e.preventDefault();
        this.undo();
      } else if (e.ctrlKey && e.key === "y") {
        e.preventDefault();
        this.redo();
      }
    });
  }

  undo(): void {
    if (!this.mask) return;
    const prev = this.undoStack.undo(this.mask.data);
    if (prev) {
      this.mask.restore(prev);
      this.render();
    }
  }

  redo(): void {
    if (!this.mask) return;
    const next = this.undoStack.redo(this.mask.data);
    if (next) {
      this.mask.restore(next);
      this.render();
    }
  }

  private async save(): Promise<void> {
    if (!this.current || !this.mask) return;
    try {
      await api.putMask(this.current.id, this.mask);
      this.savedState = this.mask.snapshot();
      this.setStatus(`saved ${this.current.id}`);
      await this.refreshEvents();
    } catch (err) {
      this.setStatus(`save failed: ${err}`);
    }
  }

  private revert(): void {
    if (!this.mask || !this.savedState) return;
    this.undoStack.pushState(this.mask.data);
    this.mask.restore(this.savedState);
    this.render();
    this.setStatus("reverted to last saved state");
  }

  private bindControls(): void {
    for (const mode of ["track", "noise", "erase"] as const) {
      document.getElementById(`mode-${mode}`)!.addEventListener("change", () => {
        this.brush.mode = mode;
      });
    }
    const radius = document.getElementById("radius") as HTMLInputElement;
    radius.addEventListener("input", () => {
      this.brush.radius = Math.max(1, Number(radius.value));
      document.getElementById("radius-label")!.textContent = radius.value;
    });
    const opacity = document.getElementById("opacity") as HTMLInputElement;
    opacity.addEventListener("input", () => {
      this.overlayOpacity = Number(opacity.value) / 100;
      this.render();
    });
    const lo = document.getElementById("contrast-lo") as HTMLInputElement;
    const hi = document.getElementById("contrast-hi") as HTMLInputElement;
    const onContrast = () => {
      this.contrastLo = Math.min(Number(lo.value), Number(hi.value) - 1) / 100;
      this.contrastHi = Number(hi.value) / 100;
      this.render();
    };
    lo.addEventListener("input", onContrast);
    hi.addEventListener("input", onContrast);

    document.getElementById("save")!.addEventListener("click", () => void this.save());
    document.getElementById("undo")!.addEventListener("click", () => this.undo());
    document.getElementById("redo")!.addEventListener("click", () => this.redo());
    document.getElementById("revert")!.addEventListener("click", () => this.revert());
  }
}

new LabelerApp();
