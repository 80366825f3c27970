// Zoom/pan mapping between screen (canvas) coordinates and image pixels.
//
// A pixel (row, col) occupies the half-open screen rectangle
//   [offsetX + col*scale, offsetX + (col+1)*scale) x
//   [offsetY + row*scale, offsetY + (row+1)*scale)
// which is exactly what drawing the image through
// ctx.setTransform(scale, 0, 0, scale, offsetX, offsetY) produces.

export interface PixelCoord {
  row: number;
  col: number;
}

export class ViewTransform {
  constructor(
    public scale: number = 1,
    public offsetX: number = 0,
    public offsetY: number = 0,
  ) {
    if (scale <= 0) throw new Error(`scale must be positive, got ${scale}`);
  }

  clone(): ViewTransform {
    return new ViewTransform(this.scale, this.offsetX, this.offsetY);
  }

  // continuous image-space coordinates of a screen point
  screenToImage(sx: number, sy: number): { x: number; y: number } {
    return { x: (sx - this.offsetX) / this.scale, y: (sy - this.offsetY) / this.scale };
  }

  imageToScreen(x: number, y: number): { sx: number; sy: number } {
    return { sx: this.offsetX + x * this.scale, sy: this.offsetY + y * this.scale };
  }

  // the image pixel whose screen rectangle contains the point
  pixelAtScreen(sx: number, sy: number): PixelCoord {
    const { x, y } = this.screenToImage(sx, sy);
    return { row: Math.floor(y), col: Math.floor(x) };
  }

  pixelScreenRect(p: PixelCoord): { sx: number; sy: number; size: number } {
    const { sx, sy } = this.imageToScreen(p.col, p.row);
    return { sx, sy, size: this.scale };
  }

  pan(dx: number, dy: number): void {
    this.offsetX += dx;
    this.offsetY += dy;
  }

  // zoom by `factor` keeping the image point under (sx, sy) fixed on screen
  zoomAt(sx: number, sy: number, factor: number): void {
    if (factor <= 0) throw new Error(`zoom factor must be positive, got ${factor}`);
    const anchor = this.screenToImage(sx, sy);
    this.scale *= factor;
    this.offsetX = sx - anchor.x * this.scale;
    this.offsetY = sy - anchor.y * this.scale;
  }

  // initial fit: center the whole image inside a viewport with a margin
  static fit(imageWidth: number, imageHeight: number, viewWidth: number, viewHeight: number): ViewTransform {
    const scale = Math.max(
      1e-6,
      Math.min((viewWidth - 16) / imageWidth, (viewHeight - 16) / imageHeight),
    );
    return new ViewTransform(
      scale,
      (viewWidth - imageWidth * scale) / 2,
      (viewHeight - imageHeight * scale) / 2,
    );
  }
}
