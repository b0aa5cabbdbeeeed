/**
 * Pure pixel filters applied inside the highlight or zoom region.
 * invert maps every channel value v to 255 - v (alpha untouched), so applying
 * it twice is the identity. thicken is one 3x3 dilation of stroke-colored
 * pixels: any pixel with a stroke-colored pixel in its 3x3 neighborhood takes
 * the stroke color.
 */

export interface Pixels {
  width: number;
  height: number;
  /** RGBA, row-major, 4 bytes per pixel (same layout as ImageData.data) */
  data: Uint8ClampedArray;
}

export interface Region {
  x: number;
  y: number;
  w: number;
  h: number;
}

function regionOrFull(img: Pixels, region?: Region): Region {
  return region ?? { x: 0, y: 0, w: img.width, h: img.height };
}

export function invert(img: Pixels, region?: Region): void {
  const r = regionOrFull(img, region);
  const x0 = Math.max(0, r.x);
  const y0 = Math.max(0, r.y);
  const x1 = Math.min(img.width, r.x + r.w);
  const y1 = Math.min(img.height, r.y + r.h);
  for (let y = y0; y < y1; y++) {
    for (let x = x0; x < x1; x++) {
      const i = (y * img.width + x) * 4;
      img.data[i] = 255 - img.data[i]!;
      img.data[i + 1] = 255 - img.data[i + 1]!;
      img.data[i + 2] = 255 - img.data[i + 2]!;
    }
  }
}

export type RGB = [number, number, number];

function isStroke(img: Pixels, x: number, y: number, stroke: RGB): boolean {
  const i = (y * img.width + x) * 4;
  return img.data[i] === stroke[0] && img.data[i + 1] === stroke[1] && img.data[i + 2] === stroke[2];
}

export function thicken(img: Pixels, stroke: RGB, region?: Region): void {
  const r = regionOrFull(img, region);
  const x0 = Math.max(0, r.x);
  const y0 = Math.max(0, r.y);
  const x1 = Math.min(img.width, r.x + r.w);
  const y1 = Math.min(img.height, r.y + r.h);
  const source = new Uint8ClampedArray(img.data);
  const from: Pixels = { width: img.width, height: img.height, data: source };
  for (let y = y0; y < y1; y++) {
    for (let x = x0; x < x1; x++) {
      if (isStroke(from, x, y, stroke)) continue;
      let hit = false;
      for (let dy = -1; dy <= 1 && !hit; dy++) {
        for (let dx = -1; dx <= 1 && !hit; dx++) {
          const nx = x + dx;
          const ny = y + dy;
          if (nx >= 0 && ny >= 0 && nx < img.width && ny < img.height && isStroke(from, nx, ny, stroke)) {
            hit = true;
          }
        }
      }
      if (hit) {
        const i = (y * img.width + x) * 4;
        img.data[i] = stroke[0];
        img.data[i + 1] = stroke[1];
        img.data[i + 2] = stroke[2];
        img.data[i + 3] = 255;
      }
    }
  }
}
