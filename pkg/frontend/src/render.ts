/** Nearest-neighbor expansion of a gray raster into an RGBA pixel buffer.
 *
 * Every display pixel (x, y) copies source pixel
 * (floor(x*w/W), floor(y*w/W)); no intensity is ever interpolated.  The
 * buffer is written to the canvas with putImageData (a raw copy), so the
 * browser never gets a chance to smooth anything either.
 */
export function expandNearest(
  pixels: Uint8Array,
  width: number,
  display: number,
): Uint8ClampedArray<ArrayBuffer> {
  if (display < width) {
    throw new Error(`display ${display} smaller than source width ${width}`);
  }
  const out = new Uint8ClampedArray(new ArrayBuffer(display * display * 4));
  for (let y = 0; y < display; y++) {
    const sy = Math.floor((y * width) / display);
    for (let x = 0; x < display; x++) {
      const sx = Math.floor((x * width) / display);
      const value = pixels[sy * width + sx];
      const o = (y * display + x) * 4;
      out[o] = value;
      out[o + 1] = value;
      out[o + 2] = value;
      out[o + 3] = 255;
    }
  }
  return out;
}

/** Distinct gray values present in an RGBA buffer (read-back probe). */
export function distinctIntensities(rgba: Uint8ClampedArray): Set<number> {
  const seen = new Set<number>();
  for (let i = 0; i < rgba.length; i += 4) {
    seen.add(rgba[i]);
  }
  return seen;
}
