/** Decode a base64 trial payload into width*width gray bytes.
 *
 * Throws if the payload is not valid base64 or its length is not exactly
 * width squared, so a corrupt trial can never be rendered or answered.
 */
export function decodePixels(b64: string, width: number): Uint8Array {
  let binary: string;
  try {
    binary = atob(b64);
  } catch {
    throw new Error("trial payload is not valid base64");
  }
  if (binary.length !== width * width) {
    throw new Error(
      `decoded ${binary.length} bytes, expected ${width * width} for width ${width}`,
    );
  }
  const out = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) {
    out[i] = binary.charCodeAt(i);
  }
  return out;
}
