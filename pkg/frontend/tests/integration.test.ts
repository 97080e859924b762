import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { httpTransport } from "../src/api.js";
import { selectionForKey } from "../src/keys.js";
import { Labeler, type TrialView } from "../src/labeler.js";
import { distinctIntensities, expandNearest } from "../src/render.js";
import { decodePixels } from "../src/decode.js";
import type { TrialPayload } from "../src/types.js";

const HERE = dirname(fileURLToPath(import.meta.url));

let child: ChildProcess;
let baseUrl = "";
let logPath = "";

function startService(): Promise<void> {
  return new Promise((resolve, reject) => {
    child = spawn("python3", [join(HERE, "helpers", "serve_fixture.py")], {
      stdio: ["ignore", "pipe", "inherit"],
    });
    let buffer = "";
    const timer = setTimeout(() => reject(new Error("service did not start")), 20_000);
    child.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const port = buffer.match(/PORT=(\d+)/);
      const log = buffer.match(/LOG=(.+)/);
      if (port && log) {
        baseUrl = `http://127.0.0.1:${port[1]}`;
        logPath = log[1].trim();
        clearTimeout(timer);
        resolve();
      }
    });
    child.on("exit", (code) => reject(new Error(`service exited early (${code})`)));
  });
}

class SilentView implements TrialView {
  lastPayload: TrialPayload | null = null;
  lastPixels: Uint8Array | null = null;
  completed = 0;

  showTrial(payload: TrialPayload, pixels: Uint8Array): void {
    this.lastPayload = payload;
    this.lastPixels = pixels;
  }
  showError(message: string): void {
    throw new Error(`unexpected UI error: ${message}`);
  }
  showRetryBanner(): void {}
  setCompleted(count: number): void {
    this.completed = count;
  }
}

async function waitForShown(labeler: Labeler): Promise<void> {
  for (let i = 0; i < 400; i++) {
    if (labeler.getState() === "shown") {
      return;
    }
    await new Promise((resolve) => setTimeout(resolve, 10));
  }
  throw new Error(`labeler stuck in state ${labeler.getState()}`);
}

describe("against the live service", () => {
  beforeAll(async () => {
    await startService();
  }, 30_000);

  afterAll(() => {
    child?.kill("SIGKILL");
  });

  it("drives 50 trials with no duplicate or missing responses", async () => {
    const view = new SilentView();
    const labeler = new Labeler(httpTransport(baseUrl), view, "webui-driver");
    await labeler.start();
    await waitForShown(labeler);

    for (let i = 0; i < 50; i++) {
      expect(view.lastPayload).not.toBeNull();
      const payload = view.lastPayload!;
      expect(payload.width).toBeGreaterThanOrEqual(1);
      expect(payload.width).toBeLessThanOrEqual(28);
      expect(view.lastPixels!.length).toBe(payload.width ** 2);

      const digit = i % 10;
      if (i % 2 === 0) {
        const viaKey = selectionForKey(String(digit))!;
        // double keypress: second must be a no-op
        await Promise.all([labeler.select(viaKey), labeler.select(viaKey)]);
      } else {
        await Promise.all([labeler.select(digit), labeler.select(digit)]);
      }
      await waitForShown(labeler);
    }

    expect(labeler.completed).toBe(50);

    // server-side log: exactly 50 lines, unique trial ids, no label leak
    const lines = readFileSync(logPath, "utf-8").trim().split("\n");
    expect(lines).toHaveLength(50);
    const ids = new Set(lines.map((line) => JSON.parse(line).trial_id as string));
    expect(ids.size).toBe(50);

    const stats = await fetch(`${baseUrl}/api/v1/stats?by=resolution`);
    const table = (await stats.json()) as { rows: { trials: number }[] };
    const total = table.rows.reduce((acc, row) => acc + row.trials, 0);
    expect(total).toBe(50);
  }, 60_000);

  it("trial payloads never expose the true label", async () => {
    const response = await fetch(`${baseUrl}/api/v1/trial?session=schema-probe`);
    const payload = (await response.json()) as Record<string, unknown>;
    expect(new Set(Object.keys(payload))).toEqual(
      new Set(["trial_id", "width", "pixels_b64", "display_px"]),
    );
  });

  it("renders a live payload without interpolation", async () => {
    const response = await fetch(`${baseUrl}/api/v1/trial?session=render-probe`);
    const payload = (await response.json()) as TrialPayload;
    const pixels = decodePixels(payload.pixels_b64, payload.width);
    const rgba = expandNearest(pixels, payload.width, payload.display_px);
    const sourceValues = new Set(pixels);
    for (const value of distinctIntensities(rgba)) {
      expect(sourceValues.has(value)).toBe(true);
    }
  });
});
