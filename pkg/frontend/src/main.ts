import { httpTransport } from "./api.js";
import { selectionForKey } from "./keys.js";
import { Labeler, type TrialView } from "./labeler.js";
import { expandNearest } from "./render.js";
import { getSessionId } from "./session.js";
import { SELECTION_VALUES, type TrialPayload } from "./types.js";

const DISPLAY_PX_KEY = "acuity-display-px";
// Reference widths in mm: an ISO ID card vs the 3.25 inch projection.
const CARD_WIDTH_MM = 85.6;
const PROJECTION_MM = 82.55;

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing #${id}`);
  }
  return found as T;
}

function calibratedDisplayPx(): number | null {
  const stored = localStorage.getItem(DISPLAY_PX_KEY);
  const parsed = stored ? Number.parseInt(stored, 10) : NaN;
  return Number.isFinite(parsed) && parsed >= 28 ? parsed : null;
}

class DomView implements TrialView {
  private canvas = element<HTMLCanvasElement>("display");
  private banner = element<HTMLDivElement>("retry-banner");
  private error = element<HTMLDivElement>("error");
  private counter = element<HTMLSpanElement>("count");

  showTrial(payload: TrialPayload, pixels: Uint8Array): void {
    this.error.hidden = true;
    const display = calibratedDisplayPx() ?? payload.display_px;
    this.canvas.width = display;
    this.canvas.height = display;
    this.canvas.style.width = `${display}px`;
    this.canvas.style.height = `${display}px`;
    const context = this.canvas.getContext("2d");
    if (!context) {
      this.showError("canvas 2d context unavailable");
      return;
    }
    // putImageData is a raw copy: the scaled raster is computed by
    // expandNearest, so nothing here can interpolate intensities.
    const rgba = expandNearest(pixels, payload.width, display);
    context.putImageData(new ImageData(rgba, display, display), 0, 0);
  }

  showError(message: string): void {
    this.error.textContent = message;
    this.error.hidden = false;
  }

  showRetryBanner(visible: boolean): void {
    this.banner.hidden = !visible;
  }

  setCompleted(count: number): void {
    this.counter.textContent = String(count);
  }
}

function wireCalibration(): void {
  const slider = element<HTMLInputElement>("card-width");
  const overlay = element<HTMLDivElement>("card-overlay");
  const readout = element<HTMLSpanElement>("card-readout");
  const apply = element<HTMLButtonElement>("apply-calibration");

  const update = () => {
    overlay.style.width = `${slider.value}px`;
    readout.textContent = `${slider.value}px`;
  };
  slider.addEventListener("input", update);
  update();

  apply.addEventListener("click", () => {
    const cardPx = Number.parseInt(slider.value, 10);
    const displayPx = Math.round((cardPx * PROJECTION_MM) / CARD_WIDTH_MM);
    localStorage.setItem(DISPLAY_PX_KEY, String(displayPx));
    readout.textContent = `${slider.value}px -> image ${displayPx}px`;
  });
}

function boot(): void {
  const view = new DomView();
  const session = getSessionId(localStorage);
  const labeler = new Labeler(httpTransport(""), view, session);

  const choicesRow = element<HTMLDivElement>("choices");
  for (const value of SELECTION_VALUES) {
    const button = document.createElement("button");
    button.type = "button";
    button.className = "choice";
    button.textContent = String(value);
    button.addEventListener("click", () => {
      void labeler.select(value);
    });
    choicesRow.appendChild(button);
  }

  window.addEventListener("keydown", (event) => {
    const selection = selectionForKey(event.key);
    if (selection !== null) {
      void labeler.select(selection);
    }
  });

  element<HTMLButtonElement>("retry-button").addEventListener("click", () => {
    void labeler.retrySubmit();
  });

  element<HTMLSpanElement>("session-id").textContent = session;
  wireCalibration();
  void labeler.start();
}

boot();
