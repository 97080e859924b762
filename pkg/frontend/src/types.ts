/** Trial payload exactly as served by GET /api/v1/trial. */
export interface TrialPayload {
  trial_id: string;
  width: number;
  pixels_b64: string;
  display_px: number;
}

/** Body for POST /api/v1/response. */
export interface ResponseBody {
  trial_id: string;
  selection: number;
  elapsed_ms: number;
}

/** The eleven selection options, -1 ("can't recognize") first. */
export const SELECTION_VALUES: readonly number[] = [-1, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9];
