import type { ResponseBody, TrialPayload } from "./types.js";

/** How the labeler talks to the service; swappable in tests. */
export interface Transport {
  getTrial(session: string): Promise<TrialPayload>;
  /** Resolves to the HTTP status (200 recorded, 409 duplicate, ...);
   *  rejects only on network failure. */
  postResponse(body: ResponseBody): Promise<number>;
}

const GET_RETRIES = 3;

function delay(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/** fetch-based transport.  Fetching a trial is side-effect-free on error,
 * so it retries with backoff; posting a response is never auto-retried
 * (the caller owns retry so a labeler's selection is preserved, and the
 * server's duplicate detection makes a manual re-send safe). */
export function httpTransport(baseUrl: string): Transport {
  return {
    async getTrial(session: string): Promise<TrialPayload> {
      let lastError: unknown = null;
      for (let attempt = 0; attempt < GET_RETRIES; attempt++) {
        try {
          const response = await fetch(
            `${baseUrl}/api/v1/trial?session=${encodeURIComponent(session)}`,
          );
          if (!response.ok) {
            throw new Error(`trial request failed: HTTP ${response.status}`);
          }
          return (await response.json()) as TrialPayload;
        } catch (error) {
          lastError = error;
          await delay(150 * (attempt + 1));
        }
      }
      throw lastError instanceof Error ? lastError : new Error(String(lastError));
    },

    async postResponse(body: ResponseBody): Promise<number> {
      const response = await fetch(`${baseUrl}/api/v1/response`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      });
      return response.status;
    },
  };
}
