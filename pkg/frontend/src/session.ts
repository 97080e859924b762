/** Client-side session identity, persisted so one labeler keeps one id
 * across reloads.  Ids are 16 URL-safe hex chars. */

const STORAGE_KEY = "acuity-session-id";

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export function randomSessionId(): string {
  const bytes = new Uint8Array(8);
  crypto.getRandomValues(bytes);
  return Array.from(bytes, (b) => b.toString(16).padStart(2, "0")).join("");
}

export function getSessionId(store?: KeyValueStore): string {
  if (!store) {
    return randomSessionId();
  }
  const existing = store.getItem(STORAGE_KEY);
  if (existing && /^[A-Za-z0-9._~-]{1,64}$/.test(existing)) {
    return existing;
  }
  const fresh = randomSessionId();
  store.setItem(STORAGE_KEY, fresh);
  return fresh;
}
