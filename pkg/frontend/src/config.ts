import { FetchLike } from "./api.js";

export interface UiConfig {
  apiBaseUrl: string;
  tileUrl: string;
}

const DEFAULTS: UiConfig = {
  apiBaseUrl: "http://127.0.0.1:8000",
  tileUrl: "",
};

/** Load config.json next to the page; missing file or fields fall back. */
export async function loadConfig(fetchImpl?: FetchLike): Promise<UiConfig> {
  const doFetch = fetchImpl ?? ((url: string) => fetch(url));
  try {
    const response = await doFetch("./config.json");
    if (!response.ok) return { ...DEFAULTS };
    const raw = (await response.json()) as Partial<UiConfig>;
    return { ...DEFAULTS, ...raw };
  } catch {
    return { ...DEFAULTS };
  }
}
