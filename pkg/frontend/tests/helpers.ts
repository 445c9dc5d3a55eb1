import type { FetchLike } from "../src/api.js";

/** Serve canned JSON bodies in order; records every request made. */
export function fetchSequence(
  responses: { status?: number; body: unknown }[],
): { fetch: FetchLike; calls: { url: string; init?: RequestInit }[] } {
  const calls: { url: string; init?: RequestInit }[] = [];
  let index = 0;
  const fetch: FetchLike = async (url, init) => {
    calls.push({ url, init });
    const canned = responses[Math.min(index, responses.length - 1)];
    index += 1;
    const status = canned.status ?? 200;
    return new Response(status === 204 ? null : JSON.stringify(canned.body), {
      status,
      headers: { "content-type": "application/json" },
    });
  };
  return { fetch, calls };
}

/** Serve the same body for every request to a URL prefix. */
export function fetchByRoute(
  routes: Record<string, { status?: number; body: unknown }>,
): FetchLike {
  return async (url) => {
    const hit = Object.entries(routes).find(([prefix]) => url.startsWith(prefix));
    if (!hit) {
      return new Response(JSON.stringify({ code: "unknown_id", message: `no route ${url}`, ids: [] }), {
        status: 404,
        headers: { "content-type": "application/json" },
      });
    }
    return new Response(JSON.stringify(hit[1].body), {
      status: hit[1].status ?? 200,
      headers: { "content-type": "application/json" },
    });
  };
}
