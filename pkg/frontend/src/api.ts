import type {
  AnomalyRecord,
  ApiErrorBody,
  BatchEntry,
  Descriptor,
  IndexDefinitionDoc,
  IndicatorEntryDoc,
  IndicatorReport,
  Mode,
  ModelEntryDoc,
  ServiceEntry,
  Tier,
} from "./types.js";

/** A domain failure reported by the service, carrying its machine code. */
export class ApiError extends Error {
  constructor(
    public status: number,
    public code: ApiErrorBody["code"],
    message: string,
    public ids: string[] = [],
  ) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/**
 * Thin typed client over the indikit HTTP API.
 *
 * `fetchFn` is injectable so tests can run against recorded fixtures
 * without a server.
 */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (response.status === 204) {
      return undefined as T;
    }
    const payload = await response.json();
    if (!response.ok && !(response.status === 207)) {
      const err = payload as ApiErrorBody;
      throw new ApiError(response.status, err.code, err.message, err.ids ?? []);
    }
    return payload as T;
  }

  listServices(tier: Tier | "all" = "all"): Promise<ServiceEntry[]> {
    return this.request("GET", `/services?tier=${tier}`);
  }

  registerIndex(doc: IndexDefinitionDoc): Promise<{ id: string }> {
    return this.request("POST", "/indices", doc);
  }

  registerModel(doc: ModelEntryDoc): Promise<{ id: string }> {
    return this.request("POST", "/models", doc);
  }

  registerIndicator(doc: IndicatorEntryDoc): Promise<{ id: string }> {
    return this.request("POST", "/indicators", doc);
  }

  replaceModel(doc: ModelEntryDoc): Promise<{ id: string }> {
    return this.request("PUT", `/models/${encodeURIComponent(doc.id)}`, doc);
  }

  replaceIndicator(doc: IndicatorEntryDoc): Promise<{ id: string }> {
    return this.request("PUT", `/indicators/${encodeURIComponent(doc.id)}`, doc);
  }

  setValue(indexId: string, period: string, value: number): Promise<void> {
    return this.request(
      "PUT",
      `/indices/${encodeURIComponent(indexId)}/values`,
      { period, value },
    );
  }

  getIndicator(id: string, period: string, mode?: Mode): Promise<IndicatorReport> {
    const suffix = mode ? `&mode=${mode}` : "";
    return this.request(
      "GET",
      `/indicators/${encodeURIComponent(id)}?period=${encodeURIComponent(period)}${suffix}`,
    );
  }

  computeReports(ids: string[], period: string, mode?: Mode): Promise<{ entries: BatchEntry[] }> {
    return this.request("POST", "/reports", { ids, period, ...(mode ? { mode } : {}) });
  }

  getSeries(id: string, from: string, to: string): Promise<Descriptor> {
    const path =
      `/indicators/${encodeURIComponent(id)}/series` +
      `?from=${encodeURIComponent(from)}&to=${encodeURIComponent(to)}&mode=histogram`;
    return this.request("GET", path);
  }

  getAnomalies(category?: AnomalyRecord["category"]): Promise<AnomalyRecord[]> {
    return this.request("GET", category ? `/anomalies?category=${category}` : "/anomalies");
  }

  installPack(doc: unknown): Promise<{ entries: { tier: string; id: string; status: string }[] }> {
    return this.request("POST", "/packs", doc);
  }

  exportPack(): Promise<unknown> {
    return this.request("GET", "/packs/export");
  }
}
