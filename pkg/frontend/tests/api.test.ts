import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import type { ServiceEntry } from "../src/types.js";
import { fetchSequence } from "./helpers.js";

import errorUnknownDependency from "./fixtures/error_unknown_dependency.json";
import services from "./fixtures/services.json";

describe("ApiClient", () => {
  it("lists services from the recorded catalog", async () => {
    const { fetch, calls } = fetchSequence([{ body: services }]);
    const listing = await new ApiClient("", fetch).listServices("all");
    expect(calls[0].url).toBe("/services?tier=all");
    expect((listing as ServiceEntry[]).some((entry) => entry.id === "CV")).toBe(true);
  });

  it("sends definitions in the pack entry schema", async () => {
    const { fetch, calls } = fetchSequence([{ status: 201, body: { id: "M" } }]);
    await new ApiClient("", fetch).registerModel({
      id: "M", label: "demo", expression: "EV / AC", unit: "ratio",
    });
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      id: "M", label: "demo", expression: "EV / AC", unit: "ratio",
    });
  });

  it("raises the recorded validation failure as a typed ApiError", async () => {
    const { fetch } = fetchSequence([{ status: 422, body: errorUnknownDependency }]);
    const client = new ApiClient("", fetch);
    const failure = await client
      .registerModel({ id: "M", label: "x", expression: "ghost + 1", unit: "x" })
      .then(() => null, (error) => error);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.code).toBe("unknown_dependency");
    expect(failure.message).toBe("unknown dependencies: ghost");
    expect(failure.ids).toEqual(["ghost"]);
  });

  it("treats 204 as success with no body", async () => {
    const { fetch, calls } = fetchSequence([{ status: 204, body: null }]);
    await new ApiClient("", fetch).setValue("EV", "2024-03", 400);
    expect(calls[0].url).toBe("/indices/EV/values");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({ period: "2024-03", value: 400 });
  });

  it("encodes series ranges as query parameters", async () => {
    const { fetch, calls } = fetchSequence([
      { body: { mode: "histogram", payload: { indicator_id: "CV", unit: "", series: [] } } },
    ]);
    await new ApiClient("", fetch).getSeries("CV", "2024-01", "2024-03");
    expect(calls[0].url).toBe("/indicators/CV/series?from=2024-01&to=2024-03&mode=histogram");
  });
});
