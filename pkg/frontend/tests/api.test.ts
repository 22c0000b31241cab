import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, FetchLike } from "../src/api.js";

interface Call {
  url: string;
  init?: RequestInit;
}

function stub(
  handler: (url: string, init?: RequestInit) => Response | Promise<Response>,
): { fetchImpl: FetchLike; calls: Call[] } {
  const calls: Call[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    calls.push({ url, init });
    return handler(url, init);
  };
  return { fetchImpl, calls };
}

function json(body: unknown, status = 200, headers: Record<string, string> = {}): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json", ...headers },
  });
}

describe("ApiClient", () => {
  it("reads dangers with the snapshot generation header", async () => {
    const { fetchImpl, calls } = stub(() =>
      json([{ class_name: "TrafficCongestionDanger", label: "Zator drogowy" }], 200, {
        "X-Generation": "3",
      }),
    );
    const api = new ApiClient("", fetchImpl);
    const result = await api.dangers("district", "StareMiasto", "pl");
    expect(result.generation).toBe(3);
    expect(result.dangers[0]?.class_name).toBe("TrafficCongestionDanger");
    expect(calls[0]?.url).toBe(
      "/api/dangers?scope=district&name=StareMiasto&lang=pl",
    );
  });

  it("maps error responses to ApiError with the service detail", async () => {
    const { fetchImpl } = stub(() => json({ detail: "unknown district 'Atlantis'" }, 404));
    const api = new ApiClient("", fetchImpl);
    await expect(api.dangers("district", "Atlantis", "en")).rejects.toMatchObject({
      status: 404,
      message: "unknown district 'Atlantis'",
    });
  });

  it("sends credentials on login and returns the token", async () => {
    const { fetchImpl, calls } = stub(() => json({ token: "abc123", username: "sa" }));
    const api = new ApiClient("", fetchImpl);
    expect(await api.login("sa", "traffic")).toBe("abc123");
    const body = JSON.parse(String(calls[0]?.init?.body));
    expect(body).toEqual({ username: "sa", password: "traffic" });
  });

  it("attaches the bearer token to condition updates", async () => {
    const { fetchImpl, calls } = stub(() => json({ ok: true }));
    const api = new ApiClient("", fetchImpl);
    await api.updateConditions("tok-1", "30-020", ["HighCongestionCondition"]);
    const headers = calls[0]?.init?.headers as Record<string, string>;
    expect(headers["Authorization"]).toBe("Bearer tok-1");
    expect(calls[0]?.url).toBe("/api/conditions");
  });

  it("refuses to send a mutation without a token", async () => {
    const { fetchImpl, calls } = stub(() => json({ ok: true }));
    const api = new ApiClient("", fetchImpl);
    await expect(api.updateConditions("", "30-020", [])).rejects.toBeInstanceOf(ApiError);
    expect(calls).toHaveLength(0); // nothing hit the network
  });

  it("builds ontology download urls per variant", () => {
    const api = new ApiClient("http://example.test");
    expect(api.ontologyUrl("core")).toBe("http://example.test/api/ontology?variant=core");
    expect(api.ontologyUrl("synchronized")).toBe(
      "http://example.test/api/ontology?variant=synchronized",
    );
  });
});
