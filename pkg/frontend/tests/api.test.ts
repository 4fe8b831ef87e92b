import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { FakeService } from "./fake_service.js";

function makeClient() {
  const service = new FakeService();
  return { service, client: new ApiClient("http://test", service.fetch) };
}

describe("ApiClient", () => {
  it("creates sessions and uploads datasets by path", async () => {
    const { service, client } = makeClient();
    const { id } = await client.createSession();
    const summary = await client.uploadDatasetPath(id, "/data/manifest.json");
    expect(summary.stages.dataset).toBe(true);
    expect(service.recorded.at(-1)?.body).toEqual({ path: "/data/manifest.json" });
  });

  it("encodes channel window queries", async () => {
    const { service, client } = makeClient();
    const { id } = await client.createSession();
    await client.uploadDatasetPath(id, "x");
    const win = await client.channelWindow(id, "c3", {
      stage: "raw",
      trial: 1,
      from: 10,
      to: 20,
    });
    expect(win.samples).toHaveLength(64);
    const path = service.recorded.at(-1)?.path ?? "";
    expect(path).toContain("/channels/c3");
    expect(path).toContain("from=10");
    expect(path).toContain("to=20");
  });

  it("maps error payloads onto ApiError with status", async () => {
    const { client } = makeClient();
    const { id } = await client.createSession();
    await expect(client.icaComponents(id, 0)).rejects.toMatchObject({
      status: 409,
    });
    await expect(client.summary("missing")).rejects.toBeInstanceOf(ApiError);
  });

  it("posts rejection sets verbatim", async () => {
    const { service, client } = makeClient();
    const { id } = await client.createSession();
    await client.uploadDatasetPath(id, "x");
    await client.runIca(id, { threshold: 0.7 });
    const result = await client.rejectComponents(id, 0, [4, 1]);
    expect(result.rejected).toEqual([1, 4]);
    expect(service.recorded.at(-1)?.body).toEqual({ trial: 0, indices: [4, 1] });
  });
});
