import { describe, expect, it } from "vitest";

import { ApiError, Client, teleopUrl } from "../src/api";

interface Call {
  path: string;
  init?: RequestInit;
}

function fakeFetch(
  responses: Record<string, { status?: number; body: unknown }>,
): { fetchFn: typeof fetch; calls: Call[] } {
  const calls: Call[] = [];
  const fetchFn = (async (input: any, init?: RequestInit) => {
    const path = String(input);
    calls.push({ path, init });
    const match = responses[`${init?.method ?? "GET"} ${path}`];
    if (!match) throw new Error(`unexpected request ${path}`);
    return {
      ok: (match.status ?? 200) < 400,
      status: match.status ?? 200,
      statusText: "",
      json: async () => match.body,
    } as Response;
  }) as typeof fetch;
  return { fetchFn, calls };
}

describe("client request shaping", () => {
  it("posts demo states as the documented body", async () => {
    const { fetchFn, calls } = fakeFetch({
      "POST /demos": { body: { id: 0, count: 1 } },
    });
    const client = new Client(fetchFn);
    const result = await client.postDemo([
      [0, 4],
      [1, 4],
    ]);
    expect(result.count).toBe(1);
    expect(JSON.parse(calls[0].init!.body as string)).toEqual({
      states: [
        [0, 4],
        [1, 4],
      ],
    });
  });

  it("shapes the train body with beta and prior", async () => {
    const { fetchFn, calls } = fakeFetch({
      "POST /train": { body: { token: 7 } },
    });
    const client = new Client(fetchFn);
    await client.startTraining(0.3, { kind: "dirichlet", alpha: [1.2, 2, 8] });
    expect(JSON.parse(calls[0].init!.body as string)).toEqual({
      beta: 0.3,
      prior: { kind: "dirichlet", alpha: [1.2, 2, 8] },
    });
  });

  it("polls training to completion", async () => {
    let polls = 0;
    const fetchFn = (async (input: any) => {
      const path = String(input);
      if (path === "/train") {
        return { ok: true, status: 200, json: async () => ({ token: 3 }) } as Response;
      }
      polls += 1;
      const body =
        polls < 3 ? { status: "running" } : { status: "done", posterior_id: 12 };
      return { ok: true, status: 200, json: async () => body } as Response;
    }) as typeof fetch;
    const client = new Client(fetchFn);
    const pid = await client.trainToCompletion(0.3, { kind: "modifiedUniform" }, 1);
    expect(pid).toBe(12);
    expect(polls).toBe(3);
  });

  it("surfaces server errors with the offending index", async () => {
    const { fetchFn } = fakeFetch({
      "POST /demos": {
        status: 400,
        body: { error: "state 2 is not adjacent", index: 2 },
      },
    });
    const client = new Client(fetchFn);
    const error = await client.postDemo([[0, 0]]).catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(400);
    expect(error.index).toBe(2);
    expect(error.message).toMatch(/not adjacent/);
  });

  it("passes epsilon and posterior id to /select", async () => {
    const { fetchFn, calls } = fakeFetch({
      "POST /select": {
        body: {
          posterior_id: 1,
          epsilon: 0.05,
          features: [],
          weights: [],
          costmap: { width: 0, height: 0, costs: [] },
        },
      },
    });
    const client = new Client(fetchFn);
    await client.select(0.05, 1);
    expect(JSON.parse(calls[0].init!.body as string)).toEqual({
      epsilon: 0.05,
      posterior_id: 1,
    });
  });

  it("shapes the plan body", async () => {
    const { fetchFn, calls } = fakeFetch({
      "POST /plan": {
        body: { trajectory: [], total_cost: 0, path_length: 0, risk: 0 },
      },
    });
    const client = new Client(fetchFn);
    await client.plan([0, 4], [7, 4], 2);
    expect(JSON.parse(calls[0].init!.body as string)).toEqual({
      start: [0, 4],
      goal: [7, 4],
      model: 2,
    });
  });
});

describe("teleopUrl", () => {
  it("matches the page protocol", () => {
    expect(teleopUrl({ protocol: "http:", host: "localhost:8000" } as Location)).toBe(
      "ws://localhost:8000/teleop",
    );
    expect(teleopUrl({ protocol: "https:", host: "box" } as Location)).toBe(
      "wss://box/teleop",
    );
  });
});
