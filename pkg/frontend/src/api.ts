// Typed client for the training service. Every number shown in the UI
// comes from these responses; the client computes presentation only.

export interface EnvironmentData {
  width: number;
  height: number;
  features: string[];
  cells: number[][];
  obstacles: [number, number][];
  discount: number;
  horizon: number;
}

export interface DemosData {
  start: [number, number];
  goal: [number, number];
  trajectories: [number, number][][];
}

export interface PriorChoice {
  kind: "modifiedUniform" | "dirichlet";
  alpha?: number[];
}

export interface TrainJob {
  status: "running" | "done" | "failed";
  posterior_id?: number;
  error?: string;
}

export interface MarginalsData {
  features: string[];
  weight_set: number[];
  marginals: number[][];
}

export interface EntropyData {
  features: string[];
  entropy: number[];
}

export interface SelectionData {
  posterior_id: number;
  epsilon: number;
  features: string[];
  weights: number[];
  costmap: { width: number; height: number; costs: (number | null)[] };
}

export interface PlanData {
  trajectory: [number, number][];
  total_cost: number;
  path_length: number;
  risk: number;
}

export class ApiError extends Error {
  status: number;
  index?: number;

  constructor(status: number, message: string, index?: number) {
    super(message);
    this.status = status;
    this.index = index;
  }
}

type FetchFn = typeof fetch;

async function request<T>(
  fetchFn: FetchFn,
  method: string,
  path: string,
  body?: unknown,
): Promise<T> {
  const response = await fetchFn(path, {
    method,
    headers: body === undefined ? undefined : { "Content-Type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  const payload = await response.json();
  if (!response.ok) {
    throw new ApiError(
      response.status,
      typeof payload?.error === "string" ? payload.error : response.statusText,
      payload?.index,
    );
  }
  return payload as T;
}

export class Client {
  private fetchFn: FetchFn;

  constructor(fetchFn: FetchFn = fetch.bind(globalThis)) {
    this.fetchFn = fetchFn;
  }

  getEnvironment(): Promise<EnvironmentData> {
    return request(this.fetchFn, "GET", "/env");
  }

  getDemos(): Promise<DemosData> {
    return request(this.fetchFn, "GET", "/demos");
  }

  postDemo(states: [number, number][]): Promise<{ id: number; count: number }> {
    return request(this.fetchFn, "POST", "/demos", { states });
  }

  deleteDemo(id: number): Promise<{ count: number }> {
    return request(this.fetchFn, "DELETE", `/demos/${id}`);
  }

  startTraining(beta: number, prior: PriorChoice): Promise<{ token: number }> {
    return request(this.fetchFn, "POST", "/train", { beta, prior });
  }

  trainStatus(token: number): Promise<TrainJob> {
    return request(this.fetchFn, "GET", `/train/${token}`);
  }

  async trainToCompletion(
    beta: number,
    prior: PriorChoice,
    pollMs = 50,
    maxPolls = 600,
  ): Promise<number> {
    const { token } = await this.startTraining(beta, prior);
    for (let i = 0; i < maxPolls; i++) {
      const job = await this.trainStatus(token);
      if (job.status === "done") return job.posterior_id!;
      if (job.status === "failed") throw new ApiError(500, job.error ?? "training failed");
      await new Promise((resolve) => setTimeout(resolve, pollMs));
    }
    throw new ApiError(504, "training did not finish");
  }

  getMarginals(posteriorId: number): Promise<MarginalsData> {
    return request(this.fetchFn, "GET", `/posterior/${posteriorId}/marginals`);
  }

  getEntropy(posteriorId: number): Promise<EntropyData> {
    return request(this.fetchFn, "GET", `/posterior/${posteriorId}/entropy`);
  }

  select(epsilon: number, posteriorId?: number): Promise<SelectionData> {
    const body: Record<string, unknown> = { epsilon };
    if (posteriorId !== undefined) body.posterior_id = posteriorId;
    return request(this.fetchFn, "POST", "/select", body);
  }

  plan(
    start: [number, number],
    goal: [number, number],
    model: number,
  ): Promise<PlanData> {
    return request(this.fetchFn, "POST", "/plan", { start, goal, model });
  }
}

export function teleopUrl(loc: Location = location): string {
  const proto = loc.protocol === "https:" ? "wss" : "ws";
  return `${proto}://${loc.host}/teleop`;
}
