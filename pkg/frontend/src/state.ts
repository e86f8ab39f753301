// Client state as a pure reducer: the DOM layer dispatches events and
// re-renders from the returned snapshot. Server rejections never mutate
// anything except the banner, so client state tracks the server exactly.

import type {
  EnvironmentData,
  EntropyData,
  MarginalsData,
  PlanData,
  SelectionData,
} from "./api";

export type Cell = [number, number];

export interface AppState {
  env: EnvironmentData | null;
  start: Cell | null;
  goal: Cell | null;
  robot: Cell | null;
  recording: Cell[];
  demoCount: number;
  posteriorId: number | null;
  entropy: EntropyData | null;
  marginals: MarginalsData | null;
  selection: SelectionData | null;
  plan: PlanData | null;
  epsilon: number;
  banner: string | null;
  connected: boolean;
}

export const initialState: AppState = {
  env: null,
  start: null,
  goal: null,
  robot: null,
  recording: [],
  demoCount: 0,
  posteriorId: null,
  entropy: null,
  marginals: null,
  selection: null,
  plan: null,
  epsilon: 0.01,
  banner: null,
  connected: false,
};

export type AppEvent =
  | { type: "env-loaded"; env: EnvironmentData; start: Cell; goal: Cell; demoCount: number }
  | { type: "teleop-open"; state: Cell }
  | { type: "teleop-state"; state: Cell }
  | { type: "teleop-closed" }
  | { type: "demo-committed"; count: number }
  | { type: "train-done"; posteriorId: number }
  | { type: "entropy-loaded"; entropy: EntropyData }
  | { type: "marginals-loaded"; marginals: MarginalsData }
  | { type: "selected"; selection: SelectionData }
  | { type: "planned"; plan: PlanData }
  | { type: "epsilon-changed"; epsilon: number }
  | { type: "rejected"; message: string }
  | { type: "banner-cleared" };

export function reduce(state: AppState, event: AppEvent): AppState {
  switch (event.type) {
    case "env-loaded":
      return {
        ...state,
        env: event.env,
        start: event.start,
        goal: event.goal,
        demoCount: event.demoCount,
        banner: null,
      };
    case "teleop-open":
      return {
        ...state,
        connected: true,
        robot: event.state,
        recording: [event.state],
        banner: null,
      };
    case "teleop-state":
      return {
        ...state,
        robot: event.state,
        recording: [...state.recording, event.state],
      };
    case "teleop-closed":
      return { ...state, connected: false, banner: "connection lost" };
    case "demo-committed":
      return {
        ...state,
        demoCount: event.count,
        recording: state.robot ? [state.robot] : [],
        banner: null,
      };
    case "train-done":
      return { ...state, posteriorId: event.posteriorId, plan: null, banner: null };
    case "entropy-loaded":
      return { ...state, entropy: event.entropy };
    case "marginals-loaded":
      return { ...state, marginals: event.marginals };
    case "selected":
      return { ...state, selection: event.selection, banner: null };
    case "planned":
      return { ...state, plan: event.plan, banner: null };
    case "epsilon-changed":
      return { ...state, epsilon: event.epsilon };
    case "rejected":
      // a rejected action leaves everything but the banner untouched
      return { ...state, banner: event.message };
    case "banner-cleared":
      return { ...state, banner: null };
  }
}

export class Store {
  private state: AppState = initialState;
  private listeners: ((s: AppState) => void)[] = [];
  private inflight = false;

  get(): AppState {
    return this.state;
  }

  dispatch(event: AppEvent): AppState {
    this.state = reduce(this.state, event);
    for (const listener of this.listeners) listener(this.state);
    return this.state;
  }

  subscribe(listener: (s: AppState) => void): void {
    this.listeners.push(listener);
  }

  /** At most one mutating request in flight; extra calls are dropped. */
  async mutate(work: () => Promise<void>): Promise<boolean> {
    if (this.inflight) return false;
    this.inflight = true;
    try {
      await work();
      return true;
    } finally {
      this.inflight = false;
    }
  }
}
