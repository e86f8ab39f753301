import { ApiError, Client, teleopUrl } from "./api";
import type { PriorChoice } from "./api";
import { drawEntropyBars, drawMarginals } from "./charts";
import { GridView, renderLegend } from "./gridview";
import { Store } from "./state";
import { KEY_ACTIONS, Teleop } from "./teleop";

const client = new Client();
const store = new Store();

const gridCanvas = document.getElementById("grid") as HTMLCanvasElement;
const grid = new GridView(gridCanvas);
const banner = document.getElementById("banner")!;
const demoCount = document.getElementById("demo-count")!;
const trainStatus = document.getElementById("train-status")!;
const uncertainty = document.getElementById("uncertainty") as HTMLFieldSetElement;
const entropyChart = document.getElementById("entropy-chart") as HTMLCanvasElement;
const marginalsBox = document.getElementById("marginals")!;
const epsilonSlider = document.getElementById("epsilon") as HTMLInputElement;
const epsilonValue = document.getElementById("epsilon-value")!;
const planStats = document.getElementById("plan-stats")!;
const priorSelect = document.getElementById("prior") as HTMLSelectElement;
const alphaLabel = document.getElementById("alpha-label")!;
const alphaInput = document.getElementById("alpha") as HTMLInputElement;
const betaInput = document.getElementById("beta") as HTMLInputElement;

const teleop = new Teleop(teleopUrl(), {
  onOpen: (state) => store.dispatch({ type: "teleop-open", state }),
  onState: (state) => store.dispatch({ type: "teleop-state", state }),
  onError: (message) => store.dispatch({ type: "rejected", message }),
  onClose: () => store.dispatch({ type: "teleop-closed" }),
});

store.subscribe((s) => {
  if (s.env) {
    grid.render({
      env: s.env,
      start: s.start,
      goal: s.goal,
      robot: s.robot,
      recording: s.recording,
      selection: s.selection,
      plan: s.plan,
    });
  }
  demoCount.textContent = `demos: ${s.demoCount}`;
  banner.textContent = s.banner ?? "";
  banner.classList.toggle("hidden", s.banner === null);
  uncertainty.disabled = s.posteriorId === null;
  if (s.entropy) drawEntropyBars(entropyChart, s.entropy);
  if (s.marginals) drawMarginals(marginalsBox, s.marginals, s.selection);
  if (s.plan) {
    planStats.textContent =
      `risk ${s.plan.risk.toFixed(4)}, length ${s.plan.path_length}, ` +
      `cost ${s.plan.total_cost.toFixed(3)}`;
  }
});

function fail(error: unknown): void {
  const message =
    error instanceof ApiError
      ? error.index !== undefined
        ? `${error.message} (index ${error.index})`
        : error.message
      : String(error);
  store.dispatch({ type: "rejected", message });
}

async function bootstrap(): Promise<void> {
  try {
    const [env, demos] = await Promise.all([client.getEnvironment(), client.getDemos()]);
    store.dispatch({
      type: "env-loaded",
      env,
      start: demos.start,
      goal: demos.goal,
      demoCount: demos.trajectories.length,
    });
    renderLegend(document.getElementById("legend")!, env);
    teleop.connect();
    gridCanvas.focus();
  } catch (error) {
    fail(error);
  }
}

document.addEventListener("keydown", (event) => {
  const action = KEY_ACTIONS[event.key];
  if (!action) return;
  event.preventDefault();
  teleop.send(action);
});

document.getElementById("commit-demo")!.addEventListener("click", () => {
  const recording = store.get().recording;
  if (recording.length < 2) {
    store.dispatch({ type: "rejected", message: "record some movement first" });
    return;
  }
  void store.mutate(async () => {
    try {
      const result = await client.postDemo(recording);
      store.dispatch({ type: "demo-committed", count: result.count });
      teleop.reset();
    } catch (error) {
      fail(error);
    }
  });
});

document.getElementById("reset-recording")!.addEventListener("click", () => {
  teleop.reset();
});

priorSelect.addEventListener("change", () => {
  alphaLabel.classList.toggle("hidden", priorSelect.value !== "dirichlet");
});

function currentPrior(): PriorChoice {
  if (priorSelect.value === "dirichlet") {
    const alpha = alphaInput.value
      .split(",")
      .map((v) => parseFloat(v.trim()))
      .filter((v) => !Number.isNaN(v));
    return { kind: "dirichlet", alpha };
  }
  return { kind: "modifiedUniform" };
}

async function refreshSelection(): Promise<void> {
  const s = store.get();
  if (s.posteriorId === null) return;
  const selection = await client.select(s.epsilon, s.posteriorId);
  store.dispatch({ type: "selected", selection });
  if (s.start && s.goal) {
    const plan = await client.plan(s.start, s.goal, s.posteriorId);
    store.dispatch({ type: "planned", plan });
  }
}

document.getElementById("train")!.addEventListener("click", () => {
  void store.mutate(async () => {
    trainStatus.textContent = "training...";
    try {
      const posteriorId = await client.trainToCompletion(
        parseFloat(betaInput.value),
        currentPrior(),
      );
      store.dispatch({ type: "train-done", posteriorId });
      const [entropy, marginals] = await Promise.all([
        client.getEntropy(posteriorId),
        client.getMarginals(posteriorId),
      ]);
      store.dispatch({ type: "entropy-loaded", entropy });
      store.dispatch({ type: "marginals-loaded", marginals });
      await refreshSelection();
      trainStatus.textContent = `posterior #${posteriorId}`;
    } catch (error) {
      trainStatus.textContent = "";
      fail(error);
    }
  });
});

epsilonSlider.addEventListener("input", () => {
  epsilonValue.textContent = parseFloat(epsilonSlider.value).toFixed(3);
});

epsilonSlider.addEventListener("change", () => {
  store.dispatch({ type: "epsilon-changed", epsilon: parseFloat(epsilonSlider.value) });
  void store.mutate(async () => {
    try {
      await refreshSelection();
    } catch (error) {
      fail(error);
    }
  });
});

document.getElementById("plan")!.addEventListener("click", () => {
  void store.mutate(async () => {
    try {
      const s = store.get();
      if (s.posteriorId === null || !s.start || !s.goal) return;
      const plan = await client.plan(s.start, s.goal, s.posteriorId);
      store.dispatch({ type: "planned", plan });
    } catch (error) {
      fail(error);
    }
  });
});

void bootstrap();
