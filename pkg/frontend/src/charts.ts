// Entropy bar chart and per-feature marginal histograms, drawn on plain
// canvas. Values come straight from the service (no client-side math
// beyond pixel scaling).

import type { EntropyData, MarginalsData, SelectionData } from "./api";
import { featureColor } from "./palette";

export function drawEntropyBars(canvas: HTMLCanvasElement, data: EntropyData): void {
  const ctx = canvas.getContext("2d")!;
  const n = data.features.length;
  const barW = 64;
  const gap = 18;
  const height = 150;
  canvas.width = n * (barW + gap) + gap;
  canvas.height = height + 38;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.font = "12px sans-serif";
  ctx.textAlign = "center";
  data.features.forEach((name, i) => {
    const h = data.entropy[i];
    const x = gap + i * (barW + gap);
    const barH = Math.max(1, h * height);
    ctx.fillStyle = featureColor(i, name);
    ctx.fillRect(x, height - barH, barW, barH);
    ctx.strokeStyle = "#444";
    ctx.strokeRect(x, 0, barW, height);
    ctx.fillStyle = "#111";
    ctx.fillText(name, x + barW / 2, height + 14);
    ctx.fillText(h.toFixed(3), x + barW / 2, height + 28);
  });
}

export function drawMarginals(
  container: HTMLElement,
  data: MarginalsData,
  selection: SelectionData | null,
): void {
  container.innerHTML = "";
  data.features.forEach((name, i) => {
    const block = document.createElement("div");
    block.className = "marginal-block";
    const title = document.createElement("div");
    title.className = "marginal-title";
    const chosen = selection ? ` -> w = ${selection.weights[i].toFixed(3)}` : "";
    title.textContent = `${name}${chosen}`;
    const canvas = document.createElement("canvas");
    const probs = data.marginals[i];
    const barW = 34;
    const gap = 8;
    const height = 70;
    canvas.width = probs.length * (barW + gap) + gap;
    canvas.height = height + 16;
    const ctx = canvas.getContext("2d")!;
    ctx.font = "11px sans-serif";
    ctx.textAlign = "center";
    probs.forEach((p, k) => {
      const x = gap + k * (barW + gap);
      const barH = Math.max(1, p * height);
      ctx.fillStyle = featureColor(i, name);
      ctx.fillRect(x, height - barH, barW, barH);
      ctx.strokeStyle = "#999";
      ctx.strokeRect(x, 0, barW, height);
      ctx.fillStyle = "#111";
      ctx.fillText(String(data.weight_set[k]), x + barW / 2, height + 12);
    });
    block.append(title, canvas);
    container.append(block);
  });
}
