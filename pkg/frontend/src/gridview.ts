// Canvas renderer: terrain colors, obstacles, start/goal markers, the live
// recording, the costmap overlay, and the planned path.

import type { EnvironmentData, PlanData, SelectionData } from "./api";
import type { Cell } from "./state";
import { OBSTACLE_COLOR, costAlpha, featureColor, finiteRange } from "./palette";

const CELL = 56;

export class GridView {
  private canvas: HTMLCanvasElement;
  private ctx: CanvasRenderingContext2D;

  constructor(canvas: HTMLCanvasElement) {
    this.canvas = canvas;
    this.ctx = canvas.getContext("2d")!;
  }

  render(opts: {
    env: EnvironmentData;
    start: Cell | null;
    goal: Cell | null;
    robot: Cell | null;
    recording: Cell[];
    selection: SelectionData | null;
    plan: PlanData | null;
  }): void {
    const { env } = opts;
    this.canvas.width = env.width * CELL;
    this.canvas.height = env.height * CELL;
    const ctx = this.ctx;

    const obstacles = new Set(opts.env.obstacles.map(([x, y]) => `${x},${y}`));
    for (let y = 0; y < env.height; y++) {
      for (let x = 0; x < env.width; x++) {
        const bits = env.cells[y * env.width + x];
        if (obstacles.has(`${x},${y}`)) {
          ctx.fillStyle = OBSTACLE_COLOR;
        } else {
          const f = bits.indexOf(1);
          ctx.fillStyle = f >= 0 ? featureColor(f, env.features[f]) : "#ffffff";
        }
        ctx.fillRect(x * CELL, y * CELL, CELL, CELL);
      }
    }

    if (opts.selection) {
      const costs = opts.selection.costmap.costs;
      const [min, max] = finiteRange(costs);
      for (let y = 0; y < env.height; y++) {
        for (let x = 0; x < env.width; x++) {
          const alpha = costAlpha(costs[y * env.width + x], min, max);
          if (alpha > 0) {
            ctx.fillStyle = `rgba(0, 0, 0, ${alpha.toFixed(3)})`;
            ctx.fillRect(x * CELL, y * CELL, CELL, CELL);
          }
        }
      }
    }

    ctx.strokeStyle = "rgba(255,255,255,0.35)";
    ctx.lineWidth = 1;
    for (let x = 0; x <= env.width; x++) {
      ctx.beginPath();
      ctx.moveTo(x * CELL + 0.5, 0);
      ctx.lineTo(x * CELL + 0.5, env.height * CELL);
      ctx.stroke();
    }
    for (let y = 0; y <= env.height; y++) {
      ctx.beginPath();
      ctx.moveTo(0, y * CELL + 0.5);
      ctx.lineTo(env.width * CELL, y * CELL + 0.5);
      ctx.stroke();
    }

    if (opts.plan) this.polyline(opts.plan.trajectory, "#ffffff", 4);
    if (opts.recording.length > 1) this.polyline(opts.recording, "#222222", 3, [6, 4]);

    if (opts.start) this.marker(opts.start, "S", "#ffffff");
    if (opts.goal) this.marker(opts.goal, "G", "#ffd700");
    if (opts.robot) {
      const [x, y] = opts.robot;
      ctx.beginPath();
      ctx.arc((x + 0.5) * CELL, (y + 0.5) * CELL, CELL * 0.28, 0, 2 * Math.PI);
      ctx.fillStyle = "#d62728";
      ctx.fill();
      ctx.strokeStyle = "#ffffff";
      ctx.lineWidth = 2;
      ctx.stroke();
    }
  }

  private polyline(cells: Cell[], color: string, width: number, dash: number[] = []): void {
    const ctx = this.ctx;
    ctx.beginPath();
    ctx.setLineDash(dash);
    cells.forEach(([x, y], i) => {
      const px = (x + 0.5) * CELL;
      const py = (y + 0.5) * CELL;
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.strokeStyle = color;
    ctx.lineWidth = width;
    ctx.stroke();
    ctx.setLineDash([]);
  }

  private marker(cell: Cell, label: string, color: string): void {
    const ctx = this.ctx;
    const [x, y] = cell;
    ctx.font = `bold ${CELL * 0.4}px sans-serif`;
    ctx.textAlign = "left";
    ctx.textBaseline = "top";
    ctx.fillStyle = color;
    ctx.strokeStyle = "#000000";
    ctx.lineWidth = 3;
    ctx.strokeText(label, x * CELL + 4, y * CELL + 3);
    ctx.fillText(label, x * CELL + 4, y * CELL + 3);
  }
}

export function renderLegend(container: HTMLElement, env: EnvironmentData): void {
  container.innerHTML = "";
  env.features.forEach((name, i) => {
    const item = document.createElement("span");
    item.className = "legend-item";
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.backgroundColor = featureColor(i, name);
    item.append(swatch, document.createTextNode(name));
    container.append(item);
  });
  const obstacle = document.createElement("span");
  obstacle.className = "legend-item";
  const swatch = document.createElement("span");
  swatch.className = "swatch";
  swatch.style.backgroundColor = OBSTACLE_COLOR;
  obstacle.append(swatch, document.createTextNode("obstacle"));
  container.append(obstacle);
}
