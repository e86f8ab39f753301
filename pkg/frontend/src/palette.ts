// Okabe-Ito colorblind-safe palette, assigned deterministically by feature
// index. Known terrain names get intuitive hues without breaking safety.

const OKABE_ITO = [
  "#009E73", // bluish green
  "#E69F00", // orange
  "#999999", // grey
  "#56B4E9", // sky blue
  "#F0E442", // yellow
  "#0072B2", // blue
  "#D55E00", // vermillion
  "#CC79A7", // reddish purple
];

const NAMED: Record<string, string> = {
  grass: "#009E73",
  dirt: "#E69F00",
  road: "#999999",
  asphalt: "#999999",
  water: "#56B4E9",
  mud: "#D55E00",
};

export function featureColor(index: number, name?: string): string {
  if (name && NAMED[name.toLowerCase()]) return NAMED[name.toLowerCase()];
  return OKABE_ITO[index % OKABE_ITO.length];
}

export const OBSTACLE_COLOR = "#1c1c1c";

/** Overlay alpha for a cell cost, linear between the served min and max. */
export function costAlpha(
  cost: number | null,
  min: number,
  max: number,
  maxAlpha = 0.7,
): number {
  if (cost === null) return 0;
  if (!(max > min)) return 0;
  return ((cost - min) / (max - min)) * maxAlpha;
}

export function finiteRange(costs: (number | null)[]): [number, number] {
  let min = Infinity;
  let max = -Infinity;
  for (const c of costs) {
    if (c === null) continue;
    if (c < min) min = c;
    if (c > max) max = c;
  }
  return [min, max];
}
