/**
 * Rolling Cognitive Load Correlation: Spearman rank correlation (average
 * ranks for ties) over the most recent pairs of (pre-word pause, word
 * complexity). Matches the analyzer's estimator so the live readout tracks
 * the offline verdict.
 */

export const WINDOW_PAIRS = 200;
export const N_MIN = 100;

function averageRanks(values: readonly number[]): number[] {
  const order = values.map((v, i) => i).sort((a, b) => values[a] - values[b]);
  const ranks = new Array<number>(values.length);
  let i = 0;
  while (i < order.length) {
    let j = i;
    while (j + 1 < order.length && values[order[j + 1]] === values[order[i]]) j++;
    const rank = (i + j) / 2 + 1;
    for (let k = i; k <= j; k++) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

export function spearman(x: readonly number[], y: readonly number[]): number {
  const rx = averageRanks(x);
  const ry = averageRanks(y);
  const mx = rx.reduce((a, b) => a + b, 0) / rx.length;
  const my = ry.reduce((a, b) => a + b, 0) / ry.length;
  let num = 0;
  let dx = 0;
  let dy = 0;
  for (let i = 0; i < rx.length; i++) {
    const a = rx[i] - mx;
    const b = ry[i] - my;
    num += a * b;
    dx += a * a;
    dy += b * b;
  }
  const denom = Math.sqrt(dx * dy);
  return denom === 0 ? 0 : num / denom;
}

export class RollingClc {
  private pauses: number[] = [];
  private complexity: number[] = [];
  private total = 0;

  constructor(
    private readonly windowPairs: number = WINDOW_PAIRS,
    private readonly nMin: number = N_MIN,
  ) {}

  push(pauseMs: number, complexityBits: number): void {
    this.pauses.push(pauseMs);
    this.complexity.push(complexityBits);
    this.total += 1;
    if (this.pauses.length > this.windowPairs) {
      this.pauses.shift();
      this.complexity.shift();
    }
  }

  get pairCount(): number {
    return this.total;
  }

  /** Current rolling rho, or null below the minimum pair count. */
  value(): number | null {
    if (this.total < this.nMin) return null;
    return spearman(this.pauses, this.complexity);
  }

  clear(): void {
    this.pauses = [];
    this.complexity = [];
    this.total = 0;
  }
}
