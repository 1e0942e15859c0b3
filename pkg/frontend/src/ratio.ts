// The discrete ratio scale 1/9 ... 1 ... 9 plus the exact-value escape hatch.

export interface RatioStep {
  label: string;
  value: number;
}

function steps(): RatioStep[] {
  const out: RatioStep[] = [];
  for (let d = 9; d >= 2; d--) out.push({ label: `1/${d}`, value: 1 / d });
  out.push({ label: "1", value: 1 });
  for (let k = 2; k <= 9; k++) out.push({ label: `${k}`, value: k });
  return out;
}

export const RATIO_STEPS: RatioStep[] = steps();
export const NEUTRAL_INDEX = 8; // the "1" step

/**
 * Value submitted for the pair (i, j) given a scale choice: the scale reads
 * "how many times the LEFT item (i) beats the RIGHT one (j)".  Choosing a
 * ratio in favour of the right item is the reciprocal submission.
 */
export function orientedValue(ratio: number, favouring: "left" | "right"): number {
  if (!(ratio > 0)) throw new Error(`ratio must be positive, got ${ratio}`);
  return favouring === "left" ? ratio : 1 / ratio;
}

/** Parse the exact-value input: a positive decimal or a fraction like 7/3. */
export function parseExactValue(text: string): number | null {
  const trimmed = text.trim();
  if (!trimmed) return null;
  const fraction = trimmed.match(/^(\d+(?:\.\d+)?)\s*\/\s*(\d+(?:\.\d+)?)$/);
  let value: number;
  if (fraction) {
    value = Number(fraction[1]) / Number(fraction[2]);
  } else {
    value = Number(trimmed);
  }
  return Number.isFinite(value) && value > 0 ? value : null;
}
