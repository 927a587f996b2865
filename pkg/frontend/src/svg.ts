/**
 * Deterministic SVG assembly: fixed canvas, fixed fonts, no randomness,
 * so identical CSV input always yields byte-identical output.
 */

export type Attrs = Record<string, string | number>;

export function el(tag: string, attrs: Attrs, children: string[] = [], text?: string): string {
  const attrText = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${String(v)}"`)
    .join("");
  if (children.length === 0 && text === undefined) {
    return `<${tag}${attrText}/>`;
  }
  const inner = text !== undefined ? escapeText(text) : children.join("");
  return `<${tag}${attrText}>${inner}</${tag}>`;
}

function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function svgDocument(width: number, height: number, children: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">` +
    children.join("") +
    `</svg>`
  );
}

export interface Scale {
  (x: number): number;
  domain: [number, number];
  range: [number, number];
}

/** Affine map from domain to pixel range (range may be inverted). */
export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const f = ((x: number) => r0 + ((x - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  f.range = range;
  return f;
}

/** Round pixel coordinates to 2 decimals to keep files small and stable. */
export function px(x: number): number {
  return Math.round(x * 100) / 100;
}

/** Integer decade ticks covering [lo, hi] on a log10 axis, at most ~8. */
export function decadeTicks(lo: number, hi: number): number[] {
  const start = Math.ceil(lo);
  const end = Math.floor(hi);
  const count = end - start + 1;
  const step = Math.max(1, Math.ceil(count / 8));
  const ticks: number[] = [];
  for (let t = start; t <= end; t += step) {
    ticks.push(t);
  }
  return ticks;
}

/** Evenly spaced ticks for a plain linear axis. */
export function linearTicks(lo: number, hi: number, want = 6): number[] {
  const rawStep = (hi - lo) / Math.max(1, want);
  const mag = Math.pow(10, Math.floor(Math.log10(Math.abs(rawStep) || 1)));
  const step = Math.max(1, Math.round(rawStep / mag)) * mag;
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let t = start; t <= hi + 1e-9; t += step) {
    ticks.push(Math.round(t * 1e6) / 1e6);
  }
  return ticks;
}

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

export function colorFor(index: number): string {
  return PALETTE[index % PALETTE.length];
}
