/**
 * Minimal deterministic SVG line plots: fixed canvas, fixed palette, no
 * timestamps or randomness, coordinates rounded so reruns are
 * byte-for-byte identical.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color?: string;
  dash?: string;
  width?: number;
}

/** Horizontal reference line (constraint band). */
export interface Band {
  y: number;
  label: string;
  color?: string;
}

export interface PlotSpec {
  title: string;
  subtitle?: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  bands?: Band[];
  logY?: boolean;
  width?: number;
  height?: number;
}

const PALETTE = ["#1f6fb2", "#d1495b", "#3e8e5a", "#8d6bb8", "#c98a1d", "#4a4a4a"];
const MARGIN = { left: 78, right: 24, top: 56, bottom: 58 };

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

const fmt = (v: number): string => {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1).replace("e+", "e");
  return String(Number(v.toPrecision(4)));
};

const px = (v: number): string => v.toFixed(2);

function linearTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10) * mag;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
    ticks.push(Math.abs(t) < 1e-12 * span ? 0 : t);
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let d = Math.ceil(lo); d <= Math.floor(hi); d++) ticks.push(d);
  if (ticks.length === 0) ticks.push(lo, hi);
  return ticks;
}

export function linePlot(spec: PlotSpec): string {
  const W = spec.width ?? 760;
  const H = spec.height ?? 480;
  const innerW = W - MARGIN.left - MARGIN.right;
  const innerH = H - MARGIN.top - MARGIN.bottom;

  // collect plottable points (log scale drops nonpositive values)
  const pts = spec.series.map((s) => {
    const x: number[] = [];
    const y: number[] = [];
    for (let i = 0; i < s.x.length; i++) {
      const yi = s.y[i];
      if (!Number.isFinite(s.x[i]) || !Number.isFinite(yi)) continue;
      if (spec.logY && yi <= 0) continue;
      x.push(s.x[i]);
      y.push(spec.logY ? Math.log10(yi) : yi);
    }
    return { x, y };
  });
  if (pts.every((p) => p.x.length === 0)) {
    throw new Error(`plot '${spec.title}': no plottable points`);
  }

  const bandVals = (spec.bands ?? []).map((b) => (spec.logY ? Math.log10(b.y) : b.y));
  let xLo = Infinity, xHi = -Infinity, yLo = Infinity, yHi = -Infinity;
  for (const p of pts) {
    for (const v of p.x) { xLo = Math.min(xLo, v); xHi = Math.max(xHi, v); }
    for (const v of p.y) { yLo = Math.min(yLo, v); yHi = Math.max(yHi, v); }
  }
  for (const v of bandVals) { yLo = Math.min(yLo, v); yHi = Math.max(yHi, v); }
  if (xHi === xLo) { xHi = xLo + 1; }
  if (yHi === yLo) { yHi = yLo + 1; yLo -= 1; }
  const yPad = 0.06 * (yHi - yLo);
  yLo -= yPad; yHi += yPad;

  const sx = (v: number) => MARGIN.left + ((v - xLo) / (xHi - xLo)) * innerW;
  const sy = (v: number) => MARGIN.top + innerH - ((v - yLo) / (yHi - yLo)) * innerH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${W}" height="${H}" fill="#ffffff"/>`,
    `<text x="${px(W / 2)}" y="24" text-anchor="middle" font-size="16" fill="#222">${esc(spec.title)}</text>`,
  );
  if (spec.subtitle) {
    parts.push(`<text x="${px(W / 2)}" y="42" text-anchor="middle" font-size="11" fill="#666">${esc(spec.subtitle)}</text>`);
  }

  // axes frame and ticks
  parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${innerW}" height="${innerH}" fill="none" stroke="#999" stroke-width="1"/>`);
  for (const t of linearTicks(xLo, xHi)) {
    const X = sx(t);
    parts.push(
      `<line x1="${px(X)}" y1="${MARGIN.top + innerH}" x2="${px(X)}" y2="${MARGIN.top + innerH + 5}" stroke="#999"/>`,
      `<text x="${px(X)}" y="${MARGIN.top + innerH + 20}" text-anchor="middle" font-size="11" fill="#444">${fmt(t)}</text>`,
    );
  }
  const yTicks = spec.logY ? logTicks(yLo, yHi) : linearTicks(yLo, yHi);
  for (const t of yTicks) {
    const Y = sy(t);
    const label = spec.logY ? `1e${fmt(t)}` : fmt(t);
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${px(Y)}" x2="${MARGIN.left}" y2="${px(Y)}" stroke="#999"/>`,
      `<line x1="${MARGIN.left}" y1="${px(Y)}" x2="${MARGIN.left + innerW}" y2="${px(Y)}" stroke="#eee"/>`,
      `<text x="${MARGIN.left - 9}" y="${px(Y + 4)}" text-anchor="end" font-size="11" fill="#444">${label}</text>`,
    );
  }
  parts.push(
    `<text x="${px(MARGIN.left + innerW / 2)}" y="${H - 14}" text-anchor="middle" font-size="13" fill="#222">${esc(spec.xLabel)}</text>`,
    `<text x="20" y="${px(MARGIN.top + innerH / 2)}" text-anchor="middle" font-size="13" fill="#222" transform="rotate(-90 20 ${px(MARGIN.top + innerH / 2)})">${esc(spec.yLabel)}</text>`,
  );

  // constraint bands
  (spec.bands ?? []).forEach((band, i) => {
    const Y = sy(bandVals[i]);
    const color = band.color ?? "#b22222";
    parts.push(
      `<line x1="${MARGIN.left}" y1="${px(Y)}" x2="${MARGIN.left + innerW}" y2="${px(Y)}" stroke="${color}" stroke-width="1.5" stroke-dasharray="7 4"/>`,
      `<text x="${MARGIN.left + innerW - 6}" y="${px(Y - 6)}" text-anchor="end" font-size="11" fill="${color}">${esc(band.label)}</text>`,
    );
  });

  // series
  spec.series.forEach((s, i) => {
    const p = pts[i];
    if (p.x.length === 0) return;
    const color = s.color ?? PALETTE[i % PALETTE.length];
    const coords = p.x.map((xv, j) => `${px(sx(xv))},${px(sy(p.y[j]))}`).join(" ");
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<polyline points="${coords}" fill="none" stroke="${color}" stroke-width="${s.width ?? 1.8}"${dash}/>`,
    );
  });

  // legend, top-left inside the frame
  spec.series.forEach((s, i) => {
    const color = s.color ?? PALETTE[i % PALETTE.length];
    const y = MARGIN.top + 16 + 16 * i;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<line x1="${MARGIN.left + 10}" y1="${px(y - 4)}" x2="${MARGIN.left + 34}" y2="${px(y - 4)}" stroke="${color}" stroke-width="2"${dash}/>`,
      `<text x="${MARGIN.left + 40}" y="${px(y)}" font-size="11" fill="#333">${esc(s.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
