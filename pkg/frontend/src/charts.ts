/** Deterministic SVG chart builders (no chart library, no randomness). */

export interface LineSeries {
  name: string;
  years: number[];
  values: number[];
  dashed?: boolean;
}

const PALETTE = ["#1b6ca8", "#c0392b", "#2e8b57", "#8e44ad"];

function scale(domainLo: number, domainHi: number, rangeLo: number, rangeHi: number) {
  const span = domainHi - domainLo || 1;
  return (x: number) => rangeLo + ((x - domainLo) / span) * (rangeHi - rangeLo);
}

export function lineChart(
  series: LineSeries[],
  options: { width?: number; height?: number; parityYear?: number | null; yLabel?: string } = {},
): string {
  const width = options.width ?? 640;
  const height = options.height ?? 320;
  const pad = { left: 54, right: 12, top: 14, bottom: 30 };
  const years = series.flatMap((s) => s.years);
  const values = series.flatMap((s) => s.values);
  if (years.length === 0) return `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"></svg>`;
  const x = scale(Math.min(...years), Math.max(...years), pad.left, width - pad.right);
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const margin = (hi - lo || 1) * 0.08;
  const y = scale(lo - margin, hi + margin, height - pad.bottom, pad.top);

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" font-family="sans-serif" font-size="11">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
  ];
  for (const tick of [lo, (lo + hi) / 2, hi]) {
    const ty = y(tick);
    parts.push(
      `<line x1="${pad.left}" y1="${ty.toFixed(1)}" x2="${width - pad.right}" y2="${ty.toFixed(1)}" stroke="#eee"/>`,
      `<text x="4" y="${(ty + 4).toFixed(1)}" fill="#555">${tick.toFixed(2)}</text>`,
    );
  }
  if (options.parityYear !== null && options.parityYear !== undefined) {
    const px = x(options.parityYear);
    parts.push(
      `<line class="parity-marker" x1="${px.toFixed(1)}" y1="${pad.top}" x2="${px.toFixed(1)}" y2="${height - pad.bottom}" stroke="#2e8b57" stroke-width="1.5"/>`,
      `<text x="${(px + 4).toFixed(1)}" y="${pad.top + 10}" fill="#2e8b57">parity ${options.parityYear}</text>`,
    );
  }
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const points = s.years.map((yr, k) => `${x(yr).toFixed(1)},${y(s.values[k]!).toFixed(1)}`);
    parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="1.8"${s.dashed ? ' stroke-dasharray="5,4"' : ""} points="${points.join(" ")}"/>`,
      `<text x="${pad.left + 6}" y="${pad.top + 14 + i * 14}" fill="${color}">${s.name}</text>`,
    );
  });
  const yearLo = Math.min(...years);
  const yearHi = Math.max(...years);
  parts.push(
    `<text x="${pad.left}" y="${height - 8}" fill="#555">${yearLo}</text>`,
    `<text x="${width - pad.right - 30}" y="${height - 8}" fill="#555">${yearHi}</text>`,
  );
  if (options.yLabel) {
    parts.push(`<text x="4" y="${pad.top}" fill="#555">${options.yLabel}</text>`);
  }
  parts.push("</svg>");
  return parts.join("");
}

export interface TornadoBar {
  factor: string;
  changeFraction: number;
  changeText: string;
}

export function tornadoChart(bars: TornadoBar[], options: { width?: number } = {}): string {
  const width = options.width ?? 640;
  const rowHeight = 20;
  const labelWidth = 190;
  const height = bars.length * rowHeight + 24;
  const maxAbs = Math.max(...bars.map((b) => Math.abs(b.changeFraction)), 1e-9);
  const zero = labelWidth + (width - labelWidth - 70) / 2;
  const unit = (width - labelWidth - 70) / 2 / maxAbs;
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" font-family="sans-serif" font-size="11">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    `<line x1="${zero}" y1="8" x2="${zero}" y2="${height - 8}" stroke="#999"/>`,
  ];
  bars.forEach((bar, i) => {
    const top = 12 + i * rowHeight;
    const length = Math.abs(bar.changeFraction) * unit;
    const xStart = bar.changeFraction >= 0 ? zero : zero - length;
    const color = bar.changeFraction >= 0 ? "#c0392b" : "#1b6ca8";
    parts.push(
      `<text x="${labelWidth - 6}" y="${top + 12}" text-anchor="end" fill="#333">${bar.factor}</text>`,
      `<rect x="${xStart.toFixed(1)}" y="${top}" width="${Math.max(length, 0.5).toFixed(1)}" height="${rowHeight - 6}" fill="${color}"/>`,
      `<text x="${width - 64}" y="${top + 12}" fill="#333">${bar.changeText}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}
