/** Deterministic SVG assembly: fixed canvas, fixed palette, fixed
 * number formatting.  Rendering the same data twice yields identical
 * bytes. */

export interface Series {
  label: string;
  role: "oracle" | "lanczos" | "lanczos_cross" | "bound";
  x: number[];
  y: number[];
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 64, right: 180, top: 24, bottom: 48 };

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

function fmt(value: number): string {
  return value.toFixed(3).replace(/-0\.000/, "0.000");
}

function ticks(lo: number, hi: number, count: number): number[] {
  const out: number[] = [];
  for (let i = 0; i < count; i++) {
    out.push(lo + ((hi - lo) * i) / (count - 1));
  }
  return out;
}

interface Scale {
  lo: number;
  hi: number;
  toPixel(value: number): number;
}

function makeScale(values: number[], pixelLo: number, pixelHi: number): Scale {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (!(hi > lo)) {
    hi = lo + 1;
  }
  const pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  return {
    lo,
    hi,
    toPixel: (value: number) =>
      pixelLo + ((value - lo) / (hi - lo)) * (pixelHi - pixelLo),
  };
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function seriesColor(index: number): string {
  return PALETTE[index % PALETTE.length];
}

/** Pair each series with a palette slot so that the matching oracle,
 * circle and cross series of one physical curve share a color: series
 * are grouped by the trailing tag of their label. */
function colorIndex(series: Series[], index: number): number {
  const tag = series[index].label.split(" ").slice(-1)[0];
  const tags: string[] = [];
  for (const s of series) {
    const t = s.label.split(" ").slice(-1)[0];
    if (!tags.includes(t)) {
      tags.push(t);
    }
  }
  return tags.indexOf(tag);
}

export function renderSvg(
  series: Series[],
  xLabel: string,
  yLabel: string,
  title: string
): string {
  const innerLeft = MARGIN.left;
  const innerRight = WIDTH - MARGIN.right;
  const innerTop = MARGIN.top;
  const innerBottom = HEIGHT - MARGIN.bottom;

  const xs = series.flatMap((s) => s.x);
  const ys = series.flatMap((s) => s.y);
  const xScale = makeScale(xs, innerLeft, innerRight);
  const yScale = makeScale(ys, innerBottom, innerTop);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${(innerLeft + innerRight) / 2}" y="16" text-anchor="middle" font-family="sans-serif" font-size="13">${escapeXml(title)}</text>`
  );

  // axes
  parts.push(
    `<rect x="${innerLeft}" y="${innerTop}" width="${innerRight - innerLeft}" height="${innerBottom - innerTop}" fill="none" stroke="black" stroke-width="1"/>`
  );
  for (const t of ticks(xScale.lo, xScale.hi, 6)) {
    const px = xScale.toPixel(t);
    parts.push(
      `<line x1="${fmt(px)}" y1="${innerBottom}" x2="${fmt(px)}" y2="${innerBottom + 5}" stroke="black"/>`
    );
    parts.push(
      `<text x="${fmt(px)}" y="${innerBottom + 18}" text-anchor="middle" font-family="sans-serif" font-size="10">${fmt(t)}</text>`
    );
  }
  for (const t of ticks(yScale.lo, yScale.hi, 6)) {
    const py = yScale.toPixel(t);
    parts.push(
      `<line x1="${innerLeft - 5}" y1="${fmt(py)}" x2="${innerLeft}" y2="${fmt(py)}" stroke="black"/>`
    );
    parts.push(
      `<text x="${innerLeft - 8}" y="${fmt(py + 3)}" text-anchor="end" font-family="sans-serif" font-size="10">${fmt(t)}</text>`
    );
  }
  parts.push(
    `<text x="${(innerLeft + innerRight) / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-family="sans-serif" font-size="12">${escapeXml(xLabel)}</text>`
  );
  parts.push(
    `<text x="18" y="${(innerTop + innerBottom) / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 18 ${(innerTop + innerBottom) / 2})">${escapeXml(yLabel)}</text>`
  );

  // data
  series.forEach((s, i) => {
    const color = seriesColor(colorIndex(series, i));
    const points = s.x.map((xv, k) => [xScale.toPixel(xv), yScale.toPixel(s.y[k])]);
    if (s.role === "oracle" || s.role === "bound") {
      const path = points.map(([px, py]) => `${fmt(px)},${fmt(py)}`).join(" ");
      const dash = s.role === "bound" ? ` stroke-dasharray="2,4"` : "";
      parts.push(
        `<polyline points="${path}" fill="none" stroke="${color}" stroke-width="1.5"${dash}/>`
      );
    } else if (s.role === "lanczos") {
      for (const [px, py] of points) {
        parts.push(
          `<circle cx="${fmt(px)}" cy="${fmt(py)}" r="3.5" fill="none" stroke="${color}" stroke-width="1.3"/>`
        );
      }
    } else {
      for (const [px, py] of points) {
        parts.push(
          `<path d="M ${fmt(px - 3)} ${fmt(py - 3)} L ${fmt(px + 3)} ${fmt(py + 3)} M ${fmt(px - 3)} ${fmt(py + 3)} L ${fmt(px + 3)} ${fmt(py - 3)}" stroke="${color}" stroke-width="1.3" fill="none"/>`
        );
      }
    }
  });

  // legend
  series.forEach((s, i) => {
    const color = seriesColor(colorIndex(series, i));
    const ly = innerTop + 14 * i + 8;
    const lx = innerRight + 10;
    if (s.role === "oracle") {
      parts.push(
        `<line x1="${lx}" y1="${ly}" x2="${lx + 18}" y2="${ly}" stroke="${color}" stroke-width="1.5"/>`
      );
    } else if (s.role === "bound") {
      parts.push(
        `<line x1="${lx}" y1="${ly}" x2="${lx + 18}" y2="${ly}" stroke="${color}" stroke-width="1.5" stroke-dasharray="2,4"/>`
      );
    } else if (s.role === "lanczos") {
      parts.push(
        `<circle cx="${lx + 9}" cy="${ly}" r="3.5" fill="none" stroke="${color}" stroke-width="1.3"/>`
      );
    } else {
      parts.push(
        `<path d="M ${lx + 6} ${ly - 3} L ${lx + 12} ${ly + 3} M ${lx + 6} ${ly + 3} L ${lx + 12} ${ly - 3}" stroke="${color}" stroke-width="1.3" fill="none"/>`
      );
    }
    parts.push(
      `<text x="${lx + 24}" y="${ly + 3}" font-family="sans-serif" font-size="9">${escapeXml(s.label)}</text>`
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
