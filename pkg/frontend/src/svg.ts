/** Deterministic SVG assembly: fixed-precision coordinates, no state. */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { left: 72, right: 24, top: 40, bottom: 56 };

export function fmt(v: number): string {
  if (!Number.isFinite(v)) {
    throw new Error(`non-finite coordinate ${v}`);
  }
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export interface Scale {
  (v: number): number;
  domain: [number, number];
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = [d0, d1];
  return f;
}

export function ticks(d0: number, d1: number, count = 6): number[] {
  const span = d1 - d0;
  if (span <= 0) {
    return [d0];
  }
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const start = Math.ceil(d0 / s) * s;
  const out: number[] = [];
  for (let v = start; v <= d1 + 1e-12 * Math.abs(span); v += s) {
    out.push(Math.abs(v) < 1e-12 * s ? 0 : v);
  }
  return out;
}

export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(Math.round(v * 1e6) / 1e6);
}

export class Figure {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-family="sans-serif" font-size="15" font-weight="bold">${escapeXml(title)}</text>`,
    );
  }

  add(fragment: string): void {
    this.parts.push(fragment);
  }

  polyline(xs: number[], ys: number[], stroke: string, width = 1.5, dash = ""): void {
    const pts = xs.map((x, i) => `${fmt(x)},${fmt(ys[i])}`).join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr}/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`,
    );
  }

  text(x: number, y: number, content: string, opts: { anchor?: string; size?: number; fill?: string } = {}): void {
    const anchor = opts.anchor ?? "start";
    const size = opts.size ?? 12;
    const fill = opts.fill ?? "#222222";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-family="sans-serif" font-size="${size}" fill="${fill}">${escapeXml(content)}</text>`,
    );
  }

  axes(xScale: Scale, yScale: Scale, xLabel: string, yLabel: string,
       xTickValues: number[], yTickValues: number[],
       xTickText?: (v: number) => string, yTickText?: (v: number) => string): void {
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    this.parts.push(
      `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#222222"/>`,
      `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#222222"/>`,
    );
    const fx = xTickText ?? tickLabel;
    const fy = yTickText ?? tickLabel;
    for (const v of xTickValues) {
      const px = xScale(v);
      this.parts.push(`<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 5}" stroke="#222222"/>`);
      this.text(px, y0 + 20, fx(v), { anchor: "middle", size: 11 });
    }
    for (const v of yTickValues) {
      const py = yScale(v);
      this.parts.push(`<line x1="${x0 - 5}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="#222222"/>`);
      this.text(x0 - 8, py + 4, fy(v), { anchor: "end", size: 11 });
    }
    this.text((x0 + x1) / 2, HEIGHT - 14, xLabel, { anchor: "middle" });
    this.parts.push(
      `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" fill="#222222" transform="rotate(-90 18 ${(y0 + y1) / 2})">${escapeXml(yLabel)}</text>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
