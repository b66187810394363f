/** The five figure kinds rendered from wavelab CSV tables. */

import { Table, column } from "./csv.js";
import { decayFit } from "./fit.js";
import { Figure, HEIGHT, MARGIN, Scale, WIDTH, linearScale, tickLabel, ticks } from "./svg.js";

export const RUN_COLUMNS = [
  "t", "energy", "l2_sq", "damping_cum", "damping_u_cum", "residual_2_5",
  "residual_2_13", "residual_2_16", "ratio_energy", "ratio_l2", "boundary",
];

const COLORS = { energy: "#1f5fa8", l2: "#c23b22", guide: "#777777", accent: "#2b8a3e" };

const PLOT_X0 = MARGIN.left;
const PLOT_X1 = WIDTH - MARGIN.right;
const PLOT_Y0 = HEIGHT - MARGIN.bottom;
const PLOT_Y1 = MARGIN.top;

function log10(v: number): number {
  return Math.log(v) / Math.LN10;
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    throw new Error("empty extent");
  }
  return lo === hi ? [lo - 1, hi + 1] : [lo, hi];
}

function pow10Label(v: number): string {
  return `1e${tickLabel(v)}`;
}

/** log(quantity) against log(1+t) with reference slopes -1 and -2 and the
 * fitted slope annotated; flat zero-data curves render on a linear axis. */
export function decayLoglog(table: Table, window?: [number, number]): string {
  const t = column(table, "t");
  const energy = column(table, "energy");
  const l2 = column(table, "l2_sq");
  const fig = new Figure("total energy and squared L2 norm vs 1+t (log-log)");

  const x = t.map((v) => log10(1 + v));
  const allPositive = [...energy, ...l2].every((v) => v > 0);
  if (!allPositive) {
    // zero or sign-crossing data: draw the raw curves on linear axes
    const xs = linearScale(...extent(t), PLOT_X0, PLOT_X1);
    const ys = linearScale(...extent([...energy, ...l2]), PLOT_Y0, PLOT_Y1);
    fig.axes(xs, ys, "t", "value", ticks(...xs.domain), ticks(...ys.domain));
    fig.polyline(t.map(xs), energy.map((v) => ys(v)), COLORS.energy);
    fig.polyline(t.map(xs), l2.map((v) => ys(v)), COLORS.l2);
    fig.text(PLOT_X0 + 10, PLOT_Y1 + 16, "nonpositive samples: linear axes, no fit", { fill: COLORS.guide });
    return fig.render();
  }
  const ye = energy.map(log10);
  const yl = l2.map(log10);
  const xs = linearScale(...extent(x), PLOT_X0, PLOT_X1);
  const ys = linearScale(...extent([...ye, ...yl]), PLOT_Y0, PLOT_Y1);
  fig.axes(xs, ys, "log10(1+t)", "log10(value)",
    ticks(...xs.domain), ticks(...ys.domain));
  fig.polyline(x.map(xs), ye.map((v) => ys(v)), COLORS.energy);
  fig.polyline(x.map(xs), yl.map((v) => ys(v)), COLORS.l2);

  const tHi = t[t.length - 1];
  const [lo, hi] = window ?? [Math.max(1, tHi / 10), tHi];
  const fitE = decayFit(t, energy, lo, hi);
  const fitL = decayFit(t, l2, lo, hi);

  // reference slopes -1 and -2 anchored at the start of the fit window
  const xa = log10(1 + lo);
  const xb = x[x.length - 1];
  const anchor = ye[x.findIndex((v) => v >= xa)] ?? ye[0];
  for (const slope of [-1, -2]) {
    const ya = anchor + 0.4;
    const yb = ya + slope * (xb - xa);
    fig.polyline([xs(xa), xs(xb)], [ys(ya), ys(yb)], COLORS.guide, 1.0, "6 4");
    fig.text(xs(xb) - 4, ys(yb) - 6, `slope ${slope}`, { anchor: "end", size: 11, fill: COLORS.guide });
  }
  // fitted-slope guide through the energy curve over the window
  const fa = (fitE.slope * Math.log(1 + lo) + fitE.intercept) / Math.LN10;
  const fb = (fitE.slope * Math.log(1 + hi) + fitE.intercept) / Math.LN10;
  fig.polyline([xs(log10(1 + lo)), xs(log10(1 + hi))], [ys(fa), ys(fb)], COLORS.accent, 1.2, "2 3");
  fig.text(PLOT_X0 + 10, PLOT_Y1 + 16,
    `fit on [${tickLabel(lo)}, ${tickLabel(hi)}]: slope(energy) = ${fitE.slope.toFixed(3)}, slope(l2_sq) = ${fitL.slope.toFixed(3)}`,
    { fill: COLORS.accent });
  fig.text(PLOT_X1 - 8, PLOT_Y1 + 16, "energy", { anchor: "end", fill: COLORS.energy });
  fig.text(PLOT_X1 - 8, PLOT_Y1 + 32, "l2_sq", { anchor: "end", fill: COLORS.l2 });
  return fig.render();
}

/** max |residual| per run against the record spacing, log-log, with a
 * second-order guide; one input CSV per refinement level. */
export function residualRefinement(tables: Table[]): string {
  if (tables.length < 2) {
    throw new Error("residual_refinement needs at least two run CSVs");
  }
  const names = ["residual_2_5", "residual_2_13", "residual_2_16"];
  const spacings: number[] = [];
  const maxima: number[][] = names.map(() => []);
  for (const table of tables) {
    const t = column(table, "t");
    if (t.length < 2) {
      throw new Error("run CSV has a single record; no spacing");
    }
    spacings.push(t[1] - t[0]);
    names.forEach((name, i) => {
      const v = column(table, name).map(Math.abs);
      maxima[i].push(Math.max(...v));
    });
  }
  const xi = spacings.map(log10);
  const flat = maxima.flat().filter((v) => v > 0);
  if (flat.length === 0) {
    throw new Error("all residuals are exactly zero; nothing to plot");
  }
  const yi = maxima.map((row) => row.map((v) => log10(Math.max(v, 1e-300))));
  const fig = new Figure("identity residual maxima vs record spacing (log-log)");
  const xs = linearScale(...extent(xi), PLOT_X0 + 10, PLOT_X1 - 10);
  const ys = linearScale(...extent(yi.flat()), PLOT_Y0, PLOT_Y1);
  fig.axes(xs, ys, "log10(record spacing)", "log10(max |residual|)",
    xi, ticks(...ys.domain), (v) => tickLabel(Math.pow(10, v)));
  const palette = [COLORS.energy, COLORS.l2, COLORS.accent];
  names.forEach((name, i) => {
    fig.polyline(xi.map(xs), yi[i].map((v) => ys(v)), palette[i]);
    xi.forEach((xv, j) => fig.circle(xs(xv), ys(yi[i][j]), 3, palette[i]));
    fig.text(PLOT_X1 - 8, PLOT_Y1 + 16 * (i + 1), name, { anchor: "end", fill: palette[i] });
  });
  // second-order reference through the first point of the first series
  const y0 = yi[0][0];
  const guide = xi.map((xv) => y0 + 2 * (xv - xi[0]));
  fig.polyline(xi.map(xs), guide.map((v) => ys(v)), COLORS.guide, 1.0, "6 4");
  fig.text(xs(xi[xi.length - 1]), ys(guide[guide.length - 1]) - 8, "slope 2",
    { anchor: "end", size: 11, fill: COLORS.guide });
  return fig.render();
}

/** Decay-weighted bound ratios along the run (log ordinate). */
export function ratioVsT(table: Table): string {
  const t = column(table, "t");
  const re = column(table, "ratio_energy");
  const rl = column(table, "ratio_l2");
  const fig = new Figure("bound-certificate ratios vs t");
  const positive = [...re, ...rl].filter((v) => v > 0);
  if (positive.length === 0) {
    throw new Error("ratio columns are identically zero");
  }
  const floor = Math.min(...positive);
  const logs = (vals: number[]) => vals.map((v) => log10(Math.max(v, floor)));
  const ye = logs(re);
  const yl = logs(rl);
  const xs = linearScale(...extent(t), PLOT_X0, PLOT_X1);
  const ys = linearScale(...extent([...ye, ...yl]), PLOT_Y0, PLOT_Y1);
  fig.axes(xs, ys, "t", "log10(ratio)", ticks(...xs.domain), ticks(...ys.domain));
  fig.polyline(t.map(xs), ye.map((v) => ys(v)), COLORS.energy);
  fig.polyline(t.map(xs), yl.map((v) => ys(v)), COLORS.l2);
  const iE = re.indexOf(Math.max(...re));
  fig.circle(xs(t[iE]), ys(ye[iE]), 4, COLORS.energy);
  fig.text(xs(t[iE]) + 6, ys(ye[iE]) - 6,
    `sup ${re[iE].toExponential(2)} at t=${tickLabel(t[iE])}`, { size: 11 });
  fig.text(PLOT_X1 - 8, PLOT_Y1 + 16, "(1+t)^2 E / I2^2", { anchor: "end", fill: COLORS.energy });
  fig.text(PLOT_X1 - 8, PLOT_Y1 + 32, "(1+t) |u|^2 / I3^2", { anchor: "end", fill: COLORS.l2 });
  return fig.render();
}

/** Cutoff-sweep error bars on a log scale; exact zeros are marked. */
export function mconvBar(table: Table): string {
  const m = column(table, "m");
  const err = column(table, "sup_error");
  const fig = new Figure("cutoff-coefficient convergence: sup-in-time L2 error vs m");
  const positive = err.filter((v) => v > 0);
  const floorLog = positive.length
    ? Math.floor(Math.min(...positive.map(log10))) - 1
    : -16;
  const topLog = positive.length ? Math.ceil(Math.max(...positive.map(log10))) : 0;
  const xs = linearScale(-0.5, m.length - 0.5, PLOT_X0, PLOT_X1);
  const ys = linearScale(floorLog, topLog, PLOT_Y0, PLOT_Y1);
  fig.axes(xs, ys, "cutoff radius m", "log10(sup error)",
    m.map((_, i) => i), ticks(floorLog, topLog),
    (i) => tickLabel(m[i]));
  const bw = Math.min(60, (PLOT_X1 - PLOT_X0) / m.length * 0.6);
  m.forEach((_, i) => {
    const cx = xs(i);
    if (err[i] > 0) {
      const y = ys(log10(err[i]));
      fig.rect(cx - bw / 2, y, bw, PLOT_Y0 - y, COLORS.energy);
      fig.text(cx, y - 6, err[i].toExponential(1), { anchor: "middle", size: 11 });
    } else {
      fig.rect(cx - bw / 2, PLOT_Y0 - 2, bw, 2, COLORS.accent);
      fig.text(cx, PLOT_Y0 - 10, "exact 0", { anchor: "middle", size: 11, fill: COLORS.accent });
    }
  });
  return fig.render();
}

/** Inequality-check ratios per sample with the empirical constant. */
export function prop21Scatter(table: Table): string {
  const id = column(table, "sample_id");
  const ratio = column(table, "ratio");
  const res = column(table, "resolution");
  const fig = new Figure("Riesz-inequality ratios per sample");
  const xs = linearScale(Math.min(...id) - 0.5, Math.max(...id) + 0.5, PLOT_X0, PLOT_X1);
  const [rLo, rHi] = extent(ratio);
  const pad = 0.1 * (rHi - rLo || 1);
  const ys = linearScale(Math.max(0, rLo - pad), rHi + pad, PLOT_Y0, PLOT_Y1);
  fig.axes(xs, ys, "sample id", "lhs / rhs", ticks(...xs.domain), ticks(...ys.domain));
  const resLevels = [...new Set(res)].sort((a, b) => a - b);
  const palette = [COLORS.energy, COLORS.l2, COLORS.accent, COLORS.guide];
  ratio.forEach((r, i) => {
    const color = palette[resLevels.indexOf(res[i]) % palette.length];
    fig.circle(xs(id[i]), ys(r), 4, color);
  });
  const cEmp = Math.max(...ratio);
  fig.polyline([PLOT_X0, PLOT_X1], [ys(cEmp), ys(cEmp)], COLORS.guide, 1.0, "6 4");
  fig.text(PLOT_X0 + 10, ys(cEmp) - 8, `empirical constant = ${cEmp.toExponential(3)}`,
    { size: 12, fill: COLORS.guide });
  resLevels.forEach((rv, i) => {
    fig.text(PLOT_X1 - 8, PLOT_Y1 + 16 * (i + 1), `N = ${rv}`,
      { anchor: "end", fill: palette[i % palette.length] });
  });
  return fig.render();
}
