/** Least-squares line fit used for slope annotations. */

export interface LineFit {
  slope: number;
  intercept: number;
  r2: number;
}

export function linearFit(x: number[], y: number[]): LineFit {
  const n = x.length;
  if (n < 2 || y.length !== n) {
    throw new Error("fit needs at least two matching samples");
  }
  const mx = x.reduce((a, b) => a + b, 0) / n;
  const my = y.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  let syy = 0;
  for (let i = 0; i < n; i++) {
    const dx = x[i] - mx;
    const dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx === 0) {
    throw new Error("degenerate fit: all abscissae equal");
  }
  const slope = sxy / sxx;
  const intercept = my - slope * mx;
  const r2 = syy === 0 ? 1 : (sxy * sxy) / (sxx * syy);
  return { slope, intercept, r2 };
}

/** log-log decay fit of q against (1+t) inside [tLo, tHi]. */
export function decayFit(t: number[], q: number[], tLo: number, tHi: number): LineFit {
  const xs: number[] = [];
  const ys: number[] = [];
  for (let i = 0; i < t.length; i++) {
    if (t[i] >= tLo && t[i] <= tHi && q[i] > 0) {
      xs.push(Math.log(1 + t[i]));
      ys.push(Math.log(q[i]));
    }
  }
  if (xs.length < 2) {
    throw new Error(`decay window [${tLo}, ${tHi}] holds ${xs.length} positive samples`);
  }
  return linearFit(xs, ys);
}
