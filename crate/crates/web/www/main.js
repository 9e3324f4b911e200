import init, { solve_equilibrium, phi_curve, creator_policy } from "./pkg/copyright_eq_web.js";

const $ = (id) => document.getElementById(id);
const NUMERIC = ["f", "phi", "x1", "m", "k", "lambda", "beta"];

function params() {
  const p = { regime: $("regime").value };
  for (const key of NUMERIC) p[key] = Number($(key).value);
  return JSON.stringify(p);
}

function show(el, fn) {
  el.classList.remove("error");
  try {
    fn();
  } catch (e) {
    el.classList.add("error");
    el.textContent = String(e.message ?? e);
  }
}

function fmt(v) {
  return typeof v === "number" ? Number(v.toFixed(6)) : v;
}

function solveClicked() {
  const out = $("solve-out");
  show(out, () => {
    const r = JSON.parse(solve_equilibrium(params()));
    const lines = [
      `scenario     ${r.scenario}`,
      `rho          ${fmt(r.rho)}`,
      `X2, p2       ${fmt(r.x2)}, ${fmt(r.p2)}`,
      `period 1     lo=${fmt(r.thresholds1[0])} hi=${fmt(r.thresholds1[1])}`,
      `period 2     lo=${fmt(r.thresholds2[0])} hi=${fmt(r.thresholds2[1])}`,
      `long term    w=${fmt(r.w)} s=${fmt(r.s)} u=${fmt(r.u)}`,
    ];
    for (const [name, m] of [["period 1", r.period1], ["period 2", r.period2]]) {
      lines.push(`${name.padEnd(12)} Q_H=${fmt(m.q_h)} Q_A=${fmt(m.q_a)} w=${fmt(m.w)} s=${fmt(m.s)} u=${fmt(m.u)}`);
    }
    for (const w of r.warnings) lines.push(`warning: ${w}`);
    out.textContent = lines.join("\n");
  });
}

function chart(xs, ys, label) {
  const W = 600, H = 320, L = 60, R = 20, T = 20, B = 40;
  const pts = xs.map((x, i) => [x, ys[i]]).filter(([, y]) => y !== null);
  if (pts.length === 0) return "<p>no solvable points</p>";
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  let y0 = Math.min(...pts.map((p) => p[1])), y1 = Math.max(...pts.map((p) => p[1]));
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  const sx = (x) => L + ((x - x0) / (x1 - x0)) * (W - L - R);
  const sy = (y) => T + (1 - (y - y0) / (y1 - y0)) * (H - T - B);
  let runs = [[]];
  xs.forEach((x, i) => {
    if (ys[i] === null) { if (runs.at(-1).length) runs.push([]); }
    else runs.at(-1).push(`${sx(x).toFixed(1)},${sy(ys[i]).toFixed(1)}`);
  });
  const lines = runs.filter((r) => r.length).map((r) =>
    `<polyline fill="none" stroke="#1f77b4" stroke-width="2" points="${r.join(" ")}"/>`).join("");
  const ticks = [0, 0.25, 0.5, 0.75, 1].map((t) => {
    const xv = x0 + t * (x1 - x0), yv = y0 + t * (y1 - y0);
    return `<text x="${sx(xv)}" y="${H - B + 16}" text-anchor="middle">${xv.toFixed(2)}</text>` +
      `<text x="${L - 6}" y="${sy(yv) + 4}" text-anchor="end">${yv.toFixed(3)}</text>`;
  }).join("");
  return `<svg width="${W}" height="${H}" font-size="11" font-family="sans-serif">` +
    `<rect x="${L}" y="${T}" width="${W - L - R}" height="${H - T - B}" fill="none" stroke="#000"/>` +
    ticks + lines +
    `<text x="${(L + W - R) / 2}" y="${H - 6}" text-anchor="middle">phi</text>` +
    `<text x="14" y="${T + 10}">${label}</text></svg>`;
}

function curveClicked() {
  const out = $("curve-out");
  show(out, () => {
    const c = JSON.parse(phi_curve(params(), $("metric").value, 0.01));
    out.innerHTML = chart(c.xs, c.ys, c.metric);
  });
}

function bandsClicked() {
  const out = $("bands-out");
  show(out, () => {
    const b = JSON.parse(creator_policy(params(), Number($("quality").value), Number($("price").value)));
    const seg = (w, color, name) =>
      `<div style="width:${(100 * w).toFixed(2)}%;background:${color}">${w > 0.08 ? name : ""}</div>`;
    out.innerHTML =
      `<div class="bar">${seg(b.none, "#999", "none")}${seg(b.ai, "#d62728", "AI")}${seg(b.human, "#1f77b4", "human")}</div>` +
      `<p>skill cutoffs: lo = ${fmt(b.lo)}, hi = ${fmt(b.hi)}</p>`;
  });
}

await init();
$("solve").addEventListener("click", solveClicked);
$("curve").addEventListener("click", curveClicked);
$("bands").addEventListener("click", bandsClicked);
solveClicked();
