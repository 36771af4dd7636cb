import init, { structuredReport, ratioCurve, purePairCurve } from "./pkg/qdisc_wasm.js";

const COLORS = ["#888", "#a0522d", "#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#e377c2"];
const $ = (id) => document.getElementById(id);

function parseList(text) {
  return text.split(",").map((s) => {
    const [a, b] = s.split("/");
    return b === undefined ? Number(a) : Number(a) / Number(b);
  });
}

function polyline(points, color) {
  const d = points.map(([x, y]) => `${x.toFixed(1)},${y.toFixed(1)}`).join(" ");
  return `<polyline fill="none" stroke="${color}" stroke-width="2" points="${d}"/>`;
}

function plot(svg, xs, series, { logY = false } = {}) {
  const w = svg.width.baseVal.value, h = svg.height.baseVal.value, pad = 30;
  const f = logY ? Math.log10 : (v) => v;
  const all = series.flatMap((s) => s.values.filter(Number.isFinite).map(f));
  const lo = Math.min(...all), hi = Math.max(...all);
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  const sx = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const sy = (y) => h - pad - ((f(y) - lo) / (hi - lo || 1)) * (h - 2 * pad);
  let body = `<text x="4" y="14" font-size="11">${logY ? "10^" + hi.toFixed(1) : hi.toFixed(3)}</text>`;
  body += `<text x="4" y="${h - 4}" font-size="11">${logY ? "10^" + lo.toFixed(1) : lo.toFixed(3)}</text>`;
  for (const s of series) {
    const pts = xs.map((x, i) => [x, s.values[i]]).filter(([, y]) => Number.isFinite(y));
    body += polyline(pts.map(([x, y]) => [sx(x), sy(y)]), s.color);
  }
  svg.innerHTML = body;
}

function showStructured() {
  const out = $("structured");
  try {
    const alphas = parseList($("alphas").value);
    const pv = $("priors").value.trim();
    const priors = pv === "uniform" ? alphas.map(() => 1 / alphas.length) : parseList(pv);
    const r = JSON.parse(structuredReport(Float64Array.from(alphas), Float64Array.from(priors)));
    const rows = Object.entries(r.bounds).map(([k, v]) => `<tr><th>${k}</th><td>${v}</td></tr>`).join("");
    out.innerHTML = `<p>Q_E = ${r.qe}, Q_U = ${r.qu}, ratio = ${r.ratio}, Q_U &ge; 2 Q_E: ${r.twice_qe_holds}</p>
      <table>${rows}</table>`;
  } catch (e) {
    out.innerHTML = `<p class="error">${e}</p>`;
  }
}

function showRatio() {
  try {
    const r = JSON.parse(ratioCurve(Number($("a").value), 1, 7, 61));
    plot($("ratio-plot"), r.eps.map((e) => -Math.log10(e)), [{ values: r.ratio, color: COLORS[4] }], { logY: true });
  } catch (e) {
    $("ratio-plot").innerHTML = `<text x="10" y="20" fill="#b00">${e}</text>`;
  }
}

function showPair() {
  const p = Number($("p").value);
  $("p-value").textContent = p.toFixed(2);
  const r = JSON.parse(purePairCurve(p, 91));
  const series = Object.entries(r.bounds).map(([name, values], i) => ({ name, values, color: COLORS[i] }));
  plot($("pair-plot"), r.theta, series);
  $("pair-legend").innerHTML = series
    .map((s) => `<span style="color:${s.color}">&#9632; ${s.name}</span>`)
    .join(" ") + " (L4 coincides with the Helstrom value)";
}

await init();
$("solve").addEventListener("click", showStructured);
$("curve").addEventListener("click", showRatio);
$("p").addEventListener("input", showPair);
showStructured();
showRatio();
showPair();
