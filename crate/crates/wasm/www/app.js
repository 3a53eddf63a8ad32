import init, { pool, rejection_levels, sweep } from "./pkg/poolcore_wasm.js";

const $ = (id) => document.getElementById(id);

function showError(target, err) {
  target.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(err);
  target.appendChild(p);
}

function table(headers, rows) {
  const t = document.createElement("table");
  const head = t.insertRow();
  for (const h of headers) {
    const th = document.createElement("th");
    th.textContent = h;
    head.appendChild(th);
  }
  for (const r of rows) {
    const tr = t.insertRow();
    for (const c of r) tr.insertCell().textContent = c;
  }
  return t;
}

const fmt = (s) => (s === "absent" ? s : Number(s).toPrecision(6));

function runPool() {
  const out = $("pool-out");
  try {
    const text = pool($("pool-methods").value, $("pool-values").value);
    const rows = text.trim().split("\n").map((l) => {
      const [label, v] = l.split("\t");
      return [label, fmt(v)];
    });
    out.replaceChildren(table(["method", "pooled p"], rows));
  } catch (e) {
    showError(out, e);
  }
}

function runLevels() {
  const out = $("lv-out");
  try {
    const m = Number($("lv-m").value);
    if (!Number.isInteger(m) || m < 1) throw "M must be a positive integer";
    const [pc, pr, q, source] = rejection_levels($("lv-method").value, m, Number($("lv-alpha").value)).split("\t");
    out.replaceChildren(table(["p_c", "p_r", "quotient", "from"], [[fmt(pc), fmt(pr), fmt(q), source]]));
  } catch (e) {
    showError(out, e);
  }
}

const SVG = "http://www.w3.org/2000/svg";

function el(name, attrs, text) {
  const e = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (text !== undefined) e.textContent = text;
  return e;
}

// Pooled p against ln κ on a log10 p axis, with the minimum marked.
function plot(points, best) {
  const w = 640, h = 280, l = 56, r = 16, t = 16, b = 40;
  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => Math.log10(Math.max(p[1], 1e-300)));
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  let y0 = Math.min(...ys), y1 = Math.max(...ys, 0);
  if (y1 - y0 < 1e-9) y0 = y1 - 1;
  const sx = (x) => l + ((x - x0) / (x1 - x0)) * (w - l - r);
  const sy = (y) => t + ((y1 - y) / (y1 - y0)) * (h - t - b);
  const svg = el("svg", { width: w, height: h, "font-size": 11, "font-family": "sans-serif" });
  svg.appendChild(el("line", { x1: l, y1: h - b, x2: w - r, y2: h - b, stroke: "#888" }));
  svg.appendChild(el("line", { x1: l, y1: t, x2: l, y2: h - b, stroke: "#888" }));
  for (let i = 0; i <= 4; i++) {
    const x = x0 + ((x1 - x0) * i) / 4;
    svg.appendChild(el("text", { x: sx(x), y: h - b + 14, "text-anchor": "middle" }, x.toFixed(1)));
    const y = y0 + ((y1 - y0) * i) / 4;
    svg.appendChild(el("text", { x: l - 4, y: sy(y) + 4, "text-anchor": "end" }, y.toFixed(1)));
  }
  svg.appendChild(el("text", { x: (l + w - r) / 2, y: h - 6, "text-anchor": "middle" }, "ln κ"));
  svg.appendChild(el("text", { x: 12, y: (t + h - b) / 2, transform: `rotate(-90 12 ${(t + h - b) / 2})`, "text-anchor": "middle" }, "log10 pooled p"));
  const d = points.map((p, i) => `${i ? "L" : "M"}${sx(xs[i]).toFixed(1)},${sy(ys[i]).toFixed(1)}`).join("");
  svg.appendChild(el("path", { d, fill: "none", stroke: "#1f4e8c", "stroke-width": 2 }));
  svg.appendChild(el("circle", { cx: sx(best[0]), cy: sy(Math.log10(Math.max(best[1], 1e-300))), r: 4, fill: "#c0392b" }));
  return svg;
}

function runSweep() {
  const out = $("sw-out");
  try {
    const n = Number($("sw-n").value);
    if (!Number.isInteger(n)) throw "the number of points must be an integer";
    const lines = sweep($("sw-values").value, Number($("sw-lo").value), Number($("sw-hi").value), n).trim().split("\n");
    const [kmin, lnkmin, pmin] = lines[0].split("\t").map(Number);
    const points = lines.slice(1).map((l) => l.split("\t").map(Number));
    const summary = table(["κ_min", "ln κ_min", "min pooled p"], [[kmin.toPrecision(4), lnkmin.toFixed(2), pmin.toPrecision(4)]]);
    out.replaceChildren(summary, plot(points, [lnkmin, pmin]));
  } catch (e) {
    showError(out, e);
  }
}

await init();
$("pool-run").addEventListener("click", runPool);
$("lv-run").addEventListener("click", runLevels);
$("sw-run").addEventListener("click", runSweep);
runPool();
runLevels();
runSweep();
