import init, { analyze, rate_list_curve, two_phase } from "./pkg/lsc_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"];

function fields(form) {
  return Object.fromEntries(new FormData(form).entries());
}

function clear(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.font = "12px system-ui, sans-serif";
  return ctx;
}

function fail(pre, e) {
  pre.className = "error";
  pre.textContent = String(e);
}

function drawBars(canvas, values, ceiling) {
  const ctx = clear(canvas);
  const pad = 30;
  const w = (canvas.width - 2 * pad) / values.length;
  const h = canvas.height - 2 * pad;
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, canvas.width - 2 * pad, h);
  ctx.fillStyle = "#555";
  ctx.fillText(`${ceiling.toFixed(3)} bits`, 2, pad - 6);
  values.forEach((v, i) => {
    const bh = ceiling > 0 ? (v / ceiling) * h : 0;
    ctx.fillStyle = v > 1e-9 ? COLORS[1] : COLORS[2];
    ctx.fillRect(pad + i * w + 4, pad + h - bh, w - 8, bh);
    ctx.fillStyle = "#333";
    ctx.fillText(`X${i}`, pad + i * w + w / 2 - 8, canvas.height - 10);
  });
}

function runLeak(section) {
  const f = fields(section.querySelector("form"));
  const pre = section.querySelector("pre");
  try {
    const r = JSON.parse(analyze(+f.q, +f.n, +f.k, f.scheme, f.pmf, +f.eps));
    pre.className = "";
    pre.textContent = r.text;
    drawBars(section.querySelector("canvas"), r.per_symbol_leak, Math.log2(r.q));
  } catch (e) {
    fail(pre, e);
  }
}

function runCurve(section) {
  const f = fields(section.querySelector("form"));
  const canvas = section.querySelector("canvas");
  const legend = section.querySelector(".legend");
  let c;
  try {
    c = JSON.parse(rate_list_curve(+f.q, +f.n, f.pmf));
  } catch (e) {
    clear(canvas);
    legend.className = "legend error";
    legend.textContent = String(e);
    return;
  }
  legend.className = "legend";
  const series = [
    ["rate-list bound (bits/symbol)", "rate_list_bound", c.log2_q],
    ["syndrome rate (bits/symbol)", "code_rate", c.log2_q],
    ["μ₀ Vandermonde", "mu_zero_vandermonde", 1],
    ["μ₀ trivial", "mu_zero_trivial", 1],
    ["μ₀ upper bound", "secrecy_bound", 1],
  ];
  const ctx = clear(canvas);
  const pad = 34;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w, h);
  ctx.fillStyle = "#333";
  ctx.fillText("L = k/n", canvas.width / 2 - 20, canvas.height - 6);
  ctx.fillText("1", pad - 12, pad + 4);
  ctx.fillText("0", pad - 12, pad + h + 4);
  series.forEach(([, key, scale], s) => {
    ctx.strokeStyle = COLORS[s];
    ctx.lineWidth = 2;
    ctx.beginPath();
    c.points.forEach((p, i) => {
      const x = pad + p.list_exponent * w;
      const y = pad + h - (p[key] / scale) * h;
      i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
    });
    ctx.stroke();
  });
  legend.innerHTML = series
    .map(([name], s) => `<span><i style="background:${COLORS[s]}"></i>${name}</span>`)
    .join("") + `<span>rates scaled by log₂q = ${c.log2_q.toFixed(3)}</span>`;
}

function runTwoPhase(section) {
  const f = fields(section.querySelector("form"));
  const pre = section.querySelector("pre");
  try {
    const r = JSON.parse(two_phase(+f.q, +f.n, +f.k, f.msg, f.key, f.wrong));
    const row = (m) => m.map((r) => r.join(" ")).join("\n  ");
    pre.className = "";
    pre.textContent = [
      `H =\n  ${row(r.parity_check)}`,
      `D =\n  ${row(r.complement)}`,
      `phase 1 (syndrome):        ${r.phase1.join(",")}`,
      `phase 2 (encrypted D·x):   ${r.phase2.join(",")}`,
      `decrypted, right key:      ${r.decrypted.join(",")}`,
      `decrypted, wrong key:      ${r.wrong_key_decrypted.join(",")}`,
      `wrong-key result in list:  ${r.wrong_key_in_coset}`,
      `list size:                 ${r.list_size}`,
    ].join("\n");
  } catch (e) {
    fail(pre, e);
  }
}

const handlers = { leak: runLeak, curve: runCurve, twophase: runTwoPhase };

await init();
for (const [id, run] of Object.entries(handlers)) {
  const section = document.getElementById(id);
  section.querySelector("form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    run(section);
  });
  run(section);
}
