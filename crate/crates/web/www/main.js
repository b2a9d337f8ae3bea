import init, { potential_profile, radial_histogram, energy_curve } from "./pkg/tremor_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function plot(canvas, series, { logX = false, bars = null } = {}) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = 48;
  ctx.clearRect(0, 0, W, H);
  const fx = logX ? Math.log10 : (v) => v;
  const xs = series.flatMap((s) => s.x.map(fx));
  const ys = series.flatMap((s) => s.y).filter(Number.isFinite);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (bars) y0 = Math.min(0, y0);
  const px = (v) => pad + ((fx(v) - x0) / (x1 - x0)) * (W - 2 * pad);
  const py = (v) => H - pad - ((v - y0) / (y1 - y0 || 1)) * (H - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(y1.toPrecision(3), 4, pad + 4);
  ctx.fillText(y0.toPrecision(3), 4, H - pad);
  ctx.fillText((logX ? 10 ** x0 : x0).toPrecision(3), pad, H - pad + 16);
  ctx.fillText((logX ? 10 ** x1 : x1).toPrecision(3), W - pad - 30, H - pad + 16);

  for (const s of series) {
    ctx.strokeStyle = ctx.fillStyle = s.color;
    ctx.lineWidth = s.width ?? 1.5;
    if (s === bars) {
      const w = (W - 2 * pad) / s.x.length;
      s.x.forEach((x, i) => {
        const top = py(s.y[i]);
        ctx.globalAlpha = 0.35;
        ctx.fillRect(px(x) - w / 2, top, w - 1, py(0) - top);
        ctx.globalAlpha = 1;
      });
      continue;
    }
    ctx.setLineDash(s.dash ?? []);
    ctx.beginPath();
    s.x.forEach((x, i) => {
      const y = Math.max(y0, Math.min(y1, s.y[i]));
      i ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y));
    });
    ctx.stroke();
    ctx.setLineDash([]);
  }
  return { px, py };
}

function guarded(out, fn) {
  return () => {
    try {
      fn();
    } catch (e) {
      $(out).textContent = `error: ${e.message ?? e}`;
    }
  };
}

function runPotential() {
  const p = potential_profile(num("pot-points"));
  const r = p.radii, closed = p.closed;
  plot($("pot-canvas"), [
    { x: r, y: p.point, color: "#888", dash: [4, 4] },
    { x: r, y: closed, color: "#1565c0", width: 3 },
    { x: r, y: p.poisson, color: "#e65100" },
  ], { logX: true });
  $("pot-out").textContent =
    `λ_o = ${p.lambda_o.toExponential(6)} a₀, V(0.01 λ_o) = ${closed[0].toFixed(4)}, ` +
    `max |erf − Poisson| = ${p.max_route_gap.toExponential(2)}`;
  p.free();
}

function runHistogram() {
  const t = performance.now();
  const h = radial_histogram(num("h-z"), num("h-scale"), num("h-paths"), num("h-steps"), 40, BigInt(num("h-seed")));
  const sim = { x: h.centers, y: h.simulated, color: "#1565c0" };
  plot($("h-canvas"), [sim, { x: h.centers, y: h.born, color: "#e65100", width: 2 }], { bars: sim });
  $("h-out").textContent = `KS distance to Born law: ${h.ks.toFixed(4)} (${(performance.now() - t).toFixed(0)} ms)`;
  h.free();
}

function runEnergy() {
  const c = energy_curve(num("e-z"), 300);
  const { px, py } = plot($("e-canvas"), [{ x: c.radii, y: c.energies, color: "#1565c0", width: 2 }], { logX: true });
  const ctx = $("e-canvas").getContext("2d");
  ctx.fillStyle = "#e65100";
  ctx.beginPath();
  ctx.arc(px(c.r_opt), py(c.e_opt), 5, 0, 2 * Math.PI);
  ctx.fill();
  $("e-out").textContent = `minimum at r = ${c.r_opt.toPrecision(12)} a₀, E = ${c.e_opt.toPrecision(12)} hartree`;
  c.free();
}

await init();
$("pot-run").onclick = guarded("pot-out", runPotential);
$("h-run").onclick = guarded("h-out", runHistogram);
$("e-run").onclick = guarded("e-out", runEnergy);
guarded("pot-out", runPotential)();
guarded("h-out", runHistogram)();
guarded("e-out", runEnergy)();
