import init, { walk_heatmap, star_hub_curves, circulant_spectrum } from "./pkg/dqwalk_web.js";

const $ = (id) => document.getElementById(id);
const STEPS = 300;

function showError(id, e) {
  $(id).textContent = e ? String(e.message ?? e) : "";
}

function drawHeatmap() {
  const family = $("hm-family").value;
  let n = Math.max(6, parseInt($("hm-n").value, 10) || 200);
  if (n % 2) n += 1;
  const alpha = parseFloat($("hm-alpha").value);
  const tEnd = parseFloat($("hm-t").value) || 25;
  $("hm-alpha-out").textContent = (alpha / Math.PI).toFixed(3) + " π";
  try {
    const grey = walk_heatmap(family, n, true, alpha, tEnd, STEPS, n / 2, $("hm-log").checked);
    const canvas = $("hm-canvas");
    canvas.width = n;
    canvas.height = STEPS;
    canvas.style.width = Math.min(900, 3 * n) + "px";
    canvas.style.height = STEPS * 1.5 + "px";
    const ctx = canvas.getContext("2d");
    const img = ctx.createImageData(n, STEPS);
    for (let k = 0; k < grey.length; k++) {
      img.data[4 * k] = img.data[4 * k + 1] = img.data[4 * k + 2] = grey[k];
      img.data[4 * k + 3] = 255;
    }
    ctx.putImageData(img, 0, 0);
    showError("hm-err", null);
  } catch (e) {
    showError("hm-err", e);
  }
  drawSpectrum(family, n, alpha);
}

function plotLine(ctx, values, lo, hi, w, h, style, dash) {
  ctx.strokeStyle = style;
  ctx.setLineDash(dash);
  ctx.beginPath();
  values.forEach((v, i) => {
    const x = (i / (values.length - 1)) * w;
    const y = h - ((v - lo) / (hi - lo || 1)) * h;
    i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
  });
  ctx.stroke();
  ctx.setLineDash([]);
}

function drawStar() {
  const n = Math.max(1, parseInt($("st-n").value, 10) || 4);
  const alpha = parseFloat($("st-alpha").value);
  $("st-alpha-out").textContent = alpha.toFixed(2);
  const canvas = $("st-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  try {
    const v = star_hub_curves(n, $("st-directed").checked, alpha, 2, 600);
    const half = v.length / 2;
    plotLine(ctx, v.slice(0, half), 0, 1, canvas.width, canvas.height, "#000", []);
    plotLine(ctx, v.slice(half), 0, 1, canvas.width, canvas.height, "#c00", [6, 4]);
    showError("st-err", null);
  } catch (e) {
    showError("st-err", e);
  }
}

function drawSpectrum(family, n, alpha) {
  const canvas = $("sp-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const d = circulant_spectrum(family, n, true, alpha);
  const lo = Math.min(0, ...d);
  const hi = Math.max(...d);
  ctx.fillStyle = "#246";
  d.forEach((v, m) => {
    const x = (m / d.length) * canvas.width;
    const y = canvas.height - ((v - lo) / (hi - lo || 1)) * canvas.height;
    ctx.fillRect(x, y - 1, Math.max(2, canvas.width / d.length - 1), 3);
  });
}

await init();
for (const id of ["hm-family", "hm-n", "hm-alpha", "hm-t", "hm-log"]) $(id).addEventListener("input", drawHeatmap);
for (const id of ["st-n", "st-directed", "st-alpha"]) $(id).addEventListener("input", drawStar);
drawHeatmap();
drawStar();
