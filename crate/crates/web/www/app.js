import init, { overlay_json, remap_json, census_json } from "./pkg/quadremap_web.js";

const canvas = document.getElementById("view");
const ctx = canvas.getContext("2d");
const status = document.getElementById("status");
const pad = 20;

const value = (id) => document.getElementById(id).value;
const settings = () => [value("family"), Number(value("nx")), BigInt(value("seed"))];

function toScreen([x, y]) {
  const s = canvas.width - 2 * pad;
  return [pad + x * s, canvas.height - pad - y * s];
}

function path(points) {
  ctx.beginPath();
  points.forEach((p, k) => {
    const [u, v] = toScreen(p);
    k === 0 ? ctx.moveTo(u, v) : ctx.lineTo(u, v);
  });
  ctx.closePath();
}

function drawMesh(mesh, colour) {
  const { m, n, vertices } = mesh;
  const at = (i, j) => vertices[j * m + i];
  ctx.strokeStyle = colour;
  ctx.lineWidth = 1;
  for (let j = 0; j < n; j++) {
    ctx.beginPath();
    for (let i = 0; i < m; i++) {
      const [u, v] = toScreen(at(i, j));
      i === 0 ? ctx.moveTo(u, v) : ctx.lineTo(u, v);
    }
    ctx.stroke();
  }
  for (let i = 0; i < m; i++) {
    ctx.beginPath();
    for (let j = 0; j < n; j++) {
      const [u, v] = toScreen(at(i, j));
      j === 0 ? ctx.moveTo(u, v) : ctx.lineTo(u, v);
    }
    ctx.stroke();
  }
}

// blue to yellow ramp
function ramp(t) {
  const c = Math.max(0, Math.min(1, t));
  return `hsl(${240 - 180 * c}, 70%, ${30 + 35 * c}%)`;
}

function run(label, f) {
  try {
    const t0 = performance.now();
    const data = JSON.parse(f());
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const lines = label(data);
    status.textContent = `${lines.join("\n")}\n(${(performance.now() - t0).toFixed(1)} ms)`;
  } catch (e) {
    status.textContent = String(e.message ?? e);
  }
}

document.getElementById("overlay").onclick = () =>
  run((d) => {
    drawMesh(d.old, "#333");
    drawMesh(d.new, "#d33");
    return [
      `seed ${d.seed} (re-seeded ${d.reseeds} times)`,
      `A1 violations ${d.a1_violations}, A2 ${d.a2_violations}, A3 ${d.a3_violations}`,
      `count formula applicable: ${d.count_formula_applicable}`,
    ];
  }, () => overlay_json(...settings()));

document.getElementById("remap").onclick = () =>
  run((d) => {
    const rho = d.cells.map((c) => c.density);
    const lo = Math.min(...rho);
    const hi = Math.max(...rho);
    for (const c of d.cells) {
      path(c.quad);
      ctx.fillStyle = ramp(hi > lo ? (c.density - lo) / (hi - lo) : 0.5);
      ctx.fill();
    }
    const e = (x) => (x == null ? "n/a" : x.toExponential(3));
    return [
      `density range [${lo.toFixed(4)}, ${hi.toFixed(4)}]`,
      `conservation residual ${e(d.conservation_residual)}`,
      `Linf density ${e(d.linf_density)}, Linf mass ${e(d.linf_mass)}`,
      d.polygon_count == null ? "" : `swap polygons ${d.polygon_count}`,
    ];
  }, () => remap_json(...settings(), value("function"), value("method")));

document.getElementById("census").onclick = () =>
  run((d) => {
    d.polygons.forEach((p, k) => {
      path(p);
      ctx.fillStyle = `hsla(${(k * 137.5) % 360}, 70%, 55%, 0.8)`;
      ctx.fill();
    });
    drawMesh(d.old, "#333");
    drawMesh(d.new, "#d33");
    const labels = Object.entries(d.labels).map(([l, c]) => `${l}:${c}`).join(" ");
    return [
      `swap polygons ${d.polygon_count}, formula ${d.expected ?? "not applicable"}, strips ${d.strips_match ?? "n/a"}`,
      `edge labels ${labels}`,
    ];
  }, () => census_json(...settings()));

await init();
document.getElementById("overlay").click();
