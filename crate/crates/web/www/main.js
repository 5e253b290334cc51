import init, { region_boundary, prior_boundary, probe, constants_curve, version } from "./pkg/krein_enclosure_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function pairs(flat) {
  const out = [];
  for (let i = 0; i < flat.length; i += 2) out.push([flat[i], flat[i + 1]]);
  return out;
}

// Plot frame for the region canvas, kept so clicks can be mapped back.
let frame = null;

function regionParams() {
  return { kind: $("kind").value, a: num("a"), b: num("b"), gamma: num("gamma") };
}

function drawRegion() {
  const cv = $("region");
  const ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  const p = regionParams();
  let curves;
  try {
    curves = [{ pts: pairs(region_boundary(p.kind, p.a, p.b, p.gamma, 400)), color: "#1f5fbf" }];
    if ($("prior").checked) curves.push({ pts: pairs(prior_boundary(p.a, p.b, 400)), color: "#c77" });
  } catch (e) {
    $("probe-out").innerHTML = `<span class="error">${e.message ?? e}</span>`;
    frame = null;
    return;
  }
  const all = curves.flatMap((c) => c.pts);
  let xmin = Math.min(...all.map((q) => q[0]), -1), xmax = Math.max(...all.map((q) => q[0]), 1);
  const ymax = Math.max(...all.map((q) => q[1]), 1) * 1.1;
  const pad = 0.05 * (xmax - xmin);
  xmin -= pad;
  xmax += pad;
  const sx = cv.width / (xmax - xmin), sy = cv.height / (2 * ymax);
  frame = {
    toX: (x) => (x - xmin) * sx,
    toY: (y) => cv.height / 2 - y * sy,
    fromX: (px) => xmin + px / sx,
    fromY: (py) => (cv.height / 2 - py) / sy,
  };

  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(0, cv.height / 2);
  ctx.lineTo(cv.width, cv.height / 2);
  ctx.moveTo(frame.toX(0), 0);
  ctx.lineTo(frame.toX(0), cv.height);
  ctx.stroke();

  for (const c of curves) {
    ctx.strokeStyle = c.color;
    ctx.fillStyle = c.color + "22";
    ctx.beginPath();
    c.pts.forEach(([x, y], i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, frame.toX(x), frame.toY(y)));
    for (let i = c.pts.length - 1; i >= 0; i--) ctx.lineTo(frame.toX(c.pts[i][0]), frame.toY(-c.pts[i][1]));
    ctx.closePath();
    ctx.fill();
    ctx.stroke();
  }
}

function onClick(ev) {
  if (!frame) return;
  const r = ev.target.getBoundingClientRect();
  const re = frame.fromX(ev.clientX - r.left), im = frame.fromY(ev.clientY - r.top);
  const p = regionParams();
  try {
    const [inside, margin] = probe(p.kind, p.a, p.b, p.gamma, re, im);
    $("probe-out").textContent =
      `λ = ${re.toFixed(3)} ${im < 0 ? "-" : "+"} ${Math.abs(im).toFixed(3)}i: ` +
      `${inside ? "inside" : "outside"}, margin ${margin.toFixed(4)}`;
    const ctx = ev.target.getContext("2d");
    ctx.fillStyle = inside ? "#080" : "#b00";
    ctx.beginPath();
    ctx.arc(frame.toX(re), frame.toY(im), 3, 0, 2 * Math.PI);
    ctx.fill();
  } catch (e) {
    $("probe-out").innerHTML = `<span class="error">${e.message ?? e}</span>`;
  }
}

function drawConstants() {
  const cv = $("constants");
  const ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  let flat;
  try {
    flat = constants_curve(num("maxp"), num("points"));
  } catch (e) {
    $("constants-out").innerHTML = `<span class="error">${e.message ?? e}</span>`;
    return;
  }
  const rows = [];
  for (let i = 0; i < flat.length; i += 5) rows.push(flat.slice(i, i + 5));
  const lx = rows.map((r) => Math.log10(r[0]));
  const ymax = Math.max(...rows.flatMap((r) => r.slice(1))) * 1.05;
  const toX = (v) => ((v - lx[0]) / (lx[lx.length - 1] - lx[0])) * (cv.width - 40) + 30;
  const toY = (v) => cv.height - 20 - (v / ymax) * (cv.height - 30);
  const series = [
    [1, "#1f5fbf", "Im coefficient"],
    [2, "#0a8", "half diagonal"],
    [3, "#c77", "competing Im"],
    [4, "#a5a", "competing |λ|"],
  ];
  series.forEach(([col, color, name], k) => {
    ctx.strokeStyle = color;
    ctx.beginPath();
    rows.forEach((r, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, toX(lx[i]), toY(r[col])));
    ctx.stroke();
    ctx.fillStyle = color;
    ctx.fillText(name, 40, 16 + 14 * k);
  });
  ctx.fillStyle = "#444";
  ctx.fillText(`p = 2 … ${rows[rows.length - 1][0].toExponential(1)} (log scale)`, cv.width - 200, cv.height - 5);
  const last = rows[rows.length - 1];
  $("constants-out").textContent =
    `p = ${last[0].toExponential(3)}: Im ${last[1].toFixed(6)}, half diagonal ${last[2].toFixed(6)}, ` +
    `competing Im ${last[3].toFixed(6)}, |λ| ${last[4].toFixed(6)}`;
}

await init();
$("version").textContent = `krein-enclosure ${version()}`;
for (const id of ["kind", "a", "b", "gamma", "prior"]) $(id).addEventListener("input", drawRegion);
for (const id of ["maxp", "points"]) $(id).addEventListener("input", drawConstants);
$("region").addEventListener("click", onClick);
drawRegion();
drawConstants();
