import init, { herz_profile, frame_spectrum, eigenbasis_map } from "./pkg/surfframe_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function guard(out, f) {
  try {
    out.classList.remove("err");
    f();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e);
  }
}

function plotLines(canvas, xs, series) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const all = series.flatMap((s) => s.ys.filter(Number.isFinite));
  const lo = Math.min(...all), hi = Math.max(...all);
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const px = (x) => ((x - x0) / (x1 - x0)) * (w - 20) + 10;
  const py = (y) => h - 10 - ((y - lo) / (hi - lo || 1)) * (h - 20);
  ctx.strokeStyle = "#bbb";
  ctx.beginPath(); ctx.moveTo(10, py(0)); ctx.lineTo(w - 10, py(0)); ctx.stroke();
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    let pen = false;
    xs.forEach((x, i) => {
      const y = s.ys[i];
      if (!Number.isFinite(y)) { pen = false; return; }
      pen ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y));
      pen = true;
    });
    ctx.stroke();
  }
}

function runHerz() {
  guard($("h-out"), () => {
    const r = JSON.parse(herz_profile(num("h-d"), num("h-from"), num("h-to"), 2000));
    plotLines($("h-canvas"), r.xi, [
      { ys: r.exact, color: "#1f5fa8" },
      { ys: r.asymptotic, color: "#d9822b" },
    ]);
    let worst = 0;
    r.xi.forEach((x, i) => { if (x > 10 && Number.isFinite(r.asymptotic[i])) worst = Math.max(worst, Math.abs(r.exact[i] - r.asymptotic[i])); });
    $("h-out").textContent = `blue: exact transform, orange: leading term. max residual beyond |xi| = 10: ${worst.toExponential(3)}`;
  });
}

const COLORS = ["#1f5fa8", "#d9822b", "#2e8b57", "#a83279", "#6b4fbb", "#888"];

function runFrame() {
  guard($("f-out"), () => {
    const r = JSON.parse(frame_spectrum($("f-shape").value, num("f-n"), num("f-delta"), num("f-window"), BigInt(num("f-seed"))));
    const c = $("f-canvas"), ctx = c.getContext("2d");
    ctx.clearRect(0, 0, c.width, c.height);
    const reach = Math.max(...r.frequencies.map((p) => Math.hypot(p[0], p[1]))) || 1;
    const s = (c.width / 2 - 10) / reach;
    r.frequencies.forEach((p, i) => {
      ctx.fillStyle = COLORS[r.classes[i] % COLORS.length];
      ctx.fillRect(c.width / 2 + p[0] * s - 1, c.height / 2 - p[1] * s - 1, 2.5, 2.5);
    });
    const cert = r.certificate;
    $("f-out").textContent =
      `${r.frequencies.length} frequencies in ${cert.m} classes (colour = class)\n` +
      `separation audit: ${r.audit_passed ? "passed" : "FAILED"}\n` +
      `phase-matrix bounds: ${r.epsilons.map((e) => e.toFixed(4)).join(", ")}\n` +
      `Bessel constant ${cert.bessel_constant.toFixed(2)}, lower-bound certificate ${cert.value.toFixed(3)}, positive from N = ${cert.min_n}`;
  });
}

function runEigen() {
  guard($("e-out"), () => {
    const c = $("e-canvas");
    const r = JSON.parse(eigenbasis_map($("e-group").value, num("e-lmax"), num("e-l"), num("e-i"), c.width, c.height));
    const ctx = c.getContext("2d");
    ctx.clearRect(0, 0, c.width, c.height);
    if (r.values.length) {
      const m = Math.max(...r.values.map(Math.abs)) || 1;
      const img = ctx.createImageData(c.width, c.height);
      r.values.forEach((v, k) => {
        const t = v / m;
        img.data[4 * k] = t > 0 ? 255 : Math.round(255 * (1 + t));
        img.data[4 * k + 1] = Math.round(255 * (1 - Math.abs(t)));
        img.data[4 * k + 2] = t < 0 ? 255 : Math.round(255 * (1 - t));
        img.data[4 * k + 3] = 255;
      });
      ctx.putImageData(img, 0, 0);
    }
    $("e-out").textContent =
      `${r.group} (order ${r.order}) fixed dimension per degree: [${r.dimensions.join(", ")}]\n` +
      (r.values.length ? "map: longitude across, colatitude down; red positive, blue negative" : "no fixed function with that degree and index");
  });
}

await init();
$("h-run").onclick = runHerz;
$("f-run").onclick = runFrame;
$("e-run").onclick = runEigen;
runHerz();
runFrame();
runEigen();
