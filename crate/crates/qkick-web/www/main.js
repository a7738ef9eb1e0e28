import init, { classifyChannel, ddCurve, zenoCurve, zooNames } from "./pkg/qkick_web.js";

const $ = (id) => document.getElementById(id);

function spec() {
  const params = $("params").value.trim();
  return params ? `${$("channel").value}(${params})` : $("channel").value;
}

function report(message, isError = false) {
  $("status").textContent = message;
  $("status").className = isError ? "error" : "";
}

function drawSpectrum(summary) {
  const cv = $("spectrum");
  const g = cv.getContext("2d");
  const r = cv.width * 0.42;
  const cx = cv.width / 2;
  const cy = cv.height / 2;
  g.clearRect(0, 0, cv.width, cv.height);
  g.strokeStyle = "#bbb";
  g.beginPath();
  g.arc(cx, cy, r, 0, 2 * Math.PI);
  g.moveTo(cx - r - 10, cy);
  g.lineTo(cx + r + 10, cy);
  g.moveTo(cx, cy - r - 10);
  g.lineTo(cx, cy + r + 10);
  g.stroke();
  const dot = ([re, im], color, size) => {
    g.fillStyle = color;
    g.beginPath();
    g.arc(cx + re * r, cy - im * r, size, 0, 2 * Math.PI);
    g.fill();
  };
  summary.eigenvalues.forEach((z) => dot(z, "#4477aa", 3));
  summary.peripheral.forEach((z) => dot(z, "#cc3311", 5));
}

function drawCurve(curve) {
  const cv = $("curve");
  const g = cv.getContext("2d");
  const pad = 44;
  const w = cv.width - 2 * pad;
  const h = cv.height - 2 * pad;
  const ymax = Math.max(1, ...curve.values);
  const nmax = curve.n[curve.n.length - 1];
  const x = (n) => pad + (w * (n - 1)) / Math.max(1, nmax - 1);
  const y = (v) => pad + h - (h * v) / ymax;
  g.clearRect(0, 0, cv.width, cv.height);
  g.strokeStyle = "#999";
  g.strokeRect(pad, pad, w, h);
  g.fillStyle = "#444";
  g.font = "12px system-ui";
  g.fillText(curve.metric, 6, pad - 10);
  g.fillText("n", pad + w + 8, pad + h + 4);
  g.fillText(ymax.toFixed(2), 6, pad + 4);
  g.fillText("0", 6, pad + h);
  g.fillText("1", pad - 3, pad + h + 16);
  g.fillText(String(nmax), pad + w - 10, pad + h + 16);
  g.strokeStyle = "#cc3311";
  g.lineWidth = 2;
  g.beginPath();
  curve.n.forEach((n, i) => (i ? g.lineTo(x(n), y(curve.values[i])) : g.moveTo(x(n), y(curve.values[i]))));
  g.stroke();
  g.lineWidth = 1;
}

function guarded(action) {
  return () => {
    try {
      action();
    } catch (err) {
      report(String(err.message ?? err), true);
    }
  };
}

function runCurve(fn) {
  const started = performance.now();
  const curve = JSON.parse(fn(spec(), BigInt($("seed").value), BigInt($("nmax").value), Number($("time").value)));
  drawCurve(curve);
  const last = curve.values[curve.values.length - 1];
  report(`${curve.channel}: ${curve.metric} at n = ${curve.n.length} is ${last.toFixed(4)} ` +
    `(${(performance.now() - started).toFixed(0)} ms)`);
}

await init();
for (const name of JSON.parse(zooNames())) {
  $("channel").add(new Option(name, name));
}
$("channel").value = "E_updown";
$("classify").onclick = guarded(() => {
  const summary = JSON.parse(classifyChannel(spec()));
  $("record").textContent = JSON.stringify(summary.classification, null, 2);
  drawSpectrum(summary);
  report(`${summary.eigenvalues.length} eigenvalues, ${summary.peripheral.length} on the unit circle`);
});
$("dd").onclick = guarded(() => runCurve(ddCurve));
$("zeno").onclick = guarded(() => runCurve(zenoCurve));
$("classify").click();
