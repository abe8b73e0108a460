import init, { Demo } from "./pkg/warpbank_web.js";

const $ = (id) => document.getElementById(id);
let demo = null;

function status(text) {
  $("status").textContent = text;
}

function design() {
  const family = $("family").value;
  const l = family.endsWith("pow") ? Number($("l").value) : NaN;
  try {
    demo?.free();
    demo = new Demo(family, NaN, NaN, l, $("window").value, Number($("R").value),
      Number($("L").value), Number($("fs").value));
  } catch (e) {
    demo = null;
    status(String(e.message ?? e));
    return;
  }
  status("");
  const centers = demo.channelCenters();
  $("summary").textContent =
    `${centers.length} channels on [0, fs/2], ${demo.isTight() ? "tight" : "painless"} design`;
  drawResponses();
}

function drawResponses() {
  const canvas = $("responses");
  const ctx = canvas.getContext("2d");
  const rows = demo.responseRows();
  const diag = demo.diagonalRow();
  const bins = diag.length;
  const count = rows.length / bins;
  const peak = Math.max(...diag, 1e-12);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const x = (k) => (k / (bins - 1)) * canvas.width;
  const y = (v) => canvas.height - 10 - (v / peak) * (canvas.height - 20);
  for (let c = 0; c < count; c++) {
    ctx.strokeStyle = `hsl(${(c * 47) % 360} 60% 45%)`;
    ctx.beginPath();
    for (let k = 0; k < bins; k++) {
      const v = rows[c * bins + k] ** 2;
      k ? ctx.lineTo(x(k), y(v)) : ctx.moveTo(x(k), y(v));
    }
    ctx.stroke();
  }
  ctx.strokeStyle = "#000";
  ctx.setLineDash([4, 3]);
  ctx.beginPath();
  for (let k = 0; k < bins; k++) {
    k ? ctx.lineTo(x(k), y(diag[k])) : ctx.moveTo(x(k), y(diag[k]));
  }
  ctx.stroke();
  ctx.setLineDash([]);
}

function chirp() {
  if (!demo) return;
  const canvas = $("picture");
  let err;
  try {
    err = demo.renderChirp(Number($("f0").value), Number($("f1").value), canvas.width);
  } catch (e) {
    status(String(e.message ?? e));
    return;
  }
  $("error").textContent = `relative reconstruction error ${err.toExponential(2)}`;
  const w = demo.pictureWidth();
  const h = demo.pictureHeight();
  const gray = demo.pictureGray();
  const image = new ImageData(w, h);
  for (let i = 0; i < gray.length; i++) {
    image.data.set([gray[i], gray[i], gray[i], 255], 4 * i);
  }
  const scratch = new OffscreenCanvas(w, h);
  scratch.getContext("2d").putImageData(image, 0, 0);
  const ctx = canvas.getContext("2d");
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(scratch, 0, 0, canvas.width, canvas.height);
}

function sweep() {
  if (!demo) return;
  const scales = $("scales").value.split(",").map(Number).filter((v) => v > 0);
  let values;
  try {
    values = demo.frameSweep(new Float64Array(scales));
  } catch (e) {
    status(String(e.message ?? e));
    return;
  }
  const table = $("bounds");
  table.innerHTML = "<tr><th>scale</th><th>A</th><th>B</th><th>B/A</th><th>painless</th></tr>";
  for (let i = 0; i < values.length; i += 5) {
    const row = table.insertRow();
    [values[i], values[i + 1], values[i + 2], values[i + 3]].forEach((v) => {
      row.insertCell().textContent = Number.isFinite(v) ? v.toPrecision(8) : "unbounded";
    });
    row.insertCell().textContent = values[i + 4] ? "yes" : "no";
  }
}

await init();
$("design").onclick = design;
$("chirp").onclick = chirp;
$("sweep").onclick = sweep;
design();
