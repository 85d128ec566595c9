// SPDX-License-Identifier: Apache-2.0
#include <array>

#include "doctowers/server.hpp"

namespace doctowers {

namespace {

constexpr std::string_view kIndexHtml = R"html(<!doctype html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>Document Towers</title>
<link rel="stylesheet" href="/assets/viewer.css">
</head>
<body>
<div id="panel">
  <h1>Document Towers</h1>
  <div id="error" hidden></div>
  <fieldset><legend>Projection</legend>
    <label><input type="radio" name="proj" value="axonometric" checked> axonometric</label>
    <label><input type="radio" name="proj" value="elevation"> elevation</label>
    <label><input type="radio" name="proj" value="plan"> plan</label>
  </fieldset>
  <fieldset id="classes"><legend>Classes</legend></fieldset>
  <fieldset><legend>Ribbon</legend>
    <select id="ribbon"><option value="none">none</option><option value="cardinality">cardinality</option><option value="fill">fill</option></select>
  </fieldset>
  <div id="info"></div>
  <div id="links"></div>
</div>
<canvas id="view"></canvas>
<script src="/assets/viewer.js"></script>
</body>
</html>
)html";

constexpr std::string_view kViewerCss = R"css(html, body { margin: 0; height: 100%; font: 13px sans-serif; background: #111; color: #ddd; }
#panel { position: absolute; top: 0; left: 0; width: 240px; bottom: 0; overflow: auto; padding: 8px; background: #1b1b1b; }
#panel h1 { font-size: 15px; margin: 0 0 8px; }
#panel fieldset { border: 1px solid #333; margin: 0 0 8px; }
#panel label { display: block; }
#error { background: #7f1d1d; padding: 6px; margin-bottom: 8px; }
#links a { color: #8ab4f8; display: block; }
#view { position: absolute; left: 256px; top: 0; right: 0; bottom: 0; width: calc(100% - 256px); height: 100%; }
)css";

// Canvas-based fallback renderer: orthographic wireframes, class toggles,
// ribbons and page links. The full WebGL viewer ships separately.
constexpr std::string_view kViewerJs = R"js('use strict';
(function () {
  const canvas = document.getElementById('view');
  const ctx = canvas.getContext('2d');
  const state = { projection: 'axonometric', yaw: -Math.PI / 4, pitch: Math.PI / 5, zoom: 1, pan: [0, 0],
                  hidden: new Set(), ribbon: 'none', scene: null, towers: [] };

  function showError(msg) {
    const el = document.getElementById('error');
    el.textContent = msg;
    el.hidden = false;
  }

  function project(p) {
    const [x, y, z] = p;
    if (state.projection === 'plan') return [x, -y];
    if (state.projection === 'elevation') return [x, -z];
    const cy = Math.cos(state.yaw), sy = Math.sin(state.yaw);
    const rx = x * cy - y * sy, ry = x * sy + y * cy;
    return [rx, -(z * Math.cos(state.pitch) + ry * Math.sin(state.pitch))];
  }

  function boxEdges(q, z0, z1, ox, oy) {
    const c = [0, 1, 2, 3].map(i => [q[2 * i] + ox, q[2 * i + 1] + oy]);
    const e = [];
    for (let i = 0; i < 4; i++) {
      const a = c[i], b = c[(i + 1) % 4];
      e.push([[a[0], a[1], z0], [b[0], b[1], z0]]);
      e.push([[a[0], a[1], z1], [b[0], b[1], z1]]);
      e.push([[a[0], a[1], z0], [a[0], a[1], z1]]);
    }
    return e;
  }

  function fit() {
    let lo = [Infinity, Infinity], hi = [-Infinity, -Infinity];
    for (const t of state.towers) {
      const ex = t.extents, o = t.origin || [0, 0];
      for (const x of [ex[0], ex[3]]) for (const y of [ex[1], ex[4]]) for (const z of [ex[2], ex[5]]) {
        const p = project([x + o[0], y + o[1], z]);
        lo = [Math.min(lo[0], p[0]), Math.min(lo[1], p[1])];
        hi = [Math.max(hi[0], p[0]), Math.max(hi[1], p[1])];
      }
    }
    const s = Math.min(canvas.width / (hi[0] - lo[0] || 1), canvas.height / (hi[1] - lo[1] || 1)) * 0.9;
    return { s: s * state.zoom, cx: (lo[0] + hi[0]) / 2, cy: (lo[1] + hi[1]) / 2 };
  }

  function draw() {
    canvas.width = canvas.clientWidth;
    canvas.height = canvas.clientHeight;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    if (!state.towers.length) return;
    const f = fit();
    const toScreen = p => {
      const q = project(p);
      return [(q[0] - f.cx) * f.s + canvas.width / 2 + state.pan[0], (q[1] - f.cy) * f.s + canvas.height / 2 + state.pan[1]];
    };
    const batches = new Map();
    for (const t of state.towers) {
      const o = t.origin || [0, 0];
      for (const fl of t.floors) {
        const key = state.ribbon !== 'none' ? ribbonColor(t, fl) : (t.classes['0'] || {}).col || '#9e9e9e';
        const list = batches.get(key) || [];
        for (const e of boxEdges(fl.outline, fl.z, fl.z, o[0], o[1])) list.push(e);
        batches.set(key, list);
      }
      for (const s of t.slabs) {
        if (state.hidden.has(s.c)) continue;
        const list = batches.get(s.col) || [];
        for (const e of boxEdges(s.q, s.z[0], s.z[1], o[0], o[1])) list.push(e);
        batches.set(s.col, list);
      }
    }
    for (const [col, edges] of batches) {
      ctx.strokeStyle = col;
      ctx.beginPath();
      for (const [a, b] of edges) {
        const p = toScreen(a), q = toScreen(b);
        ctx.moveTo(p[0], p[1]);
        ctx.lineTo(q[0], q[1]);
      }
      ctx.stroke();
    }
  }

  function ribbonColor(tower, floor) {
    if (floor.ribbon && floor.ribbon.metric === state.ribbon) return floor.ribbon.col;
    const idx = state.ribbon === 'fill' ? 1 : 0;
    const vals = tower.floors.map(x => x.m[idx]);
    const lo = Math.min(...vals), hi = Math.max(...vals);
    const t = hi === lo ? 0.5 : (floor.m[idx] - lo) / (hi - lo);
    const step = Math.min(63, Math.floor(t * 64)) / 63;
    const a = [0x44, 0x01, 0x54], b = [0xfd, 0xe7, 0x25];
    return '#' + a.map((v, i) => Math.round(v + (b[i] - v) * step).toString(16).padStart(2, '0')).join('');
  }

  function buildControls() {
    const box = document.getElementById('classes');
    const seen = new Map();
    for (const t of state.towers) for (const [code, c] of Object.entries(t.classes)) if (code !== '0') seen.set(Number(code), c);
    for (const [code, c] of [...seen].sort((a, b) => a[0] - b[0])) {
      const n = state.towers.reduce((acc, t) => acc + t.slabs.filter(s => s.c === code).length, 0);
      const label = document.createElement('label');
      label.innerHTML = `<input type="checkbox" checked> <span style="color:${c.col}">${c.name}</span> (${n})`;
      label.querySelector('input').addEventListener('change', ev => {
        if (ev.target.checked) state.hidden.delete(code); else state.hidden.add(code);
        draw();
      });
      box.appendChild(label);
    }
    const links = document.getElementById('links');
    for (const t of state.towers) for (const fl of t.floors) {
      if (!fl.link) continue;
      const a = document.createElement('a');
      a.href = fl.link;
      a.target = '_blank';
      a.textContent = `${t.id} p. ${fl.number}`;
      links.appendChild(a);
    }
    const s = state.scene;
    document.getElementById('info').textContent =
      `${s.kind}: ${state.towers.length} tower(s), ${state.towers.reduce((a, t) => a + t.slabs.length, 0)} slabs`;
  }

  document.querySelectorAll('input[name=proj]').forEach(r => r.addEventListener('change', ev => {
    state.projection = ev.target.value;
    draw();
  }));
  document.getElementById('ribbon').addEventListener('change', ev => { state.ribbon = ev.target.value; draw(); });
  canvas.addEventListener('wheel', ev => { ev.preventDefault(); state.zoom *= ev.deltaY < 0 ? 1.1 : 1 / 1.1; draw(); });
  let drag = null;
  canvas.addEventListener('mousedown', ev => { drag = [ev.clientX, ev.clientY, ev.shiftKey]; });
  window.addEventListener('mouseup', () => { drag = null; });
  window.addEventListener('mousemove', ev => {
    if (!drag) return;
    const dx = ev.clientX - drag[0], dy = ev.clientY - drag[1];
    if (drag[2] || state.projection !== 'axonometric') { state.pan[0] += dx; state.pan[1] += dy; }
    else { state.yaw += dx * 0.01; state.pitch = Math.max(0, Math.min(Math.PI / 2, state.pitch + dy * 0.01)); }
    drag = [ev.clientX, ev.clientY, drag[2]];
    draw();
  });
  window.addEventListener('resize', draw);

  fetch('/scene.json').then(r => r.json()).then(scene => {
    if (scene.format !== 'DocumentTowersScene' || !String(scene.version).startsWith('1.')) {
      throw new Error('unsupported scene file');
    }
    state.scene = scene;
    state.towers = scene.towers;
    buildControls();
    draw();
  }).catch(err => showError('Cannot load scene: ' + err.message));
})();
)js";

constexpr std::array kAssets{
    EmbeddedAsset{"index.html", "text/html; charset=utf-8", kIndexHtml},
    EmbeddedAsset{"viewer.css", "text/css", kViewerCss},
    EmbeddedAsset{"viewer.js", "application/javascript", kViewerJs},
};

}  // namespace

std::span<const EmbeddedAsset> viewer_assets() noexcept { return kAssets; }

}  // namespace doctowers
