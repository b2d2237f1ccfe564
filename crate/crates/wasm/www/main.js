import init, { decompose_matrix, euler_rotations, refute_greedy } from "./pkg/orderlab_wasm.js";

const $ = (id) => document.getElementById(id);

function guarded(out, f) {
  try {
    f();
  } catch (e) {
    out.innerHTML = "";
    const p = document.createElement("p");
    p.className = "error";
    p.textContent = String(e);
    out.appendChild(p);
  }
}

function showFactors() {
  const ring = document.querySelector("input[name=ring]:checked").value;
  const out = $("factors");
  guarded(out, () => {
    const r = JSON.parse(decompose_matrix($("matrix").value, ring));
    const d = r.decomposition;
    const terms = d.factors.map((f) => `E${f.i}${f.j}(${f.t})`);
    out.innerHTML = "";
    const p = document.createElement("p");
    p.textContent = `${d.count} factors${r.roundTrip ? "" : " (round trip FAILED)"}: ` + (terms.join(" · ") || "identity");
    out.appendChild(p);
  });
}

function showEuler() {
  const out = $("table");
  guarded(out, () => {
    const r = JSON.parse(euler_rotations($("angles").value, Number($("radius").value)));
    const t = r.table;
    const table = document.createElement("table");
    table.className = "euler";
    for (const row of t.values) {
      const tr = table.insertRow();
      for (const v of row) {
        const td = tr.insertCell();
        td.textContent = v;
        if (v === 1) td.className = "one";
      }
    }
    const p = document.createElement("p");
    const failure = r.cocycle.firstFailure;
    p.textContent = `${t.domain.length} elements, ${r.cocycle.triplesChecked} triples checked, ` +
      (failure ? "cocycle identity FAILS" : "cocycle identity holds");
    out.innerHTML = "";
    out.append(p, table);
  });
}

function showWitte() {
  const out = $("certificate");
  try {
    const r = JSON.parse(refute_greedy(Number($("k").value), Number($("seed").value), Number($("bound").value)));
    out.textContent = JSON.stringify(r, null, 2);
  } catch (e) {
    out.textContent = String(e);
  }
}

await init();
$("decompose").onclick = showFactors;
$("euler").onclick = showEuler;
$("witte").onclick = showWitte;
showFactors();
showEuler();
