// Generated file. Do not edit: regenerate from the specification.
// Web-family Presenter runtime: sessions, polling, output refresh, viewer
// reloads.  Transmits raw widget state only; the server builds commands.
"use strict";

(function () {
  const view = window.SBL_VIEW;
  const root = document.getElementById("app");
  const built = view.render(root);
  let sessionId = null;
  let viewerNonce = 0;
  let running = false;

  const statusBar = document.createElement("div");
  statusBar.id = "sbl-status";
  statusBar.textContent = "idle";
  document.body.appendChild(statusBar);

  function setStatus(text) {
    statusBar.textContent = text;
  }

  function updateWidgets() {
    return view.WIDGETS.filter((w) => w.area === "update" && w.extra.token);
  }

  function inputState() {
    const state = {};
    for (const w of view.WIDGETS) {
      if (w.area !== "input") continue;
      const all = view.readState(built);
      if (w.id in all) state[w.id] = all[w.id];
    }
    return state;
  }

  function artifactUrl(path) {
    return "/artifacts/" + sessionId + "/" + path;
  }

  function refreshViewer() {
    viewerNonce += 1;
    for (const w of view.WIDGETS) {
      if (w.kind === "viewer_frame") {
        built[w.id].src =
          "/viewer/?scene=" + encodeURIComponent(sessionId || "") +
          "&v=" + viewerNonce;
      }
    }
  }

  async function renderSlot(w, entry) {
    const el = built[w.id];
    const url = artifactUrl(entry.path) + "?v=" + viewerNonce;
    if (w.kind === "text_output") {
      el.textContent = await (await fetch(url)).text();
    } else if (w.kind === "image_output") {
      el.src = url;
    } else if (w.kind === "table_output") {
      const text = await (await fetch(url)).text();
      el.innerHTML = "";
      for (const line of text.trim().split("\n")) {
        const tr = document.createElement("tr");
        for (const cell of line.split(",")) {
          const td = document.createElement("td");
          td.textContent = cell;
          tr.appendChild(td);
        }
        el.appendChild(tr);
      }
    } else {
      el.src = url; // html/pdf frames
    }
  }

  async function refreshOutputs(manifest) {
    for (const w of view.WIDGETS) {
      if (!w.extra.slot) continue;
      const entry = manifest.slots[w.extra.slot];
      if (entry) await renderSlot(w, entry);
    }
  }

  async function poll() {
    const res = await fetch("/api/session/" + sessionId);
    if (!res.ok) {
      setStatus("session lost (" + res.status + ")");
      running = false;
      return;
    }
    const body = await res.json();
    setStatus(body.state);
    if (body.state === "Ready") {
      running = false;
      await refreshOutputs(body.manifest);
      refreshViewer();
    } else if (body.state === "Failed") {
      running = false;
      setStatus("Failed (exit " + body.exit_code + "): " +
                (body.stderr_tail || ""));
    } else {
      setTimeout(poll, 500);
    }
  }

  async function run() {
    if (running) return; // one in-flight run per session
    running = true;
    setStatus("starting");
    const res = await fetch("/api/run", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(inputState()),
    });
    if (!res.ok) {
      running = false;
      setStatus("run rejected (" + res.status + ")");
      return;
    }
    sessionId = (await res.json()).session_id;
    poll();
  }

  async function applyUpdate() {
    if (!sessionId || running) return;
    const values = {};
    const all = view.readState(built);
    for (const w of updateWidgets()) {
      let v = all[w.id];
      if (typeof v === "boolean") v = v ? "true" : "false";
      values[w.extra.token] = v;
    }
    const res = await fetch("/api/update", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ session_id: sessionId, values }),
    });
    if (!res.ok) {
      setStatus("update rejected (" + res.status + ")");
      return;
    }
    const body = await res.json();
    if (body.refresh.targets.includes("outputs")) {
      await refreshOutputs(body.manifest);
    }
    if (body.refresh.targets.includes("viewer")) {
      refreshViewer();
    }
    setStatus("updated");
  }

  for (const w of view.WIDGETS) {
    if (w.kind === "run_button") built[w.id].addEventListener("click", run);
    if (w.area === "update" && w.extra.token) {
      built[w.id].addEventListener("change", applyUpdate);
    }
  }
})();
