/**
 * Spec-driven plugin frontend.
 *
 * Renders the input/output/update areas from the formal GUI
 * specification served at /api/spec, posts runs, polls session state,
 * displays artifacts, and embeds the 3D viewer iframe behind a
 * cache-busting nonce.  No command-building logic lives here: the
 * frontend transmits raw widget state and token-keyed update values;
 * the server owns execution.
 */

export interface Geometry {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface OutputSlot {
  slot_name: string;
  media: string;
}

export interface WidgetSpec {
  id: string;
  kind: string;
  area: string;
  geometry: Geometry;
  label: string;
  slot?: OutputSlot;
}

export interface FlagBinding {
  token: string;
  kind: string;
  enum_choices?: string[];
  default: string;
  label: string;
  widget_id: string;
}

export interface UpdateBinding extends FlagBinding {
  refresh: string[];
}

export interface GuiSpec {
  meta: {
    schema: string;
    app_name: string;
    exe: string;
    post_script: string;
    generator_version: string;
  };
  areas: Record<string, Geometry>;
  widgets: WidgetSpec[];
  flags: FlagBinding[];
  update_flags: UpdateBinding[];
}

export type WidgetValue = string | boolean;
export type WidgetState = Record<string, WidgetValue>;

export interface ManifestEntry {
  media: string;
  path: string;
}

export interface Manifest {
  slots: Record<string, ManifestEntry>;
  viewer: { engine_hint: string; path: string }[];
}

export interface RefreshSet {
  targets: string[];
  slots_to_refresh: string[];
}

export interface SessionInfo {
  state: string;
  exit_code?: number;
  manifest?: Manifest;
  stderr_tail?: string;
}

export interface PluginApi {
  fetchSpec(): Promise<GuiSpec>;
  startRun(state: WidgetState): Promise<{ session_id: string }>;
  getSession(id: string): Promise<SessionInfo>;
  postUpdate(
    id: string,
    values: Record<string, string>,
  ): Promise<{ refresh: RefreshSet; manifest: Manifest }>;
  artifactUrl(id: string, path: string): string;
  fetchArtifactText(id: string, path: string): Promise<string>;
}

/** fetch-backed client for a plugin host */
export class HttpApi implements PluginApi {
  constructor(private base: string = "") {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.base + path, init);
    if (!res.ok) {
      throw new Error(`${path}: HTTP ${res.status}`);
    }
    return (await res.json()) as T;
  }

  fetchSpec(): Promise<GuiSpec> {
    return this.json<GuiSpec>("/api/spec");
  }

  startRun(state: WidgetState): Promise<{ session_id: string }> {
    return this.json("/api/run", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(state),
    });
  }

  getSession(id: string): Promise<SessionInfo> {
    return this.json(`/api/session/${id}`);
  }

  postUpdate(id: string, values: Record<string, string>) {
    return this.json<{ refresh: RefreshSet; manifest: Manifest }>("/api/update", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ session_id: id, values }),
    });
  }

  artifactUrl(id: string, path: string): string {
    return `${this.base}/artifacts/${id}/${path}`;
  }

  async fetchArtifactText(id: string, path: string): Promise<string> {
    const res = await fetch(this.artifactUrl(id, path));
    if (!res.ok) {
      throw new Error(`artifact ${path}: HTTP ${res.status}`);
    }
    return res.text();
  }
}

export interface AppOptions {
  pollIntervalMs?: number;
  pollBackoff?: number;
  maxPollIntervalMs?: number;
}

const INPUTTY_KINDS = [
  "checkbox",
  "line_entry",
  "file_picker",
  "int_spin",
  "float_spin",
  "combo",
];

function positionWithin(el: HTMLElement, g: Geometry): void {
  el.style.position = "absolute";
  el.style.left = `${g.x}px`;
  el.style.top = `${g.y}px`;
  el.style.width = `${g.w}px`;
  el.style.height = `${g.h}px`;
}

export class PluginApp {
  readonly controls = new Map<string, HTMLElement>();
  sessionId: string | null = null;
  viewerNonce = 0;
  private artifactNonce = 0;
  private inFlight = false;
  private statusEl: HTMLElement | null = null;
  private updateTokens = new Map<string, string>(); // widget_id -> token

  constructor(
    private doc: Document,
    readonly spec: GuiSpec,
    private api: PluginApi,
    private opts: AppOptions = {},
  ) {
    for (const binding of spec.update_flags) {
      this.updateTokens.set(binding.widget_id, binding.token);
    }
  }

  /** Build one control per widget, positioned inside its area panel. */
  mount(root: HTMLElement): void {
    const panels = new Map<string, HTMLElement>();
    root.style.position = "relative";
    for (const [area, g] of Object.entries(this.spec.areas)) {
      const panel = this.doc.createElement("fieldset");
      panel.className = `area area-${area}`;
      panel.dataset.area = area;
      const legend = this.doc.createElement("legend");
      legend.textContent = area;
      panel.appendChild(legend);
      positionWithin(panel, g);
      panels.set(area, panel);
      root.appendChild(panel);
    }

    for (const w of this.spec.widgets) {
      const panel = panels.get(w.area);
      if (panel === undefined) {
        throw new Error(`widget ${w.id} references undeclared area ${w.area}`);
      }
      const el = this.buildControl(w);
      positionWithin(el, w.geometry);
      if (w.label && INPUTTY_KINDS.includes(w.kind)) {
        const label = this.doc.createElement("label");
        label.textContent = w.label;
        label.htmlFor = w.id;
        label.style.position = "absolute";
        label.style.left = "8px";
        label.style.top = `${w.geometry.y}px`;
        panel.appendChild(label);
      }
      panel.appendChild(el);
      this.controls.set(w.id, el);
    }

    const status = this.doc.createElement("div");
    status.id = "sbl-status";
    status.textContent = "idle";
    root.appendChild(status);
    this.statusEl = status;
  }

  private buildControl(w: WidgetSpec): HTMLElement {
    const d = this.doc;
    const binding = this.spec.flags
      .concat(this.spec.update_flags)
      .find((b) => b.widget_id === w.id);
    let el: HTMLElement;
    switch (w.kind) {
      case "checkbox": {
        const input = d.createElement("input");
        input.type = "checkbox";
        input.checked = binding?.default === "true";
        el = input;
        break;
      }
      case "line_entry":
      case "file_picker": {
        const input = d.createElement("input");
        input.type = "text";
        input.placeholder = w.label;
        input.value = binding?.default ?? "";
        el = input;
        break;
      }
      case "int_spin":
      case "float_spin": {
        const input = d.createElement("input");
        input.type = "number";
        if (w.kind === "float_spin") {
          input.step = "any";
        }
        input.value = binding?.default ?? "";
        el = input;
        break;
      }
      case "combo": {
        const select = d.createElement("select");
        const blank = d.createElement("option");
        blank.value = "";
        blank.textContent = "--";
        select.appendChild(blank);
        for (const choice of binding?.enum_choices ?? []) {
          const opt = d.createElement("option");
          opt.value = choice;
          opt.textContent = choice;
          select.appendChild(opt);
        }
        if (binding?.default) {
          select.value = binding.default;
        }
        el = select;
        break;
      }
      case "run_button": {
        const button = d.createElement("button");
        button.textContent = w.label;
        button.addEventListener("click", () => {
          void this.clickRun();
        });
        el = button;
        break;
      }
      case "viewer_frame": {
        const frame = d.createElement("iframe");
        frame.className = "viewer-frame";
        el = frame;
        break;
      }
      case "text_output": {
        el = d.createElement("pre");
        break;
      }
      case "image_output": {
        el = d.createElement("img");
        (el as HTMLImageElement).alt = w.label;
        break;
      }
      case "table_output": {
        el = d.createElement("table");
        break;
      }
      case "html_output":
      case "pdf_output": {
        el = d.createElement("iframe");
        break;
      }
      default: {
        el = d.createElement("span");
        el.textContent = w.label;
      }
    }
    el.id = w.id;
    el.dataset.kind = w.kind;
    if (this.updateTokens.has(w.id)) {
      el.addEventListener("change", () => {
        void this.applyUpdate();
      });
    }
    return el;
  }

  /** Rendered inventory, for fidelity checks against the spec. */
  controlInventory(): { id: string; kind: string }[] {
    return this.spec.widgets.map((w) => {
      const el = this.controls.get(w.id);
      if (el === undefined) {
        throw new Error(`widget ${w.id} was not rendered`);
      }
      return { id: el.id, kind: el.dataset.kind ?? "" };
    });
  }

  /** Raw widget state; values are transmitted untouched. */
  readInputState(): WidgetState {
    const state: WidgetState = {};
    for (const w of this.spec.widgets) {
      if (w.area !== "input" || !INPUTTY_KINDS.includes(w.kind)) {
        continue;
      }
      const el = this.controls.get(w.id);
      if (el === undefined) {
        continue;
      }
      if (w.kind === "checkbox") {
        state[w.id] = (el as HTMLInputElement).checked;
      } else {
        state[w.id] = (el as HTMLInputElement | HTMLSelectElement).value;
      }
    }
    return state;
  }

  /** Update-area values keyed by flag token, as text. */
  readUpdateValues(): Record<string, string> {
    const values: Record<string, string> = {};
    for (const [widgetId, token] of this.updateTokens) {
      const el = this.controls.get(widgetId);
      if (el === undefined) {
        continue;
      }
      if (el.dataset.kind === "checkbox") {
        values[token] = (el as HTMLInputElement).checked ? "true" : "false";
      } else {
        values[token] = (el as HTMLInputElement | HTMLSelectElement).value;
      }
    }
    return values;
  }

  setStatus(text: string): void {
    if (this.statusEl !== null) {
      this.statusEl.textContent = text;
    }
  }

  /** Start a run and poll until the session settles. */
  async clickRun(): Promise<SessionInfo | null> {
    if (this.inFlight) {
      return null; // one in-flight run per session, enforced client-side too
    }
    this.inFlight = true;
    try {
      this.setStatus("starting");
      const { session_id } = await this.api.startRun(this.readInputState());
      this.sessionId = session_id;
      const info = await this.pollUntilSettled(session_id);
      if (info.state === "Ready" && info.manifest !== undefined) {
        await this.renderOutputs(info.manifest);
        this.refreshViewer();
        this.setStatus("Ready");
      } else if (info.state === "Failed") {
        this.setStatus(
          `Failed (exit ${info.exit_code ?? "?"}): ${info.stderr_tail ?? ""}`,
        );
      }
      return info;
    } catch (err) {
      this.setStatus(`error: ${String(err)}`);
      return null;
    } finally {
      this.inFlight = false;
    }
  }

  private async pollUntilSettled(sessionId: string): Promise<SessionInfo> {
    let interval = this.opts.pollIntervalMs ?? 500;
    const backoff = this.opts.pollBackoff ?? 1.5;
    const cap = this.opts.maxPollIntervalMs ?? 5000;
    for (;;) {
      const info = await this.api.getSession(sessionId);
      this.setStatus(info.state);
      if (info.state === "Ready" || info.state === "Failed") {
        return info;
      }
      await new Promise((resolve) => setTimeout(resolve, interval));
      interval = Math.min(interval * backoff, cap);
    }
  }

  /** Post current update values; refresh only what the server says to. */
  async applyUpdate(): Promise<RefreshSet | null> {
    if (this.sessionId === null || this.inFlight) {
      return null;
    }
    const { refresh, manifest } = await this.api.postUpdate(
      this.sessionId,
      this.readUpdateValues(),
    );
    if (refresh.targets.includes("outputs")) {
      await this.renderOutputs(manifest);
    }
    if (refresh.targets.includes("viewer")) {
      this.refreshViewer();
    }
    return refresh;
  }

  /** Bump the cache-busting nonce; nonces strictly increase per session. */
  refreshViewer(): void {
    this.viewerNonce += 1;
    for (const w of this.spec.widgets) {
      if (w.kind !== "viewer_frame") {
        continue;
      }
      const frame = this.controls.get(w.id) as HTMLIFrameElement | undefined;
      if (frame !== undefined) {
        const scene = encodeURIComponent(this.sessionId ?? "");
        frame.src = `/viewer/?scene=${scene}&v=${this.viewerNonce}`;
      }
    }
  }

  private async renderOutputs(manifest: Manifest): Promise<void> {
    if (this.sessionId === null) {
      return;
    }
    this.artifactNonce += 1;
    for (const w of this.spec.widgets) {
      if (w.slot === undefined) {
        continue;
      }
      const entry = manifest.slots[w.slot.slot_name];
      const el = this.controls.get(w.id);
      if (entry === undefined || el === undefined) {
        continue;
      }
      const url =
        this.api.artifactUrl(this.sessionId, entry.path) +
        `?v=${this.artifactNonce}`;
      if (w.kind === "text_output") {
        el.textContent = await this.api.fetchArtifactText(
          this.sessionId,
          entry.path,
        );
      } else if (w.kind === "image_output") {
        (el as HTMLImageElement).src = url;
      } else if (w.kind === "table_output") {
        const text = await this.api.fetchArtifactText(
          this.sessionId,
          entry.path,
        );
        this.renderTable(el as HTMLTableElement, text);
      } else {
        (el as HTMLIFrameElement).src = url;
      }
    }
  }

  private renderTable(table: HTMLTableElement, csv: string): void {
    table.innerHTML = "";
    for (const line of csv.trim().split("\n")) {
      const tr = this.doc.createElement("tr");
      for (const cell of line.split(",")) {
        const td = this.doc.createElement("td");
        td.textContent = cell;
        tr.appendChild(td);
      }
      table.appendChild(tr);
    }
  }
}

/** Fetch the spec and mount the app; shows a blocking banner on failure. */
export async function bootstrap(
  doc: Document,
  api: PluginApi,
  rootId = "app",
): Promise<PluginApp | null> {
  const root = doc.getElementById(rootId);
  if (root === null) {
    throw new Error(`no #${rootId} element to mount into`);
  }
  let spec: GuiSpec;
  try {
    spec = await api.fetchSpec();
  } catch (err) {
    const banner = doc.createElement("div");
    banner.className = "error-banner";
    banner.textContent = `cannot load plugin spec: ${String(err)}`;
    root.appendChild(banner);
    return null;
  }
  const app = new PluginApp(doc, spec, api);
  app.mount(root);
  return app;
}
