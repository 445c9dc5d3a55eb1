import { ApiClient } from "./api.js";
import { Poller } from "./poller.js";
import { emptyCatalog, parseRulesText, renderCatalog, CatalogState } from "./screens/catalog.js";
import { emptyDataEntry, parseCsvText, renderDataEntry, DataEntryState } from "./screens/dataentry.js";
import { emptyDashboard, renderDashboard, DashboardState } from "./screens/dashboard.js";
import { renderAnomalies, CategoryFilter } from "./screens/anomalies.js";
import type { AnomalyRecord, Mode, Tier } from "./types.js";

type ScreenName = "catalog" | "data" | "dashboard" | "anomalies";

const SCREENS: { name: ScreenName; title: string }[] = [
  { name: "catalog", title: "Catalog" },
  { name: "data", title: "Data Entry" },
  { name: "dashboard", title: "Dashboard" },
  { name: "anomalies", title: "Anomalies" },
];

export class App {
  private catalog: CatalogState = emptyCatalog();
  private dataEntry: DataEntryState = emptyDataEntry();
  private dashboard: DashboardState = emptyDashboard();
  private anomalies: AnomalyRecord[] = [];
  private anomalyFilter: CategoryFilter = "";
  private current: ScreenName = "dashboard";
  private poller: Poller;

  constructor(
    private root: HTMLElement,
    private api: ApiClient = new ApiClient(),
  ) {
    this.poller = new Poller(() => this.pollAnomalies());
  }

  start(): void {
    window.addEventListener("hashchange", () => this.navigate());
    this.root.addEventListener("submit", (event) => this.onSubmit(event));
    this.root.addEventListener("click", (event) => this.onClick(event));
    this.root.addEventListener("change", (event) => this.onChange(event));
    this.poller.start();
    void this.refreshServices().then(() => this.navigate());
  }

  private async pollAnomalies(): Promise<void> {
    try {
      this.anomalies = await this.api.getAnomalies();
      if (this.current === "anomalies") this.render();
      this.updateBadge();
    } catch {
      // service unreachable; keep the last known log and try again next tick
    }
  }

  private async refreshServices(): Promise<void> {
    try {
      const services = await this.api.listServices();
      this.catalog.services = services;
      this.dataEntry.indices = services.filter((entry) => entry.tier === "index");
      this.dashboard.indicators = services.filter((entry) => entry.tier === "indicator");
    } catch (error) {
      this.catalog.error = error;
    }
  }

  private navigate(): void {
    const target = window.location.hash.replace("#/", "") as ScreenName;
    this.current = SCREENS.some((screen) => screen.name === target) ? target : "dashboard";
    this.render();
  }

  private updateBadge(): void {
    const badge = document.getElementById("anomaly-count");
    if (badge) badge.textContent = this.anomalies.length ? String(this.anomalies.length) : "";
  }

  render(): void {
    const nav = SCREENS.map((screen) => {
      const active = screen.name === this.current ? " class=\"active\"" : "";
      const badge = screen.name === "anomalies" ? ` <span id="anomaly-count"></span>` : "";
      return `<a href="#/${screen.name}"${active}>${screen.title}${badge}</a>`;
    }).join("");
    let body: string;
    switch (this.current) {
      case "catalog":
        body = renderCatalog(this.catalog);
        break;
      case "data":
        body = renderDataEntry(this.dataEntry);
        break;
      case "anomalies":
        body = renderAnomalies(this.anomalies, this.anomalyFilter);
        break;
      default:
        body = renderDashboard(this.dashboard);
    }
    this.root.innerHTML = `<nav class="tabs">${nav}</nav><main>${body}</main>`;
    this.updateBadge();
  }

  // -- event wiring ---------------------------------------------------------

  private onClick(event: Event): void {
    const target = event.target as HTMLElement;
    const tier = target.getAttribute?.("data-tier") as Tier | null;
    if (tier) {
      this.catalog.formTier = tier;
      this.catalog.error = null;
      this.render();
    }
  }

  private onChange(event: Event): void {
    const target = event.target as HTMLInputElement | HTMLSelectElement;
    if (target.id === "anomaly-filter") {
      this.anomalyFilter = target.value as CategoryFilter;
      this.render();
    } else if (target.id === "catalog-edit") {
      this.catalog.editing = (target as HTMLInputElement).checked;
      this.render();
    } else if (target.closest("#dashboard-form") && target.name === "mode") {
      this.dashboard.mode = target.value as Mode | "";
      this.readDashboardForm();
      this.render();
    }
  }

  private onSubmit(event: Event): void {
    const form = event.target as HTMLFormElement;
    event.preventDefault();
    if (form.id === "catalog-form") void this.submitCatalog(form);
    else if (form.id === "data-form") void this.submitValues(form);
    else if (form.id === "csv-form") void this.submitCsv(form);
    else if (form.id === "dashboard-form") void this.submitDashboard(form);
  }

  private async submitCatalog(form: HTMLFormElement): Promise<void> {
    const data = new FormData(form);
    const text = (name: string) => String(data.get(name) ?? "").trim();
    const base = { id: text("id"), label: text("label"), unit: text("unit") };
    this.catalog.error = null;
    this.catalog.notice = null;
    try {
      if (this.catalog.formTier === "index") {
        await this.api.registerIndex({ ...base, description: text("description") });
      } else if (this.catalog.formTier === "model") {
        const doc = { ...base, expression: text("expression") };
        await (this.catalog.editing ? this.api.replaceModel(doc) : this.api.registerModel(doc));
      } else {
        const doc = {
          ...base,
          expression: text("expression"),
          default_mode: text("default_mode") as Mode,
          rules: parseRulesText(text("rules")),
        };
        await (this.catalog.editing
          ? this.api.replaceIndicator(doc)
          : this.api.registerIndicator(doc));
      }
      this.catalog.notice = `${this.catalog.formTier} '${base.id}' saved`;
      await this.refreshServices();
    } catch (error) {
      this.catalog.error = error; // shown inline; the Supervisor logged it too
    }
    void this.pollAnomalies();
    this.render();
  }

  private async submitValues(form: HTMLFormElement): Promise<void> {
    const data = new FormData(form);
    this.dataEntry.period = String(data.get("period") ?? "").trim();
    this.dataEntry.error = null;
    this.dataEntry.notice = null;
    let written = 0;
    try {
      for (const entry of this.dataEntry.indices) {
        const raw = String(data.get(`value-${entry.id}`) ?? "").trim();
        this.dataEntry.drafts[entry.id] = raw;
        if (!raw) continue;
        await this.api.setValue(entry.id, this.dataEntry.period, Number(raw));
        written += 1;
      }
      this.dataEntry.notice = `saved ${written} value(s) for ${this.dataEntry.period}`;
    } catch (error) {
      this.dataEntry.error = error;
    }
    this.render();
  }

  private async submitCsv(form: HTMLFormElement): Promise<void> {
    const data = new FormData(form);
    this.dataEntry.error = null;
    this.dataEntry.notice = null;
    try {
      const rows = parseCsvText(String(data.get("csv") ?? ""));
      for (const row of rows) {
        await this.api.setValue(row.indexId, row.period, row.value);
      }
      this.dataEntry.notice = `uploaded ${rows.length} value(s)`;
    } catch (error) {
      this.dataEntry.error = error;
    }
    this.render();
  }

  private readDashboardForm(): void {
    const form = document.getElementById("dashboard-form") as HTMLFormElement | null;
    if (!form) return;
    const data = new FormData(form);
    this.dashboard.selected = data.getAll("indicator").map(String);
    this.dashboard.period = String(data.get("period") ?? "").trim();
    this.dashboard.from = String(data.get("from") ?? "").trim();
    this.dashboard.to = String(data.get("to") ?? "").trim();
  }

  private async submitDashboard(form: HTMLFormElement): Promise<void> {
    const data = new FormData(form);
    this.dashboard.selected = data.getAll("indicator").map(String);
    this.dashboard.period = String(data.get("period") ?? "").trim();
    this.dashboard.mode = String(data.get("mode") ?? "") as Mode | "";
    this.dashboard.from = String(data.get("from") ?? "").trim();
    this.dashboard.to = String(data.get("to") ?? "").trim();
    this.dashboard.error = null;
    try {
      if (this.dashboard.mode === "histogram") {
        const series = [];
        for (const id of this.dashboard.selected) {
          series.push({
            id,
            descriptor: await this.api.getSeries(id, this.dashboard.from, this.dashboard.to),
          });
        }
        this.dashboard.series = series;
        this.dashboard.entries = null;
      } else {
        const result = await this.api.computeReports(
          this.dashboard.selected,
          this.dashboard.period,
          this.dashboard.mode || undefined,
        );
        this.dashboard.entries = result.entries;
        this.dashboard.series = null;
      }
    } catch (error) {
      this.dashboard.error = error;
    }
    void this.pollAnomalies(); // per-entry compute failures land in the log
    this.render();
  }
}

export function mount(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  new App(root).start();
}
