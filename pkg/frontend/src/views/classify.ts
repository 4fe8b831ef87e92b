/**
 * Classification dashboard: feature configuration, classifier and
 * hyperparameter forms, a run trigger, and the results — training accuracy
 * next to cross-validated accuracy, the full confusion matrix, and the
 * per-epoch loss curve for MLP runs. Every number shown is the verbatim
 * value from the run payload.
 */

import { ApiClient, ApiError, RunMetrics } from "../api.js";
import { banner, clear, el, numberText, staleBadge } from "../dom.js";
import { linePlot } from "../plot.js";
import type { ViewState } from "../state.js";
import { BAND_NAMES } from "./bands.js";

const FEATURES = ["mean", "variance", "std", "entropy", "band_power"] as const;

export class ClassifyDashboard {
  readonly root: HTMLElement;
  kind: "mlp" | "svm" | "knn" = "mlp";
  cvFolds = 5;
  seed = 0;
  hyperparameters: Record<string, number> = {};
  selectedBands = new Set<string>(BAND_NAMES);
  selectedFeatures = new Set<string>(FEATURES);

  constructor(
    private api: ApiClient,
    private state: ViewState,
  ) {
    this.root = el("section", { class: "view classify-view", "data-view": "classify" });
    this.renderForm();
  }

  private form!: HTMLElement;
  private results!: HTMLElement;
  private validation!: HTMLElement;

  private renderForm(): void {
    clear(this.root);
    const header = el("div", { class: "view-header" }, [el("h2", {}, ["Classification"])]);
    if (this.state.isStale("classify")) header.append(staleBadge());
    this.root.append(header);

    this.form = el("div", { class: "classify-form" });

    const bandBoxes = el("fieldset", {}, [el("legend", {}, ["bands"])]);
    for (const band of BAND_NAMES) {
      const box = el("input", { type: "checkbox", "data-testid": `band-${band}` });
      box.checked = this.selectedBands.has(band);
      box.addEventListener("change", () => {
        if (box.checked) this.selectedBands.add(band);
        else this.selectedBands.delete(band);
      });
      bandBoxes.append(el("label", {}, [box, ` ${band}`]));
    }

    const featureBoxes = el("fieldset", {}, [el("legend", {}, ["features"])]);
    for (const feature of FEATURES) {
      const box = el("input", { type: "checkbox", "data-testid": `feature-${feature}` });
      box.checked = this.selectedFeatures.has(feature);
      box.addEventListener("change", () => {
        if (box.checked) this.selectedFeatures.add(feature);
        else this.selectedFeatures.delete(feature);
      });
      featureBoxes.append(el("label", {}, [box, ` ${feature}`]));
    }

    const kindSelect = el("select", { "data-testid": "classifier-kind" });
    for (const kind of ["mlp", "svm", "knn"]) {
      kindSelect.append(el("option", { value: kind }, [kind]));
    }
    kindSelect.value = this.kind;
    kindSelect.addEventListener("change", () => {
      this.kind = kindSelect.value as typeof this.kind;
      this.hyperparameters = {};
      this.renderForm();
      void this.refresh();
    });

    const hyperFields = el("div", { class: "hyper-fields" });
    const hyperSpec: Record<string, [string, number][]> = {
      mlp: [["hidden", 20], ["epochs", 500], ["batch_size", 16]],
      svm: [["epochs", 50]],
      knn: [["k", 5]],
    };
    for (const [name, fallback] of hyperSpec[this.kind]) {
      const input = el("input", {
        type: "number",
        value: String(this.hyperparameters[name] ?? fallback),
        "data-testid": `hyper-${name}`,
      });
      input.addEventListener("change", () => {
        this.hyperparameters[name] = Number(input.value);
      });
      hyperFields.append(el("label", {}, [`${name} `, input]));
    }

    const cvInput = el("input", {
      type: "number",
      min: "0",
      value: String(this.cvFolds),
      "data-testid": "cv-folds",
    });
    cvInput.addEventListener("change", () => {
      this.cvFolds = Number(cvInput.value);
    });
    const seedInput = el("input", {
      type: "number",
      value: String(this.seed),
      "data-testid": "seed",
    });
    seedInput.addEventListener("change", () => {
      this.seed = Number(seedInput.value);
    });

    const run = el("button", { "data-testid": "run-classification" }, ["Run"]);
    run.addEventListener("click", () => void this.run());

    this.validation = el("div", { class: "validation", "data-testid": "form-validation" });
    this.form.append(
      bandBoxes,
      featureBoxes,
      el("label", {}, ["classifier ", kindSelect]),
      hyperFields,
      el("label", {}, ["cv folds ", cvInput]),
      el("label", {}, ["seed ", seedInput]),
      run,
      this.validation,
    );
    this.results = el("div", { class: "results", "data-testid": "results" });
    this.root.append(this.form, this.results);
    if (this.state.lastRun) this.renderRun(this.state.lastRun);
  }

  /** Client-side checks run before anything is posted. */
  validate(): string | null {
    if (this.selectedBands.size === 0) return "select at least one band";
    if (this.selectedFeatures.size === 0) return "select at least one feature";
    const trials = this.state.trialCount();
    if (this.kind === "knn" && (this.hyperparameters.k ?? 5) > trials) {
      return `k = ${this.hyperparameters.k} exceeds the ${trials} available trials`;
    }
    if (this.cvFolds !== 0 && this.cvFolds < 2) return "cv folds must be 0 (off) or >= 2";
    if (this.cvFolds > trials) return `cv folds exceed the ${trials} available trials`;
    return null;
  }

  async run(): Promise<void> {
    if (!this.state.sessionId) return;
    clear(this.validation);
    const problem = this.validate();
    if (problem) {
      this.validation.append(el("p", { class: "invalid" }, [problem]));
      return;
    }
    clear(this.results);
    try {
      await this.api.computeFeatures(this.state.sessionId, {
        bands: [...BAND_NAMES].filter((b) => this.selectedBands.has(b)),
        per_band_features: [...FEATURES].filter((f) => this.selectedFeatures.has(f)),
      });
      const run = await this.api.classify(this.state.sessionId, {
        kind: this.kind,
        hyperparameters: this.hyperparameters,
        cv_folds: this.cvFolds === 0 ? null : this.cvFolds,
        seed: this.seed,
      });
      this.state.lastRun = run;
      this.state.refreshed("classify");
      this.renderForm();
    } catch (err) {
      if (err instanceof ApiError) {
        this.results.append(banner(`classify: ${err.status} ${err.message}`));
      } else {
        throw err;
      }
    }
  }

  async refresh(): Promise<void> {
    this.renderForm();
  }

  private renderRun(run: RunMetrics): void {
    clear(this.results);
    this.results.append(el("h3", {}, [`run ${run.run}: ${run.classifier}`]));

    const accuracies = el("div", { class: "accuracy-pair" });
    if (run.training) {
      accuracies.append(
        el("p", {}, [
          "training accuracy ",
          el("span", { "data-testid": "training-accuracy" }, [
            numberText(run.training.accuracy),
          ]),
        ]),
      );
    }
    if (run.cross_validation) {
      accuracies.append(
        el("p", {}, [
          `${run.cross_validation.folds}-fold cv accuracy `,
          el("span", { "data-testid": "cv-accuracy" }, [
            numberText(run.cross_validation.mean_accuracy),
          ]),
        ]),
      );
    }
    this.results.append(accuracies);

    if (run.training) {
      const table = el("table", { class: "confusion", "data-testid": "confusion" });
      const head = el("tr", {}, [el("th", {}, ["true \\ predicted"])]);
      run.training.confusion.forEach((_, j) => head.append(el("th", {}, [String(j)])));
      table.append(head);
      run.training.confusion.forEach((row, i) => {
        const tr = el("tr", {}, [el("th", {}, [String(i)])]);
        row.forEach((count, j) => {
          tr.append(
            el("td", { "data-testid": `confusion-${i}-${j}` }, [numberText(count)]),
          );
        });
        table.append(tr);
      });
      this.results.append(table);
    }

    if (run.loss_curve && run.loss_curve.length > 0) {
      const loss = linePlot(run.loss_curve, { width: 800, height: 100, color: "#2da44e" });
      loss.dataset.testid = "loss-curve";
      this.results.append(
        el("p", {}, [
          `loss over ${run.loss_curve.length} epochs (final `,
          el("span", { "data-testid": "final-loss" }, [
            numberText(run.loss_curve[run.loss_curve.length - 1]),
          ]),
          ")",
        ]),
        loss,
      );
    }
  }
}
