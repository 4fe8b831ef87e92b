/**
 * ICA component panel: activation thumbnails with their EOG correlation
 * scores, checkboxes staging a rejection set, and an apply button that posts
 * it. The staged set only reaches the server on apply; a successful apply
 * flags every downstream view stale.
 */

import { ApiClient, ApiError } from "../api.js";
import { banner, clear, el, numberText, staleBadge } from "../dom.js";
import { linePlot } from "../plot.js";
import type { ViewState } from "../state.js";

export class IcaPanel {
  readonly root: HTMLElement;

  constructor(
    private api: ApiClient,
    private state: ViewState,
  ) {
    this.root = el("section", { class: "view ica-view", "data-view": "ica" });
  }

  async refresh(): Promise<void> {
    if (!this.state.sessionId) return;
    clear(this.root);
    const header = el("div", { class: "view-header" }, [el("h2", {}, ["ICA components"])]);
    if (this.state.isStale("ica")) header.append(staleBadge());
    this.root.append(header);
    try {
      const doc = await this.api.icaComponents(this.state.sessionId, this.state.trial);
      this.state.refreshed("ica");
      this.state.appliedRejections = doc.rejected.slice();
      this.state.pendingRejections = new Set(doc.rejected);

      if (!doc.converged) {
        this.root.append(
          el("p", { class: "note" }, ["iteration hit its cap; components are the last iterate"]),
        );
      }

      const list = el("div", { class: "component-list" });
      for (const component of doc.components) {
        const row = el("div", {
          class: "component-row",
          "data-testid": `component-${component.index}`,
        });
        const checkbox = el("input", {
          type: "checkbox",
          "data-testid": `reject-${component.index}`,
        });
        checkbox.checked = this.state.pendingRejections.has(component.index);
        checkbox.addEventListener("change", () => {
          if (checkbox.checked) this.state.pendingRejections.add(component.index);
          else this.state.pendingRejections.delete(component.index);
        });
        const score =
          component.score === null
            ? "no EOG reference"
            : `|r| = ${numberText(component.score)}`;
        const label = el("label", {}, [
          checkbox,
          ` component ${component.index} (${score})`,
        ]);
        const thumb = linePlot(component.activation, {
          width: 420,
          height: 48,
          maxPoints: 400,
          color: "#8250df",
        });
        row.append(label, thumb);
        list.append(row);
      }
      this.root.append(list);

      const apply = el("button", { "data-testid": "apply-rejections" }, ["Apply rejections"]);
      apply.addEventListener("click", () => void this.apply());
      const applied = el("p", { "data-testid": "applied-rejections" }, [
        `applied: [${doc.rejected.join(", ")}]`,
      ]);
      this.root.append(apply, applied);
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.root.append(
          el("p", { class: "note", "data-testid": "ica-missing" }, [
            "ICA has not run for this session yet; use the preprocessing form above.",
          ]),
        );
      } else if (err instanceof ApiError) {
        this.root.append(banner(`ica: ${err.status} ${err.message}`));
      } else {
        throw err;
      }
    }
  }

  async apply(): Promise<void> {
    if (!this.state.sessionId) return;
    const indices = [...this.state.pendingRejections].sort((a, b) => a - b);
    try {
      const result = await this.api.rejectComponents(
        this.state.sessionId,
        this.state.trial,
        indices,
      );
      this.state.appliedRejections = result.rejected;
      this.state.markStaleFrom("ica");
      await this.refresh();
    } catch (err) {
      if (err instanceof ApiError) {
        this.root.append(banner(`reject: ${err.status} ${err.message}`));
      } else {
        throw err;
      }
    }
  }
}
