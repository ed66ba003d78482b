/** Annotation UI controller: token entry, the personal labeling queue,
 * the third-party conflict queue, and the adjudicated-export view.
 *
 * The page is served by the annotation service itself (its static mount),
 * so all requests go back to the same origin.
 */

import { ApiClient, ApiError } from "./api.js";
import type { ExportPayload } from "./api.js";
import { renderConflict, renderLabelForm } from "./render.js";

type Tab = "queue" | "conflicts" | "export";

function clear(node: HTMLElement): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}

function message(kind: "info" | "error", text: string): HTMLElement {
  const node = document.createElement("div");
  node.className = `notice notice-${kind}`;
  node.textContent = text;
  return node;
}

export class App {
  private client: ApiClient | null = null;
  private tab: Tab = "queue";

  constructor(
    private readonly root: HTMLElement,
    private readonly baseUrl: string = "",
  ) {}

  start(): void {
    this.renderShell();
  }

  private renderShell(): void {
    clear(this.root);
    const bar = document.createElement("div");
    bar.className = "top-bar";

    const tokenInput = document.createElement("input");
    tokenInput.type = "password";
    tokenInput.placeholder = "annotator token";
    tokenInput.className = "token-input";

    const connect = document.createElement("button");
    connect.textContent = "Connect";
    connect.type = "button";

    const tabs = document.createElement("nav");
    tabs.className = "tabs";
    for (const tab of ["queue", "conflicts", "export"] as Tab[]) {
      const button = document.createElement("button");
      button.type = "button";
      button.textContent = tab;
      button.dataset["tab"] = tab;
      button.addEventListener("click", () => {
        this.tab = tab;
        void this.refresh();
      });
      tabs.append(button);
    }

    bar.append(tokenInput, connect, tabs);
    const main = document.createElement("main");
    main.id = "main";
    this.root.append(bar, main);

    connect.addEventListener("click", () => {
      this.client = new ApiClient(this.baseUrl, tokenInput.value.trim());
      void this.refresh();
    });
  }

  private main(): HTMLElement {
    return this.root.querySelector("#main") as HTMLElement;
  }

  private async refresh(): Promise<void> {
    const main = this.main();
    clear(main);
    if (!this.client) {
      main.append(message("info", "enter your annotator token to begin"));
      return;
    }
    try {
      if (this.tab === "queue") {
        await this.renderQueue(main, this.client);
      } else if (this.tab === "conflicts") {
        await this.renderConflicts(main, this.client);
      } else {
        await this.renderExport(main, this.client);
      }
    } catch (error) {
      if (error instanceof ApiError) {
        main.append(message("error", error.message));
      } else {
        main.append(message("error", `request failed: ${String(error)}`));
      }
    }
  }

  private async renderQueue(main: HTMLElement, client: ApiClient) {
    const [task, categories] = await Promise.all([
      client.nextAssignment(),
      client.categories(),
    ]);
    if (task === null) {
      main.append(message("info", "queue empty — nothing left to label"));
      return;
    }
    main.append(
      renderLabelForm(task, categories, (taskId, submission) => {
        void client
          .submitLabel(taskId, submission)
          .then((status) => {
            main.prepend(message("info", `${taskId}: ${status}`));
            void this.refresh();
          })
          .catch((error: unknown) => {
            main.prepend(
              message(
                "error",
                error instanceof ApiError ? error.message : String(error),
              ),
            );
          });
      }),
    );
  }

  private async renderConflicts(main: HTMLElement, client: ApiClient) {
    const [conflicts, categories] = await Promise.all([
      client.conflicts(),
      client.categories(),
    ]);
    if (conflicts.length === 0) {
      main.append(message("info", "no conflicts waiting for you"));
      return;
    }
    for (const task of conflicts) {
      main.append(
        renderConflict(task, categories, (taskId, submission) => {
          void client
            .resolve(taskId, submission)
            .then((status) => {
              main.prepend(message("info", `${taskId}: ${status}`));
              void this.refresh();
            })
            .catch((error: unknown) => {
              main.prepend(
                message(
                  "error",
                  error instanceof ApiError ? error.message : String(error),
                ),
              );
            });
        }),
      );
    }
  }

  private async renderExport(main: HTMLElement, client: ApiClient) {
    const payload: ExportPayload = await client.exportGold();
    const summary = document.createElement("div");
    summary.className = "export-summary";
    const report = payload.conflict_report;
    summary.textContent =
      `${payload.records.length} adjudicated records — ` +
      `${report.conflicts}/${report.double_labeled} conflicted ` +
      `(rate ${report.rate})`;
    main.append(summary);
    const pre = document.createElement("pre");
    pre.className = "export-json";
    pre.textContent = JSON.stringify(payload, null, 2);
    main.append(pre);
  }
}

declare global {
  interface Window {
    snipdocApp?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const app = new App(document.getElementById("app") as HTMLElement);
  app.start();
  window.snipdocApp = app;
}
