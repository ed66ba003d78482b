/** Typed client for the snipdoc annotation service HTTP API.
 *
 * Every endpoint except /api/health requires an X-Annotator-Token header;
 * the server maps the token to an annotator id. Error responses carry a
 * JSON body {"detail": "..."} which surfaces here as ApiError.
 */

export type TaskStatus =
  | "pending"
  | "partially_labeled"
  | "labeled"
  | "conflicted"
  | "resolved";

export type ConflictKind = "category" | "link" | "both";

export interface BodyRow {
  line: number;
  text: string;
  linkable: boolean;
}

export interface LabelRecord {
  task_id: string;
  annotator_id: string;
  categories: string[];
  links: number[];
  timestamp: number;
}

export interface TaskView {
  task_id: string;
  method_id: string;
  path: string;
  comment_id: string;
  status: TaskStatus;
  assignees: string[];
  conflict_kind: ConflictKind | null;
  linkable_lines: number[];
  body: BodyRow[];
  comment: string | null;
  /** Present once visible to the viewer: own label mid-flight, all labels
   * on settled tasks and on conflicts shown to third parties. */
  labels?: Record<string, LabelRecord>;
  resolution?: LabelRecord | null;
}

export interface LabelSubmission {
  categories: string[];
  lines: number[];
}

export interface HealthInfo {
  status: string;
  tasks: number;
}

export interface ExportRecord {
  task_id: string;
  method_id: string;
  path: string;
  comment_id: string;
  categories: string[];
  lines: number[];
  resolved: boolean;
}

export interface CategoryStat {
  category: string;
  count: number;
  mean_links: number;
  median_links: number;
  sd_links: number;
}

export interface ConflictReport {
  double_labeled: number;
  conflicts: number;
  rate: number;
  by_kind: Record<ConflictKind, number>;
  category_kappa: number | null;
}

export interface ExportPayload {
  records: ExportRecord[];
  category_stats: CategoryStat[];
  conflict_report: ConflictReport;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
    this.name = "ApiError";
  }
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiClient {
  private readonly baseUrl: string;

  constructor(
    baseUrl: string,
    private readonly token: string,
    private readonly fetchImpl: FetchLike = (input, init) =>
      globalThis.fetch(input, init),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = {
      "X-Annotator-Token": this.token,
    };
    const init: RequestInit = { method, headers };
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const text = await response.text();
    let data: unknown = null;
    if (text) {
      try {
        data = JSON.parse(text);
      } catch {
        data = null;
      }
    }
    if (!response.ok) {
      const detail =
        data !== null &&
        typeof data === "object" &&
        typeof (data as { detail?: unknown }).detail === "string"
          ? (data as { detail: string }).detail
          : response.statusText || `HTTP ${response.status}`;
      throw new ApiError(response.status, detail);
    }
    return data as T;
  }

  health(): Promise<HealthInfo> {
    return this.request<HealthInfo>("GET", "/api/health");
  }

  async categories(): Promise<string[]> {
    const data = await this.request<{ categories: string[] }>(
      "GET",
      "/api/categories",
    );
    return data.categories;
  }

  /** Register a free-text category; the server prefixes custom names and
   * returns the updated list. */
  async addCategory(name: string): Promise<string[]> {
    const data = await this.request<{ name: string; categories: string[] }>(
      "POST",
      "/api/categories",
      { name },
    );
    return data.categories;
  }

  async assignments(): Promise<TaskView[]> {
    const data = await this.request<{ annotator: string; tasks: TaskView[] }>(
      "GET",
      "/api/assignments",
    );
    return data.tasks;
  }

  async nextAssignment(): Promise<TaskView | null> {
    const data = await this.request<{ task: TaskView | null }>(
      "GET",
      "/api/assignments/next",
    );
    return data.task;
  }

  task(taskId: string): Promise<TaskView> {
    return this.request<TaskView>("GET", `/api/tasks/${taskId}`);
  }

  async submitLabel(
    taskId: string,
    submission: LabelSubmission,
  ): Promise<TaskStatus> {
    const data = await this.request<{ task_id: string; status: TaskStatus }>(
      "POST",
      `/api/tasks/${taskId}/label`,
      submission,
    );
    return data.status;
  }

  async conflicts(): Promise<TaskView[]> {
    const data = await this.request<{ conflicts: TaskView[] }>(
      "GET",
      "/api/conflicts",
    );
    return data.conflicts;
  }

  async resolve(
    taskId: string,
    submission: LabelSubmission,
  ): Promise<TaskStatus> {
    const data = await this.request<{ task_id: string; status: TaskStatus }>(
      "POST",
      `/api/conflicts/${taskId}/resolve`,
      submission,
    );
    return data.status;
  }

  exportGold(): Promise<ExportPayload> {
    return this.request<ExportPayload>("GET", "/api/export");
  }
}
