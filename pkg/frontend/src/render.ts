/** DOM builders for the annotation views. Framework-free: each function
 * returns a detached element the controller mounts wherever it likes.
 */

import type { LabelRecord, LabelSubmission, TaskView } from "./api.js";
import { LineSelection } from "./selection.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

/** Header card: file path, status badge, and the comment under annotation. */
export function renderTaskHeader(task: TaskView): HTMLElement {
  const header = el("div", "task-header");
  const title = el("div", "task-title");
  title.append(
    el("span", "task-id", task.task_id),
    el("span", "task-path", task.path),
    el("span", `status status-${task.status}`, task.status),
  );
  header.append(title);
  if (task.comment) {
    header.append(el("div", "task-comment", task.comment));
  }
  return header;
}

/** Code view with a clickable line gutter.
 *
 * Linkable rows toggle membership in `selection` and get the `selected`
 * class; blank and comment-only rows are rendered with the `muted` class
 * and never receive a click handler, so they cannot enter a selection.
 */
export function renderTaskBody(
  task: TaskView,
  selection: LineSelection,
  onChange?: (lines: number[]) => void,
): HTMLElement {
  const view = el("div", "code-view");
  view.setAttribute("role", "listbox");
  view.setAttribute("aria-multiselectable", "true");
  for (const row of task.body) {
    const rowEl = el("div", "code-row");
    rowEl.dataset["line"] = String(row.line);
    const gutter = el("span", "gutter", String(row.line));
    const text = el("span", "code-text");
    text.textContent = row.text === "" ? " " : row.text;
    rowEl.append(gutter, text);
    if (row.linkable && selection.isLinkable(row.line)) {
      rowEl.classList.add("linkable");
      rowEl.setAttribute("role", "option");
      rowEl.setAttribute("aria-selected", String(selection.has(row.line)));
      if (selection.has(row.line)) {
        rowEl.classList.add("selected");
      }
      rowEl.addEventListener("click", () => {
        selection.toggle(row.line);
        const picked = selection.has(row.line);
        rowEl.classList.toggle("selected", picked);
        rowEl.setAttribute("aria-selected", String(picked));
        onChange?.(selection.lines());
      });
    } else {
      rowEl.classList.add("muted");
      rowEl.setAttribute("aria-disabled", "true");
    }
    view.append(rowEl);
  }
  return view;
}

/** Multi-select category picker backed by checkboxes. */
export function renderCategoryPicker(
  categories: string[],
  selected: Set<string>,
): HTMLElement {
  const picker = el("fieldset", "category-picker");
  picker.append(el("legend", undefined, "Categories"));
  for (const category of categories) {
    const label = el("label", "category-option");
    const box = el("input");
    box.type = "checkbox";
    box.value = category;
    box.checked = selected.has(category);
    box.addEventListener("change", () => {
      if (box.checked) {
        selected.add(category);
      } else {
        selected.delete(category);
      }
    });
    label.append(box, el("span", undefined, category));
    picker.append(label);
  }
  return picker;
}

/** One annotator's stored label, shown in the conflict comparison. */
export function renderLabelCard(
  annotator: string,
  label: LabelRecord,
): HTMLElement {
  const card = el("div", "label-card");
  card.dataset["annotator"] = annotator;
  card.append(el("div", "label-annotator", annotator));
  const cats = el("div", "label-categories");
  for (const category of label.categories) {
    cats.append(el("span", "chip chip-category", category));
  }
  card.append(cats);
  const links = el("div", "label-links");
  if (label.links.length === 0) {
    links.append(el("span", "chip chip-empty", "no linked lines"));
  } else {
    for (const line of label.links) {
      links.append(el("span", "chip chip-line", `line ${line}`));
    }
  }
  card.append(links);
  return card;
}

/** Side-by-side conflict view with a third-party resolution form.
 *
 * The two assignees' labels render as adjacent cards; below them, the
 * resolver gets the same gutter-driven body view plus a category picker,
 * and submit hands the adjudicated label to `onResolve`.
 */
export function renderConflict(
  task: TaskView,
  categories: string[],
  onResolve: (taskId: string, submission: LabelSubmission) => void,
): HTMLElement {
  const panel = el("div", "conflict-panel");
  panel.dataset["task"] = task.task_id;
  panel.append(renderTaskHeader(task));
  panel.append(
    el(
      "div",
      "conflict-kind",
      `disagreement: ${task.conflict_kind ?? "unknown"}`,
    ),
  );

  const sideBySide = el("div", "conflict-labels");
  const labels = task.labels ?? {};
  for (const annotator of task.assignees) {
    const record = labels[annotator];
    if (record) {
      sideBySide.append(renderLabelCard(annotator, record));
    }
  }
  panel.append(sideBySide);

  const form = el("div", "resolution-form");
  const pickedCategories = new Set<string>();
  const selection = new LineSelection(task.linkable_lines);
  form.append(renderCategoryPicker(categories, pickedCategories));
  form.append(renderTaskBody(task, selection));
  const note = el("div", "resolution-note");
  const submit = el("button", "resolve-button", "Submit resolution");
  submit.type = "button";
  submit.addEventListener("click", () => {
    if (pickedCategories.size === 0) {
      note.textContent = "pick at least one category";
      return;
    }
    note.textContent = "";
    onResolve(task.task_id, {
      categories: [...pickedCategories].sort(),
      lines: selection.lines(),
    });
  });
  form.append(note, submit);
  panel.append(form);
  return panel;
}

/** Labeling form for the annotator's own queue: gutter selection plus
 * category picker, submitting through `onSubmit`. */
export function renderLabelForm(
  task: TaskView,
  categories: string[],
  onSubmit: (taskId: string, submission: LabelSubmission) => void,
): HTMLElement {
  const panel = el("div", "label-panel");
  panel.dataset["task"] = task.task_id;
  panel.append(renderTaskHeader(task));
  const pickedCategories = new Set<string>();
  const selection = new LineSelection(task.linkable_lines);
  panel.append(renderCategoryPicker(categories, pickedCategories));
  panel.append(renderTaskBody(task, selection));
  const note = el("div", "label-note");
  const submit = el("button", "label-button", "Submit label");
  submit.type = "button";
  submit.addEventListener("click", () => {
    if (pickedCategories.size === 0) {
      note.textContent = "pick at least one category";
      return;
    }
    note.textContent = "";
    onSubmit(task.task_id, {
      categories: [...pickedCategories].sort(),
      lines: selection.lines(),
    });
  });
  panel.append(note, submit);
  return panel;
}
