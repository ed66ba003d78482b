/** Line-selection model behind the code gutter.
 *
 * Only lines the task declares linkable can enter the selection; toggles on
 * blank or comment-only lines are refused rather than silently recorded, so
 * the view can gray those rows out and skip wiring click handlers entirely.
 * Selections are arbitrary sets — non-contiguous picks like {11, 12, 17}
 * are first-class.
 */
export class LineSelection {
  private readonly linkable: Set<number>;
  private readonly chosen = new Set<number>();

  constructor(linkableLines: Iterable<number>) {
    this.linkable = new Set(linkableLines);
  }

  isLinkable(line: number): boolean {
    return this.linkable.has(line);
  }

  has(line: number): boolean {
    return this.chosen.has(line);
  }

  /** Flip a line in or out of the selection. Returns false (and records
   * nothing) when the line is not linkable. */
  toggle(line: number): boolean {
    if (!this.linkable.has(line)) {
      return false;
    }
    if (this.chosen.has(line)) {
      this.chosen.delete(line);
    } else {
      this.chosen.add(line);
    }
    return true;
  }

  /** Replace the selection, dropping any lines that are not linkable.
   * Used to pre-fill the resolution form from an existing label. */
  setAll(lines: Iterable<number>): void {
    this.chosen.clear();
    for (const line of lines) {
      if (this.linkable.has(line)) {
        this.chosen.add(line);
      }
    }
  }

  clear(): void {
    this.chosen.clear();
  }

  get size(): number {
    return this.chosen.size;
  }

  /** Selected lines in ascending order, ready for submission. */
  lines(): number[] {
    return [...this.chosen].sort((a, b) => a - b);
  }
}
