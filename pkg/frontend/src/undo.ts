// Snapshot-based undo/redo for mask edits. Depth covers well past the
// guaranteed 20 strokes; snapshots are a few KB for typical event sizes.
export class UndoStack {
  private undoStack: Uint8Array[] = [];
  private redoStack: Uint8Array[] = [];

  constructor(private maxDepth: number = 64) {
    if (maxDepth < 20) throw new Error("undo depth must be at least 20");
  }

  get undoDepth(): number {
    return this.undoStack.length;
  }

  get redoDepth(): number {
    return this.redoStack.length;
  }

  // call with the state as it is *before* an edit is applied
  pushState(before: Uint8Array): void {
    this.undoStack.push(before.slice());
    if (this.undoStack.length > this.maxDepth) this.undoStack.shift();
    this.redoStack = [];
  }

  undo(current: Uint8Array): Uint8Array | null {
    const prev = this.undoStack.pop();
    if (prev === undefined) return null;
    this.redoStack.push(current.slice());
    return prev;
  }

  redo(current: Uint8Array): Uint8Array | null {
    const next = this.redoStack.pop();
    if (next === undefined) return null;
    this.undoStack.push(current.slice());
    return next;
  }

  clear(): void {
    this.undoStack = [];
    this.redoStack = [];
  }
}
