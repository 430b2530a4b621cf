/** Timing helpers for the edit -> query pipeline. */

export type Debounced<A extends unknown[]> = {
  (...args: A): void;
  cancel(): void;
  flush(): void;
};

/** Delay calls until the arguments have been quiet for delayMs.  Only the
 * most recent arguments are delivered. */
export function debounce<A extends unknown[]>(
  delayMs: number,
  fn: (...args: A) => void,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;

  const wrapped = (...args: A): void => {
    pending = args;
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      const args2 = pending!;
      pending = null;
      fn(...args2);
    }, delayMs);
  };
  wrapped.cancel = (): void => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    pending = null;
  };
  wrapped.flush = (): void => {
    if (timer === null) return;
    clearTimeout(timer);
    timer = null;
    const args = pending!;
    pending = null;
    fn(...args);
  };
  return wrapped;
}

/**
 * Serialize async tasks with a one-slot queue.  At most one task runs at a
 * time; while one is running, newly submitted tasks replace each other so
 * only the latest runs next.  Tasks submitted while idle start immediately.
 * A task that rejects does not stall the queue, and the runner itself never
 * rejects; tasks are expected to report their own failures.
 */
export function singleFlight(): (task: () => Promise<void>) => void {
  let running = false;
  let next: (() => Promise<void>) | null = null;

  const pump = (task: () => Promise<void>): void => {
    running = true;
    task()
      .catch(() => undefined)
      .finally(() => {
        running = false;
        if (next !== null) {
          const queued = next;
          next = null;
          pump(queued);
        }
      });
  };

  return (task) => {
    if (running) {
      next = task;
    } else {
      pump(task);
    }
  };
}
