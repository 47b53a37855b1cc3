/** Trailing-edge debounce; the last call within the window wins. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
  setTimer: typeof setTimeout = setTimeout,
  clearTimer: typeof clearTimeout = clearTimeout,
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (handle !== null) clearTimer(handle);
    handle = setTimer(() => {
      handle = null;
      fn(...args);
    }, waitMs);
  };
}
