/** Wires the store to the renderer inside one container element. */

import { DmAnswer, ServiceClient } from "./api.js";
import { SessionStore } from "./state.js";
import { Handlers, renderApp } from "./render.js";

export interface App {
  root: HTMLElement;
  store: SessionStore;
  /** Resolves once every operation started so far has finished. */
  settled(): Promise<void>;
  unmount(): void;
}

export function mount(root: HTMLElement, base: string, storage?: Storage): App {
  const client = new ServiceClient(base.replace(/\/+$/, ""));
  const store = new SessionStore(client, storage ?? window.localStorage);

  // Operations are fired immediately (the store ignores overlapping calls)
  // but also chained, so tests can await a quiet moment.
  let chain: Promise<void> = Promise.resolve();
  function track(op: Promise<void>): void {
    chain = chain.then(() => op);
  }
  async function settled(): Promise<void> {
    let seen: Promise<void>;
    do {
      seen = chain;
      await seen;
    } while (seen !== chain);
  }

  const handlers: Handlers = {
    onStart: (target, epsilon) => track(store.start(target, epsilon)),
    onAnswer: (ans: DmAnswer) => track(store.answer(ans)),
    onRetry: () => track(store.retry()),
    onResume: (id) => track(store.resume(id)),
    onAbandon: () => track(store.abandon()),
    onCompare: (a, b, assessment, mode) =>
      track(store.runComparison(a, b, assessment, mode)),
  };

  const unsubscribe = store.subscribe((state) => renderApp(root, state, handlers));
  renderApp(root, store.snapshot(), handlers);
  track(store.boot());

  return {
    root,
    store,
    settled,
    unmount() {
      unsubscribe();
      root.replaceChildren();
    },
  };
}
