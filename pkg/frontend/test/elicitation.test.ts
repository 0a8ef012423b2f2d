/** End-to-end: the client drives a live service through a whole interview.
 *
 * A scripted decision maker with a known attitude answers every question by
 * clicking the actual buttons.  What the page shows must be, character for
 * character, what the service reports; the client is not allowed to compute
 * anything on its own.
 */

import { afterAll, beforeAll, expect, test } from "vitest";
import type {
  AssessmentReport,
  CompareReply,
  DmAnswer,
  NextQueryReply,
  SessionView,
} from "../src/api.js";
import { mount, type App } from "../src/app.js";
import { STORAGE_KEY } from "../src/state.js";
import { startService, type LiveService } from "./service.js";

let live: LiveService;

beforeAll(async () => {
  live = await startService();
});

afterAll(async () => {
  await live.stop();
});

const TRUTH = { u: 0.2, v: 0.7 };

function oracle(probeU: number): DmAnswer {
  if (probeU <= TRUTH.u) return "target_preferred";
  if (probeU >= 1 - TRUTH.v) return "probe_preferred";
  return "incomparable";
}

async function call<T>(method: string, path: string, body?: unknown): Promise<T> {
  const res = await fetch(live.base + path, {
    method,
    headers: body === undefined ? undefined : { "content-type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  if (!res.ok) throw new Error(`${method} ${path} -> ${String(res.status)}: ${await res.text()}`);
  return (await res.json()) as T;
}

function container(): HTMLElement {
  const node = document.createElement("div");
  document.body.append(node);
  return node;
}

function field(root: HTMLElement, name: string): string {
  const node = root.querySelector(`[data-field="${name}"]`);
  expect(node, `missing [data-field="${name}"]`).not.toBeNull();
  return node!.textContent ?? "";
}

function attr(root: HTMLElement, selector: string, name: string): string {
  const node = root.querySelector(selector);
  expect(node, `missing ${selector}`).not.toBeNull();
  return node!.getAttribute(name) ?? "";
}

/** Everything bracket-shaped the interview screen currently shows. */
function shownState(root: HTMLElement) {
  return {
    lowerLo: attr(root, '[data-field="bracket-lower"]', "data-lo"),
    lowerHi: attr(root, '[data-field="bracket-lower"]', "data-hi"),
    upperLo: attr(root, '[data-field="bracket-upper"]', "data-lo"),
    upperHi: attr(root, '[data-field="bracket-upper"]', "data-hi"),
    lowerText: root.querySelector('[data-field="bracket-lower"] .end.lo')!.textContent,
    seq: attr(root, "[data-seq]", "data-seq"),
    probe: attr(root, "[data-probe-u]", "data-probe-u"),
    progress: field(root, "progress"),
  };
}

async function startInterview(app: App, labels: string, epsilon: string): Promise<string> {
  (app.root.querySelector("#target-input") as HTMLInputElement).value = labels;
  (app.root.querySelector("#epsilon-input") as HTMLInputElement).value = epsilon;
  (app.root.querySelector("#start-btn") as HTMLButtonElement).click();
  await app.settled();
  const wrap = app.root.querySelector("[data-session-id]");
  expect(wrap, "no session screen after start").not.toBeNull();
  return wrap!.getAttribute("data-session-id")!;
}

test("a fresh service and a fresh browser land on onboarding", async () => {
  window.localStorage.clear();
  const app = mount(container(), live.base);
  await app.settled();
  expect(app.root.querySelector('[data-screen="onboarding"]')).not.toBeNull();
  expect(app.root.querySelector("#start-btn")).not.toBeNull();
  expect(app.root.querySelector("[data-resume]")).toBeNull();
  app.unmount();
});

test("a scripted interview, reloaded midway, ends exactly on the service's numbers", async () => {
  window.localStorage.clear();
  let app = mount(container(), live.base);
  await app.settled();
  const sid = await startInterview(app, "$100, $0", "0.005");

  let clicks = 0;
  let reloaded = false;
  let checkedIncomparable = false;
  while (app.root.querySelector('[data-screen="interview"]') !== null) {
    expect(clicks, "interview did not terminate").toBeLessThan(40);

    if (clicks === 7 && !reloaded) {
      reloaded = true;
      const before = shownState(app.root);
      const authority = await call<SessionView>("GET", `/sessions/${sid}`);

      // Simulate a page reload: tear the app down and mount a fresh one
      // that only has localStorage to go on.
      app.unmount();
      app.root.remove();
      app = mount(container(), live.base);
      await app.settled();

      const after = shownState(app.root);
      expect(after).toEqual(before);
      expect(after.lowerLo).toBe(String(authority.brackets.lower[0]));
      expect(after.lowerHi).toBe(String(authority.brackets.lower[1]));
      expect(after.upperLo).toBe(String(authority.brackets.upper[0]));
      expect(after.upperHi).toBe(String(authority.brackets.upper[1]));
      expect(Number(after.seq)).toBe(authority.queries_used);
    }

    const probe = Number(attr(app.root, "[data-probe-u]", "data-probe-u"));
    const ans = oracle(probe);
    const btn = app.root.querySelector<HTMLButtonElement>(`button[data-answer="${ans}"]`);
    expect(btn).not.toBeNull();
    expect(btn!.disabled).toBe(false);
    btn!.click();
    await app.settled();
    clicks += 1;

    if (ans === "incomparable" && !checkedIncomparable) {
      checkedIncomparable = true;
      // "Cannot compare" caps the lower bracket and lifts the upper one.
      if (app.root.querySelector('[data-screen="interview"]') !== null) {
        const shown = shownState(app.root);
        expect(Number(shown.lowerHi)).toBeLessThanOrEqual(probe);
        expect(Number(shown.upperLo)).toBeGreaterThanOrEqual(probe);
      }
    }
  }
  expect(checkedIncomparable).toBe(true);

  expect(app.root.querySelector('[data-screen="completed"]')).not.toBeNull();
  const report = await call<AssessmentReport>("GET", `/sessions/${sid}/assessment`);
  expect(report.indices).not.toBeNull();

  // The headline check: what the page displays is the service's answer,
  // digit for digit.
  expect(field(app.root, "alpha")).toBe(String(report.indices!.alpha));
  expect(field(app.root, "beta")).toBe(String(report.indices!.beta));
  expect(field(app.root, "u")).toBe(String(report.recovered.u));
  expect(field(app.root, "v")).toBe(String(report.recovered.v));
  expect(field(app.root, "w")).toBe(String(report.recovered.w));
  expect(field(app.root, "queries-used")).toBe(String(report.queries_used));

  // And the recovered attitude sits on the scripted one.
  expect(Math.abs(report.recovered.u - TRUTH.u)).toBeLessThanOrEqual(0.005 + 1e-12);
  expect(Math.abs(report.recovered.v - TRUTH.v)).toBeLessThanOrEqual(0.005 + 1e-12);
  expect(report.queries_used).toBeLessThanOrEqual(18);
  app.unmount();
});

test("a question answered behind the client's back is refetched, not overwritten", async () => {
  window.localStorage.clear();
  const app = mount(container(), live.base);
  await app.settled();
  const sid = await startInterview(app, "win, lose", "0.1");
  expect(attr(app.root, "[data-seq]", "data-seq")).toBe("0");

  // Answer question 0 through the API directly, as another tab would.
  await call("POST", `/sessions/${sid}/responses`, { seq: 0, response: "incomparable" });

  // The on-screen card is now stale; clicking must not double-submit.
  app.root.querySelector<HTMLButtonElement>('button[data-answer="target_preferred"]')!.click();
  await app.settled();

  expect(app.root.querySelector('[data-field="notice"]')).not.toBeNull();
  expect(attr(app.root, "[data-seq]", "data-seq")).toBe("1");
  const authority = await call<SessionView>("GET", `/sessions/${sid}`);
  expect(authority.queries_used).toBe(1);
  expect(authority.transcript![0]).toMatchObject({ seq: 0, response: "incomparable" });
  expect(attr(app.root, '[data-field="bracket-lower"]', "data-lo")).toBe(
    String(authority.brackets.lower[0]),
  );
  expect(attr(app.root, '[data-field="bracket-lower"]', "data-hi")).toBe(
    String(authority.brackets.lower[1]),
  );
  expect(attr(app.root, '[data-field="bracket-upper"]', "data-lo")).toBe(
    String(authority.brackets.upper[0]),
  );
  app.unmount();
});

test("a response lost to the network is kept and can be retried", async () => {
  window.localStorage.clear();
  const app = mount(container(), live.base);
  await app.settled();
  const sid = await startInterview(app, "up, down", "0.1");
  const seq = Number(attr(app.root, "[data-seq]", "data-seq"));

  const realFetch = globalThis.fetch;
  globalThis.fetch = () => Promise.reject(new TypeError("socket fell over"));
  try {
    app.root.querySelector<HTMLButtonElement>('button[data-answer="probe_preferred"]')!.click();
    await app.settled();
  } finally {
    globalThis.fetch = realFetch;
  }

  expect(app.root.querySelector('[data-field="error"]')).not.toBeNull();
  expect(attr(app.root, "[data-seq]", "data-seq")).toBe(String(seq));
  const retry = app.root.querySelector<HTMLButtonElement>('[data-action="retry"]');
  expect(retry).not.toBeNull();
  retry!.click();
  await app.settled();

  expect(app.root.querySelector('[data-field="error"]')).toBeNull();
  const view = await call<SessionView>("GET", `/sessions/${sid}`);
  expect(view.transcript!.at(-1)).toMatchObject({ seq, response: "probe_preferred" });
  app.unmount();
});

test("resuming a finished session shows the assessment and the workspace judges lotteries", async () => {
  // Complete a session without the UI, then hand the browser only its id.
  const created = await call<SessionView>("POST", "/sessions", {
    target: ["$100", "$0"],
    epsilon: 0.05,
  });
  for (let i = 0; i < 40; i += 1) {
    const next = await call<NextQueryReply>("GET", `/sessions/${created.id}/next-query`);
    if (next.done || next.query === null) break;
    await call("POST", `/sessions/${created.id}/responses`, {
      seq: next.query.seq,
      response: oracle(next.query.probe_u),
    });
  }

  window.localStorage.clear();
  window.localStorage.setItem(STORAGE_KEY, created.id);
  const app = mount(container(), live.base);
  await app.settled();
  expect(app.root.querySelector('[data-screen="completed"]')).not.toBeNull();

  const report = await call<AssessmentReport>("GET", `/sessions/${created.id}/assessment`);
  expect(field(app.root, "u")).toBe(String(report.recovered.u));
  expect(field(app.root, "alpha")).toBe(String(report.indices!.alpha));

  // Exercise the workspace with explicit documents; the displayed alpha
  // and beta round-trip into the assessment unchanged.
  const outcomes = { frame: { id: "payoff", labels: ["$100", "$0"] }, ranking: ["$100", "$0"] };
  const coin = {
    outcomes,
    bpa: { focal: [{ set: ["$100"], mass: 0.5 }, { set: ["$0"], mass: 0.5 }] },
  };
  const mystery = { outcomes, bpa: { focal: [{ set: ["$100", "$0"], mass: 1 }] } };
  const attitude = {
    outcomes,
    singleton_utilities: { "$100": 1, "$0": 0 },
    model: {
      kind: "constant_index",
      alpha: Number(field(app.root, "alpha")),
      beta: Number(field(app.root, "beta")),
    },
  };
  (app.root.querySelector("#cmp-a") as HTMLTextAreaElement).value = JSON.stringify(coin);
  (app.root.querySelector("#cmp-b") as HTMLTextAreaElement).value = JSON.stringify(mystery);
  (app.root.querySelector("#cmp-assessment") as HTMLTextAreaElement).value =
    JSON.stringify(attitude);
  app.root.querySelector<HTMLButtonElement>('[data-action="compare"]')!.click();
  await app.settled();

  const direct = await call<CompareReply>("POST", "/compare", {
    a: coin,
    b: mystery,
    assessment: attitude,
    mode: "interval",
  });
  expect(field(app.root, "verdict")).toBe(direct.verdict);
  expect(field(app.root, "a-interval-lower")).toBe(String(direct.a.interval.lower));
  expect(field(app.root, "a-interval-upper")).toBe(String(direct.a.interval.upper));
  expect(field(app.root, "b-interval-lower")).toBe(String(direct.b.interval.lower));
  expect(field(app.root, "b-interval-upper")).toBe(String(direct.b.interval.upper));
  expect(field(app.root, "a-pignistic")).toBe(String(direct.a.pignistic));
  app.unmount();
});
