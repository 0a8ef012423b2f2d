/** DOM construction for the three screens.
 *
 * Rendering is a full rebuild on every state change; the app is small
 * enough that diffing would buy nothing.  Numbers on screen are service
 * values passed through String(), never reformatted and never derived,
 * except for the percentage geometry that positions bars and the probe
 * wheel.  Inputs tagged data-keep survive a rebuild with their text.
 */

import { DmAnswer, Evaluation, Interval, SessionView } from "./api.js";
import { AppState } from "./state.js";

export interface Handlers {
  onStart(target: string[], epsilon: number): void;
  onAnswer(ans: DmAnswer): void;
  onRetry(): void;
  onResume(id: string): void;
  onAbandon(): void;
  onCompare(a: string, b: string, assessment: string, mode: string): void;
}

type Child = Node | string;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function chips(labels: string[]): HTMLElement {
  const wrap = el("div", { class: "chips" });
  for (const label of labels) wrap.append(el("span", { class: "chip" }, label));
  return wrap;
}

/** Closed interval as a horizontal bar; endpoints are echoed verbatim. */
function intervalBar(field: string, lo: number, hi: number, caption: string): HTMLElement {
  const left = Math.max(0, Math.min(1, lo)) * 100;
  const width = Math.max(0, Math.min(1, hi) - Math.max(0, Math.min(1, lo))) * 100;
  const fill = el("div", { class: "fill" });
  fill.style.left = `${left}%`;
  fill.style.width = `${width}%`;
  return el(
    "div",
    { class: "bracket", "data-field": field, "data-lo": String(lo), "data-hi": String(hi) },
    el("div", { class: "bracket-caption" }, caption),
    el("div", { class: "track" }, fill),
    el(
      "div",
      { class: "bracket-ends" },
      el("span", { class: "end lo" }, String(lo)),
      el("span", { class: "end hi" }, String(hi)),
    ),
  );
}

function wheel(probeU: number): HTMLElement {
  const node = el("div", { class: "wheel", role: "img" });
  const pct = Math.max(0, Math.min(1, probeU)) * 100;
  node.style.background = `conic-gradient(var(--accent) 0% ${pct}%, var(--well) ${pct}% 100%)`;
  node.append(el("span", { class: "wheel-label" }, String(probeU)));
  return node;
}

function banner(state: AppState, handlers: Handlers): HTMLElement[] {
  const out: HTMLElement[] = [];
  if (state.notice !== null) {
    out.push(el("div", { class: "notice", "data-field": "notice" }, state.notice));
  }
  if (state.error !== null) {
    const box = el("div", { class: "error", "data-field": "error" }, state.error);
    if (state.pendingAnswer !== null) {
      const retry = el("button", { class: "ghost", "data-action": "retry" }, "Retry");
      retry.addEventListener("click", () => handlers.onRetry());
      box.append(" ", retry);
    }
    out.push(box);
  }
  return out;
}

function onboarding(state: AppState, handlers: Handlers): HTMLElement {
  const screen = el("section", { class: "screen", "data-screen": "onboarding" });
  screen.append(
    el("h1", {}, "bflottery"),
    el(
      "p",
      { class: "tagline" },
      "Answer simple either-or questions and the service recovers how you weigh a set of outcomes under ambiguity.",
    ),
    ...banner(state, handlers),
  );

  const target = el("input", {
    id: "target-input",
    "data-keep": "",
    placeholder: "$100, $0",
    autocomplete: "off",
  });
  const epsilon = el("input", {
    id: "epsilon-input",
    "data-keep": "",
    value: "0.05",
    inputmode: "decimal",
    autocomplete: "off",
  });
  const start = el("button", { id: "start-btn", class: "primary" }, "Start the interview");
  start.disabled = state.busy;
  start.addEventListener("click", () => {
    const labels = target.value
      .split(",")
      .map((s) => s.trim())
      .filter((s) => s !== "");
    handlers.onStart(labels, Number(epsilon.value));
  });

  screen.append(
    el(
      "div",
      { class: "card form" },
      el("label", { for: "target-input" }, "Outcome labels, separated by commas"),
      target,
      el("label", { for: "epsilon-input" }, "Stop once the brackets are this tight"),
      epsilon,
      start,
    ),
  );

  if (state.recent.length > 0) {
    const list = el("ul", { class: "recent" });
    for (const view of state.recent) {
      const resume = el("button", { class: "ghost", "data-resume": view.id }, "Open");
      resume.disabled = state.busy;
      resume.addEventListener("click", () => handlers.onResume(view.id));
      list.append(
        el(
          "li",
          {},
          el("span", { class: "mono" }, view.id),
          " ",
          view.target.join(", "),
          view.done ? " (finished)" : ` (${String(view.queries_used)} answers in)`,
          " ",
          resume,
        ),
      );
    }
    screen.append(el("h2", {}, "Sessions on this service"), list);
  }
  return screen;
}

const GLOSS: Record<DmAnswer, string> = {
  target_preferred: "kept the prospect",
  probe_preferred: "took the draw",
  incomparable: "could not compare",
};

function interview(state: AppState, handlers: Handlers): HTMLElement {
  const session = state.session as SessionView;
  const query = state.query;
  const screen = el("section", {
    class: "screen",
    "data-screen": "interview",
    "data-session-id": session.id,
  });
  screen.append(
    el("h1", {}, "Which would you rather hold?"),
    ...banner(state, handlers),
  );

  if (query !== null) {
    const answerButton = (ans: DmAnswer, label: string) => {
      const btn = el("button", { class: "answer", "data-answer": ans }, label);
      btn.disabled = state.busy;
      btn.addEventListener("click", () => handlers.onAnswer(ans));
      return btn;
    };
    screen.append(
      el(
        "div",
        {
          class: "card query",
          "data-seq": String(query.seq),
          "data-probe-u": String(query.probe_u),
        },
        el(
          "div",
          { class: "side" },
          el("h2", {}, "The uncertain prospect"),
          chips(query.target),
          el("p", { class: "hint" }, "Whatever this set delivers, you get."),
        ),
        el(
          "div",
          { class: "side" },
          el("h2", {}, "A straight draw"),
          wheel(query.probe_u),
          el(
            "p",
            { class: "hint" },
            "Best outcome with chance ",
            el("span", { class: "mono" }, String(query.probe_u)),
            ", worst otherwise.",
          ),
        ),
      ),
      el(
        "div",
        { class: "answers" },
        answerButton("target_preferred", "I prefer the prospect"),
        answerButton("probe_preferred", "I prefer the draw"),
        answerButton("incomparable", "I cannot compare them"),
      ),
    );
  }

  const b = session.brackets;
  screen.append(
    el(
      "div",
      { class: "card" },
      el("h2", {}, "Where your attitude is pinned so far"),
      intervalBar("bracket-lower", b.lower[0], b.lower[1], "guaranteed value u"),
      intervalBar("bracket-upper", b.upper[0], b.upper[1], "optimistic value 1 - v"),
      el(
        "p",
        { class: "hint", "data-field": "progress" },
        `${String(session.queries_used)} of at most ${String(session.max_queries)} questions answered`,
      ),
    ),
  );

  const transcript = session.transcript ?? [];
  if (transcript.length > 0) {
    const list = el("ol", { class: "transcript", "data-field": "transcript" });
    for (const entry of transcript) {
      list.append(
        el(
          "li",
          {},
          el("span", { class: "mono" }, `q${String(entry.seq)} at p = ${String(entry.probe_u)}`),
          `: ${GLOSS[entry.response]}`,
        ),
      );
    }
    screen.append(el("h2", {}, "Your answers"), list);
  }

  const abandon = el("button", { class: "ghost", "data-action": "abandon" }, "Start over");
  abandon.disabled = state.busy;
  abandon.addEventListener("click", () => handlers.onAbandon());
  screen.append(el("p", {}, abandon));
  return screen;
}

function evaluationFigures(prefix: string, ev: Evaluation): HTMLElement {
  const iv: Interval = ev.interval;
  const block = el(
    "div",
    { class: "figures" },
    intervalBar(`${prefix}-interval`, iv.lower, iv.upper, "utility interval"),
    el(
      "dl",
      {},
      el("dt", {}, "interval"),
      el(
        "dd",
        {},
        "[",
        el("span", { "data-field": `${prefix}-interval-lower` }, String(iv.lower)),
        ", ",
        el("span", { "data-field": `${prefix}-interval-upper` }, String(iv.upper)),
        "]",
      ),
      el("dt", {}, "envelope"),
      el(
        "dd",
        {},
        "[",
        el("span", { "data-field": `${prefix}-choquet-lower` }, String(ev.choquet.lower)),
        ", ",
        el("span", { "data-field": `${prefix}-choquet-upper` }, String(ev.choquet.upper)),
        "]",
      ),
      el("dt", {}, "pignistic"),
      el("dd", { "data-field": `${prefix}-pignistic` }, String(ev.pignistic)),
      el("dt", {}, "evidence"),
      el("dd", { "data-field": `${prefix}-classification` }, ev.classification),
    ),
  );
  if (ev.jaffray !== null) {
    const dl = block.querySelector("dl") as HTMLDListElement;
    dl.append(
      el("dt", {}, "jaffray"),
      el("dd", { "data-field": `${prefix}-jaffray` }, String(ev.jaffray)),
    );
  }
  return block;
}

function lotteryTemplate(target: string[], focal: Array<{ set: string[]; mass: number }>): string {
  return JSON.stringify(
    {
      outcomes: { frame: { id: "outcomes", labels: target }, ranking: target },
      bpa: { focal },
    },
    null,
    2,
  );
}

function assessmentTemplate(target: string[], indices: { alpha: number; beta: number } | null): string {
  const singles: Record<string, number> = {};
  const n = target.length;
  target.forEach((label, i) => {
    singles[label] = n === 1 ? 1 : (n - 1 - i) / (n - 1);
  });
  const model =
    indices === null
      ? { kind: "constant_index", alpha: 1, beta: 1 }
      : { kind: "constant_index", alpha: indices.alpha, beta: indices.beta };
  return JSON.stringify(
    {
      outcomes: { frame: { id: "outcomes", labels: target }, ranking: target },
      singleton_utilities: singles,
      model,
    },
    null,
    2,
  );
}

function completed(state: AppState, handlers: Handlers): HTMLElement {
  const session = state.session as SessionView;
  const report = state.report;
  const screen = el("section", {
    class: "screen",
    "data-screen": "completed",
    "data-session-id": session.id,
  });
  screen.append(el("h1", {}, "Interview finished"), ...banner(state, handlers));

  if (report !== null) {
    const rows = el(
      "dl",
      {},
      el("dt", {}, "guaranteed value u"),
      el("dd", { class: "mono", "data-field": "u" }, String(report.recovered.u)),
      el("dt", {}, "doubt v"),
      el("dd", { class: "mono", "data-field": "v" }, String(report.recovered.v)),
      el("dt", {}, "suspended weight w"),
      el("dd", { class: "mono", "data-field": "w" }, String(report.recovered.w)),
      el("dt", {}, "questions used"),
      el("dd", { class: "mono", "data-field": "queries-used" }, String(report.queries_used)),
    );
    if (report.indices !== null) {
      rows.append(
        el("dt", {}, "caution index alpha"),
        el("dd", { class: "mono", "data-field": "alpha" }, String(report.indices.alpha)),
        el("dt", {}, "caution index beta"),
        el("dd", { class: "mono", "data-field": "beta" }, String(report.indices.beta)),
      );
    } else {
      rows.append(
        el("dt", {}, "caution indices"),
        el("dd", {}, "no constant pair reproduces this attitude"),
      );
    }
    screen.append(
      el(
        "div",
        { class: "card" },
        el("h2", {}, "Your attitude toward "),
        chips(report.target),
        intervalBar(
          "recovered-interval",
          report.interval.lower,
          report.interval.upper,
          "recovered utility interval",
        ),
        rows,
      ),
    );
  }

  // Comparison workspace: paste or tweak two lottery documents, reuse the
  // assessment the interview just produced, and let the service judge.
  const target = report?.target ?? session.target;
  const best = target[0] ?? "best";
  const worst = target[target.length - 1] ?? "worst";
  const a = el("textarea", { id: "cmp-a", "data-keep": "", rows: "10", spellcheck: "false" });
  a.value = lotteryTemplate(target, [
    { set: [best], mass: 0.5 },
    { set: [worst], mass: 0.5 },
  ]);
  const bArea = el("textarea", { id: "cmp-b", "data-keep": "", rows: "10", spellcheck: "false" });
  bArea.value = lotteryTemplate(target, [{ set: target, mass: 1 }]);
  const assess = el("textarea", {
    id: "cmp-assessment",
    "data-keep": "",
    rows: "10",
    spellcheck: "false",
  });
  assess.value = assessmentTemplate(target, report?.indices ?? null);
  const mode = el("select", { id: "cmp-mode", "data-keep": "" });
  mode.append(el("option", { value: "interval" }, "interval order"));
  mode.append(el("option", { value: "strong" }, "strong order"));
  const go = el("button", { class: "primary", "data-action": "compare" }, "Compare");
  go.disabled = state.busy;
  go.addEventListener("click", () =>
    handlers.onCompare(a.value, bArea.value, assess.value, mode.value),
  );

  const workspace = el(
    "div",
    { class: "card workspace" },
    el("h2", {}, "Try the recovered attitude on two lotteries"),
    el(
      "p",
      { class: "hint" },
      "The templates guess a ranking from label order and space the singleton utilities evenly; edit them before trusting a verdict.",
    ),
    el(
      "div",
      { class: "workspace-grid" },
      el("div", {}, el("label", { for: "cmp-a" }, "Lottery A"), a),
      el("div", {}, el("label", { for: "cmp-b" }, "Lottery B"), bArea),
      el("div", {}, el("label", { for: "cmp-assessment" }, "Assessment"), assess),
    ),
    el("p", {}, el("label", { for: "cmp-mode" }, "Order "), mode, " ", go),
  );

  if (state.compare.error !== null) {
    workspace.append(el("div", { class: "error", "data-field": "compare-error" }, state.compare.error));
  }
  const reply = state.compare.reply;
  if (reply !== null) {
    workspace.append(
      el(
        "div",
        { class: "verdict-row" },
        el("span", { class: "verdict", "data-field": "verdict" }, reply.verdict),
        el("span", { class: "hint" }, ` under the ${reply.mode} order, A against B`),
      ),
      el(
        "div",
        { class: "workspace-grid" },
        el("div", {}, el("h3", {}, "Lottery A"), evaluationFigures("a", reply.a)),
        el("div", {}, el("h3", {}, "Lottery B"), evaluationFigures("b", reply.b)),
      ),
    );
  }
  screen.append(workspace);

  const again = el("button", { class: "ghost", "data-action": "abandon" }, "New interview");
  again.disabled = state.busy;
  again.addEventListener("click", () => handlers.onAbandon());
  screen.append(el("p", {}, again));
  return screen;
}

export function renderApp(root: HTMLElement, state: AppState, handlers: Handlers): void {
  const kept = new Map<string, string>();
  for (const node of root.querySelectorAll<HTMLElement>("[data-keep]")) {
    const field = node as HTMLInputElement | HTMLTextAreaElement | HTMLSelectElement;
    if (field.id !== "") kept.set(field.id, field.value);
  }

  let screen: HTMLElement;
  if (state.screen === "interview" && state.session !== null) {
    screen = interview(state, handlers);
  } else if (state.screen === "completed" && state.session !== null) {
    screen = completed(state, handlers);
  } else {
    screen = onboarding(state, handlers);
  }
  if (state.busy) screen.classList.add("busy");
  root.replaceChildren(screen);

  for (const node of root.querySelectorAll<HTMLElement>("[data-keep]")) {
    const field = node as HTMLInputElement | HTMLTextAreaElement | HTMLSelectElement;
    const old = kept.get(field.id);
    if (old !== undefined) field.value = old;
  }
}
