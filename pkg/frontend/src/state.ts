/** Client-side session state.
 *
 * The store is a thin pump between the service and the DOM: it remembers
 * which session this tab is working on, runs one request chain at a time,
 * and republishes whatever view the service returned.  After every answer
 * round-trip the brackets held here are exactly the ones the service sent
 * back, so a repaint can never drift from the authoritative state.
 */

import {
  AssessmentReport,
  CompareReply,
  DmAnswer,
  NextQuery,
  ServiceClient,
  ServiceError,
  SessionView,
} from "./api.js";

export type Screen = "onboarding" | "interview" | "completed";

export interface CompareState {
  reply: CompareReply | null;
  error: string | null;
}

export interface AppState {
  screen: Screen;
  busy: boolean;
  /** Transient explanation of a recovery the store performed on its own. */
  notice: string | null;
  error: string | null;
  /** Answer that failed to send; kept so a retry submits the same choice. */
  pendingAnswer: DmAnswer | null;
  session: SessionView | null;
  query: NextQuery | null;
  report: AssessmentReport | null;
  compare: CompareState;
  recent: SessionView[];
}

export const STORAGE_KEY = "bflottery.session";

function freshState(): AppState {
  return {
    screen: "onboarding",
    busy: false,
    notice: null,
    error: null,
    pendingAnswer: null,
    session: null,
    query: null,
    report: null,
    compare: { reply: null, error: null },
    recent: [],
  };
}

function describe(err: unknown): string {
  if (err instanceof ServiceError) {
    return err.code === "network" ? err.message : `${err.code}: ${err.message}`;
  }
  return String(err);
}

export class SessionStore {
  private state = freshState();
  private listeners = new Set<(s: AppState) => void>();

  constructor(
    private readonly client: ServiceClient,
    private readonly storage: Storage,
  ) {}

  snapshot(): AppState {
    return this.state;
  }

  subscribe(fn: (s: AppState) => void): () => void {
    this.listeners.add(fn);
    return () => {
      this.listeners.delete(fn);
    };
  }

  private patch(delta: Partial<AppState>): void {
    this.state = { ...this.state, ...delta };
    for (const fn of this.listeners) fn(this.state);
  }

  /** Serialize operations: a click while a request is in flight is a no-op. */
  private async run(work: () => Promise<void>): Promise<void> {
    if (this.state.busy) return;
    this.patch({ busy: true, error: null, notice: null });
    try {
      await work();
    } catch (err) {
      this.patch({ error: describe(err) });
    } finally {
      this.patch({ busy: false });
    }
  }

  /** Resume the stored session if there is one, otherwise show onboarding. */
  boot(): Promise<void> {
    return this.run(async () => {
      const id = this.storage.getItem(STORAGE_KEY);
      if (id !== null) {
        try {
          await this.loadSession(id);
          return;
        } catch (err) {
          if (!(err instanceof ServiceError) || err.status !== 404) throw err;
          this.storage.removeItem(STORAGE_KEY);
        }
      }
      await this.showOnboarding();
    });
  }

  start(target: string[], epsilon: number): Promise<void> {
    return this.run(async () => {
      const view = await this.client.createSession(target, epsilon);
      this.storage.setItem(STORAGE_KEY, view.id);
      await this.loadSession(view.id);
    });
  }

  resume(id: string): Promise<void> {
    return this.run(async () => {
      this.storage.setItem(STORAGE_KEY, id);
      await this.loadSession(id);
    });
  }

  /** Forget the active session (it stays on the service) and start over. */
  abandon(): Promise<void> {
    return this.run(async () => {
      this.storage.removeItem(STORAGE_KEY);
      await this.showOnboarding();
    });
  }

  answer(ans: DmAnswer): Promise<void> {
    return this.run(async () => {
      const { screen, session, query } = this.state;
      if (screen !== "interview" || session === null || query === null) return;
      this.patch({ pendingAnswer: null });
      try {
        const view = await this.client.respond(session.id, query.seq, ans);
        await this.settle(view);
      } catch (err) {
        if (err instanceof ServiceError && err.code === "stale_query") {
          // The question on screen was answered through some other door
          // (another tab, a script).  Whatever the service holds now wins.
          this.patch({
            notice: "That question was already answered elsewhere; showing the service's current state.",
          });
          await this.loadSession(session.id);
          return;
        }
        if (err instanceof ServiceError && err.code === "network") {
          this.patch({
            error: "The service did not answer. Your choice is kept; retry when it is back.",
            pendingAnswer: ans,
          });
          return;
        }
        throw err;
      }
    });
  }

  /** Re-send the answer that was lost to a network failure. */
  retry(): Promise<void> {
    const ans = this.state.pendingAnswer;
    if (ans === null) return Promise.resolve();
    return this.answer(ans);
  }

  runComparison(aText: string, bText: string, assessmentText: string, mode: string): Promise<void> {
    return this.run(async () => {
      let a: unknown, b: unknown, assessment: unknown;
      try {
        a = JSON.parse(aText);
        b = JSON.parse(bText);
        assessment = JSON.parse(assessmentText);
      } catch (err) {
        this.patch({ compare: { reply: null, error: `not valid JSON: ${String(err)}` } });
        return;
      }
      try {
        const reply = await this.client.compare(a, b, assessment, mode);
        this.patch({ compare: { reply, error: null } });
      } catch (err) {
        // A malformed lottery is a workspace problem, not a session problem.
        this.patch({ compare: { reply: null, error: describe(err) } });
      }
    });
  }

  private async showOnboarding(): Promise<void> {
    const { sessions } = await this.client.listSessions();
    this.patch({
      screen: "onboarding",
      session: null,
      query: null,
      report: null,
      compare: { reply: null, error: null },
      recent: sessions,
    });
  }

  private async loadSession(id: string): Promise<void> {
    const view = await this.client.session(id);
    this.storage.setItem(STORAGE_KEY, id);
    await this.settle(view);
  }

  /** Land on whichever screen the service says this session is on. */
  private async settle(view: SessionView): Promise<void> {
    if (view.done) {
      const report = await this.client.assessment(view.id);
      this.patch({ screen: "completed", session: view, query: null, report });
      return;
    }
    const next = await this.client.nextQuery(view.id);
    if (next.done || next.query === null) {
      const fresh = await this.client.session(view.id);
      const report = await this.client.assessment(view.id);
      this.patch({ screen: "completed", session: fresh, query: null, report });
      return;
    }
    this.patch({ screen: "interview", session: view, query: next.query, report: null });
  }
}
