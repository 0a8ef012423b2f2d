/** Typed access to the decision service's HTTP/JSON API.
 *
 * Every number the client shows comes out of these calls verbatim.  The
 * browser side never recomputes utilities, brackets, or verdicts; it only
 * arranges what the service said.
 */

export const DEFAULT_BASE = "http://127.0.0.1:8532";

export type DmAnswer = "target_preferred" | "probe_preferred" | "incomparable";

export interface PendingQuery {
  seq: number;
  probe_u: number;
}

export interface NextQuery extends PendingQuery {
  target: string[];
}

export interface Brackets {
  lower: [number, number];
  upper: [number, number];
}

export interface TranscriptEntry {
  seq: number;
  probe_u: number;
  response: DmAnswer;
}

export interface SessionView {
  id: string;
  target: string[];
  epsilon: number;
  done: boolean;
  queries_used: number;
  max_queries: number;
  brackets: Brackets;
  pending: PendingQuery | null;
  transcript?: TranscriptEntry[];
}

export interface NextQueryReply {
  done: boolean;
  query: NextQuery | null;
}

export interface ReferenceTriple {
  u: number;
  v: number;
  w: number;
}

export interface Interval {
  lower: number;
  upper: number;
}

export interface AssessmentReport {
  id: string;
  target: string[];
  recovered: ReferenceTriple;
  interval: Interval;
  indices: { alpha: number; beta: number } | null;
  queries_used: number;
  epsilon: number;
}

export interface Evaluation {
  reference: ReferenceTriple;
  interval: Interval;
  choquet: Interval;
  pignistic: number;
  classification: string;
  jaffray: number | null;
}

export interface CompareReply {
  verdict: string;
  mode: string;
  a: Evaluation;
  b: Evaluation;
}

/** Service-reported failure, or code "network" when the call never landed. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details?: unknown,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

async function request<T>(
  base: string,
  method: string,
  path: string,
  body?: unknown,
): Promise<T> {
  let res: Response;
  try {
    res = await fetch(base + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  } catch (err) {
    throw new ServiceError(0, "network", `cannot reach ${base}: ${String(err)}`);
  }
  const text = await res.text();
  let payload: unknown = null;
  if (text !== "") {
    try {
      payload = JSON.parse(text);
    } catch {
      payload = null;
    }
  }
  if (!res.ok) {
    const e = (payload as { error?: { code?: string; message?: string; details?: unknown } } | null)
      ?.error;
    throw new ServiceError(
      res.status,
      e?.code ?? "http_error",
      e?.message ?? `${res.status} on ${path}`,
      e?.details,
    );
  }
  return payload as T;
}

export class ServiceClient {
  constructor(readonly base: string) {}

  createSession(target: string[], epsilon: number): Promise<SessionView> {
    return request(this.base, "POST", "/sessions", { target, epsilon });
  }

  session(id: string): Promise<SessionView> {
    return request(this.base, "GET", `/sessions/${encodeURIComponent(id)}`);
  }

  listSessions(): Promise<{ sessions: SessionView[] }> {
    return request(this.base, "GET", "/sessions");
  }

  nextQuery(id: string): Promise<NextQueryReply> {
    return request(this.base, "GET", `/sessions/${encodeURIComponent(id)}/next-query`);
  }

  respond(id: string, seq: number, response: DmAnswer): Promise<SessionView> {
    return request(this.base, "POST", `/sessions/${encodeURIComponent(id)}/responses`, {
      seq,
      response,
    });
  }

  assessment(id: string): Promise<AssessmentReport> {
    return request(this.base, "GET", `/sessions/${encodeURIComponent(id)}/assessment`);
  }

  compare(a: unknown, b: unknown, assessment: unknown, mode: string): Promise<CompareReply> {
    return request(this.base, "POST", "/compare", { a, b, assessment, mode });
  }
}
