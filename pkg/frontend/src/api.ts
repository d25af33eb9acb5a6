// Thin typed client for the analytics service. Every panel payload comes
// from here; the UI computes no analytics of its own.

import type {
  ApiErrorBody,
  ClusterMembersPayload,
  ClusterPayload,
  CorrespondentsPayload,
  DatasetHandle,
  EntitiesPayload,
  FilterField,
  DateRangeValue,
  GraphPayload,
  Granularity,
  ResultsPage,
  SessionSummary,
  TagAssignment,
  TagDistributionPayload,
  TimelinePayload,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let body: ApiErrorBody | null = null;
      try {
        body = (await response.json()) as ApiErrorBody;
      } catch {
        // non-JSON error body
      }
      throw new ApiError(
        response.status,
        body?.code ?? "HttpError",
        body?.message ?? `${response.status} on ${path}`,
      );
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  listDatasets(): Promise<DatasetHandle[]> {
    return this.request("/datasets");
  }

  async uploadDataset(file: Blob, filename: string, format: string, label?: string): Promise<DatasetHandle> {
    const form = new FormData();
    form.append("file", file, filename);
    form.append("format", format);
    if (label) form.append("label", label);
    return this.request("/datasets", { method: "POST", body: form });
  }

  createSession(datasetId: string): Promise<SessionSummary> {
    return this.post("/sessions", { dataset_id: datasetId });
  }

  getSession(sessionId: string): Promise<SessionSummary> {
    return this.request(`/sessions/${sessionId}`);
  }

  addFilter(
    sessionId: string,
    field: FilterField,
    value: string | DateRangeValue,
  ): Promise<SessionSummary> {
    return this.post(`/sessions/${sessionId}/filters`, { field, value });
  }

  removeFilter(sessionId: string, filterId: string): Promise<SessionSummary> {
    return this.request(`/sessions/${sessionId}/filters/${filterId}`, { method: "DELETE" });
  }

  results(sessionId: string, offset: number, limit: number): Promise<ResultsPage> {
    return this.request(`/sessions/${sessionId}/results?offset=${offset}&limit=${limit}`);
  }

  correspondents(sessionId: string): Promise<CorrespondentsPayload> {
    return this.request(`/sessions/${sessionId}/correspondents`);
  }

  timeline(sessionId: string, granularity: Granularity): Promise<TimelinePayload> {
    return this.request(`/sessions/${sessionId}/timeline?granularity=${granularity}`);
  }

  entities(sessionId: string, k: number): Promise<EntitiesPayload> {
    return this.request(`/sessions/${sessionId}/entities?k=${k}`);
  }

  assignTag(term: string, tag: string, sessionId?: string): Promise<TagAssignment> {
    return this.post("/tags", { term, tag, session_id: sessionId ?? null });
  }

  tagDistribution(): Promise<TagDistributionPayload> {
    return this.request("/tags/distribution");
  }

  graph(sessionId: string): Promise<GraphPayload> {
    return this.request(`/sessions/${sessionId}/graph`);
  }

  graphRemoveNode(sessionId: string, address: string): Promise<GraphPayload> {
    return this.post(`/sessions/${sessionId}/graph/remove`, {
      kind: "node",
      payload: { address },
    });
  }

  graphRemoveEdge(sessionId: string, a: string, b: string): Promise<GraphPayload> {
    return this.post(`/sessions/${sessionId}/graph/remove`, { kind: "edge", payload: { a, b } });
  }

  graphUndo(sessionId: string): Promise<GraphPayload> {
    return this.post(`/sessions/${sessionId}/graph/undo`, {});
  }

  clusterize(sessionId: string, k: number, seed = 0): Promise<ClusterPayload> {
    return this.post(`/sessions/${sessionId}/cluster`, { k, seed });
  }

  clusterState(sessionId: string): Promise<ClusterPayload> {
    return this.request(`/sessions/${sessionId}/cluster`);
  }

  clusterMembers(sessionId: string, index: number): Promise<ClusterMembersPayload> {
    return this.request(`/sessions/${sessionId}/cluster/${index}/members`);
  }

  async actionLog(sessionId: string): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/sessions/${sessionId}/actions`);
    if (!response.ok) throw new ApiError(response.status, "HttpError", "log download failed");
    return response.text();
  }
}
