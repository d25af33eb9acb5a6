// Single source of truth for everything the panels render.
//
// Mutations are queued so only one is in flight per session, and every
// completed mutation re-fetches all panel payloads from the server before
// listeners run: the UI never shows locally computed or stale analytics.

import { ApiClient, ApiError } from "./api";
import type {
  ClusterMembersPayload,
  ClusterPayload,
  CorrespondentsPayload,
  DatasetHandle,
  DateRangeValue,
  EntitiesPayload,
  FilterField,
  GraphPayload,
  Granularity,
  ResultsPage,
  SessionSummary,
  TagDistributionPayload,
  TimelinePayload,
} from "./types";

export interface PanelCaches {
  results: ResultsPage | null;
  correspondents: CorrespondentsPayload | null;
  timeline: TimelinePayload | null;
  entities: EntitiesPayload | null;
  graph: GraphPayload | null;
  cluster: ClusterPayload | null;
  tagDistribution: TagDistributionPayload | null;
}

const EMPTY_CACHES: PanelCaches = {
  results: null,
  correspondents: null,
  timeline: null,
  entities: null,
  graph: null,
  cluster: null,
  tagDistribution: null,
};

export type Listener = () => void;

export class DuplicateChipError extends Error {
  constructor(readonly field: FilterField, readonly value: string) {
    super(`filter ${field}:${value} is already active`);
  }
}

export class PanelStore {
  session: SessionSummary | null = null;
  datasets: DatasetHandle[] = [];
  caches: PanelCaches = { ...EMPTY_CACHES };
  granularity: Granularity = "year";
  entityK = 15;
  pageOffset = 0;
  pageLimit = 25;
  lastError: string | null = null;
  memberLists = new Map<number, ClusterMembersPayload>();

  private queue: Promise<unknown> = Promise.resolve();
  private listeners = new Set<Listener>();

  constructor(readonly api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  /** Serialize mutations: one in flight at a time, in call order. */
  private enqueue<T>(op: () => Promise<T>): Promise<T> {
    const next = this.queue.then(op, op);
    this.queue = next.catch(() => undefined);
    return next;
  }

  /** Resolves once every queued mutation (and its refresh) has finished. */
  async idle(): Promise<void> {
    let tail;
    do {
      tail = this.queue;
      await tail;
    } while (tail !== this.queue);
  }

  async refreshDatasets(): Promise<void> {
    this.datasets = await this.api.listDatasets();
    this.notify();
  }

  async openSession(datasetId: string): Promise<void> {
    await this.enqueue(async () => {
      this.session = await this.api.createSession(datasetId);
      this.caches = { ...EMPTY_CACHES };
      this.memberLists.clear();
      this.pageOffset = 0;
      await this.refreshAll();
    });
  }

  /** Re-fetch every panel for the current session fingerprint. */
  async refreshAll(): Promise<void> {
    const session = this.session;
    if (!session) return;
    const sid = session.session_id;
    const [results, correspondents, timeline, graph, cluster, tagDistribution] =
      await Promise.all([
        this.api.results(sid, this.pageOffset, this.pageLimit),
        this.api.correspondents(sid),
        this.api.timeline(sid, this.granularity),
        this.api.graph(sid),
        this.api.clusterState(sid),
        this.api.tagDistribution(),
      ]);
    let entities: EntitiesPayload;
    try {
      entities = await this.api.entities(sid, this.entityK);
    } catch (error) {
      if (error instanceof ApiError && error.code === "EmptyResults") {
        entities = { fingerprint: session.fingerprint, k: this.entityK, entities: [] };
      } else {
        throw error;
      }
    }
    this.caches = { results, correspondents, timeline, entities, graph, cluster, tagDistribution };
    this.memberLists.clear();
    this.lastError = null;
    this.notify();
  }

  /** True iff every fetched panel carries the session's fingerprint. */
  fingerprintsConsistent(): boolean {
    const session = this.session;
    if (!session) return false;
    const carriers = [
      this.caches.results,
      this.caches.correspondents,
      this.caches.timeline,
      this.caches.entities,
      this.caches.graph,
      this.caches.cluster,
    ];
    return carriers.every((c) => c !== null && c.fingerprint === session.fingerprint);
  }

  hasChip(field: FilterField, value: string): boolean {
    return (this.session?.filters ?? []).some(
      (f) => f.field === field && typeof f.value === "string" && f.value.toLowerCase() === value.toLowerCase(),
    );
  }

  addFilter(field: FilterField, value: string | DateRangeValue): Promise<void> {
    // duplicate chips are rejected locally: no request leaves the client
    if (typeof value === "string" && this.hasChip(field, value.trim())) {
      throw new DuplicateChipError(field, value);
    }
    return this.enqueue(async () => {
      const session = this.requireSession();
      this.session = await this.api.addFilter(session.session_id, field, value);
      await this.refreshAll();
    });
  }

  removeFilter(filterId: string): Promise<void> {
    return this.enqueue(async () => {
      const session = this.requireSession();
      this.session = await this.api.removeFilter(session.session_id, filterId);
      await this.refreshAll();
    });
  }

  assignTag(term: string, tag: string): Promise<void> {
    return this.enqueue(async () => {
      const session = this.requireSession();
      await this.api.assignTag(term, tag, session.session_id);
      await this.refreshAll();
    });
  }

  removeGraphNode(address: string): Promise<void> {
    return this.enqueue(async () => {
      const session = this.requireSession();
      await this.api.graphRemoveNode(session.session_id, address);
      await this.refreshAll();
    });
  }

  removeGraphEdge(a: string, b: string): Promise<void> {
    return this.enqueue(async () => {
      const session = this.requireSession();
      await this.api.graphRemoveEdge(session.session_id, a, b);
      await this.refreshAll();
    });
  }

  undoGraphRemoval(): Promise<void> {
    return this.enqueue(async () => {
      const session = this.requireSession();
      await this.api.graphUndo(session.session_id);
      await this.refreshAll();
    });
  }

  clusterize(k: number, seed = 0): Promise<void> {
    return this.enqueue(async () => {
      const session = this.requireSession();
      await this.api.clusterize(session.session_id, k, seed);
      await this.refreshAll();
    });
  }

  async loadClusterMembers(index: number): Promise<ClusterMembersPayload> {
    const session = this.requireSession();
    const cached = this.memberLists.get(index);
    if (cached) return cached;
    const payload = await this.api.clusterMembers(session.session_id, index);
    this.memberLists.set(index, payload);
    this.notify();
    return payload;
  }

  async setGranularity(granularity: Granularity): Promise<void> {
    this.granularity = granularity;
    const session = this.session;
    if (session) {
      this.caches.timeline = await this.api.timeline(session.session_id, granularity);
      this.notify();
    }
  }

  async setPage(offset: number): Promise<void> {
    this.pageOffset = Math.max(0, offset);
    const session = this.session;
    if (session) {
      this.caches.results = await this.api.results(
        session.session_id,
        this.pageOffset,
        this.pageLimit,
      );
      this.notify();
    }
  }

  downloadActionLog(): Promise<string> {
    const session = this.requireSession();
    return this.api.actionLog(session.session_id);
  }

  private requireSession(): SessionSummary {
    if (!this.session) throw new Error("no active session");
    return this.session;
  }
}
