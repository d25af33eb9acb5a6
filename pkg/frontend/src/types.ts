// Payload shapes exactly as the analytics service emits them.

export type FilterField = "subject" | "content" | "correspondent" | "date_range";

export interface DateRangeValue {
  start: string;
  end: string;
}

export interface FilterChip {
  filter_id: string;
  field: FilterField;
  value: string | DateRangeValue;
}

export interface DatasetHandle {
  dataset_id: string;
  record_count: number;
  ingested_at: string;
  label: string;
}

export interface SessionSummary {
  session_id: string;
  dataset_id: string;
  fingerprint: string;
  filters: FilterChip[];
  match_count: number;
}

export interface AddressJson {
  canonical: string;
  display_name: string | null;
}

export interface RecordJson {
  doc_id: string;
  sender: AddressJson;
  recipients: AddressJson[];
  subject: string;
  body: string;
  timestamp: string | null;
  synthetic_body: boolean;
}

export interface ResultsPage {
  fingerprint: string;
  total: number;
  offset: number;
  limit: number;
  records: RecordJson[];
}

export interface CorrespondentRow {
  address: string;
  display_name: string | null;
  sent: number;
  received: number;
  total: number;
}

export interface CorrespondentsPayload {
  fingerprint: string;
  correspondents: CorrespondentRow[];
}

export type Granularity = "day" | "month" | "year";

export interface TimeBin {
  bucket: string;
  count: number;
}

export interface TimelinePayload {
  fingerprint: string;
  granularity: Granularity;
  bins: TimeBin[];
}

export interface EntityRow {
  term: string;
  score: number;
  origin_fields: string[];
  tags: string[];
}

export interface EntitiesPayload {
  fingerprint: string;
  k: number;
  entities: EntityRow[];
}

export interface GraphNodeJson {
  address: string;
  display_name: string | null;
}

export interface GraphEdgeJson {
  a: string;
  b: string;
  weight: number;
  a_to_b: number;
  b_to_a: number;
}

export interface GraphPayload {
  fingerprint: string;
  nodes: GraphNodeJson[];
  edges: GraphEdgeJson[];
  undo_depth: number;
}

export interface ClusterSummaryRow {
  index: number;
  size: number;
  head: string | null;
}

export interface ClusterPayload {
  fingerprint: string;
  clustered: boolean;
  doc_ids?: string[];
  k?: number;
  seed?: number;
  objective?: number;
  iterations?: number;
  converged?: boolean;
  clusters?: ClusterSummaryRow[];
}

export interface ClusterMembersPayload {
  fingerprint: string;
  cluster: number;
  head: string | null;
  members: string[];
}

export interface TagAssignment {
  term: string;
  tags: string[];
}

export interface TagCountRow {
  tag: string;
  count: number;
}

export interface TagDistributionPayload {
  tags: TagCountRow[];
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
}
