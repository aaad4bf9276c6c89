export interface SearchResult {
  sentence_id: number
  text: string
}

export interface SearchResponse {
  query: string
  results: SearchResult[]
  truncated: boolean
}

export interface ClusterInfo {
  cluster_id: number
  accessions: string[]
  first_ordinal: number
}

export interface TimelinePoint {
  cluster_id: number
  ordinal: number
  section: string
  release_label: string
  release_date: string
  accession: string
  color: string
  entry_url: string
}

export interface RailTick {
  ordinal: number
  section: string
  label: string
  date: string
}

export interface CountPoint {
  ordinal: number
  count: number
}

export interface TimelinePayload {
  sentence_id: number
  text: string
  clusters: ClusterInfo[]
  points: TimelinePoint[]
  counts: CountPoint[]
  rails: {
    swissprot: RailTick[]
    trembl: RailTick[]
  }
}

export interface ClassificationRecord {
  record_id: number
  sentence_id: number
  classification: string
  decision_path: Record<string, string>
  analyst: string
  created_at: string
  notes: string
}

export interface ApiFailure {
  code: string
  message: string
}
