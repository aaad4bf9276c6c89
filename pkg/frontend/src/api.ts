import type {
  ApiFailure,
  ClassificationRecord,
  SearchResponse,
  TimelinePayload,
} from './types.js'

export interface ApiResult<T> {
  ok: boolean
  status: number
  body: T | ApiFailure
}

export interface ClassificationSubmission {
  sentence_id: number
  classification: string
  decision_path: Record<string, string>
  analyst: string
  notes?: string
}

/** Thin typed client for the /v1 JSON API. */
export class ApiClient {
  constructor(private base: string = '') {}

  private async request<T>(path: string, init?: RequestInit): Promise<ApiResult<T>> {
    const response = await fetch(this.base + path, init)
    return { ok: response.ok, status: response.status, body: await response.json() }
  }

  search(query: string): Promise<ApiResult<SearchResponse>> {
    return this.request(`/v1/sentences?q=${encodeURIComponent(query)}`)
  }

  timeline(sentenceId: number): Promise<ApiResult<TimelinePayload>> {
    return this.request(`/v1/sentences/${sentenceId}/timeline`)
  }

  postClassification(body: ClassificationSubmission): Promise<ApiResult<ClassificationRecord>> {
    return this.request('/v1/classifications', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    })
  }

  classifications(sentenceId: number): Promise<ApiResult<{ records: ClassificationRecord[] }>> {
    return this.request(`/v1/classifications?sentence_id=${sentenceId}`)
  }
}
