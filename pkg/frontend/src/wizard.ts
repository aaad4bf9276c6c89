// Classification wizard: walks a curator through the decision-tree
// protocol for one flagged sentence. Question 1 (the 100-entry
// feasibility threshold) is answered from the corpus before the wizard
// opens, so over-threshold sentences short-circuit straight to
// "too many results". The locally computed leaf is shown immediately,
// the record is posted, and the server's stored verdict (which always
// re-evaluates the path) replaces it; a rejection is surfaced inline.

import type { ApiResult, ClassificationSubmission } from './api.js'
import type { ClassificationRecord, TimelinePayload } from './types.js'
import { type Answer, type Question, QUESTION_TEXT, walk } from './decision.js'

const ANSWER_OPTIONS: Answer[] = ['yes', 'no', 'insufficient evidence']

export interface WizardApi {
  postClassification(body: ClassificationSubmission): Promise<ApiResult<ClassificationRecord>>
}

export class ClassificationWizard {
  private answers: Partial<Record<Question, Answer>> = {}
  private questionHost!: HTMLDivElement
  private resultHost!: HTMLDivElement
  private errorHost!: HTMLDivElement

  constructor(
    private container: HTMLElement,
    private api: WizardApi,
    private payload: TimelinePayload,
    private analyst: string = 'curator',
  ) {}

  /** Lifetime entry count; the server derives Q1 from the same number. */
  private clusterCount(): number {
    return this.payload.clusters.length
  }

  start(): void {
    this.container.textContent = ''
    this.container.className = 'wizard'

    const heading = document.createElement('div')
    heading.className = 'wizard-sentence'
    heading.textContent = `"${this.payload.text}"`
    this.container.appendChild(heading)

    this.container.appendChild(this.contextLinks())

    this.questionHost = document.createElement('div')
    this.questionHost.className = 'wizard-question'
    this.resultHost = document.createElement('div')
    this.resultHost.className = 'wizard-result'
    this.errorHost = document.createElement('div')
    this.errorHost.className = 'wizard-error'
    this.container.append(this.questionHost, this.resultHost, this.errorHost)

    this.answers = { q1: this.clusterCount() > 100 ? 'yes' : 'no' }
    if (this.answers.q1 === 'yes') {
      const notice = document.createElement('div')
      notice.className = 'wizard-q1-notice'
      notice.textContent =
        `This sentence occurs in ${this.clusterCount()} entries, over the ` +
        'feasibility threshold of 100; it is classified as too many results.'
      this.questionHost.appendChild(notice)
    }
    this.advance()
  }

  /** Origin entries (first column) vs the rest, linked for context checks. */
  private contextLinks(): HTMLDivElement {
    const panel = document.createElement('div')
    panel.className = 'wizard-context'
    if (this.payload.clusters.length === 0) return panel
    const firstOrdinal = this.payload.clusters[0].first_ordinal
    const originIds = new Set(
      this.payload.clusters
        .filter((c) => c.first_ordinal === firstOrdinal)
        .map((c) => c.cluster_id))
    const urlOf = new Map<number, string>()
    for (const point of this.payload.points) {
      if (!urlOf.has(point.cluster_id)) urlOf.set(point.cluster_id, point.entry_url)
    }
    const column = (title: string, ids: Set<number>, invert: boolean) => {
      const box = document.createElement('div')
      box.className = invert ? 'wizard-context-secondary' : 'wizard-context-origin'
      const head = document.createElement('strong')
      head.textContent = title
      box.appendChild(head)
      for (const cluster of this.payload.clusters) {
        const isOrigin = ids.has(cluster.cluster_id)
        if (isOrigin === invert) continue
        const link = document.createElement('a')
        link.href = urlOf.get(cluster.cluster_id) ?? '#'
        link.target = '_blank'
        link.rel = 'noopener'
        link.textContent = cluster.accessions.join('; ')
        box.appendChild(link)
      }
      return box
    }
    panel.append(
      column('Origin entries', originIds, false),
      column('Secondary entries', originIds, true),
    )
    return panel
  }

  private advance(): void {
    const state = walk(this.answers)
    if (state.leaf !== null) {
      void this.finish(state.leaf, state.consumed)
      return
    }
    if (state.next === null || state.next === 'q1') return
    this.askQuestion(state.next)
  }

  private askQuestion(question: Question): void {
    const block = document.createElement('div')
    block.className = `wizard-step wizard-${question}`
    const text = document.createElement('p')
    text.textContent = `${question.toUpperCase()}: ${QUESTION_TEXT[question]}`
    block.appendChild(text)
    for (const option of ANSWER_OPTIONS) {
      const button = document.createElement('button')
      button.className = `wizard-answer wizard-answer-${option.split(' ')[0]}`
      button.dataset.question = question
      button.dataset.answer = option
      button.textContent = option
      button.addEventListener('click', () => {
        this.answers[question] = option
        for (const b of Array.from(block.querySelectorAll('button'))) {
          b.disabled = true
        }
        this.advance()
      })
      block.appendChild(button)
    }
    this.questionHost.appendChild(block)
  }

  private async finish(leaf: string, consumed: Partial<Record<Question, Answer>>): Promise<void> {
    this.resultHost.textContent = ''
    const local = document.createElement('div')
    local.className = 'wizard-leaf'
    local.textContent = `Classification: ${leaf}`
    this.resultHost.appendChild(local)

    const path: Record<string, string> = {}
    for (const [q, a] of Object.entries(consumed)) {
      if (q !== 'q1' && a !== undefined) path[q] = a
    }
    const outcome = await this.api.postClassification({
      sentence_id: this.payload.sentence_id,
      classification: leaf,
      decision_path: path,
      analyst: this.analyst,
    })
    if (outcome.ok) {
      const record = outcome.body as ClassificationRecord
      const stored = document.createElement('div')
      stored.className = 'wizard-stored'
      stored.textContent = `Recorded by the server as: ${record.classification}`
      this.resultHost.appendChild(stored)
    } else {
      const failure = outcome.body as { code?: string; message?: string }
      this.errorHost.textContent =
        `Rejected (${outcome.status} ${failure.code ?? 'error'}): ${failure.message ?? ''}`
    }
  }
}
