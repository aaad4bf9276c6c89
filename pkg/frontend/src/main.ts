import { ApiClient } from './api.js'
import { renderOccurrenceChart } from './occurrence.js'
import { MAX_CLUSTER_COLUMNS, renderTimeline } from './timeline.js'
import type { SearchResponse, TimelinePayload } from './types.js'
import { ClassificationWizard } from './wizard.js'

const api = new ApiClient()

function byId(id: string): HTMLElement {
  const node = document.getElementById(id)
  if (!node) throw new Error(`missing #${id}`)
  return node
}

function banner(message: string): void {
  const host = byId('error-banner')
  host.textContent = message
  host.style.display = message ? 'block' : 'none'
}

async function showSentence(sentenceId: number): Promise<void> {
  const result = await api.timeline(sentenceId)
  if (!result.ok) {
    banner(`could not load timeline (${result.status})`)
    return
  }
  banner('')
  const payload = result.body as TimelinePayload
  const dense = payload.clusters.length > MAX_CLUSTER_COLUMNS
  renderTimeline(byId('timeline'), payload)
  renderOccurrenceChart(byId('occurrences'), payload)
  if (dense) {
    byId('occurrences').classList.add('primary-view')
  }
  const wizardButton = byId('open-wizard') as HTMLButtonElement
  wizardButton.disabled = false
  wizardButton.onclick = () => {
    const analyst = (byId('analyst') as HTMLInputElement).value || 'curator'
    new ClassificationWizard(byId('wizard'), api, payload, analyst).start()
  }
}

async function runSearch(): Promise<void> {
  const query = (byId('search-input') as HTMLInputElement).value.trim()
  if (!query) return
  const result = await api.search(query)
  if (!result.ok) {
    banner(`search failed (${result.status})`)
    return
  }
  banner('')
  const list = byId('search-results')
  list.textContent = ''
  for (const hit of (result.body as SearchResponse).results) {
    const item = document.createElement('li')
    const link = document.createElement('a')
    link.href = '#'
    link.textContent = hit.text
    link.addEventListener('click', (event) => {
      event.preventDefault()
      void showSentence(hit.sentence_id)
    })
    item.appendChild(link)
    list.appendChild(item)
  }
}

export function boot(): void {
  byId('search-button').addEventListener('click', () => void runSearch())
  ;(byId('search-input') as HTMLInputElement).addEventListener('keydown', (event) => {
    if ((event as KeyboardEvent).key === 'Enter') void runSearch()
  })
}

if (typeof document !== 'undefined' && document.getElementById('search-button')) {
  boot()
}
