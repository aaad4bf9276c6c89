// Occurrence-count view: how many entries carry the sentence at each
// release, plotted against real release dates with the peak annotated.

import type { TimelinePayload } from './types.js'

const SVG_NS = 'http://www.w3.org/2000/svg'
const WIDTH = 640
const HEIGHT = 260
const MARGIN = { top: 28, right: 20, bottom: 30, left: 46 }

function el<K extends keyof SVGElementTagNameMap>(
  name: K, attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, name)
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value))
  }
  return node
}

interface CountAt {
  date: number
  count: number
  label: string
}

function countSeries(payload: TimelinePayload): CountAt[] {
  const dateOf = new Map<number, { date: number; label: string }>()
  for (const rail of [payload.rails.swissprot, payload.rails.trembl]) {
    for (const tick of rail) {
      dateOf.set(tick.ordinal, { date: Date.parse(tick.date), label: tick.label })
    }
  }
  for (const point of payload.points) {
    dateOf.set(point.ordinal,
               { date: Date.parse(point.release_date), label: point.release_label })
  }
  return payload.counts
    .map((c) => {
      const info = dateOf.get(c.ordinal)
      return { date: info ? info.date : 0, count: c.count, label: info ? info.label : '' }
    })
    .sort((a, b) => a.date - b.date)
}

export function renderOccurrenceChart(container: HTMLElement,
                                      payload: TimelinePayload): void {
  container.textContent = ''
  const series = countSeries(payload)
  const svg = el('svg', {
    width: WIDTH, height: HEIGHT, viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: 'occurrence-svg', role: 'img',
  })
  if (series.length === 0) {
    const label = el('text', { x: MARGIN.left, y: HEIGHT / 2, class: 'occurrence-empty' })
    label.textContent = 'no occurrences'
    svg.appendChild(label)
    container.appendChild(svg)
    return
  }

  const dates = series.map((s) => s.date)
  const lo = Math.min(...dates)
  const hi = Math.max(...dates)
  const span = hi === lo ? 1 : hi - lo
  const maxCount = Math.max(...series.map((s) => s.count))
  const x = (d: number) => MARGIN.left + ((d - lo) / span) * (WIDTH - MARGIN.left - MARGIN.right)
  const y = (c: number) => HEIGHT - MARGIN.bottom
    - (c / maxCount) * (HEIGHT - MARGIN.top - MARGIN.bottom)

  const pointsAttr = series.map((s) => `${x(s.date)},${y(s.count)}`).join(' ')
  svg.appendChild(el('polyline', {
    points: pointsAttr, fill: 'none', stroke: '#444', 'stroke-width': 1.5,
    class: 'occurrence-line',
  }))

  const peak = series.reduce((best, s) => (s.count > best.count ? s : best), series[0])
  svg.appendChild(el('circle', {
    cx: x(peak.date), cy: y(peak.count), r: 4, fill: '#c53030',
    class: 'occurrence-peak',
  }))
  const annotation = el('text', {
    x: Math.min(x(peak.date) + 8, WIDTH - 140), y: Math.max(y(peak.count) - 6, 12),
    class: 'occurrence-peak-label', 'font-size': 11,
  })
  annotation.textContent = `peak ${peak.count} entries (release ${peak.label})`
  svg.appendChild(annotation)

  const axis = el('text', {
    x: MARGIN.left, y: HEIGHT - 8, class: 'occurrence-axis-label', 'font-size': 10,
  })
  axis.textContent = `${new Date(lo).getFullYear()} to ${new Date(hi).getFullYear()}`
  svg.appendChild(axis)

  container.appendChild(svg)
}
