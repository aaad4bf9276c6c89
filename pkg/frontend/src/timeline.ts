// Propagation timeline: one column per entry cluster (ordered by first
// appearance, labeled with every accession the cluster has carried),
// release dates down the y axis, a point wherever the sentence occurs.
// Swiss-Prot release ticks run down the left edge and TrEMBL ticks down
// the right, so a missing point can be told apart from "no release
// happened" even where the two calendars interleave.

import type { RailTick, TimelinePayload, TimelinePoint } from './types.js'

const SVG_NS = 'http://www.w3.org/2000/svg'

export const MAX_CLUSTER_COLUMNS = 100

const MARGIN = { top: 36, right: 70, bottom: 90, left: 70 }
const COLUMN_WIDTH = 26
const PLOT_HEIGHT = 440
const POINT_RADIUS = 4

interface ViewState {
  clusterRange: [number, number] // inclusive indexes into payload.clusters
  dateRange: [number, number]    // epoch millis
}

function el<K extends keyof SVGElementTagNameMap>(
  name: K, attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, name)
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value))
  }
  return node
}

function div(className: string): HTMLDivElement {
  const node = document.createElement('div')
  node.className = className
  return node
}

function fullDateRange(payload: TimelinePayload): [number, number] {
  const dates: number[] = []
  for (const p of payload.points) dates.push(Date.parse(p.release_date))
  for (const rail of [payload.rails.swissprot, payload.rails.trembl]) {
    for (const tick of rail) dates.push(Date.parse(tick.date))
  }
  if (dates.length === 0) return [0, 1]
  const lo = Math.min(...dates)
  const hi = Math.max(...dates)
  return lo === hi ? [lo - 1, hi + 1] : [lo, hi]
}

export class TimelineChart {
  private state: ViewState
  private readonly initial: ViewState
  private tooltip!: HTMLDivElement
  private linkPanel!: HTMLDivElement
  private chartHost!: HTMLDivElement

  constructor(private container: HTMLElement, private payload: TimelinePayload) {
    this.initial = {
      clusterRange: [0, payload.clusters.length - 1],
      dateRange: fullDateRange(payload),
    }
    this.state = { ...this.initial }
  }

  render(): void {
    this.container.textContent = ''
    if (this.payload.clusters.length === 0) {
      const empty = div('timeline-empty')
      empty.textContent = 'No occurrences recorded for this sentence.'
      this.container.appendChild(empty)
      return
    }
    if (this.payload.clusters.length > MAX_CLUSTER_COLUMNS) {
      const notice = div('timeline-dense-notice')
      notice.textContent =
        `This sentence spans ${this.payload.clusters.length} entries, too many ` +
        'to inspect column by column; showing the occurrence-count view instead.'
      this.container.appendChild(notice)
      return
    }

    const controls = div('timeline-controls')
    const exportButton = document.createElement('button')
    exportButton.className = 'timeline-export'
    exportButton.textContent = 'Export image'
    exportButton.addEventListener('click', () => this.exportImage())
    const resetButton = document.createElement('button')
    resetButton.className = 'timeline-reset-zoom'
    resetButton.textContent = 'Reset zoom'
    resetButton.addEventListener('click', () => this.resetZoom())
    const hint = document.createElement('span')
    hint.className = 'timeline-hint'
    hint.textContent = 'drag to zoom, double-click to reset'
    controls.append(exportButton, resetButton, hint)
    this.container.appendChild(controls)

    this.chartHost = div('timeline-chart')
    this.container.appendChild(this.chartHost)
    this.tooltip = div('timeline-tooltip')
    this.tooltip.style.display = 'none'
    this.container.appendChild(this.tooltip)
    this.linkPanel = div('timeline-links')
    this.container.appendChild(this.linkPanel)

    this.drawSvg()
  }

  private visibleClusters(): number[] {
    const [lo, hi] = this.state.clusterRange
    const indexes: number[] = []
    for (let i = lo; i <= hi && i < this.payload.clusters.length; i++) {
      if (i >= 0) indexes.push(i)
    }
    return indexes
  }

  private plotWidth(): number {
    return Math.max(this.visibleClusters().length * COLUMN_WIDTH, COLUMN_WIDTH)
  }

  private xOf(clusterIndex: number): number {
    const [lo] = this.state.clusterRange
    return MARGIN.left + (clusterIndex - lo + 0.5) * COLUMN_WIDTH
  }

  private yOf(dateMillis: number): number {
    const [lo, hi] = this.state.dateRange
    const t = (dateMillis - lo) / (hi - lo)
    return MARGIN.top + t * PLOT_HEIGHT
  }

  private drawSvg(): void {
    this.chartHost.textContent = ''
    const width = MARGIN.left + this.plotWidth() + MARGIN.right
    const height = MARGIN.top + PLOT_HEIGHT + MARGIN.bottom
    const svg = el('svg', {
      width, height, viewBox: `0 0 ${width} ${height}`,
      class: 'timeline-svg', role: 'img',
    })
    svg.appendChild(el('rect', {
      x: 0, y: 0, width, height, fill: 'white', class: 'timeline-bg',
    }))

    const [dateLo, dateHi] = this.state.dateRange
    const visible = this.visibleClusters()
    const clusterIndexById = new Map<number, number>()
    this.payload.clusters.forEach((c, i) => clusterIndexById.set(c.cluster_id, i))

    this.drawRail(svg, this.payload.rails.swissprot, MARGIN.left - 8, 'left')
    this.drawRail(svg, this.payload.rails.trembl,
                  MARGIN.left + this.plotWidth() + 8, 'right')

    for (const i of visible) {
      const cluster = this.payload.clusters[i]
      const x = this.xOf(i)
      const label = el('text', {
        x, y: MARGIN.top + PLOT_HEIGHT + 14,
        class: 'timeline-column-label',
        'text-anchor': 'end',
        transform: `rotate(-55 ${x} ${MARGIN.top + PLOT_HEIGHT + 14})`,
        'font-size': 9,
      })
      label.textContent = cluster.accessions.join('; ')
      svg.appendChild(label)
    }

    for (const point of this.payload.points) {
      const index = clusterIndexById.get(point.cluster_id)
      if (index === undefined || index < this.state.clusterRange[0]
          || index > this.state.clusterRange[1]) continue
      const when = Date.parse(point.release_date)
      if (when < dateLo || when > dateHi) continue
      const circle = el('circle', {
        cx: this.xOf(index), cy: this.yOf(when), r: POINT_RADIUS,
        fill: point.color,
        class: `occ-point section-${point.section}`,
      })
      circle.addEventListener('mouseenter', () => this.showTooltip(point))
      circle.addEventListener('mouseleave', () => this.hideTooltip())
      circle.addEventListener('click', () => this.showLinks(point))
      svg.appendChild(circle)
    }

    const title = el('text', {
      x: MARGIN.left, y: 18, class: 'timeline-title', 'font-size': 12,
    })
    title.textContent = `"${this.payload.text}"`
    svg.appendChild(title)

    this.attachZoom(svg)
    this.chartHost.appendChild(svg)
  }

  private drawRail(svg: SVGSVGElement, rail: RailTick[], x: number,
                   side: 'left' | 'right'): void {
    const [dateLo, dateHi] = this.state.dateRange
    for (const tick of rail) {
      const when = Date.parse(tick.date)
      if (when < dateLo || when > dateHi) continue
      const y = this.yOf(when)
      svg.appendChild(el('line', {
        x1: x - 3, x2: x + 3, y1: y, y2: y,
        class: `rail-tick rail-${tick.section}`,
        stroke: tick.section === 'swissprot' ? 'blue' : 'red',
      }))
      const label = el('text', {
        x: side === 'left' ? x - 6 : x + 6, y: y + 3,
        'text-anchor': side === 'left' ? 'end' : 'start',
        class: 'rail-label', 'font-size': 8,
      })
      label.textContent = tick.label
      svg.appendChild(label)
    }
  }

  private showTooltip(point: TimelinePoint): void {
    this.tooltip.textContent =
      `${point.accession} (${point.section} ${point.release_label}, ${point.release_date})`
    this.tooltip.style.display = 'block'
  }

  private hideTooltip(): void {
    this.tooltip.style.display = 'none'
  }

  private showLinks(point: TimelinePoint): void {
    this.linkPanel.textContent = ''
    const heading = document.createElement('div')
    heading.textContent = `${point.accession} at ${point.section} ${point.release_label}`
    const link = document.createElement('a')
    link.href = point.entry_url
    link.target = '_blank'
    link.rel = 'noopener'
    link.textContent = `open entry ${point.accession}`
    this.linkPanel.append(heading, link)
  }

  private attachZoom(svg: SVGSVGElement): void {
    let dragStart: { x: number; y: number } | null = null
    let selection: SVGRectElement | null = null

    const toLocal = (event: MouseEvent) => {
      const rect = svg.getBoundingClientRect()
      return { x: event.clientX - rect.left, y: event.clientY - rect.top }
    }

    svg.addEventListener('mousedown', (event) => {
      dragStart = toLocal(event as MouseEvent)
      selection = el('rect', { class: 'zoom-selection', fill: 'rgba(60,120,216,0.2)' })
      svg.appendChild(selection)
    })
    svg.addEventListener('mousemove', (event) => {
      if (!dragStart || !selection) return
      const now = toLocal(event as MouseEvent)
      selection.setAttribute('x', String(Math.min(dragStart.x, now.x)))
      selection.setAttribute('y', String(Math.min(dragStart.y, now.y)))
      selection.setAttribute('width', String(Math.abs(now.x - dragStart.x)))
      selection.setAttribute('height', String(Math.abs(now.y - dragStart.y)))
    })
    svg.addEventListener('mouseup', (event) => {
      if (!dragStart) return
      const end = toLocal(event as MouseEvent)
      const start = dragStart
      dragStart = null
      selection?.remove()
      selection = null
      if (Math.abs(end.x - start.x) < 8 || Math.abs(end.y - start.y) < 8) return
      this.zoomTo(Math.min(start.x, end.x), Math.max(start.x, end.x),
                  Math.min(start.y, end.y), Math.max(start.y, end.y))
    })
    svg.addEventListener('dblclick', () => this.resetZoom())
  }

  private zoomTo(x0: number, x1: number, y0: number, y1: number): void {
    const [lo] = this.state.clusterRange
    const first = Math.max(0, lo + Math.floor((x0 - MARGIN.left) / COLUMN_WIDTH))
    const last = Math.min(this.payload.clusters.length - 1,
                          lo + Math.floor((x1 - MARGIN.left) / COLUMN_WIDTH))
    const [dLo, dHi] = this.state.dateRange
    const span = dHi - dLo
    const newLo = dLo + Math.max(0, (y0 - MARGIN.top) / PLOT_HEIGHT) * span
    const newHi = dLo + Math.min(1, (y1 - MARGIN.top) / PLOT_HEIGHT) * span
    if (first > last || newLo >= newHi) return
    this.state = { clusterRange: [first, last], dateRange: [newLo, newHi] }
    this.drawSvg()
  }

  resetZoom(): void {
    this.state = { ...this.initial }
    this.drawSvg()
  }

  private exportImage(): void {
    const svg = this.chartHost.querySelector('svg')
    if (!svg) return
    const markup = new XMLSerializer().serializeToString(svg)
    const anchor = document.createElement('a')
    anchor.className = 'timeline-export-link'
    anchor.href = 'data:image/svg+xml;charset=utf-8,' + encodeURIComponent(markup)
    anchor.download = `sentence-${this.payload.sentence_id}-timeline.svg`
    this.container.appendChild(anchor)
    anchor.click()
  }
}

export function renderTimeline(container: HTMLElement,
                               payload: TimelinePayload): TimelineChart {
  const chart = new TimelineChart(container, payload)
  chart.render()
  return chart
}
