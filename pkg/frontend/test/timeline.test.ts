// Chart fidelity against the committed walkthrough payload: every API
// occurrence becomes exactly one rendered point, hover reveals the
// accession and release, and the zoom / export controls work.

import { beforeEach, describe, expect, it } from 'vitest'
import { renderOccurrenceChart } from '../src/occurrence.js'
import { MAX_CLUSTER_COLUMNS, renderTimeline } from '../src/timeline.js'
import type { TimelinePayload } from '../src/types.js'
import fixture from './fixtures/timeline_selenocysteine.json'

const payload = fixture as unknown as TimelinePayload

function mount(): HTMLElement {
  document.body.innerHTML = '<div id="host"></div>'
  return document.getElementById('host') as HTMLElement
}

function mouse(type: string, x: number, y: number): MouseEvent {
  return new MouseEvent(type, { clientX: x, clientY: y, bubbles: true })
}

describe('timeline chart', () => {
  let host: HTMLElement

  beforeEach(() => {
    host = mount()
  })

  it('renders one point per API occurrence', () => {
    renderTimeline(host, payload)
    const circles = host.querySelectorAll('circle.occ-point')
    expect(circles.length).toBe(payload.points.length)
    const total = payload.counts.reduce((acc, c) => acc + c.count, 0)
    expect(circles.length).toBe(total)
  })

  it('orders columns by first appearance with all accessions shown', () => {
    renderTimeline(host, payload)
    const labels = Array.from(host.querySelectorAll('text.timeline-column-label'))
      .map((n) => n.textContent)
    expect(labels.length).toBe(payload.clusters.length)
    expect(labels[0]).toBe(payload.clusters[0].accessions.join('; '))
    // the merged survivor column lists both of its accessions
    expect(labels).toContain('P30001; P30011')
  })

  it('draws swissprot rail left and trembl rail right', () => {
    renderTimeline(host, payload)
    const left = host.querySelectorAll('line.rail-swissprot')
    const right = host.querySelectorAll('line.rail-trembl')
    expect(left.length).toBe(payload.rails.swissprot.length)
    expect(right.length).toBe(payload.rails.trembl.length)
    const lx = Number((left[0] as SVGLineElement).getAttribute('x1'))
    const rx = Number((right[0] as SVGLineElement).getAttribute('x1'))
    expect(lx).toBeLessThan(rx)
  })

  it('colors points by section', () => {
    renderTimeline(host, payload)
    const fills = new Set(Array.from(host.querySelectorAll('circle.occ-point'))
      .map((c) => c.getAttribute('fill')))
    expect(fills).toEqual(new Set(['blue'])) // this sentence never left Swiss-Prot
  })

  it('hover shows accession and release label', () => {
    renderTimeline(host, payload)
    const circle = host.querySelector('circle.occ-point') as SVGCircleElement
    circle.dispatchEvent(new MouseEvent('mouseenter'))
    const tooltip = host.querySelector('.timeline-tooltip') as HTMLElement
    const first = payload.points[0]
    expect(tooltip.style.display).toBe('block')
    expect(tooltip.textContent).toContain(first.accession)
    expect(tooltip.textContent).toContain(first.release_label)
    circle.dispatchEvent(new MouseEvent('mouseleave'))
    expect(tooltip.style.display).toBe('none')
  })

  it('click opens entry links', () => {
    renderTimeline(host, payload)
    const circle = host.querySelector('circle.occ-point') as SVGCircleElement
    circle.dispatchEvent(new MouseEvent('click'))
    const link = host.querySelector('.timeline-links a') as HTMLAnchorElement
    expect(link).not.toBeNull()
    expect(link.href).toBe(payload.points[0].entry_url)
  })

  it('export produces an svg image link', () => {
    renderTimeline(host, payload)
    const button = host.querySelector('button.timeline-export') as HTMLButtonElement
    button.dispatchEvent(new MouseEvent('click'))
    const anchor = host.querySelector('a.timeline-export-link') as HTMLAnchorElement
    expect(anchor).not.toBeNull()
    expect(anchor.download).toContain('timeline')
    expect(anchor.href.startsWith('data:image/svg+xml')).toBe(true)
    expect(decodeURIComponent(anchor.href)).toContain('<svg')
  })

  it('drag zoom narrows the view and double-click resets it', () => {
    renderTimeline(host, payload)
    const svg = host.querySelector('svg.timeline-svg') as SVGSVGElement
    const before = host.querySelectorAll('circle.occ-point').length
    svg.dispatchEvent(mouse('mousedown', 80, 50))
    svg.dispatchEvent(mouse('mousemove', 300, 260))
    svg.dispatchEvent(mouse('mouseup', 300, 260))
    const zoomed = host.querySelectorAll('circle.occ-point').length
    expect(zoomed).toBeGreaterThan(0)
    expect(zoomed).toBeLessThan(before)
    const zoomedSvg = host.querySelector('svg.timeline-svg') as SVGSVGElement
    zoomedSvg.dispatchEvent(new MouseEvent('dblclick'))
    expect(host.querySelectorAll('circle.occ-point').length).toBe(before)
  })

  it('switches to a notice beyond the column limit', () => {
    const dense: TimelinePayload = {
      ...payload,
      clusters: Array.from({ length: MAX_CLUSTER_COLUMNS + 1 }, (_, i) => ({
        cluster_id: i + 1, accessions: [`P${i}`], first_ordinal: 1,
      })),
    }
    renderTimeline(host, dense)
    expect(host.querySelector('.timeline-dense-notice')).not.toBeNull()
    expect(host.querySelectorAll('circle.occ-point').length).toBe(0)
  })

  it('renders an explicit empty state', () => {
    renderTimeline(host, { ...payload, clusters: [], points: [], counts: [] })
    expect(host.querySelector('.timeline-empty')).not.toBeNull()
  })
})

describe('occurrence chart', () => {
  it('annotates the peak of 54 entries at release 44', () => {
    const host = mount()
    renderOccurrenceChart(host, payload)
    expect(host.querySelector('polyline.occurrence-line')).not.toBeNull()
    const label = host.querySelector('text.occurrence-peak-label') as SVGTextElement
    expect(label.textContent).toContain('peak 54')
    expect(label.textContent).toContain('release 44')
  })

  it('flat empty series renders without points', () => {
    const host = mount()
    renderOccurrenceChart(host, { ...payload, points: [], counts: [] })
    expect(host.querySelector('.occurrence-empty')).not.toBeNull()
  })
})
