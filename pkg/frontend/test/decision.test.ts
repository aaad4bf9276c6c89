// The wizard's local decision tree must agree with the server's full
// enumeration, which is committed as a fixture and pinned to the live
// server by the Python suite.

import { describe, expect, it } from 'vitest'
import { type Answer, classifyFull, walk } from '../src/decision.js'
import table from './fixtures/decision_table.json'

interface Row {
  q1: string
  q2: string
  q3: string
  q4: string
  classification: string
}

const rows = table as Row[]

describe('decision tree mirror', () => {
  it('covers the full enumeration', () => {
    expect(rows.length).toBe(54)
  })

  it('matches the server on every combination', () => {
    for (const row of rows) {
      const leaf = classifyFull(row.q1 as Answer, row.q2 as Answer,
                                row.q3 as Answer, row.q4 as Answer)
      expect(leaf, JSON.stringify(row)).toBe(row.classification)
    }
  })

  it('walk() reaches the same leaf incrementally', () => {
    for (const row of rows) {
      const state = walk({
        q1: row.q1 as Answer,
        q2: row.q2 as Answer,
        q3: row.q3 as Answer,
        q4: row.q4 as Answer,
      })
      expect(state.leaf).toBe(row.classification)
    }
  })

  it('walk() reports the next unanswered question', () => {
    expect(walk({}).next).toBe('q1')
    expect(walk({ q1: 'no' }).next).toBe('q2')
    expect(walk({ q1: 'no', q2: 'yes' }).next).toBe('q3')
    expect(walk({ q1: 'no', q2: 'yes', q3: 'yes' }).next).toBe('q4')
    expect(walk({ q1: 'yes' }).leaf).toBe('too_many_results')
  })

  it('only the five known classifications are reachable', () => {
    const leaves = new Set(rows.map((r) => r.classification))
    expect(leaves).toEqual(new Set([
      'erroneous', 'inconsistent', 'accurate', 'too_many_results',
      'possibly_erroneous',
    ]))
  })
})
