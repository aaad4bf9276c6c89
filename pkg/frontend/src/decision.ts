// Client-side mirror of the server's classification decision tree. The
// wizard walks this tree for immediate feedback; the server re-evaluates
// every submission and its verdict is the one stored. The test suite
// replays the full server enumeration against this module.

export type Answer = 'yes' | 'no' | 'insufficient evidence'

export type Leaf =
  | 'erroneous'
  | 'inconsistent'
  | 'accurate'
  | 'too_many_results'
  | 'possibly_erroneous'

export type Question = 'q1' | 'q2' | 'q3' | 'q4'

export const QUESTION_TEXT: Record<Question, string> = {
  q1: 'Does the sentence occur in more than 100 entries?',
  q2: 'Does the historical context suggest the sentence was propagated between the entries?',
  q3: 'Is the update made to the origin entry relevant to the secondary entry?',
  q4: 'Does the update to the origin affect the accuracy of the secondary entry?',
}

export function classifyFull(q1: Answer, q2: Answer, q3: Answer, q4: Answer): Leaf {
  if (q1 === 'yes') return 'too_many_results'
  if (q2 === 'insufficient evidence') return 'possibly_erroneous'
  if (q2 === 'no') return 'accurate'
  if (q3 === 'insufficient evidence') return 'possibly_erroneous'
  if (q3 === 'no') return 'accurate'
  if (q4 === 'insufficient evidence') return 'possibly_erroneous'
  if (q4 === 'yes') return 'erroneous'
  return 'inconsistent'
}

export interface WalkState {
  leaf: Leaf | null
  next: Question | null
  consumed: Partial<Record<Question, Answer>>
}

/** Walk the tree with the answers given so far. */
export function walk(answers: Partial<Record<Question, Answer>>): WalkState {
  const consumed: Partial<Record<Question, Answer>> = {}
  const take = (q: Question): Answer | null => {
    const a = answers[q]
    if (a === undefined) return null
    consumed[q] = a
    return a
  }

  const q1 = take('q1')
  if (q1 === null) return { leaf: null, next: 'q1', consumed }
  if (q1 === 'yes') return { leaf: 'too_many_results', next: null, consumed }

  const q2 = take('q2')
  if (q2 === null) return { leaf: null, next: 'q2', consumed }
  if (q2 === 'insufficient evidence') return { leaf: 'possibly_erroneous', next: null, consumed }
  if (q2 === 'no') return { leaf: 'accurate', next: null, consumed }

  const q3 = take('q3')
  if (q3 === null) return { leaf: null, next: 'q3', consumed }
  if (q3 === 'insufficient evidence') return { leaf: 'possibly_erroneous', next: null, consumed }
  if (q3 === 'no') return { leaf: 'accurate', next: null, consumed }

  const q4 = take('q4')
  if (q4 === null) return { leaf: null, next: 'q4', consumed }
  if (q4 === 'insufficient evidence') return { leaf: 'possibly_erroneous', next: null, consumed }
  if (q4 === 'yes') return { leaf: 'erroneous', next: null, consumed }
  return { leaf: 'inconsistent', next: null, consumed }
}
