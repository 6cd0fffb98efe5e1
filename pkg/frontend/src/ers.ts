import { ApiClient } from './api.js';
import type { ErsPayload, ErsStored, Phase, Questionnaire } from './types.js';

export interface ErsDraft {
  phase: Phase;
  routeId?: string;
  ratings: Record<'S1' | 'S2' | 'S3', number | null>;
}

export function emptyDraft(phase: Phase, routeId?: string): ErsDraft {
  return { phase, routeId, ratings: { S1: null, S2: null, S3: null } };
}

export function isComplete(draft: ErsDraft): boolean {
  return Object.values(draft.ratings).every((r) => r !== null && r >= 1 && r <= 5);
}

export function toPayload(draft: ErsDraft): ErsPayload {
  if (!isComplete(draft)) throw new Error('all three ratings are required');
  return {
    phase: draft.phase,
    item_s1: draft.ratings.S1 as number,
    item_s2: draft.ratings.S2 as number,
    item_s3: draft.ratings.S3 as number,
    ...(draft.routeId ? { route_id: draft.routeId } : {}),
  };
}

/**
 * Questionnaire flow for one route: load phase items from the service,
 * collect three ratings, submit. A failed submit keeps the draft so the
 * runner can retry without re-entering anything.
 */
export class ErsFlow {
  draft: ErsDraft;
  lastError: string | null = null;
  submittedId: string | null = null;

  constructor(private api: ApiClient, phase: Phase, routeId?: string) {
    this.draft = emptyDraft(phase, routeId);
  }

  loadQuestionnaire(): Promise<Questionnaire> {
    return this.api.questionnaire(this.draft.phase);
  }

  rate(item: 'S1' | 'S2' | 'S3', value: number): void {
    this.draft.ratings[item] = value;
  }

  get canSubmit(): boolean {
    return isComplete(this.draft);
  }

  async submit(): Promise<string | null> {
    try {
      const { ers_id } = await this.api.postErs(toPayload(this.draft));
      this.submittedId = ers_id;
      this.lastError = null;
      return ers_id;
    } catch (err) {
      this.lastError = err instanceof Error ? err.message : 'submit failed';
      return null; // draft intentionally retained for retry
    }
  }

  listForRoute(): Promise<ErsStored[]> {
    if (!this.draft.routeId) return Promise.resolve([]);
    return this.api.listErs(this.draft.routeId);
  }
}
