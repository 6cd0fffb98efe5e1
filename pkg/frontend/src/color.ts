import type { Profile } from './types.js';

// Route colors follow the scenic=blue / urban=red presentation convention.
export const PROFILE_COLORS: Record<Profile, string> = {
  scenic: '#2563eb',
  urban: '#dc2626',
};

const RAMP_LOW: [number, number, number] = [68, 1, 84]; // deep violet
const RAMP_HIGH: [number, number, number] = [253, 231, 37]; // bright yellow

/** Monotone color ramp for normalized desirability in [0, 1]. */
export function desirabilityColor(value: number): string {
  const t = Math.min(1, Math.max(0, value));
  const channel = (i: number) => Math.round(RAMP_LOW[i] + t * (RAMP_HIGH[i] - RAMP_LOW[i]));
  return `rgb(${channel(0)}, ${channel(1)}, ${channel(2)})`;
}

export function rampChannels(value: number): [number, number, number] {
  const t = Math.min(1, Math.max(0, value));
  return [0, 1, 2].map((i) => RAMP_LOW[i] + t * (RAMP_HIGH[i] - RAMP_LOW[i])) as [number, number, number];
}
