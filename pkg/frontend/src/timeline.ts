/**
 * Mapping between canvas x pixels and integer timeline positions.
 * Positions snap to the nearest slot on drop and clamp to the timeline.
 */

export interface TimelineGeometry {
  /** Largest valid position (weeks, or day span of the calendar). */
  bound: number;
  /** x pixel of position 0. */
  originPx: number;
  /** Width in pixels covering positions 0..bound. */
  widthPx: number;
}

export function pxPerUnit(geometry: TimelineGeometry): number {
  return geometry.widthPx / Math.max(1, geometry.bound);
}

export function positionToX(geometry: TimelineGeometry, position: number): number {
  return geometry.originPx + position * pxPerUnit(geometry);
}

export function xToPosition(geometry: TimelineGeometry, x: number): number {
  const raw = Math.round((x - geometry.originPx) / pxPerUnit(geometry));
  return Math.min(geometry.bound, Math.max(0, raw));
}

/** Tick positions for the axis, at most ~20 labelled stops. */
export function axisTicks(geometry: TimelineGeometry): number[] {
  const step = Math.max(1, Math.ceil(geometry.bound / 20));
  const ticks: number[] = [];
  for (let p = 0; p <= geometry.bound; p += step) ticks.push(p);
  if (ticks[ticks.length - 1] !== geometry.bound) ticks.push(geometry.bound);
  return ticks;
}
