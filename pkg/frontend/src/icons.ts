/**
 * Client-side icon mapping. The server never sends visual attributes;
 * choosing glyphs and classes for access kinds is entirely our business.
 * The three responsibility kinds must stay visually distinct.
 */

import type { ResponsibilityKind } from "./types.js";

export interface IconSpec {
  glyph: string;
  className: string;
  title: string;
}

const KIND_ICONS: Record<ResponsibilityKind, IconSpec> = {
  resp: { glyph: "◆", className: "icon-resp", title: "responsible" },
  cont: { glyph: "●", className: "icon-cont", title: "contributing" },
  noti: { glyph: "○", className: "icon-noti", title: "noticing" },
};

const PLAIN_MILESTONE: IconSpec = {
  glyph: "■",
  className: "icon-milestone",
  title: "milestone",
};

export function iconFor(kind: ResponsibilityKind | undefined): IconSpec {
  return kind === undefined ? PLAIN_MILESTONE : KIND_ICONS[kind];
}

export function iconKeyFor(kind: ResponsibilityKind | undefined): string {
  return iconFor(kind).className;
}
