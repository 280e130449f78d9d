/**
 * Line-based reader for declarations in *canonical* document text.
 *
 * The server stores documents canonically (one declaration per line,
 * fixed keyword order), so a line scan is enough to list layers and
 * scopes for the view picker and the inspector's per-scope access
 * summary. This never feeds edits; all mutations go through commands.
 */

import type { ResponsibilityKind } from "./types.js";

export interface ScopeDecl {
  name: string;
  layer: string;
  responsibilities: { kind: ResponsibilityKind; milestone: string }[];
}

export interface DocOutline {
  layers: string[];
  scopes: ScopeDecl[];
}

const LAYER_RE = /^ {2}layer (\w+)$/;
const SCOPE_RE = /^ {2}scope (\w+)$/;
const SCOPE_LAYER_RE = /^ {4}layer (\w+)$/;
const RESP_RE = /^ {4}responsibility (resp|cont|noti) asmilestone "(.*)"$/;

export function scanOutline(canonicalText: string): DocOutline {
  const layers: string[] = [];
  const scopes: ScopeDecl[] = [];
  let current: ScopeDecl | null = null;

  for (const line of canonicalText.split("\n")) {
    const layer = LAYER_RE.exec(line);
    if (layer) {
      layers.push(layer[1]);
      current = null;
      continue;
    }
    const scope = SCOPE_RE.exec(line);
    if (scope) {
      current = { name: scope[1], layer: "", responsibilities: [] };
      scopes.push(current);
      continue;
    }
    if (current) {
      const scopeLayer = SCOPE_LAYER_RE.exec(line);
      if (scopeLayer && current.layer === "") {
        current.layer = scopeLayer[1];
        continue;
      }
      const resp = RESP_RE.exec(line);
      if (resp) {
        current.responsibilities.push({
          kind: resp[1] as ResponsibilityKind,
          milestone: unescapeQuoted(resp[2]),
        });
      }
    }
  }
  return { layers, scopes };
}

function unescapeQuoted(inner: string): string {
  return inner.replace(/\\(.)/g, "$1");
}

/** Scopes that reference a milestone, with their access kind. */
export function accessesOf(
  outline: DocOutline,
  milestoneName: string,
): { layer: string; scope: string; kind: ResponsibilityKind }[] {
  const result: { layer: string; scope: string; kind: ResponsibilityKind }[] = [];
  for (const scope of outline.scopes) {
    for (const resp of scope.responsibilities) {
      if (resp.milestone === milestoneName) {
        result.push({ layer: scope.layer, scope: scope.name, kind: resp.kind });
      }
    }
  }
  return result;
}
