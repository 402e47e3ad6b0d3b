import type { Bundle, ProfileRow } from './types';
import { h, VNode } from './vdom';

export const TABLE_COLUMNS = [
  'project',
  'developer_email',
  'window_start',
  'window_days',
  'corrective',
  'perfective',
  'adaptive',
] as const;

export type SortColumn = (typeof TABLE_COLUMNS)[number];

function cell(row: ProfileRow, column: SortColumn): string | number {
  const value = row[column];
  return value === null ? '' : value;
}

/** Stable sort; numeric columns compare numerically, descending option. */
export function sortRows(rows: ProfileRow[], column: SortColumn, descending = false): ProfileRow[] {
  const decorated = rows.map((row, i) => ({ row, i }));
  decorated.sort((a, b) => {
    const va = cell(a.row, column);
    const vb = cell(b.row, column);
    let cmp: number;
    if (typeof va === 'number' && typeof vb === 'number') {
      cmp = va - vb;
    } else {
      cmp = String(va).localeCompare(String(vb));
    }
    if (cmp === 0) return a.i - b.i;
    return descending ? -cmp : cmp;
  });
  return decorated.map((d) => d.row);
}

export function renderDataTable(bundle: Bundle, sortBy?: SortColumn, descending = false): VNode {
  const rows = sortBy ? sortRows(bundle.profiles, sortBy, descending) : bundle.profiles;
  const head = h(
    'tr',
    {},
    TABLE_COLUMNS.map((c) => h('th', { 'data-column': c }, [], c)),
  );
  const body = rows.map((row) =>
    h(
      'tr',
      { class: 'data-row' },
      TABLE_COLUMNS.map((c) => h('td', { 'data-column': c }, [], String(cell(row, c)))),
    ),
  );
  return h('table', { class: 'data-table' }, [
    h('thead', {}, [head]),
    h('tbody', {}, body),
  ]);
}

/**
 * Download the server's CSV untouched: the bytes the user saves are the
 * bytes the server sent.
 */
export async function fetchCsvBytes(baseUrl: string, name: string): Promise<Uint8Array> {
  const response = await fetch(`${baseUrl}/api/datasets/${name}`);
  if (!response.ok) {
    throw new Error(`download failed: ${response.status}`);
  }
  return new Uint8Array(await response.arrayBuffer());
}

export function csvBlob(bytes: Uint8Array): Blob {
  return new Blob([bytes.buffer as ArrayBuffer], { type: 'text/csv' });
}
