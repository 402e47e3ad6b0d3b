import type { DailyRow, WindowBucket } from './types';
import { ACTIVITIES } from './types';

const MS_PER_DAY = 86_400_000;

function dayNumber(iso: string): number {
  return Math.floor(Date.parse(iso + 'T00:00:00Z') / MS_PER_DAY);
}

function isoFromDayNumber(day: number): string {
  return new Date(day * MS_PER_DAY).toISOString().slice(0, 10);
}

export interface DailyFilter {
  project?: string | null;
  developerEmail?: string | null;
  developerName?: string | null;
  dateFrom?: string | null;
  dateTo?: string | null;
}

export function filterDaily(rows: DailyRow[], filter: DailyFilter): DailyRow[] {
  return rows.filter(
    (r) =>
      (!filter.project || r.project === filter.project) &&
      (!filter.developerEmail || r.developer_email === filter.developerEmail) &&
      (!filter.developerName || r.developer_name === filter.developerName) &&
      (!filter.dateFrom || r.date >= filter.dateFrom) &&
      (!filter.dateTo || r.date <= filter.dateTo),
  );
}

/**
 * Re-bucket per-day rows into windows anchored at the range start.
 * This happens client-side so the period slider needs no server round
 * trip; totals are conserved for every window length.
 */
export function windowSeries(rows: DailyRow[], windowDays: number, filter: DailyFilter = {}): WindowBucket[] {
  if (windowDays <= 0 || !Number.isFinite(windowDays)) {
    throw new Error(`window length must be positive, got ${windowDays}`);
  }
  const kept = filterDaily(rows, filter);
  if (kept.length === 0) return [];
  const start = filter.dateFrom
    ? dayNumber(filter.dateFrom)
    : Math.min(...kept.map((r) => dayNumber(r.date)));
  const buckets = new Map<number, WindowBucket>();
  for (const row of kept) {
    const index = Math.floor((dayNumber(row.date) - start) / windowDays);
    let bucket = buckets.get(index);
    if (!bucket) {
      bucket = {
        windowStart: isoFromDayNumber(start + index * windowDays),
        windowDays,
        corrective: 0,
        perfective: 0,
        adaptive: 0,
      };
      buckets.set(index, bucket);
    }
    for (const activity of ACTIVITIES) {
      bucket[activity] += row[activity];
    }
  }
  return [...buckets.entries()].sort((a, b) => a[0] - b[0]).map(([, v]) => v);
}

export function seriesTotals(series: WindowBucket[]): Record<string, number> {
  const totals: Record<string, number> = { corrective: 0, perfective: 0, adaptive: 0 };
  for (const bucket of series) {
    for (const activity of ACTIVITIES) totals[activity] += bucket[activity];
  }
  return totals;
}
