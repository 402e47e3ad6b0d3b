import { describe, expect, it } from 'vitest';
import { seriesTotals, windowSeries } from '../src/bucketing';
import { ACTIVITIES } from '../src/types';
import { loadBundle } from './fixture';

const bundle = loadBundle();

describe('client-side re-bucketing', () => {
  it('conserves totals at every window length', () => {
    const reference = seriesTotals(windowSeries(bundle.daily, 28));
    for (const windowDays of [7, 28, 90]) {
      const totals = seriesTotals(windowSeries(bundle.daily, windowDays));
      expect(totals).toEqual(reference);
    }
  });

  it('matches the bundle daily totals exactly', () => {
    const totals = seriesTotals(windowSeries(bundle.daily, 28));
    for (const activity of ACTIVITIES) {
      const daily = bundle.daily.reduce((sum, row) => sum + row[activity], 0);
      expect(totals[activity]).toBe(daily);
    }
  });

  it('buckets by floor((day - start) / window)', () => {
    const rows = [
      { project: 'p', developer_email: 'd@x', developer_name: 'd', date: '2016-03-01', corrective: 1, perfective: 0, adaptive: 0 },
      { project: 'p', developer_email: 'd@x', developer_name: 'd', date: '2016-03-28', corrective: 0, perfective: 2, adaptive: 0 },
      { project: 'p', developer_email: 'd@x', developer_name: 'd', date: '2016-03-29', corrective: 0, perfective: 0, adaptive: 3 },
    ];
    const series = windowSeries(rows, 28);
    expect(series).toHaveLength(2);
    expect(series[0].windowStart).toBe('2016-03-01');
    expect(series[0].corrective).toBe(1);
    expect(series[0].perfective).toBe(2); // day 27 still in the first window
    expect(series[1].windowStart).toBe('2016-03-29');
    expect(series[1].adaptive).toBe(3);
  });

  it('returns an empty series when the range excludes everything', () => {
    expect(windowSeries(bundle.daily, 28, { dateFrom: '2030-01-01' })).toEqual([]);
  });

  it('rejects nonsense window lengths', () => {
    expect(() => windowSeries(bundle.daily, 0)).toThrow();
    expect(() => windowSeries(bundle.daily, -5)).toThrow();
  });

  it('respects project and date filters', () => {
    const all = seriesTotals(windowSeries(bundle.daily, 28));
    const widgets = seriesTotals(windowSeries(bundle.daily, 28, { project: 'widgets' }));
    const gadgets = seriesTotals(windowSeries(bundle.daily, 28, { project: 'gadgets' }));
    for (const activity of ACTIVITIES) {
      expect(widgets[activity] + gadgets[activity]).toBe(all[activity]);
    }
  });
});
