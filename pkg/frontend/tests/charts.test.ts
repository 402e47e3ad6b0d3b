import { describe, expect, it } from 'vitest';
import { windowSeries } from '../src/bucketing';
import { renderDeveloperActivity, renderProjectActivity, stackedBars } from '../src/charts';
import { defaultViewState } from '../src/types';
import { byClass } from '../src/vdom';
import { loadBundle } from './fixture';

const bundle = loadBundle();

describe('project activity view', () => {
  it('renders one bar per window with segment values equal to bundle counts', () => {
    const state = { ...defaultViewState(), project: 'widgets' };
    const view = renderProjectActivity(state, bundle);
    const series = windowSeries(bundle.daily, 28, { project: 'widgets' });
    const bars = byClass(view, 'bar');
    expect(bars).toHaveLength(series.length);
    bars.forEach((bar, i) => {
      const bucket = series[i];
      expect(bar.attrs['data-window-start']).toBe(bucket.windowStart);
      for (const segment of byClass(bar, 'segment')) {
        const activity = segment.attrs['data-activity'] as 'corrective' | 'perfective' | 'adaptive';
        expect(Number(segment.attrs['data-value'])).toBe(bucket[activity]);
      }
      // stacked height encodes the counts linearly
      for (const segment of byClass(bar, 'segment')) {
        const value = Number(segment.attrs['data-value']);
        expect(segment.attrs.style).toContain(`height:${value * 6}px`);
      }
    });
  });

  it('conserves totals across re-bucketing in the rendered view', () => {
    for (const windowDays of [7, 28, 90]) {
      const view = renderProjectActivity({ ...defaultViewState(), windowDays }, bundle);
      const segments = byClass(view, 'segment');
      const total = segments.reduce((sum, s) => sum + Number(s.attrs['data-value']), 0);
      const daily = bundle.daily.reduce(
        (sum, r) => sum + r.corrective + r.perfective + r.adaptive,
        0,
      );
      expect(total).toBe(daily);
    }
  });

  it('shows the explicit empty state when the range excludes all commits', () => {
    const state = { ...defaultViewState(), dateFrom: '2031-01-01', dateTo: '2031-12-31' };
    const view = renderProjectActivity(state, bundle);
    expect(byClass(view, 'no-data')).toHaveLength(1);
  });
});

describe('developer activity view', () => {
  it('merging by name sums both email series', () => {
    const byEmailA = renderDeveloperActivity(
      { ...defaultViewState(), identityMode: 'email', developerEmail: 'alice@work.example' },
      bundle,
    );
    const byEmailB = renderDeveloperActivity(
      { ...defaultViewState(), identityMode: 'email', developerEmail: 'alice@home.example' },
      bundle,
    );
    const merged = renderDeveloperActivity(
      { ...defaultViewState(), identityMode: 'name', developerName: 'Alice Doe' },
      bundle,
    );
    const sum = (view: ReturnType<typeof renderDeveloperActivity>) =>
      byClass(view, 'segment').reduce((total, s) => total + Number(s.attrs['data-value']), 0);
    expect(sum(merged)).toBe(sum(byEmailA) + sum(byEmailB));
  });

  it('merge off keeps the two email series distinct', () => {
    const a = renderDeveloperActivity(
      { ...defaultViewState(), identityMode: 'email', developerEmail: 'alice@work.example' },
      bundle,
    );
    const b = renderDeveloperActivity(
      { ...defaultViewState(), identityMode: 'email', developerEmail: 'alice@home.example' },
      bundle,
    );
    const values = (view: typeof a) => byClass(view, 'segment').map((s) => s.attrs['data-value']);
    expect(values(a)).not.toEqual(values(b));
  });

  it('flags homogeneous developers', () => {
    const bob = renderDeveloperActivity(
      { ...defaultViewState(), identityMode: 'email', developerEmail: 'bob@example.org' },
      bundle,
    );
    expect(byClass(bob, 'homogeneous-flag')).toHaveLength(1);
    const carol = renderDeveloperActivity(
      { ...defaultViewState(), identityMode: 'email', developerEmail: 'carol@example.org' },
      bundle,
    );
    expect(byClass(carol, 'homogeneous-flag')).toHaveLength(0);
  });

  it('unknown developers get the empty-state message', () => {
    const view = renderDeveloperActivity(
      { ...defaultViewState(), identityMode: 'email', developerEmail: 'nobody@nowhere' },
      bundle,
    );
    expect(byClass(view, 'no-data')).toHaveLength(1);
  });
});

describe('stacked bars', () => {
  it('empty series yields the no-data state', () => {
    expect(byClass(stackedBars([]), 'no-data')).toHaveLength(1);
  });
});
