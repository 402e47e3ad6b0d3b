import { filterDaily, seriesTotals, windowSeries } from './bucketing';
import { isHomogeneous, rowsForDeveloper } from './identity';
import type { Bundle, ViewState, WindowBucket } from './types';
import { ACTIVITIES } from './types';
import { h, VNode } from './vdom';

const COLORS: Record<string, string> = {
  corrective: '#d9534f',
  perfective: '#5b9bd5',
  adaptive: '#6aa84f',
};

function noData(message = 'no data for this selection'): VNode {
  return h('div', { class: 'no-data' }, [], message);
}

/** One stacked bar per window; segment height in px is its commit count
 * scaled by pixels-per-commit, value carried in data-value. */
export function stackedBars(series: WindowBucket[], pxPerCommit = 6): VNode {
  if (series.length === 0) return noData();
  const bars = series.map((bucket) => {
    const segments = ACTIVITIES.filter((a) => bucket[a] > 0).map((a) =>
      h('div', {
        class: `segment segment-${a}`,
        'data-activity': a,
        'data-value': String(bucket[a]),
        style: `height:${bucket[a] * pxPerCommit}px;background:${COLORS[a]}`,
        title: `${a}: ${bucket[a]}`,
      }),
    );
    return h(
      'div',
      { class: 'bar', 'data-window-start': bucket.windowStart, 'data-window-days': String(bucket.windowDays) },
      [
        h('div', { class: 'bar-stack' }, segments),
        h('div', { class: 'bar-label' }, [], bucket.windowStart),
      ],
    );
  });
  return h('div', { class: 'stacked-bars' }, bars);
}

export function renderProjectActivity(state: ViewState, bundle: Bundle): VNode {
  const series = windowSeries(bundle.daily, state.windowDays, {
    project: state.project,
    dateFrom: state.dateFrom,
    dateTo: state.dateTo,
  });
  if (series.length === 0) return noData();
  const totals = seriesTotals(series);
  return h('div', { class: 'project-activity' }, [
    h(
      'div',
      {
        class: 'totals',
        'data-corrective': String(totals.corrective),
        'data-perfective': String(totals.perfective),
        'data-adaptive': String(totals.adaptive),
      },
      [],
      `corrective ${totals.corrective} / perfective ${totals.perfective} / adaptive ${totals.adaptive}`,
    ),
    stackedBars(series),
  ]);
}

export function renderDeveloperActivity(state: ViewState, bundle: Bundle): VNode {
  const rows = rowsForDeveloper(
    filterDaily(bundle.daily, {
      project: state.project,
      dateFrom: state.dateFrom,
      dateTo: state.dateTo,
    }),
    state.identityMode,
    state.developerEmail,
    state.developerName,
  );
  if (rows.length === 0) {
    return noData('unknown developer for this selection');
  }
  const series = windowSeries(rows, state.windowDays);
  const flag = isHomogeneous(rows)
    ? [h('span', { class: 'homogeneous-flag', title: 'all commits share one activity' }, [], 'homogeneous profile')]
    : [];
  const who = state.identityMode === 'name' ? state.developerName : state.developerEmail;
  return h('div', { class: 'developer-activity' }, [
    h('div', { class: 'developer-header' }, flag, `activity of ${who ?? ''}`),
    stackedBars(series),
  ]);
}
