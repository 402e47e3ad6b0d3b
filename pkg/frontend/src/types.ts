export type ActivityName = 'corrective' | 'perfective' | 'adaptive';

export const ACTIVITIES: ActivityName[] = ['corrective', 'perfective', 'adaptive'];

/** One calendar day of one developer's activity in one project. */
export interface DailyRow {
  project: string;
  developer_email: string;
  developer_name: string;
  date: string; // ISO yyyy-mm-dd
  corrective: number;
  perfective: number;
  adaptive: number;
}

export interface ProfileRow {
  project: string | null;
  developer_email: string | null;
  developer_name: string | null;
  window_start: string | null;
  window_days: number | null;
  corrective: number;
  perfective: number;
  adaptive: number;
}

export interface HomogeneityRow {
  project: string;
  corrective_only: number;
  perfective_only: number;
  adaptive_only: number;
  homogeneous_share: number;
  total_contributors: number;
}

export interface Bundle {
  schema_version: number;
  window_days: number | null;
  profiles: ProfileRow[];
  daily: DailyRow[];
  homogeneity: HomogeneityRow[];
  keyword_frequencies: { stem: string; count: number }[];
  change_type_frequencies: { change_type: string; count: number }[];
}

export type IdentityMode = 'email' | 'name' | 'both';

export type Tab = 'project' | 'developer' | 'data';

/** All client-side state; the server is only ever read. */
export interface ViewState {
  tab: Tab;
  project: string | null;
  developerEmail: string | null;
  developerName: string | null;
  identityMode: IdentityMode;
  windowDays: number; // > 0, defaults to 28
  dateFrom: string | null;
  dateTo: string | null;
}

export function defaultViewState(): ViewState {
  return {
    tab: 'project',
    project: null,
    developerEmail: null,
    developerName: null,
    identityMode: 'email',
    windowDays: 28,
    dateFrom: null,
    dateTo: null,
  };
}

export interface WindowBucket {
  windowStart: string; // ISO date of the bucket's first day
  windowDays: number;
  corrective: number;
  perfective: number;
  adaptive: number;
}
