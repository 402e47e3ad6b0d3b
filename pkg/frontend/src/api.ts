import type { Bundle } from './types';

/** Read-only client of the bundle server; the UI never mutates. */
export async function fetchBundle(baseUrl: string): Promise<Bundle> {
  const response = await fetch(`${baseUrl}/api/bundle`);
  if (!response.ok) {
    throw new Error(`cannot load bundle: ${response.status}`);
  }
  const bundle = (await response.json()) as Bundle;
  if (bundle.schema_version !== 1) {
    throw new Error(`unsupported bundle schema_version ${bundle.schema_version}`);
  }
  return bundle;
}
