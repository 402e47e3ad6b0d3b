import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import type { Bundle } from '../src/types';

const here = dirname(fileURLToPath(import.meta.url));

export function loadBundle(): Bundle {
  return JSON.parse(readFileSync(join(here, 'fixtures', 'bundle.json'), 'utf-8')) as Bundle;
}

export function loadCsvBytes(): Uint8Array {
  return new Uint8Array(readFileSync(join(here, 'fixtures', 'profiles.csv')));
}
