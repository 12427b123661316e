/** Facet histograms rendered as bar scents on the data-panel search box. */

export interface ScentBin {
  label: string;
  count: number;
  fraction: number;
}

/** Case-insensitive substring match, mirroring the search semantics. */
export function matchesFilter(label: string, filter: string): boolean {
  return label.toLowerCase().includes(filter.toLowerCase());
}

/**
 * Distribution of a categorical key over the records matching the filter,
 * ordered by descending count then label (the categorical bin rule).
 */
export function scentBins<T>(
  records: Iterable<T>,
  key: (record: T) => string,
  label: (record: T) => string,
  filter = "",
): ScentBin[] {
  const counts = new Map<string, number>();
  let total = 0;
  for (const record of records) {
    if (!matchesFilter(label(record), filter)) continue;
    const bin = key(record);
    counts.set(bin, (counts.get(bin) ?? 0) + 1);
    total += 1;
  }
  return [...counts.entries()]
    .sort(([aLabel, aCount], [bLabel, bCount]) =>
      aCount === bCount ? aLabel.localeCompare(bLabel) : bCount - aCount,
    )
    .map(([binLabel, count]) => ({
      label: binLabel,
      count,
      fraction: total > 0 ? count / total : 0,
    }));
}
