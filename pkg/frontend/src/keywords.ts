// Display-side copy of the classifier's term lists, used only to highlight
// why the machine proposal looks the way it does. Highlighting is a
// transparency aid; the authoritative lists live with the classifier.

export const NEGATIVE_TERMS: readonly string[] = [
  "cow urine",
  "cow dung",
  "piss drinker",
  "hindu superspreader",
  "hindu superspreaders",
  "hindusuperspreaders",
  "hindu rituals causing covid",
  "corona puja",
  "superstition",
  "superstitions",
  "hindu virus",
  "hinduvirus",
  "coronahindus",
  "coronajihad",
  "hindusspreadcorona",
  "hinducovidconspiracy",
  "covid19hinduhate",
  "covidhindutva",
  "anti hindu",
  "dismantling global hindutva",
  "kumbh spreading",
  "blame the kumbh",
  "hindu festivals spread",
  "militant hindu",
  "abrahamic faith supremacy",
];

export const POSITIVE_TERMS: readonly string[] = [
  "namaste",
  "namaskar",
  "iskcon",
  "food distribution",
  "blood donation",
  "plasma donation",
  "yoga",
  "swaminarayan temple",
  "mahavir temple",
  "quarantine facility",
  "namasteforsafety",
  "hindusforhumanity",
  "iskconrelief",
  "rsshelpinghands",
  "templeaidcovid",
  "hinducovidrelief",
  "hindutempleswithnation",
  "donated",
  "donation",
  "relief",
];

export interface TextSegment {
  text: string;
  matched: "negative" | "positive" | null;
}

/**
 * Split `text` into segments, marking case-insensitive occurrences of the
 * known terms. Longer phrases win over shorter ones at the same position.
 */
export function highlightKeywords(
  text: string,
  negative: readonly string[] = NEGATIVE_TERMS,
  positive: readonly string[] = POSITIVE_TERMS,
): TextSegment[] {
  const terms: Array<{ term: string; kind: "negative" | "positive" }> = [
    ...negative.map((term) => ({ term, kind: "negative" as const })),
    ...positive.map((term) => ({ term, kind: "positive" as const })),
  ].sort((a, b) => b.term.length - a.term.length);

  const lower = text.toLowerCase();
  const segments: TextSegment[] = [];
  let cursor = 0;
  while (cursor < text.length) {
    let match: { index: number; term: string; kind: "negative" | "positive" } | null = null;
    for (const { term, kind } of terms) {
      const index = lower.indexOf(term, cursor);
      if (index === -1) continue;
      if (match === null || index < match.index) {
        match = { index, term, kind };
      }
    }
    if (match === null) {
      segments.push({ text: text.slice(cursor), matched: null });
      break;
    }
    if (match.index > cursor) {
      segments.push({ text: text.slice(cursor, match.index), matched: null });
    }
    segments.push({
      text: text.slice(match.index, match.index + match.term.length),
      matched: match.kind,
    });
    cursor = match.index + match.term.length;
  }
  if (text.length === 0) segments.push({ text: "", matched: null });
  return segments;
}
