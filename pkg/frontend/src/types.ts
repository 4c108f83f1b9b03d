/** Payload shapes served by the delivery API. */

export interface RunRecord {
  runId: string;
  timestamp: string | null;
  language: string | null;
  clusterIds: string[];
  documentCount: number;
  resources: Record<string, string>;
}

export interface CountryRow {
  code: string;
  rawCount: number;
  keyness: number;
}

export interface NameRow {
  personId: number;
  surface: string;
  trigger: string | null;
}

export interface TermRow {
  termId: string;
  count: number;
  forms: string[];
  displayForm: string;
  subjectField: string | null;
}

export interface LinkRow {
  cluster: string;
  score: number;
}

export interface ClusterRecord {
  schemaVersion: number;
  clusterId: string;
  runId: string;
  language: string;
  title: string;
  size: number;
  members: string[];
  centroidDocId: string | null;
  keywords: [string, number][];
  countries: CountryRow[];
  names: NameRow[];
  terms: TermRow[];
  links: LinkRow[];
}

export interface KwicLine {
  docId: string;
  termId: string;
  matchedForm: string;
  offset: number;
  left: string;
  right: string;
}

export interface DocumentRecord {
  id: string;
  source: string;
  language: string;
  title: string;
  body: string;
  date?: string | null;
}

export interface RelatedEntry {
  personId: number;
  score: number;
  canonical: string;
}

export interface PersonRecord {
  personId: number;
  canonical: string;
  kind: string;
  variants: string[];
  titles: string[];
  encyclopediaUrls: string[];
  articleIds: string[];
  clusterIds: string[];
  related: { frequent: RelatedEntry[]; specific: RelatedEntry[] };
}

export interface GeoFeature {
  type: "Feature";
  geometry: { type: "Point"; coordinates: [number, number] } | null;
  properties: {
    placeId?: string;
    name?: string;
    kind: string;
    countryCode: string;
    count: number;
  };
}

export interface MapLayer {
  type: "FeatureCollection";
  features: GeoFeature[];
}

export interface PersonPostings {
  personId?: number;
  clusters: string[];
  articles: string[];
}

export interface SearchResults {
  person?: PersonPostings;
  keyword?: { clusters: string[] };
  country?: { clusters: string[] };
  date?: { runs: string[] };
}
