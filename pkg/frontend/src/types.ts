// Wire types mirroring the service's JSON payloads.

export type SoundRepresentation =
  | 'default'
  | 'source_focused'
  | 'onomatopoeia'
  | 'sensory_quality';

export interface ParamPointData {
  detail: number;
  expressiveness: number;
}

export interface PrefsData {
  target: ParamPointData;
  representation: SoundRepresentation;
  genre_aligned: boolean;
}

export interface CueData {
  index: number;
  start_ms: number;
  end_ms: number;
  text: string;
  kind: 'speech' | 'nsi';
  category: string | null;
  locked: boolean;
  transformed: boolean;
}

export interface SpaceData {
  baseline: ParamPointData;
  lower_anchor: ParamPointData;
  upper_anchor: ParamPointData;
}

export interface ProjectConfigData {
  schema_version: string;
  prompt_version: string;
  metadata: { title: string; genre: string; synopsis: string };
  original_track: { source_name: string; cues: Omit<CueData, 'transformed'>[] };
  space: SpaceData;
  anchor_preview_texts: Record<string, { lower_text: string | null; upper_text: string | null }>;
  context_descriptions: Record<string, string>;
  cue_estimates: Record<string, ParamPointData>;
}

export interface PreviewResponse {
  text: string;
  values: ParamPointData;
  recalibrated_expressiveness: number | null;
}

export interface ChatResponse {
  intent: {
    detail_delta: number | null;
    expressiveness_delta: number | null;
    representation: SoundRepresentation | null;
    genre_aligned: boolean | null;
    explanation: string;
    recognized: boolean;
  };
  prefs: PrefsData;
  reply: string;
}

export interface CaptionsResponse {
  cues: CueData[];
}

export interface ApiErrorPayload {
  code: string;
  message: string;
  details: Record<string, unknown>;
}
