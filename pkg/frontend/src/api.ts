import type {
  ApiErrorPayload,
  CaptionsResponse,
  ChatResponse,
  ParamPointData,
  PrefsData,
  PreviewResponse,
  ProjectConfigData,
  SoundRepresentation,
} from './types';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly payload: ApiErrorPayload,
  ) {
    super(payload.message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let payload: ApiErrorPayload;
  try {
    payload = (await response.json()) as ApiErrorPayload;
  } catch {
    payload = { code: 'Unknown', message: response.statusText, details: {} };
  }
  return new ApiError(response.status, payload);
}

/** Thin typed client for the captune HTTP service. */
export class ApiClient {
  constructor(public readonly baseUrl: string = '') {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  createProject(srt: string, metadata: { title: string; genre: string; synopsis: string },
                descriptions?: Record<string, string>): Promise<{ project_id: string }> {
    return this.request('POST', '/projects', { srt, metadata, descriptions });
  }

  calibrate(projectId: string): Promise<ParamPointData> {
    return this.request('POST', `/projects/${projectId}/calibrate`);
  }

  setAnchors(projectId: string, lower: ParamPointData, upper: ParamPointData):
      Promise<{ lower: ParamPointData; upper: ParamPointData }> {
    return this.request('POST', `/projects/${projectId}/anchors`, { lower, upper });
  }

  preview(projectId: string, cueIndex: number, sliderDetail: number,
          sliderExpr: number): Promise<PreviewResponse> {
    return this.request('POST', `/projects/${projectId}/preview`, {
      cue_index: cueIndex,
      slider_detail: sliderDetail,
      slider_expr: sliderExpr,
    });
  }

  updateCue(projectId: string, cueIndex: number, update: {
    new_text?: string;
    lock?: boolean;
    anchor_preview?: { lower_text?: string | null; upper_text?: string | null };
  }): Promise<unknown> {
    return this.request('PUT', `/projects/${projectId}/cues/${cueIndex}`, update);
  }

  async exportConfig(projectId: string): Promise<string> {
    const response = await fetch(`${this.baseUrl}/projects/${projectId}/export`);
    if (!response.ok) {
      throw await parseError(response);
    }
    return response.text();
  }

  createSession(config: ProjectConfigData): Promise<{ session_id: string; prefs: PrefsData }> {
    return this.request('POST', '/sessions', { config });
  }

  setPrefs(sessionId: string, update: {
    cell?: { detail: number; expressiveness: number };
    representation?: SoundRepresentation;
    genre_aligned?: boolean;
  }): Promise<{ prefs: PrefsData }> {
    return this.request('PUT', `/sessions/${sessionId}/prefs`, update);
  }

  chat(sessionId: string, utterance: string): Promise<ChatResponse> {
    return this.request('POST', `/sessions/${sessionId}/chat`, { utterance });
  }

  getCaptions(sessionId: string, fromMs?: number, toMs?: number): Promise<CaptionsResponse> {
    const params = new URLSearchParams();
    if (fromMs !== undefined) params.set('from_ms', String(fromMs));
    if (toMs !== undefined) params.set('to_ms', String(toMs));
    const query = params.toString();
    return this.request('GET', `/sessions/${sessionId}/captions${query ? '?' + query : ''}`);
  }
}
