/**
 * Typed client for the analysis service. Every view reads numbers from these
 * payloads verbatim; the client never transforms values.
 */

export interface LabelEntry {
  id: number;
  name: string;
}

export interface DatasetInfo {
  trials: number;
  channels: string[];
  sample_rate_hz: number;
  samples_per_trial: number;
  labels: LabelEntry[];
  trial_label_ids: number[];
  validation: { ok: boolean; issues: [string, string][] } | null;
}

export interface SessionSummary {
  id: string;
  stages: {
    dataset: boolean;
    filtered: boolean;
    ica: boolean;
    features: boolean;
    runs: number;
  };
  dataset?: DatasetInfo;
  filter?: { cutoff_hz: number; taps: number };
  ica?: { rejections: number[][]; threshold: number };
  features?: { rows: number; columns: number };
}

export interface ChannelWindow {
  channel: string;
  stage: string;
  trial: number;
  from: number;
  to: number;
  sample_rate_hz: number;
  samples: number[];
}

export interface IcaComponentInfo {
  index: number;
  score: number | null;
  constant_series: boolean;
  activation: number[];
}

export interface IcaComponents {
  trial: number;
  converged: boolean;
  rejected: number[];
  components: IcaComponentInfo[];
}

export interface IcaRunSummary {
  trials: number;
  converged: boolean[];
  rejections: number[][];
  threshold: number;
}

export interface BandView {
  band: string;
  channel: string;
  trial: number;
  stage: string;
  nominal_range_hz: [number, number | null];
  dyadic_range_hz: [number, number];
  sample_rate_hz: number;
  samples: number[];
}

export interface SpectrumView {
  channel: string;
  trial: number;
  stage: string;
  frequencies_hz: number[];
  power: number[];
  peak_frequency_hz: number;
}

export interface FeaturesInfo {
  rows: number;
  columns: number;
  feature_names: string[];
}

export interface FeaturePage {
  feature_names: string[];
  offset: number;
  total: number;
  rows: number[][];
  labels: number[];
}

export interface EvaluationMetrics {
  accuracy: number;
  confusion: number[][];
  per_class_recall: number[];
}

export interface RunMetrics {
  run: number;
  classifier: string;
  hyperparameters: Record<string, unknown>;
  seed: number;
  training?: EvaluationMetrics;
  cross_validation?: {
    folds: number;
    fold_accuracies: number[];
    mean_accuracy: number;
  };
  loss_curve?: number[];
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const text = await response.text();
    let payload: unknown = null;
    if (text) {
      try {
        payload = JSON.parse(text);
      } catch {
        payload = text;
      }
    }
    if (!response.ok) {
      const detail =
        payload && typeof payload === "object" && "error" in payload
          ? String((payload as { error: unknown }).error)
          : text || response.statusText;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  createSession(): Promise<{ id: string }> {
    return this.request("POST", "/sessions");
  }

  summary(sessionId: string): Promise<SessionSummary> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  uploadDatasetPath(sessionId: string, path: string): Promise<SessionSummary> {
    return this.request("POST", `/sessions/${sessionId}/dataset`, { path });
  }

  uploadDatasetInline(sessionId: string, inline: unknown): Promise<SessionSummary> {
    return this.request("POST", `/sessions/${sessionId}/dataset`, { inline });
  }

  channelWindow(
    sessionId: string,
    channel: string,
    opts: { stage?: string; trial?: number; from?: number; to?: number } = {},
  ): Promise<ChannelWindow> {
    const params = new URLSearchParams();
    if (opts.stage !== undefined) params.set("stage", opts.stage);
    if (opts.trial !== undefined) params.set("trial", String(opts.trial));
    if (opts.from !== undefined) params.set("from", String(opts.from));
    if (opts.to !== undefined) params.set("to", String(opts.to));
    const query = params.toString();
    return this.request(
      "GET",
      `/sessions/${sessionId}/channels/${encodeURIComponent(channel)}${query ? `?${query}` : ""}`,
    );
  }

  runFilter(sessionId: string, cutoffHz: number, taps: number): Promise<SessionSummary> {
    return this.request("POST", `/sessions/${sessionId}/filter`, {
      cutoff_hz: cutoffHz,
      taps,
    });
  }

  runIca(
    sessionId: string,
    options: { threshold?: number; seed?: number } = {},
  ): Promise<IcaRunSummary> {
    return this.request("POST", `/sessions/${sessionId}/ica`, options);
  }

  icaComponents(sessionId: string, trial: number): Promise<IcaComponents> {
    return this.request("GET", `/sessions/${sessionId}/ica/components?trial=${trial}`);
  }

  rejectComponents(
    sessionId: string,
    trial: number,
    indices: number[],
  ): Promise<{ trial: number; rejected: number[] }> {
    return this.request("POST", `/sessions/${sessionId}/ica/reject`, { trial, indices });
  }

  bandView(
    sessionId: string,
    band: string,
    channel: string,
    opts: { trial?: number; stage?: string } = {},
  ): Promise<BandView> {
    const params = new URLSearchParams({ channel });
    if (opts.trial !== undefined) params.set("trial", String(opts.trial));
    if (opts.stage !== undefined) params.set("stage", opts.stage);
    return this.request("GET", `/sessions/${sessionId}/bands/${band}?${params}`);
  }

  spectrum(
    sessionId: string,
    channel: string,
    opts: { trial?: number; stage?: string } = {},
  ): Promise<SpectrumView> {
    const params = new URLSearchParams({ channel });
    if (opts.trial !== undefined) params.set("trial", String(opts.trial));
    if (opts.stage !== undefined) params.set("stage", opts.stage);
    return this.request("GET", `/sessions/${sessionId}/spectrum?${params}`);
  }

  computeFeatures(sessionId: string, config: unknown): Promise<FeaturesInfo> {
    return this.request("POST", `/sessions/${sessionId}/features`, config);
  }

  featurePage(sessionId: string, offset: number, limit: number): Promise<FeaturePage> {
    return this.request(
      "GET",
      `/sessions/${sessionId}/features?offset=${offset}&limit=${limit}`,
    );
  }

  classify(
    sessionId: string,
    body: {
      kind: string;
      hyperparameters?: Record<string, unknown>;
      cv_folds?: number | null;
      seed?: number;
    },
  ): Promise<RunMetrics> {
    return this.request("POST", `/sessions/${sessionId}/classify`, body);
  }

  getRun(sessionId: string, run: number): Promise<RunMetrics> {
    return this.request("GET", `/sessions/${sessionId}/runs/${run}`);
  }
}
