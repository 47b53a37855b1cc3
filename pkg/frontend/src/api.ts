import type {
  ExtractResponse,
  MotionDoc,
  OptimizeResponse,
  SosScript,
  SymbolTable,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

/** Thin client over the soskit HTTP service; all symbol ids come from here. */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const res = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) {
      const detail = await res.text();
      throw new ApiError(res.status, detail || res.statusText);
    }
    return (await res.json()) as T;
  }

  async health(): Promise<boolean> {
    const res = await this.fetchImpl(this.baseUrl + "/v1/health");
    return res.ok;
  }

  async symbols(): Promise<SymbolTable> {
    const res = await this.fetchImpl(this.baseUrl + "/v1/symbols");
    if (!res.ok) throw new ApiError(res.status, res.statusText);
    return (await res.json()) as SymbolTable;
  }

  extract(motion: MotionDoc, theta: number): Promise<ExtractResponse> {
    return this.post("/v1/extract", { motion, theta });
  }

  optimize(
    motion: MotionDoc,
    sos: SosScript,
    options: Record<string, unknown> = {},
  ): Promise<OptimizeResponse> {
    return this.post("/v1/optimize", { motion, sos, options });
  }

  async render(sos: SosScript): Promise<string> {
    const res = await this.fetchImpl(this.baseUrl + "/v1/render", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ sos }),
    });
    if (!res.ok) throw new ApiError(res.status, await res.text());
    return res.text();
  }
}
