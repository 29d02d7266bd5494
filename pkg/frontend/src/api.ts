/**
 * Client for the namegraph query service. The explorer holds no
 * association math of its own; every number on screen comes from here.
 */

export interface EntitySummary {
  id: number;
  canonical_name: string;
  variants: string[];
  kind: string;
}

export interface GraphNode {
  id: number;
  label: string;
  x: number | null;
  y: number | null;
}

export interface GraphEdge {
  a: number;
  b: number;
  weight: number;
  co_count: number;
}

export interface GraphResponse {
  subject: number;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface ExplorerApi {
  search(query: string): Promise<EntitySummary[]>;
  graph(entityId: number, n: number, layout?: boolean): Promise<GraphResponse>;
  /** Address of the person page for an entity (navigation target). */
  entityUrl(entityId: number): string;
}

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
    this.name = "ApiError";
  }
}

export class HttpExplorerApi implements ExplorerApi {
  constructor(private readonly baseUrl: string = "") {}

  async search(query: string): Promise<EntitySummary[]> {
    return this.get(`/search?q=${encodeURIComponent(query)}`);
  }

  async graph(entityId: number, n: number, layout = true): Promise<GraphResponse> {
    return this.get(`/entities/${entityId}/graph?n=${n}&layout=${layout}`);
  }

  entityUrl(entityId: number): string {
    return `${this.baseUrl}/entities/${entityId}`;
  }

  private async get<T>(path: string): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path);
    } catch (err) {
      throw new ApiError(`service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiError(`${path} failed: ${response.status}`, response.status);
    }
    return (await response.json()) as T;
  }
}
