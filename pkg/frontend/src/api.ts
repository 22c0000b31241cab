// Typed client for the traffic danger query service. The fetch implementation
// is injectable so tests can stub the network.

export type Scope = "postal_code" | "street" | "district";
export type Lang = "en" | "pl";

export interface Danger {
  class_name: string;
  label: string;
}

export interface IdName {
  id: number;
  name: string;
}

export interface PostalCode {
  id: number;
  value: string;
}

export interface ConditionNode {
  id: number;
  parent_id: number | null;
  name: string;
  description: string;
}

export interface Assignment {
  traffic_condition_id: number;
  postal_code_id: number;
}

export interface LocationsResponse {
  districts: IdName[];
  streets: IdName[];
  postal_codes: PostalCode[];
  mappings: {
    street_2_district: [number, number][];
    street_2_postal_code: [number, number][];
  };
  conditions: ConditionNode[];
  assignments: Assignment[];
}

export interface Question {
  question_class: string;
  answers: string[];
  labels: Record<string, string>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: string };
    return body.detail ?? response.statusText;
  } catch {
    return response.statusText;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return response;
  }

  async locations(): Promise<LocationsResponse> {
    const response = await this.request("/api/locations");
    return (await response.json()) as LocationsResponse;
  }

  /** Danger classes for a location plus the snapshot generation that answered. */
  async dangers(
    scope: Scope,
    name: string,
    lang: Lang,
  ): Promise<{ dangers: Danger[]; generation: number }> {
    const params = new URLSearchParams({ scope, name, lang });
    const response = await this.request(`/api/dangers?${params}`);
    const generation = Number(response.headers.get("X-Generation") ?? "0");
    return { dangers: (await response.json()) as Danger[], generation };
  }

  async questions(lang: Lang): Promise<Question[]> {
    const response = await this.request(`/api/questions?lang=${lang}`);
    return (await response.json()) as Question[];
  }

  async sync(): Promise<number> {
    const response = await this.request("/api/sync", { method: "POST" });
    const body = (await response.json()) as { generation: number };
    return body.generation;
  }

  async login(username: string, password: string): Promise<string> {
    const response = await this.request("/api/login", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ username, password }),
    });
    const body = (await response.json()) as { token: string };
    return body.token;
  }

  /** Replace one postal code's condition assignments. Requires a session. */
  async updateConditions(
    token: string,
    postalCode: string,
    conditionNames: string[],
  ): Promise<void> {
    if (!token) {
      throw new ApiError(401, "not logged in");
    }
    await this.request("/api/conditions", {
      method: "POST",
      headers: {
        "Content-Type": "application/json",
        Authorization: `Bearer ${token}`,
      },
      body: JSON.stringify({ postal_code: postalCode, condition_names: conditionNames }),
    });
  }

  ontologyUrl(variant: "core" | "synchronized"): string {
    return `${this.baseUrl}/api/ontology?variant=${variant}`;
  }
}
