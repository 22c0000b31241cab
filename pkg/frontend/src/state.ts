// Board and control-panel state. All transitions go through the store so the
// invariants live in one place:
//   - the rendered danger list always matches the selected location and the
//     generation it was fetched under (stale responses are dropped),
//   - at most one sync is in flight, and a finished sync refetches dangers
//     before re-rendering,
//   - mutations are never sent without a token; a 401 falls back to login.

import {
  ApiClient,
  ApiError,
  Danger,
  Lang,
  LocationsResponse,
  Question,
  Scope,
} from "./api.js";

export type View = "board" | "login" | "panel";
export type Tab = "dangers" | "questions" | "about";

export interface BoardState {
  view: View;
  tab: Tab;
  lang: Lang;
  scope: Scope;
  location: string | null;
  locations: LocationsResponse | null;
  dangers: Danger[] | null;
  dangersFetchedUnder: number | null;
  questions: Question[] | null;
  generation: number;
  syncing: boolean;
  token: string | null;
  username: string | null;
  loginError: string | null;
  panelPostalCode: string | null;
  panelChecked: Set<string>;
  panelMessage: string | null;
  error: string | null;
}

export function initialState(): BoardState {
  return {
    view: "board",
    tab: "dangers",
    lang: "en",
    scope: "district",
    location: null,
    locations: null,
    dangers: null,
    dangersFetchedUnder: null,
    questions: null,
    generation: 0,
    syncing: false,
    token: null,
    username: null,
    loginError: null,
    panelPostalCode: null,
    panelChecked: new Set(),
    panelMessage: null,
    error: null,
  };
}

export type Listener = (state: BoardState) => void;

export class BoardStore {
  readonly state: BoardState = initialState();
  private listeners: Listener[] = [];
  private dangersRequest = 0;

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  optionsFor(scope: Scope): string[] {
    const loc = this.state.locations;
    if (!loc) return [];
    if (scope === "district") return loc.districts.map((d) => d.name);
    if (scope === "street") return loc.streets.map((s) => s.name);
    return loc.postal_codes.map((p) => p.value);
  }

  async loadLocations(): Promise<void> {
    this.state.locations = await this.api.locations();
    const options = this.optionsFor(this.state.scope);
    if (this.state.location === null && options.length > 0) {
      this.state.location = options[0] ?? null;
    }
    this.emit();
  }

  async selectScope(scope: Scope): Promise<void> {
    this.state.scope = scope;
    this.state.location = this.optionsFor(scope)[0] ?? null;
    await this.refreshDangers();
  }

  async selectLocation(location: string): Promise<void> {
    this.state.location = location;
    await this.refreshDangers();
  }

  async selectLang(lang: Lang): Promise<void> {
    this.state.lang = lang;
    this.state.questions = null;
    await this.refreshDangers();
    if (this.state.tab === "questions") {
      await this.loadQuestions();
    }
  }

  async selectTab(tab: Tab): Promise<void> {
    this.state.tab = tab;
    this.emit();
    if (tab === "questions" && this.state.questions === null) {
      await this.loadQuestions();
    }
  }

  /** Fetch dangers for the current selection, dropping out-of-date responses. */
  async refreshDangers(): Promise<void> {
    const { scope, location, lang } = this.state;
    if (location === null) {
      this.state.dangers = null;
      this.emit();
      return;
    }
    const request = ++this.dangersRequest;
    this.emit();
    try {
      const { dangers, generation } = await this.api.dangers(scope, location, lang);
      if (request !== this.dangersRequest) {
        return; // a newer selection is already in flight
      }
      this.state.dangers = dangers;
      this.state.dangersFetchedUnder = generation;
      this.state.generation = Math.max(this.state.generation, generation);
      this.state.error = null;
    } catch (error) {
      if (request !== this.dangersRequest) return;
      this.state.dangers = null;
      this.state.error = error instanceof Error ? error.message : String(error);
    }
    this.emit();
  }

  async loadQuestions(): Promise<void> {
    try {
      this.state.questions = await this.api.questions(this.state.lang);
      this.state.error = null;
    } catch (error) {
      this.state.error = error instanceof Error ? error.message : String(error);
    }
    this.emit();
  }

  /** Explicit synchronization; the dangers view refetches before re-rendering. */
  async synchronize(): Promise<void> {
    if (this.state.syncing) {
      return; // at most one in-flight sync
    }
    this.state.syncing = true;
    this.emit();
    try {
      this.state.generation = await this.api.sync();
      this.state.questions = null;
      await this.refreshDangers();
      if (this.state.tab === "questions") {
        await this.loadQuestions();
      }
      this.state.error = null;
    } catch (error) {
      this.state.error = error instanceof Error ? error.message : String(error);
    } finally {
      this.state.syncing = false;
      this.emit();
    }
  }

  canDownloadSynchronized(): boolean {
    return this.state.generation >= 1;
  }

  // -- trusted area ---------------------------------------------------------

  showLogin(): void {
    this.state.view = "login";
    this.state.loginError = null;
    this.emit();
  }

  showBoard(): void {
    this.state.view = "board";
    this.emit();
  }

  async login(username: string, password: string): Promise<boolean> {
    try {
      this.state.token = await this.api.login(username, password);
      this.state.username = username;
      this.state.loginError = null;
      this.state.view = "panel";
      await this.openPanel();
      return true;
    } catch (error) {
      this.state.token = null;
      this.state.username = null;
      this.state.loginError =
        error instanceof ApiError && error.status === 401
          ? "invalid credentials"
          : String(error);
      this.emit();
      return false;
    }
  }

  logout(): void {
    this.state.token = null;
    this.state.username = null;
    this.state.view = "board";
    this.emit();
  }

  async openPanel(): Promise<void> {
    if (!this.state.locations) {
      await this.loadLocations();
    }
    const first = this.state.locations?.postal_codes[0]?.value ?? null;
    if (this.state.panelPostalCode === null) {
      this.state.panelPostalCode = first;
    }
    this.loadPanelChecks();
    this.emit();
  }

  selectPanelPostalCode(value: string): void {
    this.state.panelPostalCode = value;
    this.state.panelMessage = null;
    this.loadPanelChecks();
    this.emit();
  }

  private loadPanelChecks(): void {
    const loc = this.state.locations;
    const value = this.state.panelPostalCode;
    this.state.panelChecked = new Set();
    if (!loc || value === null) return;
    const code = loc.postal_codes.find((p) => p.value === value);
    if (!code) return;
    const byId = new Map(loc.conditions.map((c) => [c.id, c.name]));
    for (const assignment of loc.assignments) {
      if (assignment.postal_code_id === code.id) {
        const name = byId.get(assignment.traffic_condition_id);
        if (name) this.state.panelChecked.add(name);
      }
    }
  }

  toggleCondition(name: string, checked: boolean): void {
    if (checked) {
      this.state.panelChecked.add(name);
    } else {
      this.state.panelChecked.delete(name);
    }
    this.emit();
  }

  /** Persist the checkbox state for the selected postal code. No auto-sync. */
  async updateAssignments(): Promise<boolean> {
    const { token, panelPostalCode } = this.state;
    if (!token) {
      this.state.view = "login";
      this.emit();
      return false;
    }
    if (panelPostalCode === null) {
      return false;
    }
    try {
      await this.api.updateConditions(
        token,
        panelPostalCode,
        [...this.state.panelChecked].sort(),
      );
      this.state.panelMessage = "updated; synchronize to publish";
      await this.loadLocations(); // refresh the assignment view
      this.emit();
      return true;
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        // session expired: back to the login form
        this.state.token = null;
        this.state.username = null;
        this.state.view = "login";
        this.state.loginError = "session expired, log in again";
        this.emit();
        return false;
      }
      this.state.panelMessage = error instanceof Error ? error.message : String(error);
      this.emit();
      return false;
    }
  }
}
