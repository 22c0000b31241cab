// DOM wiring: renders the store state into #app and forwards events back.

import { ApiClient, ConditionNode, Scope } from "./api.js";
import { t } from "./i18n.js";
import { BoardStore } from "./state.js";

const api = new ApiClient("");
const store = new BoardStore(api);

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function conditionTree(nodes: ConditionNode[], checked: Set<string>): string {
  const byParent = new Map<number | null, ConditionNode[]>();
  for (const node of nodes) {
    const list = byParent.get(node.parent_id) ?? [];
    list.push(node);
    byParent.set(node.parent_id, list);
  }
  const renderLevel = (parent: number | null): string => {
    const children = byParent.get(parent) ?? [];
    if (children.length === 0) return "";
    const items = children
      .map(
        (node) => `
        <li>
          <label title="${esc(node.description)}">
            <input type="checkbox" data-condition="${esc(node.name)}"
                   ${checked.has(node.name) ? "checked" : ""}>
            ${esc(node.name)}
          </label>
          ${renderLevel(node.id)}
        </li>`,
      )
      .join("");
    return `<ul class="condition-tree">${items}</ul>`;
  };
  return renderLevel(null);
}

function render(): void {
  const root = document.getElementById("app");
  if (!root) return;
  const s = store.state;
  const lang = s.lang;

  const toolbar = `
    <header class="toolbar">
      <h1>${t(lang, "title")}</h1>
      <div class="toolbar-actions">
        <span class="generation" title="${t(lang, "generation")}">#${s.generation}</span>
        <select id="lang-select" aria-label="language">
          <option value="en" ${lang === "en" ? "selected" : ""}>English</option>
          <option value="pl" ${lang === "pl" ? "selected" : ""}>Polski</option>
        </select>
        <button id="sync-button" ${s.syncing ? "disabled" : ""}>
          ${s.syncing ? t(lang, "syncing") : t(lang, "synchronize")}
        </button>
        ${
          s.token
            ? `<button id="logout-link" class="link">${t(lang, "logout")} (${esc(s.username ?? "")})</button>`
            : `<button id="login-link" class="link">${t(lang, "knowledge")}</button>`
        }
      </div>
    </header>`;

  const downloads = `
    <footer class="toolbar bottom">
      <a href="${api.ontologyUrl("core")}" download="core.kb">${t(lang, "downloadCore")}</a>
      ${
        store.canDownloadSynchronized()
          ? `<a href="${api.ontologyUrl("synchronized")}" download="synchronized.kb">${t(lang, "downloadSynced")}</a>`
          : `<span class="disabled" title="${t(lang, "syncFirst")}">${t(lang, "downloadSynced")}</span>`
      }
    </footer>`;

  let body = "";
  if (s.view === "login") {
    body = `
      <section class="card">
        <h2>${t(lang, "loginTitle")}</h2>
        <form id="login-form">
          <label>${t(lang, "username")} <input name="username" autocomplete="username"></label>
          <label>${t(lang, "password")} <input name="password" type="password"></label>
          <button type="submit">${t(lang, "loginButton")}</button>
          ${s.loginError ? `<p class="error">${esc(s.loginError)}</p>` : ""}
        </form>
        <button id="back-board" class="link">${t(lang, "backToBoard")}</button>
      </section>`;
  } else if (s.view === "panel") {
    const conditions = s.locations?.conditions ?? [];
    body = `
      <section class="card">
        <h2>${t(lang, "panelTitle")}</h2>
        <p>${t(lang, "loggedInAs")} <strong>${esc(s.username ?? "")}</strong></p>
        <label>${t(lang, "postalCode")}
          <select id="panel-postal">
            ${(s.locations?.postal_codes ?? [])
              .map(
                (p) =>
                  `<option value="${esc(p.value)}" ${p.value === s.panelPostalCode ? "selected" : ""}>${esc(p.value)}</option>`,
              )
              .join("")}
          </select>
        </label>
        ${conditionTree(conditions, s.panelChecked)}
        <button id="panel-update">${t(lang, "update")}</button>
        ${s.panelMessage ? `<p class="message">${esc(s.panelMessage)}</p>` : ""}
        <button id="back-board" class="link">${t(lang, "backToBoard")}</button>
      </section>`;
  } else {
    const tabs = (["dangers", "questions", "about"] as const)
      .map(
        (tab) =>
          `<button class="tab ${s.tab === tab ? "active" : ""}" data-tab="${tab}">
             ${t(lang, tab === "dangers" ? "tabDangers" : tab === "questions" ? "tabQuestions" : "tabAbout")}
           </button>`,
      )
      .join("");
    let tabBody = "";
    if (s.tab === "dangers") {
      const options = store.optionsFor(s.scope);
      const dangerList =
        s.dangers === null
          ? `<p>${t(lang, "loading")}</p>`
          : s.dangers.length === 0
            ? `<p class="no-dangers">${t(lang, "noDangers")}</p>`
            : `<ul class="dangers">${s.dangers
                .map((d) => `<li title="${esc(d.class_name)}">${esc(d.label)}</li>`)
                .join("")}</ul>`;
      tabBody = `
        <div class="selectors">
          <label>${t(lang, "scope")}
            <select id="scope-select">
              <option value="postal_code" ${s.scope === "postal_code" ? "selected" : ""}>${t(lang, "scopePostal")}</option>
              <option value="street" ${s.scope === "street" ? "selected" : ""}>${t(lang, "scopeStreet")}</option>
              <option value="district" ${s.scope === "district" ? "selected" : ""}>${t(lang, "scopeDistrict")}</option>
            </select>
          </label>
          <label>${t(lang, "location")}
            <select id="location-select">
              ${options
                .map(
                  (name) =>
                    `<option value="${esc(name)}" ${name === s.location ? "selected" : ""}>${esc(name)}</option>`,
                )
                .join("")}
            </select>
          </label>
        </div>
        ${dangerList}`;
    } else if (s.tab === "questions") {
      tabBody =
        s.questions === null
          ? `<p>${t(lang, "loading")}</p>`
          : s.questions
              .map(
                (q) => `
                <div class="question">
                  <h3>${esc(q.labels[q.question_class] ?? q.question_class)}</h3>
                  <ul>${q.answers
                    .map((a) => `<li>${esc(q.labels[a] ?? a)}</li>`)
                    .join("")}</ul>
                </div>`,
              )
              .join("");
    } else {
      tabBody = `<p class="about">${t(lang, "aboutText")}</p>`;
    }
    body = `
      <nav class="tabs">${tabs}</nav>
      <main class="card">${tabBody}</main>`;
  }

  root.innerHTML = `
    ${toolbar}
    ${s.error ? `<p class="error global">${esc(s.error)}</p>` : ""}
    ${body}
    ${downloads}`;
  wire(root);
}

function wire(root: HTMLElement): void {
  root.querySelector("#lang-select")?.addEventListener("change", (event) => {
    void store.selectLang((event.target as HTMLSelectElement).value as "en" | "pl");
  });
  root.querySelector("#sync-button")?.addEventListener("click", () => {
    void store.synchronize();
  });
  root.querySelector("#login-link")?.addEventListener("click", () => store.showLogin());
  root.querySelector("#logout-link")?.addEventListener("click", () => store.logout());
  root.querySelectorAll(".tab").forEach((button) =>
    button.addEventListener("click", () => {
      void store.selectTab((button as HTMLElement).dataset.tab as "dangers" | "questions" | "about");
    }),
  );
  root.querySelector("#scope-select")?.addEventListener("change", (event) => {
    void store.selectScope((event.target as HTMLSelectElement).value as Scope);
  });
  root.querySelector("#location-select")?.addEventListener("change", (event) => {
    void store.selectLocation((event.target as HTMLSelectElement).value);
  });
  root.querySelector("#login-form")?.addEventListener("submit", (event) => {
    event.preventDefault();
    const form = event.target as HTMLFormElement;
    const data = new FormData(form);
    void store.login(String(data.get("username") ?? ""), String(data.get("password") ?? ""));
  });
  root.querySelectorAll("#back-board").forEach((button) =>
    button.addEventListener("click", () => store.showBoard()),
  );
  root.querySelector("#panel-postal")?.addEventListener("change", (event) => {
    store.selectPanelPostalCode((event.target as HTMLSelectElement).value);
  });
  root.querySelectorAll("input[data-condition]").forEach((box) =>
    box.addEventListener("change", (event) => {
      const input = event.target as HTMLInputElement;
      store.toggleCondition(input.dataset.condition ?? "", input.checked);
    }),
  );
  root.querySelector("#panel-update")?.addEventListener("click", () => {
    void store.updateAssignments();
  });
}

store.subscribe(render);
void store.loadLocations().then(() => store.refreshDangers());
