import { Lang } from "./api.js";

const STRINGS = {
  en: {
    title: "Traffic Danger Board",
    tabDangers: "Dangers by location",
    tabQuestions: "Any questions?",
    tabAbout: "About",
    scope: "Scope",
    location: "Location",
    scopePostal: "Postal code",
    scopeStreet: "Street",
    scopeDistrict: "District",
    synchronize: "Synchronize",
    syncing: "Synchronizing…",
    knowledge: "Give me some knowledge",
    logout: "Log out",
    downloadCore: "Core ontology",
    downloadSynced: "Synchronized ontology",
    syncFirst: "Synchronize first to download this ontology",
    noDangers: "No dangers reported for this location.",
    loading: "Loading…",
    loginTitle: "Trusted area",
    username: "Username",
    password: "Password",
    loginButton: "Log in",
    backToBoard: "Back to the board",
    panelTitle: "Traffic Danger Control Panel",
    loggedInAs: "Logged in as",
    postalCode: "Postal code",
    update: "Update",
    aboutText:
      "This board infers traffic dangers for postal codes, streets and districts " +
      "from reported road conditions. Trusted users assign conditions to postal " +
      "codes in the control panel; after synchronization the reasoner rolls the " +
      "conditions up through streets to districts and classifies the resulting " +
      "dangers shown here.",
    generation: "generation",
  },
  pl: {
    title: "Tablica zagrożeń drogowych",
    tabDangers: "Zagrożenia według lokalizacji",
    tabQuestions: "Pytania?",
    tabAbout: "O systemie",
    scope: "Zakres",
    location: "Lokalizacja",
    scopePostal: "Kod pocztowy",
    scopeStreet: "Ulica",
    scopeDistrict: "Dzielnica",
    synchronize: "Synchronizuj",
    syncing: "Synchronizacja…",
    knowledge: "Daj mi trochę wiedzy",
    logout: "Wyloguj",
    downloadCore: "Ontologia bazowa",
    downloadSynced: "Ontologia zsynchronizowana",
    syncFirst: "Najpierw zsynchronizuj, aby pobrać tę ontologię",
    noDangers: "Brak zagrożeń dla tej lokalizacji.",
    loading: "Wczytywanie…",
    loginTitle: "Strefa zaufana",
    username: "Użytkownik",
    password: "Hasło",
    loginButton: "Zaloguj",
    backToBoard: "Powrót do tablicy",
    panelTitle: "Panel warunków drogowych",
    loggedInAs: "Zalogowano jako",
    postalCode: "Kod pocztowy",
    update: "Aktualizuj",
    aboutText:
      "Tablica wyprowadza zagrożenia drogowe dla kodów pocztowych, ulic i " +
      "dzielnic na podstawie zgłoszonych warunków. Zaufani użytkownicy " +
      "przypisują warunki kodom pocztowym w panelu; po synchronizacji " +
      "wnioskowanie propaguje warunki przez ulice do dzielnic i klasyfikuje " +
      "pokazane tutaj zagrożenia.",
    generation: "generacja",
  },
} as const;

export type UiKey = keyof (typeof STRINGS)["en"];

export function t(lang: Lang, key: UiKey): string {
  return STRINGS[lang][key] ?? STRINGS.en[key];
}
