import { mountApp } from "./app.js";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:8000";

const container = document.getElementById("app");
if (!container) throw new Error("missing #app container");
mountApp(document, container, SERVICE_URL);
