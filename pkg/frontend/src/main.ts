// Application wiring: API client + controller + view + keyboard listener.

import { ApiClient, FetchLike } from "./api.js";
import { ReviewController } from "./controller.js";
import { View } from "./view.js";

export function mount(
  root: HTMLElement,
  fetchImpl: FetchLike,
  doc: Document = document,
): ReviewController {
  const view = new View(root);
  const api = new ApiClient(fetchImpl);
  const controller = new ReviewController(api, (state) => view.render(state));
  doc.addEventListener("keydown", (event) => {
    const e = event as KeyboardEvent;
    if (e.ctrlKey || e.altKey || e.metaKey) return;
    void controller.handleKey(e.key);
  });
  void controller.start();
  return controller;
}

// Browser entry point; tests call mount() themselves.
const root = document.getElementById("app");
if (root !== null) {
  mount(root, (input, init) => fetch(input, init));
}
