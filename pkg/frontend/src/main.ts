/** Browser entry: three views wired to one API client.
 *
 * State lives in three module-level objects; every mutation re-renders
 * the affected view from scratch.  The agency secret stays in memory.
 */

import { CivicApi } from "./api.js";
import { advanceStatus, emptyBoard, loadBoard, type BoardState } from "./board.js";
import { emptyForm, submitComplaint, canSubmit, reset, type ComplaintForm } from "./form.js";
import { isStatus } from "./lifecycle.js";
import { boardView, formView, trackerView } from "./render.js";
import { emptyTracker, trackRequest, type TrackerState } from "./tracker.js";

const api = new CivicApi(window.location.origin.replace(/:\d+$/, ":8000"));

let form: ComplaintForm = emptyForm();
let tracker: TrackerState = emptyTracker();
let board: BoardState = emptyBoard();

function mount(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing mount point #${id}`);
  return node;
}

function renderForm(): void {
  const root = mount("report");
  root.innerHTML = formView(form);
  const textarea = root.querySelector<HTMLTextAreaElement>("textarea[name=description]");
  const name = root.querySelector<HTMLInputElement>("input[name=reporter_name]");
  const contact = root.querySelector<HTMLInputElement>("input[name=reporter_contact]");
  textarea?.addEventListener("input", () => {
    form = { ...form, description: textarea.value };
    syncSubmitButton(root);
  });
  name?.addEventListener("input", () => {
    form = { ...form, reporterName: name.value };
  });
  contact?.addEventListener("input", () => {
    form = { ...form, reporterContact: contact.value };
    syncSubmitButton(root);
  });
  root.querySelector("form")?.addEventListener("submit", (event) => {
    event.preventDefault();
    if (!canSubmit(form)) return;
    void submitComplaint(api, form, (next) => {
      form = next;
      renderForm();
    });
  });
  root.querySelector(".retry")?.addEventListener("click", () => {
    form = reset(form);
    renderForm();
  });
}

function syncSubmitButton(root: HTMLElement): void {
  const button = root.querySelector<HTMLButtonElement>("button[type=submit]");
  if (button !== null) button.disabled = !canSubmit(form);
}

function renderTracker(): void {
  const root = mount("track");
  root.innerHTML = trackerView(tracker);
  const input = root.querySelector<HTMLInputElement>("input[name=request_id]");
  input?.addEventListener("input", () => {
    tracker = { ...tracker, idInput: input.value };
  });
  root.querySelector(".track")?.addEventListener("click", () => {
    void trackRequest(api, tracker).then((next) => {
      tracker = next;
      renderTracker();
    });
  });
}

function renderBoard(): void {
  const root = mount("board");
  root.innerHTML = boardView(board);
  const secret = root.querySelector<HTMLInputElement>("input[name=secret]");
  secret?.addEventListener("change", () => {
    board = { ...board, secret: secret.value };
  });
  for (const button of root.querySelectorAll<HTMLButtonElement>("button.advance")) {
    button.addEventListener("click", () => {
      const id = button.dataset.id;
      const target = button.dataset.target;
      if (id === undefined || target === undefined || !isStatus(target)) return;
      void advanceStatus(api, board, id, target).then((next) => {
        board = next;
        renderBoard();
      });
    });
  }
}

function start(): void {
  renderForm();
  renderTracker();
  void loadBoard(api, board).then((next) => {
    board = next;
    renderBoard();
  });
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", start);
}
