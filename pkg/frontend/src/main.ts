/** Browser entry: wires the controller to the DOM. */

import { ConsoleApi } from "./api.js";
import {
  analyticsRows,
  formatLatency,
  formatNumber,
  formatPercent,
  markerWordsOf,
  topicBars,
  traceRows,
} from "./format.js";
import { ConsoleController, ConsoleState } from "./state.js";
import { RATING_LABELS } from "./types.js";

const controller = new ConsoleController(new ConsoleApi(""));

const el = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
};

const messagesEl = el("messages");
const bannerEl = el("banner");
const inputEl = el("input") as HTMLInputElement;
const sendBtn = el("send") as HTMLButtonElement;
const endBtn = el("end-conversation") as HTMLButtonElement;
const newBtn = el("new-session") as HTMLButtonElement;
const ratingModal = el("rating-modal");
const analyticsEl = el("analytics");
const sessionLabel = el("session-label");

function render(state: ConsoleState): void {
  sessionLabel.textContent = state.sessionId
    ? `session ${state.sessionId.slice(0, 12)}${state.rating ? ` · rated ${state.rating}` : ""}`
    : "no session";

  if (state.banner) {
    bannerEl.textContent = state.banner;
    bannerEl.classList.remove("hidden");
    newBtn.classList.toggle("hidden", !state.sessionExpired);
  } else {
    bannerEl.classList.add("hidden");
    newBtn.classList.add("hidden");
  }

  messagesEl.innerHTML = "";
  for (const turn of state.messages) {
    const bubble = document.createElement("div");
    bubble.className = `bubble ${turn.speaker}`;
    const text = document.createElement("div");
    text.textContent = turn.text;
    bubble.appendChild(text);
    if (turn.speaker === "bot") {
      bubble.appendChild(tracePanel(turn.turn_index));
    }
    messagesEl.appendChild(bubble);
  }
  messagesEl.scrollTop = messagesEl.scrollHeight;
  sendBtn.disabled = state.busy || !state.sessionId;

  renderAnalytics(state);
}

function tracePanel(botTurnIndex: number): HTMLElement {
  const trace = controller.traceFor(botTurnIndex);
  const details = document.createElement("details");
  details.className = "trace";
  const summary = document.createElement("summary");
  if (!trace) {
    summary.textContent = "trace unavailable";
    details.appendChild(summary);
    return details;
  }
  summary.textContent = trace.chosen_generator
    ? `via ${trace.chosen_generator}`
    : "via fallback";
  details.appendChild(summary);

  const body = document.createElement("div");
  body.className = "trace-body";

  if (trace.resolved_input) {
    const resolved = document.createElement("p");
    resolved.textContent = `resolved input: ${trace.resolved_input}`;
    body.appendChild(resolved);
  }
  if (trace.matched_template_ids.length) {
    const matched = document.createElement("p");
    matched.textContent = `matched: ${trace.matched_template_ids.join(", ")}`;
    body.appendChild(matched);
  }

  const table = document.createElement("table");
  table.innerHTML =
    "<thead><tr><th>generator</th><th>tier</th><th>margin</th><th>candidate</th></tr></thead>";
  const tbody = document.createElement("tbody");
  for (const row of traceRows(trace)) {
    const tr = document.createElement("tr");
    if (row.filtered) tr.className = "filtered";
    for (const cell of [row.generator, String(row.tier), row.margin, row.text]) {
      const td = document.createElement("td");
      td.textContent = cell;
      tr.appendChild(td);
    }
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  body.appendChild(table);

  const topics = document.createElement("div");
  topics.className = "topics";
  for (const bar of topicBars(trace)) {
    const row = document.createElement("div");
    row.className = "topic-row";
    const name = document.createElement("span");
    name.textContent = bar.topic;
    const track = document.createElement("div");
    track.className = "bar-track";
    const fill = document.createElement("div");
    fill.className = "bar-fill";
    fill.style.width = `${Math.round(100 * bar.probability)}%`;
    track.appendChild(fill);
    const label = document.createElement("span");
    label.textContent = bar.label;
    row.append(name, track, label);
    topics.appendChild(row);
  }
  body.appendChild(topics);

  const latencies = document.createElement("p");
  latencies.className = "latencies";
  latencies.textContent = Object.entries(trace.latency_ms)
    .map(([stage, ms]) => `${stage} ${formatLatency(ms)}`)
    .join(" · ");
  body.appendChild(latencies);

  details.appendChild(body);
  return details;
}

function renderAnalytics(state: ConsoleState): void {
  analyticsEl.innerHTML = "";
  const data = state.analytics;
  if (!data) return;
  if (data.overall.rated_sessions === 0) {
    const empty = document.createElement("p");
    empty.textContent = "no rated sessions yet";
    analyticsEl.appendChild(empty);
    return;
  }

  const overall = document.createElement("p");
  overall.textContent =
    `${data.overall.rated_sessions} rated sessions · mean rating ` +
    `${formatNumber(data.overall.mean_rating, 2)} · ` +
    `${formatPercent(data.overall.pct_rated_ge_3)} rated 3 or higher`;
  analyticsEl.appendChild(overall);

  const histogram = document.createElement("div");
  histogram.className = "histogram";
  const counts = Object.entries(data.overall.rating_histogram);
  const max = Math.max(1, ...counts.map(([, c]) => c));
  for (const [rating, count] of counts) {
    const row = document.createElement("div");
    row.className = "topic-row";
    const name = document.createElement("span");
    name.textContent = `rating ${rating}`;
    const track = document.createElement("div");
    track.className = "bar-track";
    const fill = document.createElement("div");
    fill.className = "bar-fill";
    fill.style.width = `${Math.round((100 * count) / max)}%`;
    track.appendChild(fill);
    const label = document.createElement("span");
    label.textContent = String(count);
    row.append(name, track, label);
    histogram.appendChild(row);
  }
  analyticsEl.appendChild(histogram);

  const table = document.createElement("table");
  const head = document.createElement("thead");
  head.innerHTML =
    "<tr><th></th><th>Rating 1</th><th>Rating 2</th><th>Rating 3</th><th>Rating 4</th><th>Rating 5</th></tr>";
  table.appendChild(head);
  const tbody = document.createElement("tbody");
  for (const row of analyticsRows(data.per_rating, markerWordsOf(data.per_rating))) {
    const tr = document.createElement("tr");
    const th = document.createElement("th");
    th.textContent = row.label;
    tr.appendChild(th);
    for (const cell of row.cells) {
      const td = document.createElement("td");
      td.textContent = cell;
      tr.appendChild(td);
    }
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  analyticsEl.appendChild(table);
}

function openRatingModal(): void {
  if (controller.state.messages.length < 2) return; // needs at least one exchange
  ratingModal.classList.remove("hidden");
  const options = el("rating-options");
  options.innerHTML = "";
  for (let rating = 1; rating <= 5; rating++) {
    const button = document.createElement("button");
    button.className = "rating-option";
    button.textContent = `${rating} — ${RATING_LABELS[rating]}`;
    button.addEventListener("click", async () => {
      const ok = await controller.submitRating(rating);
      ratingModal.classList.add("hidden");
      if (ok) {
        bannerEl.textContent = `thanks! recorded rating ${rating}.`;
        bannerEl.classList.remove("hidden");
        await controller.refreshAnalytics();
      }
    });
    options.appendChild(button);
  }
}

async function send(): Promise<void> {
  const text = inputEl.value;
  if (!text.trim()) return;
  inputEl.value = "";
  await controller.send(text);
}

sendBtn.addEventListener("click", () => void send());
inputEl.addEventListener("keydown", (event) => {
  if (event.key === "Enter") void send();
});
endBtn.addEventListener("click", openRatingModal);
el("rating-cancel").addEventListener("click", () => ratingModal.classList.add("hidden"));
newBtn.addEventListener("click", () => void controller.startSession());
el("refresh-analytics").addEventListener("click", () => void controller.refreshAnalytics());

controller.subscribe(render);
void controller.startSession().then(() => controller.refreshAnalytics());
