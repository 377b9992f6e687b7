// Browser entry point: keyboard steering over the websocket protocol,
// audio through PcmPlayer, HUD from server events. Participants get a
// blank stage (audio only); ?spectator=1 additionally shows the activation
// grid and the event feed.

import { PcmPlayer } from './player.js';
import { parseAudioChunk, parseServerMessage } from './protocol.js';
import { SessionModel } from './session.js';

const params = new URLSearchParams(location.search);
const server = params.get('server') ?? `ws://${location.hostname}:8000/ws`;
const seed = Number(params.get('seed') ?? '0');
const spectator = params.get('spectator') === '1';

const model = new SessionModel(seed, spectator);

const el = (id: string) => document.getElementById(id) as HTMLElement;

const keys = { forward: 0 as -1 | 0 | 1, turn: 0 as -1 | 0 | 1 };
let camYaw = 0;
let camPitch = -15;
let dirty = false;

function updateHud() {
  el('conn').textContent = model.connection;
  el('phase').textContent = model.phase;
  el('timer').textContent = (model.elapsedMs(performance.now()) / 1000).toFixed(1) + ' s';
  el('marks').textContent = String(model.counters.marks);
  el('interventions').textContent = String(model.counters.interventions);
  if (model.lastError) el('error').textContent = model.lastError;
  if (model.summary) {
    el('summary').textContent = model.summaryLine();
    el('summary-panel').classList.remove('hidden');
  }
  if (spectator) {
    const cells = document.querySelectorAll('#grid div');
    model.activations.forEach((on, i) => cells[i]?.classList.toggle('active', on));
  }
}

function pushEvent(text: string) {
  if (!spectator) return;
  const li = document.createElement('li');
  li.textContent = text;
  el('feed').prepend(li);
  while (el('feed').childElementCount > 30) el('feed').lastChild?.remove();
}

const ws = new WebSocket(server);
ws.binaryType = 'arraybuffer';
model.connection = 'connecting';

const audioCtx = new AudioContext({ sampleRate: 44100 });
const player = new PcmPlayer(audioCtx);

ws.onopen = () => {
  model.connection = 'open';
  ws.send(JSON.stringify(model.startMessage()));
};

ws.onmessage = (ev) => {
  if (typeof ev.data === 'string') {
    const msg = parseServerMessage(ev.data);
    model.handleMessage(msg, performance.now());
    if (msg.type === 'event') pushEvent(`${(msg.t_ms / 1000).toFixed(1)}s ${msg.kind}`);
  } else {
    player.push(parseAudioChunk(ev.data));
  }
  updateHud();
};

ws.onclose = () => {
  model.handleDisconnect();
  updateHud();
};

ws.onerror = () => {
  model.connection = 'error';
  updateHud();
};

function sendInput() {
  if (ws.readyState !== WebSocket.OPEN || model.phase !== 'running') return;
  ws.send(JSON.stringify(model.inputMessage(keys.forward, keys.turn, camYaw, camPitch)));
}

document.addEventListener('keydown', (ev) => {
  if (ev.repeat) return;
  switch (ev.code) {
    case 'ArrowUp': keys.forward = 1; dirty = true; break;
    case 'ArrowDown': keys.forward = -1; dirty = true; break;
    case 'ArrowLeft': keys.turn = 1; dirty = true; break;
    case 'ArrowRight': keys.turn = -1; dirty = true; break;
    case 'KeyA': camYaw -= 10; dirty = true; break;
    case 'KeyD': camYaw += 10; dirty = true; break;
    case 'KeyW': camPitch = Math.min(45, camPitch + 10); dirty = true; break;
    case 'KeyS': camPitch = Math.max(-90, camPitch - 10); dirty = true; break;
    case 'Space':
      ev.preventDefault();
      audioCtx.resume();
      if (ws.readyState === WebSocket.OPEN && model.phase === 'running') {
        ws.send(JSON.stringify(model.markMessage()));
      }
      break;
    case 'Enter':
      el('summary-panel').classList.add('hidden');
      break;
  }
});

document.addEventListener('keyup', (ev) => {
  switch (ev.code) {
    case 'ArrowUp': case 'ArrowDown': keys.forward = 0; dirty = true; break;
    case 'ArrowLeft': case 'ArrowRight': keys.turn = 0; dirty = true; break;
  }
});

setInterval(() => {
  if (dirty) {
    sendInput();
    dirty = false;
  }
  updateHud();
}, 50);

if (spectator) {
  el('spectator-pane').classList.remove('hidden');
  const grid = el('grid');
  for (let i = 0; i < 12; i++) grid.appendChild(document.createElement('div'));
} // participant mode: the stage stays blank on purpose
