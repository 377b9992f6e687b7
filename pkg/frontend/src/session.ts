// Transport-agnostic session state. The socket layer feeds server messages
// in; the UI reads the fields and asks for outgoing messages (which carry
// strictly increasing seq numbers).

import {
  ClientMessage,
  EventMessage,
  InputMessage,
  MarkMessage,
  ServerMessage,
  TrialSummary,
} from './protocol.js';

export type Connection = 'idle' | 'connecting' | 'open' | 'closed' | 'error';
export type Phase = 'ready' | 'running' | 'finished' | 'aborted';

export interface HudCounters {
  marks: number;
  falseMarks: number;
  seen: number;
  interventions: number;
}

export class SessionModel {
  connection: Connection = 'idle';
  phase: Phase = 'ready';
  spectator: boolean;
  seed: number;
  layoutHash = '';
  counters: HudCounters = { marks: 0, falseMarks: 0, seen: 0, interventions: 0 };
  activations: boolean[] = new Array(12).fill(false);
  events: EventMessage[] = [];
  summary: TrialSummary | null = null;
  lastError = '';
  private seq = 0;
  private startedAt: number | null = null;

  constructor(seed: number, spectator = false) {
    this.seed = seed;
    this.spectator = spectator;
  }

  startMessage(): ClientMessage {
    return { type: 'start', seed: this.seed, spectator: this.spectator };
  }

  inputMessage(forward: -1 | 0 | 1, turn: -1 | 0 | 1,
               camYawDeg: number, camPitchDeg: number): InputMessage {
    return {
      type: 'input',
      seq: ++this.seq,
      forward,
      turn,
      cam_yaw_deg: camYawDeg,
      cam_pitch_deg: camPitchDeg,
    };
  }

  markMessage(): MarkMessage {
    this.counters.marks++;
    return { type: 'mark', seq: ++this.seq };
  }

  elapsedMs(now: number): number {
    if (this.startedAt === null) return 0;
    const end = this.summary ? this.startedAt + this.summary.completion_time_s * 1000 : now;
    return Math.max(0, end - this.startedAt);
  }

  handleMessage(msg: ServerMessage, now: number): void {
    switch (msg.type) {
      case 'session_ready':
        this.layoutHash = msg.layout_hash;
        this.phase = 'running';
        this.startedAt = now;
        break;
      case 'activations':
        this.activations = msg.cells.slice();
        break;
      case 'event':
        this.events.push(msg);
        if (msg.kind === 'seen') this.counters.seen++;
        if (msg.kind === 'false_mark') this.counters.falseMarks++;
        if (msg.kind === 'missed' || msg.kind === 'collision') this.counters.interventions++;
        if (msg.kind === 'finish') this.phase = 'finished';
        break;
      case 'trial_summary':
        this.summary = msg;
        this.phase = 'finished';
        break;
      case 'error':
        this.lastError = msg.detail;
        break;
    }
  }

  // Connection drop before the summary arrives counts as a local abort.
  handleDisconnect(): void {
    this.connection = 'closed';
    if (this.phase === 'running') this.phase = 'aborted';
  }

  summaryLine(): string {
    if (!this.summary) return '';
    const s = this.summary;
    return `time ${s.completion_time_s.toFixed(1)} s, seen ${s.objects_seen}, ` +
      `missed ${s.objects_missed}, false marks ${s.false_marks}`;
  }
}
