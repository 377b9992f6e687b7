// Wire types and binary decoding for the session service.
//
// Text frames are JSON; binary frames are "PCM0" + u32le frame offset +
// interleaved s16le stereo samples.

export interface StartMessage {
  type: 'start';
  seed: number;
  spectator?: boolean;
}

export interface InputMessage {
  type: 'input';
  seq: number;
  forward: -1 | 0 | 1;
  turn: -1 | 0 | 1;
  cam_yaw_deg: number;
  cam_pitch_deg: number;
}

export interface MarkMessage {
  type: 'mark';
  seq: number;
}

export type ClientMessage = StartMessage | InputMessage | MarkMessage | { type: 'end' };

export interface SessionReady {
  type: 'session_ready';
  seed: number;
  layout_hash: string;
  spectator: boolean;
}

export interface ActivationsMessage {
  type: 'activations';
  cells: boolean[];
}

export interface EventMessage {
  type: 'event';
  kind: 'seen' | 'missed' | 'collision' | 'false_mark' | 'finish';
  t_ms: number;
  obstacle?: number | null;
}

export interface TrialSummary {
  type: 'trial_summary';
  completion_time_s: number;
  objects_seen: number;
  objects_missed: number;
  false_marks: number;
}

export interface ErrorMessage {
  type: 'error';
  detail: string;
}

export type ServerMessage =
  | SessionReady
  | ActivationsMessage
  | EventMessage
  | TrialSummary
  | ErrorMessage;

export function parseServerMessage(text: string): ServerMessage {
  const msg = JSON.parse(text);
  if (typeof msg !== 'object' || msg === null || typeof msg.type !== 'string') {
    throw new Error('malformed server message');
  }
  return msg as ServerMessage;
}

export const SAMPLE_RATE = 44100;
export const CHANNELS = 2;

const MAGIC = [0x50, 0x43, 0x4d, 0x30]; // "PCM0"

export interface AudioChunk {
  frameOffset: number;
  frames: number;
  samples: Int16Array; // interleaved L R L R ...
}

export function parseAudioChunk(data: ArrayBuffer): AudioChunk {
  if (data.byteLength < 8) throw new Error('audio chunk too short');
  const bytes = new Uint8Array(data, 0, 4);
  for (let i = 0; i < 4; i++) {
    if (bytes[i] !== MAGIC[i]) throw new Error('bad audio chunk magic');
  }
  const body = data.byteLength - 8;
  if (body % (2 * CHANNELS) !== 0) throw new Error('truncated audio chunk');
  const view = new DataView(data);
  const frameOffset = view.getUint32(4, true);
  const samples = new Int16Array(data.slice(8));
  return { frameOffset, frames: samples.length / CHANNELS, samples };
}

// De-interleave to per-channel float arrays in [-1, 1].
export function chunkToFloat(chunk: AudioChunk): { left: Float32Array; right: Float32Array } {
  const left = new Float32Array(chunk.frames);
  const right = new Float32Array(chunk.frames);
  for (let i = 0; i < chunk.frames; i++) {
    left[i] = chunk.samples[2 * i] / 32768;
    right[i] = chunk.samples[2 * i + 1] / 32768;
  }
  return { left, right };
}
