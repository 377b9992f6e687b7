// Gapless playback of PCM chunks through Web Audio.
//
// Chunks are held back until a small prefill ring (3 blocks by default) is
// full, then scheduled back to back on the audio clock. If the schedule
// pointer ever falls behind the clock that block is an underrun and the
// pointer is snapped forward.

import { AudioChunk, SAMPLE_RATE, chunkToFloat } from './protocol.js';

export interface BufferSourceLike {
  buffer: AudioBufferLike | null;
  connect(dest: unknown): void;
  start(when: number): void;
}

export interface AudioBufferLike {
  copyToChannel(data: Float32Array, channel: number): void;
  readonly duration: number;
}

export interface AudioContextLike {
  readonly currentTime: number;
  readonly sampleRate: number;
  readonly destination: unknown;
  createBuffer(channels: number, frames: number, rate: number): AudioBufferLike;
  createBufferSource(): BufferSourceLike;
}

export class PcmPlayer {
  blocksPlayed = 0;
  underruns = 0;
  private pending: AudioChunk[] = [];
  private started = false;
  private nextTime = 0;

  constructor(private ctx: AudioContextLike, private prefill = 3) {}

  push(chunk: AudioChunk): void {
    if (!this.started) {
      this.pending.push(chunk);
      if (this.pending.length < this.prefill) return;
      this.started = true;
      this.nextTime = this.ctx.currentTime;
      for (const held of this.pending) this.schedule(held);
      this.pending = [];
      return;
    }
    this.schedule(chunk);
  }

  get buffering(): boolean {
    return !this.started;
  }

  // Seconds of audio queued ahead of the clock.
  get leadSeconds(): number {
    return this.started ? Math.max(0, this.nextTime - this.ctx.currentTime) : 0;
  }

  private schedule(chunk: AudioChunk): void {
    if (this.nextTime < this.ctx.currentTime) {
      this.underruns++;
      this.nextTime = this.ctx.currentTime;
    }
    const buffer = this.ctx.createBuffer(2, chunk.frames, SAMPLE_RATE);
    const { left, right } = chunkToFloat(chunk);
    buffer.copyToChannel(left, 0);
    buffer.copyToChannel(right, 1);
    const source = this.ctx.createBufferSource();
    source.buffer = buffer;
    source.connect(this.ctx.destination);
    source.start(this.nextTime);
    this.nextTime += chunk.frames / SAMPLE_RATE;
    this.blocksPlayed++;
  }
}
