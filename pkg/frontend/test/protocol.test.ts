import { describe, expect, it } from 'vitest';

import { chunkToFloat, parseAudioChunk, parseServerMessage } from '../src/protocol.js';

function makeChunk(offset: number, samples: number[]): ArrayBuffer {
  const buf = new ArrayBuffer(8 + samples.length * 2);
  const view = new DataView(buf);
  view.setUint8(0, 0x50); // P
  view.setUint8(1, 0x43); // C
  view.setUint8(2, 0x4d); // M
  view.setUint8(3, 0x30); // 0
  view.setUint32(4, offset, true);
  samples.forEach((s, i) => view.setInt16(8 + 2 * i, s, true));
  return buf;
}

describe('parseAudioChunk', () => {
  it('decodes header and interleaved samples', () => {
    const chunk = parseAudioChunk(makeChunk(2048, [100, -100, 32767, -32768]));
    expect(chunk.frameOffset).toBe(2048);
    expect(chunk.frames).toBe(2);
    expect(Array.from(chunk.samples)).toEqual([100, -100, 32767, -32768]);
  });

  it('rejects a bad magic', () => {
    const buf = makeChunk(0, [0, 0]);
    new Uint8Array(buf)[0] = 0x51;
    expect(() => parseAudioChunk(buf)).toThrow(/magic/);
  });

  it('rejects short or truncated payloads', () => {
    expect(() => parseAudioChunk(new ArrayBuffer(4))).toThrow(/short/);
    const buf = makeChunk(0, [0, 0, 0]); // odd number of stereo samples
    expect(() => parseAudioChunk(buf)).toThrow(/truncated/);
  });
});

describe('chunkToFloat', () => {
  it('de-interleaves and scales to [-1, 1]', () => {
    const chunk = parseAudioChunk(makeChunk(0, [16384, -16384, 32767, -32768]));
    const { left, right } = chunkToFloat(chunk);
    expect(left[0]).toBeCloseTo(0.5, 6);
    expect(right[0]).toBeCloseTo(-0.5, 6);
    expect(left[1]).toBeCloseTo(32767 / 32768, 6);
    expect(right[1]).toBe(-1);
  });
});

describe('parseServerMessage', () => {
  it('parses typed messages and rejects junk', () => {
    const msg = parseServerMessage('{"type":"activations","cells":[true,false]}');
    expect(msg.type).toBe('activations');
    expect(() => parseServerMessage('42')).toThrow(/malformed/);
  });
});
