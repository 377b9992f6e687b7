import { describe, expect, it } from 'vitest';

import { SessionModel } from '../src/session.js';

describe('SessionModel', () => {
  it('issues strictly increasing seq across inputs and marks', () => {
    const model = new SessionModel(7);
    const seqs = [
      model.inputMessage(1, 0, 0, -15).seq,
      model.markMessage().seq,
      model.inputMessage(0, 1, 0, -15).seq,
      model.markMessage().seq,
    ];
    for (let i = 1; i < seqs.length; i++) expect(seqs[i]).toBeGreaterThan(seqs[i - 1]);
    expect(model.counters.marks).toBe(2);
  });

  it('tracks phase and HUD counters from server events', () => {
    const model = new SessionModel(7, true);
    model.handleMessage({ type: 'session_ready', seed: 7, layout_hash: 'ab', spectator: true }, 1000);
    expect(model.phase).toBe('running');
    expect(model.layoutHash).toBe('ab');
    model.handleMessage({ type: 'activations', cells: [true, ...new Array(11).fill(false)] }, 1100);
    expect(model.activations[0]).toBe(true);
    model.handleMessage({ type: 'event', kind: 'false_mark', t_ms: 150 }, 1200);
    model.handleMessage({ type: 'event', kind: 'missed', t_ms: 300, obstacle: 2 }, 1300);
    model.handleMessage({ type: 'event', kind: 'seen', t_ms: 400, obstacle: 1 }, 1400);
    expect(model.counters).toEqual({ marks: 0, falseMarks: 1, seen: 1, interventions: 1 });
    expect(model.events).toHaveLength(3);
  });

  it('renders the finish summary from trial_summary', () => {
    const model = new SessionModel(7);
    model.handleMessage({ type: 'session_ready', seed: 7, layout_hash: 'x', spectator: false }, 0);
    model.handleMessage({
      type: 'trial_summary',
      completion_time_s: 13.5,
      objects_seen: 1,
      objects_missed: 0,
      false_marks: 2,
    }, 14000);
    expect(model.phase).toBe('finished');
    expect(model.summaryLine()).toBe('time 13.5 s, seen 1, missed 0, false marks 2');
    // the timer freezes at the reported completion time
    expect(model.elapsedMs(99999)).toBe(13500);
  });

  it('marks a dropped connection as a local abort', () => {
    const model = new SessionModel(7);
    model.handleMessage({ type: 'session_ready', seed: 7, layout_hash: 'x', spectator: false }, 0);
    model.handleDisconnect();
    expect(model.phase).toBe('aborted');
    expect(model.connection).toBe('closed');
  });

  it('keeps error detail visible', () => {
    const model = new SessionModel(7);
    model.handleMessage({ type: 'error', detail: 'seq 1 not increasing (last 4)' }, 0);
    expect(model.lastError).toContain('not increasing');
  });
});
