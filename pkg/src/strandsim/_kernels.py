"""Compiled inner loops for the trial engine.

These kernels mirror the reference step semantics in ``agents`` exactly
(the test suite replays trials through both paths and compares every
round). All randomness is pre-drawn outside and consumed in a fixed
order: per round, one row of scheduling uniforms (bonus-step mask draws
for every agent, then Fisher-Yates draws for the step order) and, for
the self-stabilizing variant only, one row of per-eraser-step uniforms.

Cell encoding: -1 Empty, 0, 1. Variant codes: 0 basic, 1 waiting,
2 self-stabilizing, 3 active-inactive (the naive baseline has its own
kernel).
"""

import numpy as np
from numba import njit

EMPTY = -1

V_BASIC = 0
V_WAITING = 1
V_SELF_STAB = 2
V_ACTIVE_INACTIVE = 3


@njit(cache=True)
def run_worker_rounds(cells, marks, is_eraser, pos, dirn, waiting, active, streak,
                      sched_u, var_u, steplist, variant, jitter, epsilon, k1, k2,
                      target, counters, traj, record, out):
    """Advance one trial by up to ``sched_u.shape[0]`` big steps.

    counters: int64[zeros, ones, empties, collisions], updated in place.
    traj: int64 (rounds, 5) filled with post-round metrics when record != 0.
    out: int64[rounds_done, decision]. Returns 1 once consensus (matching
    ``target`` unless target < 0) is reached, else 0.
    """
    n = cells.shape[0]
    a_count = pos.shape[0]
    zeros, ones, empties, collisions = counters[0], counters[1], counters[2], counters[3]
    rounds = sched_u.shape[0]
    for r in range(rounds):
        u = sched_u[r]
        k = 0
        length = 0
        for a in range(a_count):
            steplist[length] = a
            length += 1
        for a in range(a_count):
            if u[k] < jitter:
                steplist[length] = a
                length += 1
            k += 1
        for i in range(length - 1, 0, -1):
            j = int(u[k] * (i + 1))
            k += 1
            tmp = steplist[i]
            steplist[i] = steplist[j]
            steplist[j] = tmp

        vrow = var_u[r]
        vk = 0
        erases = 0
        for s in range(length):
            a = steplist[s]
            p = pos[a]
            d = dirn[a]
            m = marks[a]
            if is_eraser[a] == 0:
                # writer
                if variant == V_ACTIVE_INACTIVE:
                    if active[a] != 0:
                        if cells[p] == EMPTY:
                            cells[p] = m
                            empties -= 1
                            if m == 1:
                                ones += 1
                            else:
                                zeros += 1
                            if p > 0:
                                lv = cells[p - 1]
                                if lv != EMPTY and lv != m:
                                    collisions += 1
                            if p < n - 1:
                                rv = cells[p + 1]
                                if rv != EMPTY and rv != m:
                                    collisions += 1
                        observed = cells[p]
                        if observed == 1 - m:
                            streak[a] += 1
                            if streak[a] >= k1:
                                active[a] = 0
                                streak[a] = 0
                        else:
                            streak[a] = 0
                    else:
                        if cells[p] == m:
                            streak[a] += 1
                            if streak[a] >= k2:
                                active[a] = 1
                                streak[a] = 0
                        else:
                            streak[a] = 0
                else:
                    if cells[p] == EMPTY:
                        cells[p] = m
                        empties -= 1
                        if m == 1:
                            ones += 1
                        else:
                            zeros += 1
                        if p > 0:
                            lv = cells[p - 1]
                            if lv != EMPTY and lv != m:
                                collisions += 1
                        if p < n - 1:
                            rv = cells[p + 1]
                            if rv != EMPTY and rv != m:
                                collisions += 1
                nxt = p + d
                if 0 <= nxt < n:
                    pos[a] = nxt
                else:
                    dirn[a] = -d
                    pos[a] = p - d
            else:
                # eraser
                if variant == V_WAITING and waiting[a] != 0:
                    q = p - d
                    cur = cells[p]
                    prev = cells[q] if 0 <= q < n else EMPTY
                    if cur == m and prev == 1 - m:
                        cells[p] = EMPTY
                        empties += 1
                        if m == 1:
                            ones -= 1
                        else:
                            zeros -= 1
                        if p > 0:
                            lv = cells[p - 1]
                            if lv != EMPTY and lv != m:
                                collisions -= 1
                        if p < n - 1:
                            rv = cells[p + 1]
                            if rv != EMPTY and rv != m:
                                collisions -= 1
                        erases += 1
                    elif cur == EMPTY:
                        w = 1 - m  # the attached writer's mark
                        cells[p] = w
                        empties -= 1
                        if w == 1:
                            ones += 1
                        else:
                            zeros += 1
                        if p > 0:
                            lv = cells[p - 1]
                            if lv != EMPTY and lv != w:
                                collisions += 1
                        if p < n - 1:
                            rv = cells[p + 1]
                            if rv != EMPTY and rv != w:
                                collisions += 1
                    elif not (prev != EMPTY and prev != cur):
                        waiting[a] = 0
                        nxt = p + d
                        if 0 <= nxt < n:
                            pos[a] = nxt
                        else:
                            dirn[a] = -d
                            pos[a] = p - d
                else:
                    erased = False
                    if variant == V_SELF_STAB:
                        uv = vrow[vk]
                        vk += 1
                        if uv < epsilon and cells[p] == m:
                            cells[p] = EMPTY
                            empties += 1
                            if m == 1:
                                ones -= 1
                            else:
                                zeros -= 1
                            if p > 0:
                                lv = cells[p - 1]
                                if lv != EMPTY and lv != m:
                                    collisions -= 1
                            if p < n - 1:
                                rv = cells[p + 1]
                                if rv != EMPTY and rv != m:
                                    collisions -= 1
                            erases += 1
                            erased = True
                    if not erased:
                        q = p - d
                        if 0 <= q < n and cells[p] == m and cells[q] == 1 - m:
                            cells[p] = EMPTY
                            empties += 1
                            if m == 1:
                                ones -= 1
                            else:
                                zeros -= 1
                            if p > 0:
                                lv = cells[p - 1]
                                if lv != EMPTY and lv != m:
                                    collisions -= 1
                            if p < n - 1:
                                rv = cells[p + 1]
                                if rv != EMPTY and rv != m:
                                    collisions -= 1
                            erases += 1
                            erased = True
                    if variant == V_WAITING and erased:
                        waiting[a] = 1
                    else:
                        nxt = p + d
                        if 0 <= nxt < n:
                            pos[a] = nxt
                        else:
                            dirn[a] = -d
                            pos[a] = p - d

        if record != 0:
            traj[r, 0] = zeros
            traj[r, 1] = ones
            traj[r, 2] = empties
            traj[r, 3] = collisions
            traj[r, 4] = erases
        if empties == 0 and (zeros == 0 or ones == 0):
            value = 1 if ones > 0 else 0
            if target < 0 or value == target:
                counters[0], counters[1], counters[2], counters[3] = zeros, ones, empties, collisions
                out[0] = r + 1
                out[1] = value
                return 1
    counters[0], counters[1], counters[2], counters[3] = zeros, ones, empties, collisions
    out[0] = rounds
    out[1] = -1
    return 0


@njit(cache=True)
def run_naive_rounds(cells, marks, is_eraser, pos, dirn, sched_u, steplist,
                     jitter, target, counters, traj, record, out):
    """Naive baseline rounds: erasers sit out; writers race for cell 0 and
    the winners of the decided mark then sweep the strand."""
    n = cells.shape[0]
    a_count = pos.shape[0]
    zeros, ones, empties, collisions = counters[0], counters[1], counters[2], counters[3]
    rounds = sched_u.shape[0]
    for r in range(rounds):
        u = sched_u[r]
        k = 0
        length = 0
        for a in range(a_count):
            steplist[length] = a
            length += 1
        for a in range(a_count):
            if u[k] < jitter:
                steplist[length] = a
                length += 1
            k += 1
        for i in range(length - 1, 0, -1):
            j = int(u[k] * (i + 1))
            k += 1
            tmp = steplist[i]
            steplist[i] = steplist[j]
            steplist[j] = tmp

        for s in range(length):
            a = steplist[s]
            if is_eraser[a] != 0:
                continue
            p = pos[a]
            m = marks[a]
            if cells[0] == EMPTY:
                if p == 0:
                    cells[0] = m
                    empties -= 1
                    if m == 1:
                        ones += 1
                    else:
                        zeros += 1
                    if n > 1:
                        rv = cells[1]
                        if rv != EMPTY and rv != m:
                            collisions += 1
                    d = dirn[a]
                    nxt = p + d
                    if 0 <= nxt < n:
                        pos[a] = nxt
                    else:
                        dirn[a] = -d
                        pos[a] = p - d
                else:
                    pos[a] = p - 1
            else:
                if m == cells[0] and cells[p] == EMPTY:
                    cells[p] = m
                    empties -= 1
                    if m == 1:
                        ones += 1
                    else:
                        zeros += 1
                    if p > 0:
                        lv = cells[p - 1]
                        if lv != EMPTY and lv != m:
                            collisions += 1
                    if p < n - 1:
                        rv = cells[p + 1]
                        if rv != EMPTY and rv != m:
                            collisions += 1
                d = dirn[a]
                nxt = p + d
                if 0 <= nxt < n:
                    pos[a] = nxt
                else:
                    dirn[a] = -d
                    pos[a] = p - d

        if record != 0:
            traj[r, 0] = zeros
            traj[r, 1] = ones
            traj[r, 2] = empties
            traj[r, 3] = collisions
            traj[r, 4] = 0
        if empties == 0 and (zeros == 0 or ones == 0):
            value = 1 if ones > 0 else 0
            if target < 0 or value == target:
                counters[0], counters[1], counters[2], counters[3] = zeros, ones, empties, collisions
                out[0] = r + 1
                out[1] = value
                return 1
    counters[0], counters[1], counters[2], counters[3] = zeros, ones, empties, collisions
    out[0] = rounds
    out[1] = -1
    return 0
