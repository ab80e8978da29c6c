"""Hot numeric kernels: the annealing chain, batched unit application,
and leaf-permutation weight scans.

Each kernel has two interchangeable implementations: numba-jitted scalar
loops (default whenever numba imports) and vectorized numpy fallbacks.
Set ``FQMAP_NO_NUMBA=1`` to force the numpy path, or call
:func:`set_backend` at runtime.  Both paths consume the same splitmix64
stream and the same float expressions, so runs are bit-identical across
backends; ``benchmarks/bench_kernels.py`` relies on that to compare them.

Hamiltonians enter as packed bit matrices: uint64 arrays of shape
(terms, words) for the X and Z halves, one row per Pauli term.  Search
moves are encoded as integers:

    unit = variant * n*(n-1) + pair,   variant 0=CNOT, 1=H+CNOT, 2=S+CNOT
    pair = control * (n-1) + t',       target = t' + (t' >= control)

Phases are not tracked here; Clifford conjugation never splits or merges
terms, so weights and term count are all the chain needs.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "NUMBA_AVAILABLE",
    "backend",
    "set_backend",
    "splitmix_next",
    "decode_unit",
    "encode_unit",
    "sa_chain",
    "apply_units",
    "perm_weight_scan",
    "popcount_rows",
]

_MASK64 = (1 << 64) - 1
_U64 = np.uint64
_INV_2_53 = 1.1102230246251565e-16  # 2**-53

_env_off = os.environ.get("FQMAP_NO_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
    "on",
)

try:
    if _env_off:
        raise ImportError("disabled via FQMAP_NO_NUMBA")
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

_backend = "numba" if NUMBA_AVAILABLE else "numpy"


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise ValueError("numba backend requested but numba is unavailable")
    _backend = name


# ---------------------------------------------------------------------------
# shared pieces
# ---------------------------------------------------------------------------


def splitmix_next(state: int) -> tuple[int, int]:
    """One splitmix64 step on plain ints: (new_state, 64-bit output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return state, z


def decode_unit(unit: int, n: int) -> tuple[int, int, int]:
    """unit code -> (variant, control, target)."""
    n_pairs = n * (n - 1)
    variant, pair = divmod(unit, n_pairs)
    c, r = divmod(pair, n - 1)
    return variant, c, r + (r >= c)


def encode_unit(variant: int, control: int, target: int, n: int) -> int:
    t = target - (target > control)
    return variant * n * (n - 1) + control * (n - 1) + t


def popcount_rows(xw: np.ndarray, zw: np.ndarray) -> np.ndarray:
    """Per-row weights of a packed bit matrix pair."""
    return np.bitwise_count(xw | zw).sum(axis=1).astype(np.int64)


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def _sa_chain_np(
    xw,
    zw,
    n,
    ell,
    total0,
    n_units,
    c1,
    c2,
    c3,
    t_min,
    t_max,
    seed,
    cost_is_avg,
    trace_every,
    units_out,
    trace_t,
    trace_total,
):
    one = _U64(1)
    state = seed & _MASK64
    total = int(total0)
    best = total
    best_prefix = 0
    acc = 0
    trace_t[0] = 0
    trace_total[0] = total
    ntr = 1
    n_pairs = n * (n - 1)
    for t in range(1, t_max + 1):
        state, r = splitmix_next(state)
        unit = r % n_units
        variant, pair = divmod(unit, n_pairs)
        c, rr = divmod(pair, n - 1)
        tq = rr + (rr >= c)
        wc, bc = divmod(c, 64)
        wt, bt = divmod(tq, 64)
        bc64, bt64 = _U64(bc), _U64(bt)
        xc = (xw[:, wc] >> bc64) & one
        zc = (zw[:, wc] >> bc64) & one
        xt = (xw[:, wt] >> bt64) & one
        zt = (zw[:, wt] >> bt64) & one
        before = int(np.count_nonzero(xc | zc)) + int(
            np.count_nonzero(xt | zt)
        )
        if variant == 1:
            xc, zc = zc, xc
        elif variant == 2:
            zc = zc ^ xc
        xt = xt ^ xc
        zc = zc ^ zt
        after = int(np.count_nonzero(xc | zc)) + int(
            np.count_nonzero(xt | zt)
        )
        delta = after - before
        state, r2 = splitmix_next(state)
        u = float(r2 >> 11) * _INV_2_53
        if delta <= 0:
            ok = True
        else:
            if t <= t_min:
                beta = 0.0
            else:
                costval = total / ell if cost_is_avg else float(total)
                beta = math.log(c1 + c2 * t) * c3 / costval
            d_cost = delta / ell if cost_is_avg else float(delta)
            ok = u < math.exp(-beta * d_cost)
        if ok:
            xw[:, wc] = (xw[:, wc] & ~(one << bc64)) | (xc << bc64)
            zw[:, wc] = (zw[:, wc] & ~(one << bc64)) | (zc << bc64)
            xw[:, wt] = (xw[:, wt] & ~(one << bt64)) | (xt << bt64)
            total += delta
            units_out[acc] = unit
            acc += 1
            if total < best:
                best = total
                best_prefix = acc
        if trace_every > 0 and t % trace_every == 0:
            trace_t[ntr] = t
            trace_total[ntr] = total
            ntr += 1
    return acc, best, best_prefix, ntr, total


def _apply_units_np(xw, zw, units, n):
    one = _U64(1)
    n_pairs = n * (n - 1)
    for unit in units:
        variant, pair = divmod(int(unit), n_pairs)
        c, rr = divmod(pair, n - 1)
        tq = rr + (rr >= c)
        wc, bc = divmod(c, 64)
        wt, bt = divmod(tq, 64)
        bc64, bt64 = _U64(bc), _U64(bt)
        xc = (xw[:, wc] >> bc64) & one
        zc = (zw[:, wc] >> bc64) & one
        xt = (xw[:, wt] >> bt64) & one
        zt = (zw[:, wt] >> bt64) & one
        if variant == 1:
            xc, zc = zc, xc
        elif variant == 2:
            zc = zc ^ xc
        xt = xt ^ xc
        zc = zc ^ zt
        xw[:, wc] = (xw[:, wc] & ~(one << bc64)) | (xc << bc64)
        zw[:, wc] = (zw[:, wc] & ~(one << bc64)) | (zc << bc64)
        xw[:, wt] = (xw[:, wt] & ~(one << bt64)) | (xt << bt64)


def _perm_scan_np(xs, zs, sub_idx, sub_len, perms):
    totals = np.zeros(perms.shape[0], dtype=np.int64)
    for s in range(sub_idx.shape[0]):
        idx = sub_idx[s, : sub_len[s]]
        slots = perms[:, idx]
        xa = np.bitwise_xor.reduce(xs[slots], axis=1)
        za = np.bitwise_xor.reduce(zs[slots], axis=1)
        totals += np.bitwise_count(xa | za).astype(np.int64)
    return totals


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _mix_nb(state):
        state = state + _U64(0x9E3779B97F4A7C15)
        z = state
        z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
        z = z ^ (z >> _U64(31))
        return state, z

    @njit(cache=True)
    def _popcnt_nb(x):
        x = x - ((x >> _U64(1)) & _U64(0x5555555555555555))
        x = (x & _U64(0x3333333333333333)) + (
            (x >> _U64(2)) & _U64(0x3333333333333333)
        )
        x = (x + (x >> _U64(4))) & _U64(0x0F0F0F0F0F0F0F0F)
        return (x * _U64(0x0101010101010101)) >> _U64(56)

    @njit(cache=True)
    def _sa_chain_nb(
        xw,
        zw,
        n,
        ell,
        total0,
        n_units,
        c1,
        c2,
        c3,
        t_min,
        t_max,
        seed,
        cost_is_avg,
        trace_every,
        units_out,
        trace_t,
        trace_total,
    ):
        one = _U64(1)
        state = _U64(seed)
        total = total0
        best = total
        best_prefix = 0
        acc = 0
        trace_t[0] = 0
        trace_total[0] = total
        ntr = 1
        n_pairs = n * (n - 1)
        n_units_u = _U64(n_units)
        for t in range(1, t_max + 1):
            state, r = _mix_nb(state)
            unit = int(r % n_units_u)
            variant = unit // n_pairs
            pair = unit % n_pairs
            c = pair // (n - 1)
            rr = pair % (n - 1)
            tq = rr + (1 if rr >= c else 0)
            wc = c >> 6
            bc = _U64(c & 63)
            wt = tq >> 6
            bt = _U64(tq & 63)
            delta = 0
            for i in range(ell):
                xc = (xw[i, wc] >> bc) & one
                zc = (zw[i, wc] >> bc) & one
                xt = (xw[i, wt] >> bt) & one
                zt = (zw[i, wt] >> bt) & one
                before = int(xc | zc) + int(xt | zt)
                if variant == 1:
                    tmp = xc
                    xc = zc
                    zc = tmp
                elif variant == 2:
                    zc = zc ^ xc
                xt = xt ^ xc
                zc = zc ^ zt
                after = int(xc | zc) + int(xt | zt)
                delta += after - before
            state, r2 = _mix_nb(state)
            u = float(r2 >> _U64(11)) * _INV_2_53
            if delta <= 0:
                ok = True
            else:
                if t <= t_min:
                    beta = 0.0
                else:
                    costval = total / ell if cost_is_avg else float(total)
                    beta = math.log(c1 + c2 * t) * c3 / costval
                d_cost = delta / ell if cost_is_avg else float(delta)
                ok = u < math.exp(-beta * d_cost)
            if ok:
                for i in range(ell):
                    xc = (xw[i, wc] >> bc) & one
                    zc = (zw[i, wc] >> bc) & one
                    xt = (xw[i, wt] >> bt) & one
                    zt = (zw[i, wt] >> bt) & one
                    if variant == 1:
                        tmp = xc
                        xc = zc
                        zc = tmp
                    elif variant == 2:
                        zc = zc ^ xc
                    xt = xt ^ xc
                    zc = zc ^ zt
                    xw[i, wc] = (xw[i, wc] & ~(one << bc)) | (xc << bc)
                    zw[i, wc] = (zw[i, wc] & ~(one << bc)) | (zc << bc)
                    xw[i, wt] = (xw[i, wt] & ~(one << bt)) | (xt << bt)
                total += delta
                units_out[acc] = unit
                acc += 1
                if total < best:
                    best = total
                    best_prefix = acc
            if trace_every > 0 and t % trace_every == 0:
                trace_t[ntr] = t
                trace_total[ntr] = total
                ntr += 1
        return acc, best, best_prefix, ntr, total

    @njit(cache=True)
    def _apply_units_nb(xw, zw, units, n):
        one = _U64(1)
        ell = xw.shape[0]
        n_pairs = n * (n - 1)
        for k in range(units.shape[0]):
            unit = int(units[k])
            variant = unit // n_pairs
            pair = unit % n_pairs
            c = pair // (n - 1)
            rr = pair % (n - 1)
            tq = rr + (1 if rr >= c else 0)
            wc = c >> 6
            bc = _U64(c & 63)
            wt = tq >> 6
            bt = _U64(tq & 63)
            for i in range(ell):
                xc = (xw[i, wc] >> bc) & one
                zc = (zw[i, wc] >> bc) & one
                xt = (xw[i, wt] >> bt) & one
                zt = (zw[i, wt] >> bt) & one
                if variant == 1:
                    tmp = xc
                    xc = zc
                    zc = tmp
                elif variant == 2:
                    zc = zc ^ xc
                xt = xt ^ xc
                zc = zc ^ zt
                xw[i, wc] = (xw[i, wc] & ~(one << bc)) | (xc << bc)
                zw[i, wc] = (zw[i, wc] & ~(one << bc)) | (zc << bc)
                xw[i, wt] = (xw[i, wt] & ~(one << bt)) | (xt << bt)

    @njit(cache=True)
    def _perm_scan_nb(xs, zs, sub_idx, sub_len, perms):
        totals = np.zeros(perms.shape[0], dtype=np.int64)
        for pi in range(perms.shape[0]):
            tot = 0
            for s in range(sub_idx.shape[0]):
                xa = _U64(0)
                za = _U64(0)
                for q in range(sub_len[s]):
                    slot = perms[pi, sub_idx[s, q]]
                    xa ^= xs[slot]
                    za ^= zs[slot]
                tot += int(_popcnt_nb(xa | za))
            totals[pi] = tot
        return totals


# ---------------------------------------------------------------------------
# dispatching wrappers
# ---------------------------------------------------------------------------


def sa_chain(
    xw: np.ndarray,
    zw: np.ndarray,
    n: int,
    n_units: int,
    c1: float,
    c2: float,
    c3: float,
    t_min: int,
    t_max: int,
    seed: int,
    cost_is_avg: bool,
    trace_every: int,
):
    """Run the annealing chain in place on packed bit matrices.

    Returns (accepted unit codes, best_total, best_prefix_len,
    trace_t, trace_total, final_total).
    """
    ell = xw.shape[0]
    total0 = int(popcount_rows(xw, zw).sum())
    units_out = np.empty(t_max, dtype=np.uint32)
    n_trace = 2 + (t_max // trace_every if trace_every > 0 else 0)
    trace_t = np.empty(n_trace, dtype=np.int64)
    trace_total = np.empty(n_trace, dtype=np.int64)
    args = (
        xw,
        zw,
        n,
        ell,
        total0,
        n_units,
        float(c1),
        float(c2),
        float(c3),
        int(t_min),
        int(t_max),
        seed & _MASK64,
        bool(cost_is_avg),
        int(trace_every),
        units_out,
        trace_t,
        trace_total,
    )
    if _backend == "numba":
        acc, best, best_prefix, ntr, final = _sa_chain_nb(*args)
    else:
        acc, best, best_prefix, ntr, final = _sa_chain_np(*args)
    return (
        units_out[:acc].copy(),
        int(best),
        int(best_prefix),
        trace_t[:ntr].copy(),
        trace_total[:ntr].copy(),
        int(final),
    )


def apply_units(xw: np.ndarray, zw: np.ndarray, units, n: int) -> None:
    """Conjugate packed rows by a unit-code sequence, in place."""
    units = np.asarray(units, dtype=np.uint32)
    if _backend == "numba":
        _apply_units_nb(xw, zw, units, n)
    else:
        _apply_units_np(xw, zw, units, n)


def perm_weight_scan(
    xs: np.ndarray,
    zs: np.ndarray,
    sub_idx: np.ndarray,
    sub_len: np.ndarray,
    perms: np.ndarray,
) -> np.ndarray:
    """Total encoded weight for every leaf-assignment row.

    ``xs``/``zs`` are the per-slot path strings of one tree shape packed
    into single words; row p of ``perms`` places Majorana g at slot
    ``perms[p, g]``.  Entry s of the returned array sums, over the
    Majorana subsets of the operator, the weight of the subset's string
    product under that assignment.
    """
    if _backend == "numba":
        return _perm_scan_nb(xs, zs, sub_idx, sub_len, perms)
    return _perm_scan_np(xs, zs, sub_idx, sub_len, perms)
