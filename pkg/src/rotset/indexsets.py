"""The index set {m >= 1 : alpha_m < rho} and its block structure.

Above 1/2 the set is a union of consecutive integer runs separated by the
single indices floor(k / (1 - rho)).  Below 1/2 it is the sequence
floor(k / rho), whose gaps alpha grow in runs indexed by j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import RegimeError, RhoParam, WindowError, alpha


def _require_window(rho: RhoParam, m: int) -> None:
    if m > rho.max_safe_index:
        raise WindowError(
            f"index {m} exceeds the certified window {rho.max_safe_index}"
        )


def member_I(rho: RhoParam, m: int) -> bool:
    """True iff alpha_m < rho."""
    return alpha(rho, m) < rho.value


def members_upto(p: int, q: int, bound: int) -> list[bool]:
    """Membership flags for m = 0..bound; index 0 is always False.

    alpha_m < p/q  <=>  (m p mod q) > q - p.
    """
    cut = q - p
    flags = [(m * p) % q > cut for m in range(bound + 1)]
    flags[0] = False
    return flags


def scan_oracle(rho: RhoParam, M: int) -> set[int]:
    """Direct exact scan of {m <= M : alpha_m < rho}."""
    _require_window(rho, M)
    p, q = rho.numerator, rho.denominator
    cut = q - p
    return {m for m in range(1, M + 1) if (m * p) % q > cut}


def index_list(rho: RhoParam, bound: int) -> list[int]:
    """Sorted members of the index set up to ``bound``, plus 0 in front."""
    _require_window(rho, bound)
    p, q = rho.numerator, rho.denominator
    cut = q - p
    return [0] + [m for m in range(1, bound + 1) if (m * p) % q > cut]


# -- rho > 1/2 ---------------------------------------------------------------


def run_end(rho: RhoParam, k: int) -> int:
    """Last index of run k: floor((k + 1) / (1 - rho)) - 1."""
    p, q = rho.numerator, rho.denominator
    return (k + 1) * q // (q - p) - 1


def run_start(rho: RhoParam, k: int) -> int:
    """First index of run k: floor(k / (1 - rho)) + 1."""
    p, q = rho.numerator, rho.denominator
    return k * q // (q - p) + 1


@dataclass
class BlockDecompositionHigh:
    rho: RhoParam
    blocks: list[tuple[int, int, int]]
    n_max: list[int]
    coverage: int

    def members(self) -> list[int]:
        out: list[int] = []
        for _, lo, hi in self.blocks:
            out.extend(range(lo, min(hi, self.coverage) + 1))
        return out

    def complement(self) -> list[int]:
        """The skipped indices floor(k / (1 - rho)), k >= 1, within coverage."""
        return [lo - 1 for k, lo, _ in self.blocks if k >= 1 and lo - 1 <= self.coverage]


def _check_high_block(rho: RhoParam, k: int, lo: int, hi: int, is_last_clip: bool) -> None:
    p, q = rho.numerator, rho.denominator
    # alpha_m = m - k - m rho is affine in m; bounds at both ends cover the run
    for m in (lo, hi):
        a_num = (m - k) * q - m * p
        if not (0 < a_num < p):
            raise AssertionError(f"run {k} fails the ceiling form at m = {m}")
    if not is_last_clip and hi + 1 <= rho.max_safe_index:
        if ((hi + 1) * p) % q > q - p:
            raise AssertionError(f"index {hi + 1} after run {k} should be excluded")


def blocks_high(rho: RhoParam, k_max: int) -> BlockDecompositionHigh:
    """Runs k = 0..k_max with closed-form endpoints (requires rho > 1/2)."""
    if not rho.high:
        raise RegimeError("blocks_high needs rho > 1/2")
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    top = run_end(rho, k_max)
    _require_window(rho, top)
    blocks, n_max = [], []
    for k in range(k_max + 1):
        lo, hi = run_start(rho, k), run_end(rho, k)
        _check_high_block(rho, k, lo, hi, False)
        blocks.append((k, lo, hi))
        n_max.append(hi)
    return BlockDecompositionHigh(rho, blocks, n_max, top)


def _blocks_high_upto(rho: RhoParam, bound: int) -> BlockDecompositionHigh:
    """Same checks as :func:`_check_high_block`, inlined for speed."""
    p, q = rho.numerator, rho.denominator
    gap, window = q - p, rho.max_safe_index
    cut = gap
    blocks, n_max = [], []
    k, edge = 0, 0  # edge = floor(k / (1 - rho))
    while edge + 1 <= bound:
        nxt = (k + 1) * q // gap
        lo, hi = edge + 1, nxt - 1
        top = min(hi, bound)
        for m in (lo, top):
            if not (0 < m * gap - k * q < p):
                raise AssertionError(f"run {k} fails the ceiling form at m = {m}")
        if hi <= bound and nxt <= window and (nxt * p) % q > cut:
            raise AssertionError(f"index {nxt} after run {k} should be excluded")
        blocks.append((k, lo, hi))
        n_max.append(hi)
        k, edge = k + 1, nxt
    return BlockDecompositionHigh(rho, blocks, n_max, bound)


def run_length_bounds_hold(dec: BlockDecompositionHigh) -> bool:
    """k(N0 + 1) + N0 <= N_k <= k(N0 + 2) + N0 for every stored run."""
    n0 = dec.n_max[0]
    return all(k * (n0 + 1) + n0 <= nk <= k * (n0 + 2) + n0 for k, nk in enumerate(dec.n_max))


# -- rho < 1/2 ---------------------------------------------------------------


def floor_inv(rho: RhoParam) -> int:
    """floor(1 / rho)."""
    return rho.denominator // rho.numerator


def s_rho(rho: RhoParam) -> Fraction:
    """1 - floor(1/rho) rho, the step of alpha along a run of k."""
    return 1 - floor_inv(rho) * rho.value


def n_prime(rho: RhoParam, k: int) -> int:
    """floor(k / rho)."""
    return k * rho.denominator // rho.numerator


def m_seq(rho: RhoParam, j: int) -> int:
    """floor(j rho / (1 - floor(1/rho) rho)); zero at j = 0."""
    p, q = rho.numerator, rho.denominator
    t = q // p
    return j * p // (q - t * p)


@dataclass
class BlockDecompositionLow:
    rho: RhoParam
    s: Fraction
    t: int
    n_prime: dict[int, int]
    m_seq: dict[int, int]
    y_blocks: list[tuple[int, int, int]]
    coverage: int
    k_coverage: int = field(default=0)

    def members(self) -> list[int]:
        return [self.n_prime[k] for k in range(1, self.k_coverage + 1)]


def _closed_low(rho: RhoParam, k_cov: int, j_stop: int | None):
    """Walk the j-runs of k, filling N'_k = k t + i - 1 from the run index."""
    p, q = rho.numerator, rho.denominator
    t = q // p
    s_num = q - t * p  # s = s_num / q
    n_map: dict[int, int] = {}
    m_map: dict[int, int] = {0: 0}
    y_blocks = []
    j = 1
    while True:
        m_prev = m_map[j - 1]
        if m_prev >= k_cov and (j_stop is None or j > j_stop):
            break
        m_j = j * p // s_num  # M_j
        m_map[j] = m_j
        lo, hi = m_prev + 1, m_j
        y_blocks.append((j, lo, hi))
        top = min(hi, k_cov)
        if lo <= top:
            # q alpha at N = k t + j - 1 is k q - N p = k s_num - (j - 1) p, affine
            # in k; lying in (0, p) at both ends gives N = floor(k / rho) and
            # alpha_N < rho across the whole run
            for k in (lo, top):
                if not (0 < k * s_num - (j - 1) * p < p):
                    raise AssertionError(f"run {j} fails the closed form at k = {k}")
            n_map.update(zip(range(lo, top + 1), range(lo * t + j - 1, top * t + j, t)))
        if j_stop is not None and j >= j_stop and m_j >= k_cov:
            break
        j += 1
    return t, n_map, m_map, y_blocks


def blocks_low(rho: RhoParam, j_max: int) -> BlockDecompositionLow:
    """Runs j = 1..j_max with closed-form endpoints (requires rho < 1/2)."""
    if rho.high:
        raise RegimeError("blocks_low needs rho < 1/2")
    if j_max < 1:
        raise ValueError("j_max must be positive")
    k_cov = m_seq(rho, j_max)
    top = n_prime(rho, k_cov)
    _require_window(rho, top)
    t, n_map, m_map, y_blocks = _closed_low(rho, k_cov, j_max)
    return BlockDecompositionLow(rho, s_rho(rho), t, n_map, m_map, y_blocks, top, k_cov)


def _blocks_low_upto(rho: RhoParam, bound: int) -> BlockDecompositionLow:
    p, q = rho.numerator, rho.denominator
    k_cov = ((bound + 1) * p - 1) // q  # largest k with floor(k q / p) <= bound
    t, n_map, m_map, y_blocks = _closed_low(rho, k_cov, None)
    return BlockDecompositionLow(rho, s_rho(rho), t, n_map, m_map, y_blocks, bound, k_cov)


def m_seq_bounds_hold(dec: BlockDecompositionLow) -> bool:
    """j M_1 <= M_j <= j M_1 + j - 1 for every stored j."""
    m1 = dec.m_seq[1]
    return all(j * m1 <= mj <= j * m1 + j - 1 for j, mj in dec.m_seq.items() if j >= 1)


def decompose(rho: RhoParam, bound: int):
    """Regime-matched decomposition covering exactly [1, bound]."""
    _require_window(rho, bound)
    if rho.high:
        return _blocks_high_upto(rho, bound)
    return _blocks_low_upto(rho, bound)


def closed_form_members(rho: RhoParam, bound: int) -> list[int]:
    """Index set up to ``bound`` built only from the closed forms."""
    dec = decompose(rho, bound)
    return [m for m in dec.members() if m <= bound]
