"""Seeded Monte Carlo of repeated two-node heralding attempts.

Trials are generated in fixed-size chunks. Chunk ``i`` draws from a Philox
stream keyed by ``(seed, i)``, so the result depends only on the inputs and
the seed, never on how many workers evaluate the chunks.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, InsufficientStatisticsError

MIN_TRIALS = 10_000
CHUNK = 1 << 16

_SIGNAL = ("none", "one", "multi")


@dataclass(frozen=True)
class McEstimate:
    trials: int
    fidelity_estimate: float
    fidelity_std_error: float
    herald_rate_estimate: float  # Hz, heralds per attempt times the attempt rate
    seed: int
    heralds: int
    true_positives: int
    false_positives: int
    herald_probability: float
    p_in_estimate: Optional[float] = None
    p_in_std_error: Optional[float] = None


@dataclass(frozen=True)
class TrialRecord:
    """One attempt, for the optional event log.

    ``survived_photons`` follows the order in which photons were generated:
    signal A, signal B, then the thermal photons node by node and bin by bin
    (blue mode: packets of A, then of B). Only emitted photons are listed.
    ``click_pattern`` counts surviving photons per time bin; the herald rules
    do not depend on which detector fires.
    """

    node_a_signal: str
    node_b_signal: str
    node_a_thermal_bins: tuple
    node_b_thermal_bins: tuple
    survived_photons: tuple
    click_pattern: tuple
    classification: str


def _rng(seed, chunk):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _classify(herald, true, clicks):
    cls = np.where(clicks == 0, "no_herald", "discarded_multi").astype(object)
    cls[herald & true] = "true_positive"
    cls[herald & ~true] = "false_positive"
    return cls


def _type1_chunk(args):
    p1, p_th, eta, n, seed, chunk, want_log = args
    rng = _rng(seed, chunk)
    # columns: signal A, signal B, thermal A, thermal B
    emitted = rng.random((n, 4)) < np.array([p1, p1, p_th, p_th])
    surv = emitted & (rng.random((n, 4)) < eta)
    clicks = surv.sum(axis=1)
    herald = clicks == 1
    one_signal = emitted[:, 0] ^ emitted[:, 1]
    true = herald & (surv[:, 0] | surv[:, 1]) & one_signal
    records = None
    if want_log:
        cls = _classify(herald, true, clicks)
        records = [
            TrialRecord(
                node_a_signal=_SIGNAL[int(e[0])],
                node_b_signal=_SIGNAL[int(e[1])],
                node_a_thermal_bins=(int(e[2]),),
                node_b_thermal_bins=(int(e[3]),),
                survived_photons=tuple(bool(x) for x, m in zip(s, e) if m),
                click_pattern=(int(c),),
                classification=k,
            )
            for e, s, c, k in zip(emitted, surv, clicks, cls)
        ]
    return int(herald.sum()), int(true.sum()), records


def _type2_chunk(args):
    p1, p_th, eta, n, seed, chunk, want_log = args
    rng = _rng(seed, chunk)
    sig = rng.random((n, 2)) < p1
    early = rng.random((n, 2)) < 0.5
    # thermal columns: A early, A late, B early, B late
    therm = rng.random((n, 4)) < p_th
    ok = rng.random((n, 6)) < eta
    s_surv = sig & ok[:, :2]
    t_surv = therm & ok[:, 2:]
    n_early = (s_surv & early).sum(axis=1) + t_surv[:, 0] + t_surv[:, 2]
    n_late = (s_surv & ~early).sum(axis=1) + t_surv[:, 1] + t_surv[:, 3]
    herald = (n_early == 1) & (n_late == 1)
    true = herald & s_surv[:, 0] & s_surv[:, 1] & (early[:, 0] != early[:, 1])
    records = None
    if want_log:
        cls = _classify(herald, true, n_early + n_late)
        records = []
        for i in range(n):
            emitted = np.concatenate([sig[i], therm[i]])
            survived = np.concatenate([s_surv[i], t_surv[i]])
            records.append(TrialRecord(
                node_a_signal=_SIGNAL[int(sig[i, 0])],
                node_b_signal=_SIGNAL[int(sig[i, 1])],
                node_a_thermal_bins=(int(therm[i, 0]), int(therm[i, 1])),
                node_b_thermal_bins=(int(therm[i, 2]), int(therm[i, 3])),
                survived_photons=tuple(bool(x) for x, m in zip(survived, emitted) if m),
                click_pattern=(int(n_early[i]), int(n_late[i])),
                classification=cls[i],
            ))
    return int(herald.sum()), int(true.sum()), records


def _blue_chunk(args):
    p0, p1, eta, n, seed, chunk, want_log = args
    rng = _rng(seed, chunk)
    u = rng.random((n, 2))
    # 0, 1 or 2 photon packets per node
    packets = (u >= p0).astype(np.int64) + (u >= p0 + p1)
    arrived = rng.binomial(packets, eta)
    clicks = arrived.sum(axis=1)
    herald = clicks == 1
    true = herald & (packets.sum(axis=1) == 1)
    records = None
    if want_log:
        cls = _classify(herald, true, clicks)
        records = [
            TrialRecord(
                node_a_signal=_SIGNAL[int(k[0])],
                node_b_signal=_SIGNAL[int(k[1])],
                node_a_thermal_bins=(),
                node_b_thermal_bins=(),
                # packet survival is exchangeable, so the first ``arrived`` are marked
                survived_photons=tuple([True] * int(a[0]) + [False] * int(k[0] - a[0])
                                       + [True] * int(a[1]) + [False] * int(k[1] - a[1])),
                click_pattern=(int(c),),
                classification=cl,
            )
            for k, a, c, cl in zip(packets, arrived, clicks, cls)
        ]
    return int(herald.sum()), int(true.sum()), records


def _check_prob(name, p):
    if not 0.0 <= p <= 1.0:
        raise DomainError(name, p, "must lie in [0, 1]")


def _check_run(trials, seed, workers):
    if int(trials) != trials or trials < MIN_TRIALS:
        raise DomainError("trials", trials, f"must be an integer >= {MIN_TRIALS}")
    if int(seed) != seed or seed < 0:
        raise DomainError("seed", seed, "must be a non-negative integer")
    if workers < 1:
        raise DomainError("workers", workers, "must be at least 1")


def _run(kernel, params, trials, seed, workers, log_path, attempt_rate, blue=False):
    trials, seed = int(trials), int(seed)
    sizes = [CHUNK] * (trials // CHUNK)
    if trials % CHUNK:
        sizes.append(trials % CHUNK)
    want_log = log_path is not None
    jobs = [(*params, n, seed, i, want_log) for i, n in enumerate(sizes)]
    if workers == 1:
        results = [kernel(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(kernel, jobs))

    if want_log:
        try:
            with open(log_path, "w", encoding="utf-8") as fh:
                for _, _, records in results:
                    for r in records:
                        fh.write(json.dumps(asdict(r)) + "\n")
        except OSError as exc:
            raise OSError(f"cannot write event log {log_path}: {exc}") from exc

    heralds = sum(r[0] for r in results)
    true = sum(r[1] for r in results)
    false = heralds - true
    if heralds == 0 and not blue:
        raise InsufficientStatisticsError(f"no heralds in {trials} trials (seed {seed})")
    # blue mode reports a per-trial false-herald probability, which stays
    # defined without heralds; the conditional fidelity does not
    fid = true / heralds if heralds else math.nan
    p_h = heralds / trials
    extra = {}
    if blue:
        p_in = false / trials
        extra = {"p_in_estimate": p_in, "p_in_std_error": math.sqrt(p_in * (1 - p_in) / trials)}
    return McEstimate(
        trials=trials,
        fidelity_estimate=fid,
        fidelity_std_error=math.sqrt(fid * (1.0 - fid) / heralds) if heralds else math.nan,
        herald_rate_estimate=p_h * attempt_rate,
        seed=seed,
        heralds=heralds,
        true_positives=true,
        false_positives=false,
        herald_probability=p_h,
        **extra,
    )


def run_type1(p1, p_th, eta_link, eta_det=1.0, trials=1_000_000, seed=0, *,
              workers=1, log_path=None, attempt_rate=1.0) -> McEstimate:
    """Single-click heralding; every photon survives with eta_link * eta_det."""
    for name, v in (("p1", p1), ("p_th", p_th), ("eta_link", eta_link), ("eta_det", eta_det)):
        _check_prob(name, v)
    _check_run(trials, seed, workers)
    return _run(_type1_chunk, (p1, p_th, eta_link * eta_det), trials, seed, workers,
                log_path, attempt_rate)


def run_type2(p1, p_th, eta_link, eta_det=1.0, trials=1_000_000, seed=0, *,
              workers=1, log_path=None, attempt_rate=1.0) -> McEstimate:
    """Time-bin heralding: one click in each of the early and late bins."""
    for name, v in (("p1", p1), ("p_th", p_th), ("eta_link", eta_link), ("eta_det", eta_det)):
        _check_prob(name, v)
    _check_run(trials, seed, workers)
    return _run(_type2_chunk, (p1, p_th, eta_link * eta_det), trials, seed, workers,
                log_path, attempt_rate)


def run_blue(p0, p1, eta_link, trials=1_000_000, seed=0, *,
             workers=1, log_path=None, attempt_rate=1.0) -> McEstimate:
    """Pair-source heralding with two-packet multi-photon events.

    ``p_in_estimate`` is the false-herald probability per attempt. A run
    without heralds is valid here: the fidelity fields are then NaN.
    """
    for name, v in (("p0", p0), ("p1", p1), ("eta_link", eta_link)):
        _check_prob(name, v)
    if p0 + p1 > 1.0 + 1e-12:
        raise DomainError("p0 + p1", p0 + p1, "must not exceed 1")
    _check_run(trials, seed, workers)
    return _run(_blue_chunk, (p0, p1, eta_link), trials, seed, workers, log_path,
                attempt_rate, blue=True)
