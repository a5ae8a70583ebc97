"""Deterministic Monte-Carlo runner and summary statistics.

Replicate r of an experiment draws from a stream keyed by (master seed,
experiment id, r), so per-replicate values are identical no matter how
work is scheduled across workers.
"""

import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__


# ---------------------------------------------------------------------------
# streaming moments

@dataclass
class MomentState:
    """Streaming central moments (Welford / Pebay update and merge)."""
    n: int = 0
    mean: float = 0.0
    m2: float = 0.0
    m3: float = 0.0
    m4: float = 0.0

    def update(self, x):
        n1 = self.n
        self.n += 1
        d = x - self.mean
        dn = d / self.n
        dn2 = dn * dn
        t1 = d * dn * n1
        self.mean += dn
        self.m4 += (t1 * dn2 * (self.n * self.n - 3 * self.n + 3)
                    + 6.0 * dn2 * self.m2 - 4.0 * dn * self.m3)
        self.m3 += t1 * dn * (self.n - 2) - 3.0 * dn * self.m2
        self.m2 += t1

    def merge(self, other):
        if other.n == 0:
            return self
        if self.n == 0:
            self.n, self.mean = other.n, other.mean
            self.m2, self.m3, self.m4 = other.m2, other.m3, other.m4
            return self
        na, nb = self.n, other.n
        n = na + nb
        d = other.mean - self.mean
        d2 = d * d
        m2 = self.m2 + other.m2 + d2 * na * nb / n
        m3 = (self.m3 + other.m3 + d ** 3 * na * nb * (na - nb) / n ** 2
              + 3.0 * d * (na * other.m2 - nb * self.m2) / n)
        m4 = (self.m4 + other.m4
              + d ** 4 * na * nb * (na * na - na * nb + nb * nb) / n ** 3
              + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / n ** 2
              + 4.0 * d * (na * other.m3 - nb * self.m3) / n)
        self.n, self.mean, self.m2, self.m3, self.m4 = n, self.mean + d * nb / n, m2, m3, m4
        return self

    @property
    def variance(self):
        return self.m2 / (self.n - 1) if self.n > 1 else math.nan

    @property
    def skewness(self):
        if self.n < 2 or self.m2 <= 0:
            return math.nan
        return (self.m3 / self.n) / (self.m2 / self.n) ** 1.5

    @property
    def excess_kurtosis(self):
        if self.n < 2 or self.m2 <= 0:
            return math.nan
        return (self.m4 / self.n) / (self.m2 / self.n) ** 2 - 3.0

    @property
    def k4(self):
        m2 = self.m2 / self.n
        return self.m4 / self.n - 3.0 * m2 * m2


def streaming_moments(samples):
    st = MomentState()
    for x in np.asarray(samples, dtype=float):
        st.update(float(x))
    return st


def fourth_cumulant(samples):
    """k4 = m4 - 3 m2^2 on centred samples (population central moments)."""
    x = np.asarray(samples, dtype=float)
    if x.size < 4:
        raise ValueError("need at least 4 samples")
    c = x - x.mean()
    m2 = float(np.mean(c * c))
    m4 = float(np.mean(c ** 4))
    return m4 - 3.0 * m2 * m2


def third_cumulant(samples):
    x = np.asarray(samples, dtype=float)
    c = x - x.mean()
    return float(np.mean(c ** 3))


def batch_se(samples, stat, n_batches=50):
    """Standard error of a statistic by batch means."""
    x = np.asarray(samples, dtype=float)
    b = max(2, x.size // n_batches)
    k = x.size // b
    vals = np.array([stat(x[i * b:(i + 1) * b]) for i in range(k)])
    return float(np.std(vals, ddof=1) / math.sqrt(k))


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov distances

def ks_one_sample(samples, cdf):
    """sup_x |F_M(x) - F(x)| against a reference cdf, O(M log M)."""
    x = np.sort(np.asarray(samples, dtype=float))
    m = x.size
    if m == 0:
        raise ValueError("empty sample")
    f = np.asarray(cdf(x), dtype=float)
    hi = np.max(np.arange(1, m + 1) / m - f)
    lo = np.max(f - np.arange(0, m) / m)
    return float(max(hi, lo))


def ks_two_sample(a, b):
    """sup-distance between two empirical cdfs."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("empty sample")
    grid = np.concatenate([a, b])
    grid.sort(kind="mergesort")
    ca = np.searchsorted(a, grid, side="right") / a.size
    cb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(ca - cb)))


def ks_99_bound(m):
    """99% one-sample Kolmogorov quantile, asymptotic: 1.628 / sqrt(M)."""
    return 1.628 / math.sqrt(m)


# ---------------------------------------------------------------------------
# experiments

_REGISTRY = {}


def register(kind):
    def deco(fn):
        _REGISTRY[kind] = fn
        return fn
    return deco


def experiment_kinds():
    return sorted(_REGISTRY)


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    params: dict
    replicates: int
    seed: int

    def validate(self):
        if self.kind not in _REGISTRY:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.replicates < 1:
            raise ConfigError(f"replicates must be >= 1, got {self.replicates}")
        return self

    def config_hash(self):
        blob = json.dumps({"kind": self.kind, "params": self.params,
                           "replicates": self.replicates, "seed": self.seed},
                          sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


class ConfigError(ValueError):
    """Invalid experiment configuration; names the offending field."""


@dataclass
class OracleRow:
    name: str
    measured: float
    target: float
    tolerance: float
    mode: str        # abs | rel | ratio-window | upper
    passed: bool
    stochastic: bool = False


@dataclass
class McReport:
    kind: str
    params: dict
    replicates: int
    seed: int
    config_hash: str
    values: dict = field(default_factory=dict)   # functional -> ndarray
    oracles: list = field(default_factory=list)

    def stats(self, name):
        return streaming_moments(self.values[name])

    def summary(self):
        out = {
            "tool": "wavegeo", "version": __version__,
            "kind": self.kind, "params": {k: str(v) for k, v in self.params.items()},
            "replicates": self.replicates, "seed": self.seed,
            "config": self.config_hash, "stats": {}, "oracles": [],
        }
        for name, vals in self.values.items():
            st = streaming_moments(vals)
            out["stats"][name] = {
                "mean": st.mean, "variance": st.variance,
                "skewness": st.skewness, "excess_kurtosis": st.excess_kurtosis,
                "k4": st.k4, "n": st.n,
            }
        for r in self.oracles:
            out["oracles"].append({
                "name": r.name, "measured": r.measured, "target": r.target,
                "tolerance": r.tolerance, "mode": r.mode,
                "passed": bool(r.passed), "stochastic": bool(r.stochastic),
            })
        return out

    def header_line(self):
        return f"# wavegeo {__version__} seed={self.seed} config={self.config_hash}"

    def to_csv(self, path):
        ident = self.params.get("ell", self.params.get("n", ""))
        z = self.params.get("z", "")
        with open(path, "w") as f:
            f.write(self.header_line() + "\n")
            f.write("kind,ell,z,replicate,value\n")
            for name, vals in self.values.items():
                for r, v in enumerate(vals):
                    f.write(f"{name},{ident},{z},{r},{v!r}\n")

    def to_json(self, path):
        with open(path, "w") as f:
            json.dump(self.summary(), f, indent=2)
            f.write("\n")


def _run_chunk(args):
    kind, params, seed, start, stop = args
    fn = _REGISTRY[kind]
    out = {}
    for r in range(start, stop):
        row = fn(params, seed, r)
        for k, v in row.items():
            out.setdefault(k, []).append(v)
    return start, out


def run(spec: ExperimentSpec, workers=1) -> McReport:
    """Run all replicates; output is independent of the worker count."""
    spec.validate()
    fn = _REGISTRY[spec.kind]
    prepare = getattr(fn, "prepare", None)
    if prepare is not None:
        prepare(spec.params)   # warm caches in the parent before forking
    M = spec.replicates
    names = None
    columns = {}
    if workers <= 1:
        for r in range(M):
            row = fn(spec.params, spec.seed, r)
            if names is None:
                names = list(row)
                columns = {k: np.empty(M) for k in names}
            for k, v in row.items():
                columns[k][r] = v
    else:
        chunk = max(1, math.ceil(M / (workers * 4)))
        jobs = [(spec.kind, spec.params, spec.seed, s, min(s + chunk, M))
                for s in range(0, M, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for start, out in pool.map(_run_chunk, jobs):
                if names is None:
                    names = list(out)
                    columns = {k: np.empty(M) for k in names}
                for k, vals in out.items():
                    columns[k][start:start + len(vals)] = vals
    return McReport(kind=spec.kind, params=dict(spec.params), replicates=M,
                    seed=spec.seed, config_hash=spec.config_hash(),
                    values=columns)
