"""Experiment orchestration: named, seeded, reproducible runs backing the CLI.

Each experiment produces a list of rows (dicts with scalar values).  Output is
CSV (canonical) or JSON; both embed the config hash, seed, and library
version.  REGRAPH_THREADS caps worker threads; results are merged in trial
order so parallel and serial runs are byte-identical.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .params import ModelParams
from .rng import stream
from .pairing import sample_pairing, project, enumerate_pairings
from .census import enumerate_short_cycles, cnbw_count
from .combinatorics import expected_ham_pmd, rnd_poisson, expected_cycles_pmd
from . import oracle, variance, spectral, sizebias, kernels

EXPERIMENTS = (
    "census-tv",
    "second-moment",
    "coupling-fibers",
    "spectral-identity",
    "sizebias-clt",
    "ham-estimate",
    "lognormal-probe",
    "bench",
)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n: tuple
    d: tuple
    r: int = 4
    trials: int = 100
    seed: int = 0
    out: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if not self.n or not self.d:
            raise ValueError("parameter grid must be non-empty")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")

    def config_hash(self) -> str:
        payload = json.dumps(
            [self.experiment, list(self.n), list(self.d), self.r, self.trials, self.seed],
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def max_workers() -> int:
    cap = os.environ.get("REGRAPH_THREADS")
    if cap:
        return max(1, int(cap))
    return min(8, os.cpu_count() or 1)


def _fan_out(fn, items):
    """Map fn over items with the thread cap, preserving order."""
    workers = max_workers()
    if workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    return x


def write_report(rows: list, config: ExperimentConfig, handle) -> None:
    meta = {
        "experiment": config.experiment,
        "config_hash": config.config_hash(),
        "seed": config.seed,
        "version": __version__,
    }
    if config.fmt == "json":
        json.dump(
            {**meta, "rows": [{k: _fmt(v) for k, v in row.items()} for row in rows]},
            handle,
            indent=2,
        )
        handle.write("\n")
        return
    for k, v in meta.items():
        handle.write(f"# {k}={v}\n")
    if rows:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})


def _exp_census_tv(config: ExperimentConfig) -> list:
    rows = []
    for n in config.n:
        for d in config.d:
            params = ModelParams(n, d, config.r)
            tv_pmd = oracle.exact_tv_census(params, "pmd", allow_long=True)
            row = {"n": n, "d": d, "r": config.r, "tv_pmd": tv_pmd}
            try:
                row["tv_tnd"] = oracle.exact_tv_census(params, "tnd")
            except ValueError:
                row["tv_tnd"] = ""
            row["p_h_zero"] = oracle.p_h_zero(params, allow_long=True)
            rows.append(row)
    return rows


def _exp_second_moment(config: ExperimentConfig) -> list:
    rows = []
    for n in config.n:
        for d in config.d:
            value = variance.second_moment_exact(n, d)
            limit = d / (d - 2)
            row = {
                "n": n,
                "d": d,
                "value": float(value),
                "gap_to_limit": float(value) - limit,
            }
            if n * d <= 16:
                m = oracle.exact_moments(ModelParams(n, d, min(4, n)))
                row["exact_match"] = (
                    variance.second_moment_exact(n, d, exact=True)
                    == m.e_h2 / m.e_h ** 2
                )
            rows.append(row)
    return rows


def _exp_coupling_fibers(config: ExperimentConfig) -> list:
    from .pairing import condition_forward

    rows = []
    for n in config.n:
        for d in config.d:
            forced = ((0, d), (1, 2 * d))  # two disjoint cross-bin pairs
            hits: dict = {}
            for p in enumerate_pairings(n, d):
                q = condition_forward(p, forced)
                hits[q.mate] = hits.get(q.mate, 0) + 1
            counts = set(hits.values())
            rows.append(
                {
                    "n": n,
                    "d": d,
                    "fiber_classes": len(hits),
                    "uniform": len(counts) == 1,
                    "fiber_size": counts.pop() if len(counts) == 1 else "",
                }
            )
    return rows


def _exp_spectral_identity(config: ExperimentConfig) -> list:
    rows = []
    for n in config.n:
        for d in config.d:
            worst = 0.0
            for t in range(config.trials):
                rng = stream(config.seed, "spectral", n, d, t)
                g = project(sample_pairing(n, d, rng))
                for k in range(1, 9):
                    lhs = (d - 1) ** (k / 2) * spectral.trace_poly(
                        g, spectral.gamma_poly(k, d)
                    )
                    rhs = cnbw_count(g, k)
                    worst = max(worst, abs(lhs - rhs) / max(1.0, rhs))
            rows.append({"n": n, "d": d, "trials": config.trials, "max_rel_err": worst})
    return rows


def _exp_sizebias_clt(config: ExperimentConfig) -> list:
    rows = []
    for d in config.d:
        chain = variance.markov_chain(d)
        for n in config.n:
            rng = stream(config.seed, "sizebias", d, n)
            w = sizebias.wasserstein_normal(chain, n, config.trials, rng)
            rows.append(
                {
                    "chain_id": f"phi-d{d}",
                    "n": n,
                    "statistic": "wasserstein",
                    "value": w,
                    "stderr": w / math.sqrt(config.trials),
                }
            )
            rows.append(
                {
                    "chain_id": f"phi-d{d}",
                    "n": n,
                    "statistic": "expected_gap",
                    "value": float(sizebias.expected_gap(chain, n)),
                    "stderr": 0.0,
                }
            )
    return rows


def _exp_ham_estimate(config: ExperimentConfig) -> list:
    rows = []
    for n in config.n:
        for d in config.d:
            for t in range(config.trials):
                rng = stream(config.seed, "ham-estimate", n, d, t)
                g = project(sample_pairing(n, d, rng))
                est = spectral.estimate_ham_ratio(g)
                rows.append(
                    {
                        "n": n,
                        "d": d,
                        "trial": t,
                        "r": est.r,
                        "estimate": est.estimate,
                        "sentinel": est.sentinel,
                    }
                )
    return rows


@dataclass
class ProbeReport:
    n: int
    d: int
    samples: int
    skipped_nonham: int
    pearson: float
    loop_pearson: float
    degenerate: bool = False


def lognormal_probe(n: int, d: int, samples: int, rng_seed, r: int = 4) -> ProbeReport:
    """Sample the pairing model, count Hamiltonian cycles exactly, and
    correlate log(H_n / E H_n) with log of the Poisson-limit factor at the
    observed census; also report the correlation with the standardized
    negative loop count -(2/(d-1))(c₁ - E c₁)."""
    if n > 20:
        raise ValueError("exact counting guard: n must be <= 20")
    params = ModelParams(n, d, r)
    log_eh = math.log(float(expected_ham_pmd(params)))
    e_c1 = float(expected_cycles_pmd(1, params))

    def one(t):
        rng = stream(rng_seed, "lognormal", n, d, t)
        p = sample_pairing(n, d, rng)
        h = oracle.count_ham(project(p))
        if h == 0:
            return None
        counts = enumerate_short_cycles(p, r).counts
        y = rnd_poisson(counts, params)
        return (math.log(h) - log_eh, math.log(y) if y > 0 else None, counts[0])

    results = _fan_out(one, list(range(samples)))
    kept = [x for x in results if x is not None and x[1] is not None]
    skipped = samples - len(kept)
    if len(kept) < 2:
        return ProbeReport(n, d, samples, skipped, float("nan"), float("nan"), True)
    xs = np.array([x[0] for x in kept])
    ys = np.array([x[1] for x in kept])
    loops = np.array([-(2 / (d - 1)) * (x[2] - e_c1) for x in kept])
    pearson = float(np.corrcoef(xs, ys)[0, 1])
    loop_pearson = float(np.corrcoef(xs, loops)[0, 1])
    return ProbeReport(n, d, samples, skipped, pearson, loop_pearson)


def _exp_lognormal_probe(config: ExperimentConfig) -> list:
    rows = []
    for n in config.n:
        for d in config.d:
            rep = lognormal_probe(n, d, config.trials, config.seed, r=config.r)
            rows.append(
                {
                    "n": rep.n,
                    "d": rep.d,
                    "samples": rep.samples,
                    "skipped_nonham": rep.skipped_nonham,
                    "pearson": rep.pearson,
                    "loop_pearson": rep.loop_pearson,
                    "degenerate": rep.degenerate,
                }
            )
    return rows


def _exp_bench(config: ExperimentConfig) -> list:
    import time

    rows = []
    for n in config.n:
        for d in config.d:
            t0 = time.perf_counter()
            a = kernels.sweep_python(n, d, r=config.r, want_census=True)
            t_py = time.perf_counter() - t0
            row = {"n": n, "d": d, "backend": "python", "seconds": t_py, "total": a.total}
            rows.append(row)
            if kernels.sweep_compiled is not None:
                t0 = time.perf_counter()
                b = kernels.sweep_compiled(n, d, r=config.r, want_census=True)
                t_c = time.perf_counter() - t0
                rows.append(
                    {
                        "n": n,
                        "d": d,
                        "backend": "compiled",
                        "seconds": t_c,
                        "total": b.total,
                    }
                )
    return rows


_DISPATCH = {
    "census-tv": _exp_census_tv,
    "second-moment": _exp_second_moment,
    "coupling-fibers": _exp_coupling_fibers,
    "spectral-identity": _exp_spectral_identity,
    "sizebias-clt": _exp_sizebias_clt,
    "ham-estimate": _exp_ham_estimate,
    "lognormal-probe": _exp_lognormal_probe,
    "bench": _exp_bench,
}


def run(config: ExperimentConfig) -> int:
    """Run the configured experiment; returns the process exit status."""
    try:
        rows = _DISPATCH[config.experiment](config)
    except ValueError as exc:
        print(f"error: {exc} (experiment={config.experiment})")
        return 2
    buf = io.StringIO()
    write_report(rows, config, buf)
    text = buf.getvalue()
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")
    failed = any(row.get("uniform") is False for row in rows) or any(
        row.get("exact_match") is False for row in rows
    )
    return 1 if failed else 0
