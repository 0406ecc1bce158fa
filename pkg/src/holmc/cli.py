"""Command-line surface: ingestion, configuration, experiments, reports.

Experiment orchestration glue: reads CSV or synthetic data, builds the
potential and transition kernel, fans seeded chains out to a bounded
worker pool, and emits deterministic ``report.json`` / ``curves.csv``
artifacts.  Exit codes: 0 ok, 1 experiment failure, 2 usage error.
"""
from __future__ import annotations

import csv
import json
import os
import re
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields as dc_fields
from pathlib import Path

import click
import numpy as np
from scipy.special import roots_legendre

from . import __version__
from . import tolerances as tol
from .certificate import CertificateInputs, build_certificate
from .diagnostics import (
    GaussianLaw,
    W2Curve,
    classification_accuracy,
    default_checkpoints,
    fit_order_slope,
    ridge_posterior,
    w2_gaussians,
    w2_trace,
)
from .errors import (
    AllConfigsFailed,
    EmptyFile,
    HolmcError,
    MissingColumn,
    NonBinaryTarget,
    NonNumericCell,
    NotContractive,
    SlopeUndefined,
)
from .kernel4 import mean_quadratic, sigma_entries, step_law
from .kernel_general import (
    covariance_universal,
    lift_block_table,
    mean_general,
    transition_quadratic,
)
from .potentials import LogisticPotential, QuadraticPotential
from .sampler import ChainConfig, run_chain, stationary_law_affine

TASKS = ("regression", "classification", "order-study", "kernel-check",
         "certificate")
SAMPLING_TASKS = ("regression", "classification")

# paper-protocol defaults; classification overrides noted per field
_BASE_DEFAULTS = dict(
    P=4,
    eta=0.011,
    gamma=1.0,
    lam=2.0,
    noise_var=4.0,
    N=1000,
    seeds=tuple(range(10)),
    data="synthetic(4, 500, 0)",
    target=None,
    split=0.7,
    standardize=False,
    intercept=False,
    one_hot=(),
    init_policy="minimizer_zero",
    out=".",
    eta_grid=(),
    gamma_grid=(),
    P_list=(3, 4),
    convention="theory",
)
TASK_DEFAULTS = {
    "regression": {},
    "classification": dict(lam=25.0, N=150, data="synthetic(3, 500, 0)"),
    "order-study": dict(eta_grid=(0.08, 0.16, 0.32, 0.64)),
    "kernel-check": {},
    "certificate": {},
}

_LIST_FIELDS = {
    "seeds": int,
    "eta_grid": float,
    "gamma_grid": float,
    "P_list": int,
    "one_hot": str,
}
_SCALAR_FIELDS = {
    "P": int, "eta": float, "gamma": float, "lam": float,
    "noise_var": float, "N": int, "split": float,
    "standardize": bool, "intercept": bool,
    "data": str, "target": str, "init_policy": str, "out": str,
    "convention": str,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved run description (defaults < config file < flags)."""

    task: str
    P: int = 4
    eta: float = 0.011
    gamma: float = 1.0
    lam: float = 2.0
    noise_var: float = 4.0
    N: int = 1000
    seeds: tuple[int, ...] = tuple(range(10))
    data: str = "synthetic(4, 500, 0)"
    target: str | None = None
    split: float = 0.7
    standardize: bool = False
    intercept: bool = False
    one_hot: tuple[str, ...] = ()
    init_policy: str = "minimizer_zero"
    out: str = "."
    eta_grid: tuple[float, ...] = ()
    gamma_grid: tuple[float, ...] = ()
    P_list: tuple[int, ...] = (3, 4)
    convention: str = "theory"

    def __post_init__(self) -> None:
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}, expected {TASKS}")
        if not 0.0 < self.split < 1.0:
            raise ValueError(f"split must lie in (0, 1), got {self.split}")
        if self.P < 3:
            raise ValueError(f"order P must be >= 3, got {self.P}")
        for name in ("eta", "gamma", "lam", "noise_var"):
            if not getattr(self, name) > 0:
                raise ValueError(
                    f"{name} must be positive, got {getattr(self, name)}"
                )
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.task in SAMPLING_TASKS and not self.seeds:
            raise ValueError("sampling tasks need at least one seed")
        if self.task == "order-study":
            bad = [p for p in self.P_list if p not in (3, 4, 5, 6)]
            if bad:
                raise ValueError(f"P_list entries must be in 3..6, got {bad}")
        if any(e <= 0 for e in self.eta_grid):
            raise ValueError("eta_grid entries must be positive")
        if any(g <= 0 for g in self.gamma_grid):
            raise ValueError("gamma_grid entries must be positive")

    def as_dict(self) -> dict:
        out = {}
        for f in dc_fields(self):
            value = getattr(self, f.name)
            out[f.name] = list(value) if isinstance(value, tuple) else value
        return out


@dataclass(frozen=True)
class ExperimentReport:
    """Self-contained run record; re-runnable from the config echo."""

    config: dict
    certificate: dict
    curves: dict
    tables: dict
    rng_fingerprints: dict
    versions: dict
    wall_clock_seconds: float

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "certificate": self.certificate,
            "curves": self.curves,
            "tables": self.tables,
            "rng_fingerprints": self.rng_fingerprints,
            "versions": self.versions,
            "wall_clock_seconds": self.wall_clock_seconds,
        }

    def canonical_bytes(self) -> bytes:
        """Deterministic serialization: volatile timing field excluded."""
        blob = self.as_dict()
        del blob["wall_clock_seconds"]
        return (json.dumps(blob, sort_keys=True, indent=2) + "\n").encode()


def _versions() -> dict:
    import scipy

    return {
        "holmc": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": ".".join(str(v) for v in sys.version_info[:3]),
    }


# ---------------------------------------------------------------------------
# configuration plumbing

# flag spellings accepted as config-file keys
_KEY_ALIASES = {"iters": "N", "n": "N", "order": "P", "p": "P",
                "lambda": "lam", "init": "init_policy"}


def parse_config_file(path: str | Path) -> dict:
    """Flat ``key = value`` text; ``#``/``;`` comments and [sections] ignored."""
    raw: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].split(";", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_").lower()
        raw[_KEY_ALIASES.get(key, key)] = value
    return {key: _coerce_config_value(key, value) for key, value in raw.items()}


def _coerce_config_value(key: str, value: str):
    if key in _LIST_FIELDS:
        kind = _LIST_FIELDS[key]
        items = [v.strip() for v in value.split(",") if v.strip()]
        return tuple(kind(v) for v in items)
    kind = _SCALAR_FIELDS.get(key, str)
    if kind is bool:
        low = value.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ValueError(f"config key {key!r}: expected a boolean, got {value!r}")
    return kind(value)


def make_config(task: str, file_values: dict | None = None,
                flag_values: dict | None = None) -> ExperimentConfig:
    """Resolve a config: task defaults, then file keys, then explicit flags."""
    if task not in TASK_DEFAULTS:
        raise ValueError(f"unknown task {task!r}, expected one of {TASKS}")
    merged = dict(_BASE_DEFAULTS)
    merged.update(TASK_DEFAULTS[task])
    for layer in (file_values or {}), (flag_values or {}):
        for key, value in layer.items():
            if value is None:
                continue
            if key not in merged:
                raise ValueError(f"unknown config key {key!r}")
            merged[key] = value
    return ExperimentConfig(task=task, **merged)


# ---------------------------------------------------------------------------
# ingestion

@dataclass(frozen=True)
class Dataset:
    """Design matrix and target with split/standardization bookkeeping.

    Iterable as ``(X, y)``.  ``n_train`` rows form the training prefix;
    standardization statistics come from those rows only.
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]
    target_name: str
    n_train: int
    dropped: tuple[str, ...] = ()
    standardize_mean: np.ndarray | None = None
    standardize_std: np.ndarray | None = None
    theta_true: np.ndarray | None = None

    def __iter__(self):
        yield self.X
        yield self.y

    @property
    def train(self) -> tuple[np.ndarray, np.ndarray]:
        return self.X[: self.n_train], self.y[: self.n_train]

    @property
    def test(self) -> tuple[np.ndarray, np.ndarray]:
        return self.X[self.n_train:], self.y[self.n_train:]


def _postprocess(
    X: np.ndarray,
    y: np.ndarray,
    names: list[str],
    target_name: str,
    train_fraction: float | None,
    standardize: bool,
    intercept: bool,
    theta_true: np.ndarray | None = None,
) -> Dataset:
    n = X.shape[0]
    n_train = n if train_fraction is None else max(1, int(n * train_fraction))
    dropped: list[str] = []
    mean = std = None
    if standardize:
        mean = X[:n_train].mean(axis=0)
        std = X[:n_train].std(axis=0, ddof=0)
        keep = std > 0
        for name, ok in zip(names, keep):
            if not ok:
                dropped.append(name)
                warnings.warn(
                    f"dropping constant column {name!r} (zero train std)",
                    stacklevel=3,
                )
        X = (X[:, keep] - mean[keep]) / std[keep]
        names = [nm for nm, ok in zip(names, keep) if ok]
        mean, std = mean[keep], std[keep]
    if intercept:
        X = np.hstack([X, np.ones((n, 1))])
        names = names + ["intercept"]
    return Dataset(
        X=X,
        y=y,
        feature_names=tuple(names),
        target_name=target_name,
        n_train=n_train,
        dropped=tuple(dropped),
        standardize_mean=mean,
        standardize_std=std,
        theta_true=theta_true,
    )


def ingest_csv(
    path: str | Path,
    target_column: str | None = None,
    standardize: bool = False,
    intercept: bool = False,
    one_hot: tuple[str, ...] = (),
    train_fraction: float | None = None,
) -> Dataset:
    """Load a numeric CSV (UTF-8, header row, ``.`` decimal).

    The target defaults to the last column.  Declared ``one_hot`` columns
    expand into one 0/1 indicator per distinct value; every other cell
    must parse as a float.  With ``standardize``, per-column statistics
    come from the first ``train_fraction`` rows only and constant columns
    are dropped with a warning.  The intercept column of ones is appended
    after standardization.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise EmptyFile(f"{path} contains no rows")
    header = [cell.strip() for cell in rows[0]]
    body = rows[1:]
    if not body:
        raise EmptyFile(f"{path} has a header but no data rows")

    if target_column is None:
        target_column = header[-1]
    if target_column not in header:
        raise MissingColumn(
            f"target column {target_column!r} not in header {header}"
        )
    for col in one_hot:
        if col not in header:
            raise MissingColumn(f"one-hot column {col!r} not in header {header}")
        if col == target_column:
            raise ValueError(f"target column {col!r} cannot be one-hot encoded")

    target_idx = header.index(target_column)
    hot = set(one_hot)
    feature_cols = [
        (idx, name) for idx, name in enumerate(header) if idx != target_idx
    ]

    width = len(header)
    for i, row in enumerate(body):
        if len(row) != width:
            raise NonNumericCell(
                f"row {i + 1}: expected {width} cells, found {len(row)}"
            )

    def parse(i: int, idx: int, name: str) -> float:
        cell = body[i][idx].strip()
        try:
            return float(cell)
        except ValueError:
            raise NonNumericCell(
                f"row {i + 1}, column {name!r}: non-numeric value {cell!r}"
            ) from None

    n = len(body)
    columns: list[np.ndarray] = []
    names: list[str] = []
    for idx, name in feature_cols:
        if name in hot:
            values = [body[i][idx].strip() for i in range(n)]
            for category in sorted(set(values)):
                columns.append(
                    np.array([1.0 if v == category else 0.0 for v in values])
                )
                names.append(f"{name}={category}")
        else:
            columns.append(np.array([parse(i, idx, name) for i in range(n)]))
            names.append(name)
    X = np.column_stack(columns) if columns else np.zeros((n, 0))
    y = np.array([parse(i, target_idx, target_column) for i in range(n)])
    return _postprocess(X, y, names, target_column, train_fraction,
                        standardize, intercept)


_SYNTH_RE = re.compile(
    r"^synthetic\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)$"
)


def synthetic_dataset(spec: str, task: str, noise_var: float,
                      train_fraction: float | None = None,
                      standardize: bool = False,
                      intercept: bool = False) -> Dataset:
    """Seeded generator ``synthetic(d, n, seed)``.

    Regression: design columns are scaled to unit Euclidean norm so the
    posterior Hessian stays O(1) and the tuned (gamma, eta) pair sits in
    the stable regime at desk scale; ``y = X theta_true + sqrt(noise_var)
    * eps``.  Classification keeps raw unit-variance features so the
    margins ``X theta_true`` are O(1) and the classes nearly separable;
    labels flip sign on a lightly perturbed margin.
    """
    match = _SYNTH_RE.match(spec.strip())
    if match is None:
        raise ValueError(
            f"data spec {spec!r} is neither a file nor synthetic(d, n, seed)"
        )
    d, n, seed = (int(g) for g in match.groups())
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    theta_true = rng.normal(size=d)
    if task == "classification":
        margin = X @ theta_true + 0.3 * rng.normal(size=n)
        y = (margin > 0).astype(float)
    else:
        X = X / np.linalg.norm(X, axis=0)
        y = X @ theta_true + np.sqrt(noise_var) * rng.normal(size=n)
    names = [f"x{j}" for j in range(d)]
    return _postprocess(X, y, names, "y", train_fraction, standardize,
                        intercept, theta_true=theta_true)


def load_dataset(config: ExperimentConfig) -> Dataset:
    if _SYNTH_RE.match(config.data.strip()):
        return synthetic_dataset(
            config.data, config.task, config.noise_var,
            train_fraction=config.split, standardize=config.standardize,
            intercept=config.intercept,
        )
    return ingest_csv(
        config.data, target_column=config.target,
        standardize=config.standardize, intercept=config.intercept,
        one_hot=config.one_hot, train_fraction=config.split,
    )


# ---------------------------------------------------------------------------
# worker pool

def _max_workers(n_jobs: int) -> int:
    raw = os.environ.get("HOLMC_THREADS")
    if raw is None:
        cap = os.cpu_count() or 1
    else:
        try:
            cap = int(raw)
        except ValueError:
            cap = -1
        if cap < 1:
            raise ValueError(
                f"HOLMC_THREADS must be a positive integer, got {raw!r}"
            )
    return max(1, min(cap, n_jobs))


def map_jobs(fn, keys) -> dict:
    """Run independent jobs, possibly threaded; results in sorted key order."""
    keys = sorted(keys)
    workers = _max_workers(len(keys))
    if workers <= 1 or len(keys) <= 1:
        return {key: fn(key) for key in keys}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {key: pool.submit(fn, key) for key in keys}
        return {key: futures[key].result() for key in keys}


# ---------------------------------------------------------------------------
# experiment internals

def _symmetrize(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.T)


def regression_potential(
    X: np.ndarray, y: np.ndarray, lam: float, noise_var: float
) -> QuadraticPotential:
    """Negative log of the conjugate posterior with prior ``N(0, lam I)``.

    ``A = X'X/noise_var + I/lam`` and ``b = X'y/noise_var``, so the Gibbs
    position marginal coincides with the exact posterior law.
    """
    d = X.shape[1]
    A = _symmetrize(X.T @ X / noise_var + np.eye(d) / lam)
    return QuadraticPotential(A, X.T @ y / noise_var)


def _certificate_summary(P: int, m: float, L: float, gamma: float,
                         convention: str) -> dict:
    auto = build_certificate(
        CertificateInputs(P=P, m=m, L=L, gamma="auto",
                          kappa_convention=convention)
    )
    summary = {
        "P": P,
        "m": m,
        "L": L,
        "kappa_convention": convention,
        "gamma0": auto.gamma0,
        "eta_star": auto.eta_star,
        "rho_at_gamma0": auto.rho,
        "run_gamma": gamma,
    }
    if gamma < auto.gamma0:
        summary["advisory"] = (
            f"run gamma {gamma:g} is below the certified threshold "
            f"gamma0 {auto.gamma0:g}; contraction is not certified"
        )
    else:
        at_run = build_certificate(
            CertificateInputs(P=P, m=m, L=L, gamma=gamma,
                              kappa_convention=convention)
        )
        summary["rho_at_run_gamma"] = at_run.rho
    return summary


def _chain_provider(P: int, gamma: float, eta: float, potential):
    """Transition law: closed-form tables at P=4, stacked engine otherwise."""
    if P == 4:
        return lambda x: step_law(x, potential, gamma, eta)
    if isinstance(potential, QuadraticPotential):
        return transition_quadratic(P, gamma, eta, A=potential.A,
                                    b=potential.b)
    cov = lift_block_table(covariance_universal(P, gamma, eta), potential.dim)
    return lambda x: (mean_general(P, gamma, eta, x, potential), cov)


def _check_stability(P: int, gamma: float, eta: float,
                     potential: QuadraticPotential) -> dict:
    """Exact stationary moments; raises NotContractive naming the stepsize."""
    kernel = transition_quadratic(P, gamma, eta, A=potential.A, b=potential.b)
    try:
        m_inf, S_inf = stationary_law_affine(kernel)
    except NotContractive as exc:
        raise NotContractive(f"eta={eta:g}, gamma={gamma:g}: {exc}") from exc
    d = potential.dim
    return {
        "theta_mean": m_inf[:d].tolist(),
        "theta_cov_trace": float(np.trace(S_inf[:d, :d])),
        "spectral_radius": float(max(abs(np.linalg.eigvals(kernel.T)))),
    }


def _run_seed_chains(provider, config: ExperimentConfig, potential,
                     gamma: float) -> dict:
    def job(seed: int):
        chain = ChainConfig(
            P=config.P, gamma=gamma, eta=config.eta, N=config.N,
            seed=seed, init_policy=config.init_policy,
        )
        return run_chain(provider, chain, potential=potential)

    return map_jobs(job, config.seeds)


def _terminal_window(values: np.ndarray) -> float:
    window = max(1, values.size // 10)
    return float(np.mean(values[-window:]))


def run_regression_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Sample the conjugate ridge posterior and track W2 convergence."""
    start = time.perf_counter()
    dataset = load_dataset(config)
    X_train, y_train = dataset.train
    gammas = config.gamma_grid or (config.gamma,)

    potential = regression_potential(X_train, y_train, config.lam,
                                     config.noise_var)
    target = ridge_posterior(
        X_train, y_train,
        prior_cov=config.lam * np.eye(potential.dim),
        noise_var=config.noise_var,
    )
    m_bound, L_bound = potential.hessian_bounds()
    certificate = _certificate_summary(config.P, m_bound, L_bound,
                                       config.gamma, config.convention)

    curves: dict[str, dict] = {}
    fingerprints: dict[str, dict] = {}
    tables: dict = {
        "posterior_mean": target.mean.tolist(),
        "posterior_std": np.sqrt(np.diag(target.covariance)).tolist(),
        "stationary": {},
        "series": {},
    }
    for gamma in gammas:
        series = f"P{config.P}" if len(gammas) == 1 else f"gamma={gamma:g}"
        tables["stationary"][series] = _check_stability(
            config.P, gamma, config.eta, potential
        )
        provider = _chain_provider(config.P, gamma, config.eta, potential)
        trajectories = _run_seed_chains(provider, config, potential, gamma)
        curve = w2_trace(trajectories, target)
        pooled = np.concatenate(
            [trajectories[s].kept_theta for s in sorted(trajectories)]
        )
        curves[series] = curve.as_dict()
        fingerprints[series] = {
            str(s): trajectories[s].rng_fingerprint
            for s in sorted(trajectories)
        }
        tables["series"][series] = {
            "gamma": gamma,
            "w2_initial": float(curve.mean[0]),
            "w2_terminal_window": _terminal_window(curve.mean),
            "theta_mean": pooled.mean(axis=0).tolist(),
        }
    return ExperimentReport(
        config=config.as_dict(),
        certificate=certificate,
        curves=curves,
        tables=tables,
        rng_fingerprints=fingerprints,
        versions=_versions(),
        wall_clock_seconds=time.perf_counter() - start,
    )


def run_classification_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Sample the ridge-logistic posterior and track held-out accuracy."""
    start = time.perf_counter()
    dataset = load_dataset(config)
    X_train, y_train = dataset.train
    X_test, y_test = dataset.test
    if not np.isin(dataset.y, (0.0, 1.0)).all():
        raise NonBinaryTarget(
            f"target {dataset.target_name!r} must take values in {{0, 1}}"
        )
    gammas = config.gamma_grid or (config.gamma,)

    potential = LogisticPotential(X_train, y_train, config.lam)
    m_bound, L_bound = potential.hessian_bounds()
    certificate = _certificate_summary(config.P, m_bound, L_bound,
                                       config.gamma, config.convention)
    checkpoints = default_checkpoints(config.N)
    majority = float(max(np.mean(y_test == 1.0), np.mean(y_test == 0.0)))

    curves: dict[str, dict] = {}
    fingerprints: dict[str, dict] = {}
    tables: dict = {
        "majority_class_rate": majority,
        "n_train": int(dataset.n_train),
        "n_test": int(y_test.size),
        "series": {},
    }
    for gamma in gammas:
        series = f"P{config.P}" if len(gammas) == 1 else f"gamma={gamma:g}"
        provider = _chain_provider(config.P, gamma, config.eta, potential)
        trajectories = _run_seed_chains(provider, config, potential, gamma)
        seed_list = sorted(trajectories)
        for s in seed_list:
            # No exact stationary law exists for the logistic target, so
            # divergence is only detectable after the fact.
            if not np.isfinite(trajectories[s].theta).all():
                raise NotContractive(
                    f"eta={config.eta:g}, gamma={gamma:g}: chain for seed "
                    f"{s} produced non-finite samples"
                )
        values = np.column_stack([
            classification_accuracy(
                trajectories[s].theta, X_test, y_test, checkpoints
            )
            for s in seed_list
        ])
        curve = W2Curve(
            checkpoints=checkpoints,
            per_seed=values,
            seeds=tuple(seed_list),
            skipped=(),
        )
        curves[series] = curve.as_dict()
        fingerprints[series] = {
            str(s): trajectories[s].rng_fingerprint for s in seed_list
        }
        tables["series"][series] = {
            "gamma": gamma,
            "terminal_accuracy": float(curve.mean[-1]),
        }
    return ExperimentReport(
        config=config.as_dict(),
        certificate=certificate,
        curves=curves,
        tables=tables,
        rng_fingerprints=fingerprints,
        versions=_versions(),
        wall_clock_seconds=time.perf_counter() - start,
    )


def grid_search(config: ExperimentConfig) -> ExperimentReport:
    """Rank (eta, gamma) grid points by the task's terminal score."""
    start = time.perf_counter()
    etas = config.eta_grid or (config.eta,)
    gammas = config.gamma_grid or (config.gamma,)
    if not config.eta_grid and not config.gamma_grid:
        raise ValueError("grid search needs a nonempty eta or gamma grid")
    runner = (run_regression_experiment if config.task == "regression"
              else run_classification_experiment)

    def job(point: tuple[float, float]):
        eta, gamma = point
        sub = make_config(
            config.task,
            flag_values={
                **{k: v for k, v in config.as_dict().items()
                   if k not in ("task", "eta", "gamma", "eta_grid",
                                "gamma_grid", "seeds", "one_hot", "P_list")},
                "seeds": config.seeds,
                "one_hot": config.one_hot,
                "eta": eta,
                "gamma": gamma,
            },
        )
        try:
            report = runner(sub)
        except HolmcError as exc:
            return {"eta": eta, "gamma": gamma, "status": "diverged",
                    "detail": f"{type(exc).__name__}: {exc}"}
        series = next(iter(report.tables["series"].values()))
        score = (series["w2_terminal_window"] if config.task == "regression"
                 else series["terminal_accuracy"])
        return {"eta": eta, "gamma": gamma, "status": "ok", "score": score}

    results = map_jobs(job, [(e, g) for e in etas for g in gammas])
    rows = [results[key] for key in sorted(results)]
    ranked = [row for row in rows if row["status"] == "ok"]
    if not ranked:
        raise AllConfigsFailed(
            f"all {len(rows)} grid points diverged or failed"
        )
    better = (1.0 if config.task == "regression" else -1.0)
    ranked.sort(key=lambda r: (better * r["score"], r["eta"], r["gamma"]))
    for rank, row in enumerate(ranked, start=1):
        row["rank"] = rank
    winner = ranked[0]
    return ExperimentReport(
        config=config.as_dict(),
        certificate={},
        curves={},
        tables={
            "grid": rows,
            "winner": {"eta": winner["eta"], "gamma": winner["gamma"],
                       "score": winner["score"]},
        },
        rng_fingerprints={},
        versions=_versions(),
        wall_clock_seconds=time.perf_counter() - start,
    )


W2_NUMERICAL_FLOOR = 1e-12


def run_order_study(config: ExperimentConfig) -> ExperimentReport:
    """Stationary-bias decay rates of the discretized chain versus stepsize.

    For each order the exact stationary law of the affine kernel is
    compared (position marginal, W2) against the Gibbs law; the log-log
    slope over the stepsize grid witnesses the scheme's order.  The chain
    runs at the configured friction; per-order certificates are reported
    as advisory only, since the certified minimal friction is usually so
    large that every stable stepsize drives the bias below the numerical
    floor of the W2 evaluation.
    """
    start = time.perf_counter()
    dataset = load_dataset(config)
    X_train, y_train = dataset.train
    potential = regression_potential(X_train, y_train, config.lam,
                                     config.noise_var)
    m_bound, L_bound = potential.hessian_bounds()
    d = potential.dim
    A_inv = np.linalg.inv(potential.A)
    gibbs = GaussianLaw(A_inv @ potential.b, _symmetrize(A_inv))
    etas = tuple(sorted(config.eta_grid))
    if not etas:
        raise ValueError("order study needs a nonempty eta grid")
    gamma = config.gamma

    certificates: dict = {}
    per_order: dict = {}
    slopes: dict = {}
    for P in config.P_list:
        cert = build_certificate(
            CertificateInputs(P=P, m=m_bound, L=L_bound, gamma="auto",
                              kappa_convention=config.convention)
        )
        certificates[f"P{P}"] = {
            "gamma0": cert.gamma0, "gamma": gamma, "eta_star": cert.eta_star,
        }
        if gamma < cert.gamma0:
            certificates[f"P{P}"]["advisory"] = (
                f"gamma {gamma:g} below certified gamma0 {cert.gamma0:g}"
            )
        points = []
        excluded = []
        for eta in etas:
            kernel = transition_quadratic(P, gamma, eta, A=potential.A,
                                          b=potential.b)
            try:
                m_inf, S_inf = stationary_law_affine(kernel)
            except NotContractive as exc:
                excluded.append({"eta": eta, "reason": str(exc)})
                continue
            law = GaussianLaw(m_inf[:d], _symmetrize(S_inf[:d, :d]))
            w2 = w2_gaussians(law, gibbs)
            if w2 <= W2_NUMERICAL_FLOOR:
                excluded.append({
                    "eta": eta,
                    "reason": f"bias {w2:g} at or below the numerical floor",
                })
                continue
            points.append({"eta": eta, "w2": w2})
        if len(points) < 2:
            raise SlopeUndefined(
                f"P={P}: only {len(points)} usable stepsizes; "
                "need at least two for a slope"
            )
        fit = fit_order_slope([p["eta"] for p in points],
                              [p["w2"] for p in points])
        per_order[f"P{P}"] = {"points": points, "excluded": excluded}
        slopes[f"P{P}"] = {
            "slope": fit.slope, "half_width": fit.half_width,
            "n_points": fit.n_points,
        }

    ordering = {}
    orders = sorted(config.P_list)
    for low, high in zip(orders, orders[1:]):
        ordering[f"P{high}_minus_P{low}"] = (
            slopes[f"P{high}"]["slope"] - slopes[f"P{low}"]["slope"]
        )
    return ExperimentReport(
        config=config.as_dict(),
        certificate=certificates,
        curves={},
        tables={"orders": per_order, "slopes": slopes, "ordering": ordering},
        rng_fingerprints={},
        versions=_versions(),
        wall_clock_seconds=time.perf_counter() - start,
    )


# ---------------------------------------------------------------------------
# kernel self-check

def _ito_spot_sigma00(gamma: float, eta: float, nodes: int = 2000) -> float:
    """Position-block noise variance by direct Ito-isometry quadrature.

    The unit-noise response of the position at the end of the step to a
    noise impulse at time s is ``g(t) = gamma t^2/2 - t + (1-e^{-gamma
    t})/gamma`` at ``t = eta - s``; the variance is ``2 gamma`` times the
    squared kernel integrated over the step.
    """
    xs, ws = roots_legendre(nodes)
    s = 0.5 * eta * (xs + 1.0)
    w = 0.5 * eta * ws
    t = eta - s
    kernel = 0.5 * gamma * t ** 2 - t + (1.0 - np.exp(-gamma * t)) / gamma
    return float(2.0 * gamma * np.sum(w * kernel ** 2))


def kernel_check(
    gammas=(0.5, 1.0, 2.0, 5.0),
    etas=(0.005, 0.011, 0.05, 0.1),
    dims=(1, 2, 3),
    matrices_per_dim: int = 5,
    master_seed: int = 20260815,
) -> dict:
    """Closed-form fourth-order tables versus the stacked-system engine.

    Means are compared per (gamma, eta) over seeded SPD quadratic
    potentials and states; covariance tables are compared in max-norm
    relative terms; one position-variance entry is cross-checked against
    direct Ito-isometry quadrature.
    """
    rng = np.random.default_rng(master_seed)
    instances = []
    for d in dims:
        for _ in range(matrices_per_dim):
            Q = rng.normal(size=(d, d))
            A = Q @ Q.T + 0.5 * np.eye(d)
            b = rng.normal(size=d)
            x = rng.normal(size=4 * d)
            instances.append((A, b, x))

    grid = []
    overall = True
    for gamma in gammas:
        for eta in etas:
            mean_rel = 0.0
            for A, b, x in instances:
                ours = mean_quadratic(x, A, b, gamma, eta)
                ref = transition_quadratic(4, gamma, eta, A=A, b=b).mean(x)
                denom = max(1.0, float(np.abs(ref).max()))
                mean_rel = max(mean_rel,
                               float(np.abs(ours - ref).max()) / denom)
            table = sigma_entries(gamma, eta)
            ref_table = covariance_universal(4, gamma, eta)
            cov_rel = float(
                np.abs(table - ref_table).max() / np.abs(ref_table).max()
            )
            entry = {
                "gamma": gamma,
                "eta": eta,
                "mean_rel": mean_rel,
                "cov_rel": cov_rel,
                "mean_pass": bool(mean_rel <= tol.ACCEPT_KERNEL_MEAN_RTOL),
                "cov_pass": bool(cov_rel <= tol.ACCEPT_KERNEL_COV_RTOL),
            }
            overall = overall and entry["mean_pass"] and entry["cov_pass"]
            grid.append(entry)

    spot_gamma, spot_eta = 1.0, 0.1
    ours00 = float(sigma_entries(spot_gamma, spot_eta)[0, 0])
    quad00 = _ito_spot_sigma00(spot_gamma, spot_eta)
    ito_rel = abs(ours00 - quad00) / abs(quad00)
    ito_pass = bool(ito_rel <= tol.ACCEPT_ITO_SPOT_RTOL)
    overall = overall and ito_pass
    return {
        "grid": grid,
        "ito_spot": {
            "gamma": spot_gamma, "eta": spot_eta,
            "closed_form": ours00, "quadrature": quad00,
            "rel": ito_rel, "pass": ito_pass,
        },
        "pass": bool(overall),
    }


def run_kernel_check(config: ExperimentConfig) -> ExperimentReport:
    start = time.perf_counter()
    matrix = kernel_check()
    return ExperimentReport(
        config=config.as_dict(),
        certificate={},
        curves={},
        tables={"kernel_check": matrix},
        rng_fingerprints={},
        versions=_versions(),
        wall_clock_seconds=time.perf_counter() - start,
    )


def run_certificate_report(config: ExperimentConfig) -> ExperimentReport:
    start = time.perf_counter()
    dataset = load_dataset(config)
    X_train, y_train = dataset.train
    if config.task == "certificate" and _is_classification_labels(dataset.y):
        potential = LogisticPotential(X_train, y_train, config.lam)
    else:
        potential = regression_potential(X_train, y_train, config.lam,
                                         config.noise_var)
    m_bound, L_bound = potential.hessian_bounds()
    cert = build_certificate(
        CertificateInputs(P=config.P, m=m_bound, L=L_bound, gamma="auto",
                          kappa_convention=config.convention)
    )
    summary = {
        "P": cert.P, "m": cert.m, "L": cert.L,
        "kappa": cert.kappa, "lambda_hat": cert.lambda_hat,
        "h1": cert.h1, "h2": cert.h2, "h3": cert.h3,
        "h4": cert.h4, "h5": cert.h5,
        "gamma0": cert.gamma0, "gamma": cert.gamma, "rho": cert.rho,
        "eta_star": cert.eta_star,
        "H": cert.H.tolist(),
        "M_sim": cert.M_sim.tolist(),
        "diagonalizable": cert.diagonalizable,
    }
    return ExperimentReport(
        config=config.as_dict(),
        certificate=summary,
        curves={},
        tables={},
        rng_fingerprints={},
        versions=_versions(),
        wall_clock_seconds=time.perf_counter() - start,
    )


def _is_classification_labels(y: np.ndarray) -> bool:
    return bool(np.isin(y, (0.0, 1.0)).all())


RUNNERS = {
    "regression": run_regression_experiment,
    "classification": run_classification_experiment,
    "order-study": run_order_study,
    "kernel-check": run_kernel_check,
    "certificate": run_certificate_report,
}


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    if config.task in SAMPLING_TASKS and config.eta_grid:
        return grid_search(config)
    return RUNNERS[config.task](config)


# ---------------------------------------------------------------------------
# emission

def write_curves_csv(curves: dict[str, dict], path: str | Path) -> None:
    """``curves.csv``: one row per (series, checkpoint).

    Columns: checkpoint, series, mean, half_std, then one ``seed_<s>``
    column per seed (union across series; absent values left empty).
    """
    all_seeds: list[int] = sorted(
        {s for curve in curves.values() for s in curve["seeds"]}
    )
    header = ["checkpoint", "series", "mean", "half_std"] + [
        f"seed_{s}" for s in all_seeds
    ]
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for series in sorted(curves):
            curve = curves[series]
            col_of = {s: i for i, s in enumerate(curve["seeds"])}
            for row_idx, k in enumerate(curve["checkpoints"]):
                row = [str(int(k)), series,
                       repr(float(curve["mean"][row_idx])),
                       repr(float(curve["half_std"][row_idx]))]
                for s in all_seeds:
                    if s in col_of:
                        row.append(
                            repr(float(curve["per_seed"][row_idx][col_of[s]]))
                        )
                    else:
                        row.append("")
                writer.writerow(row)


def write_report(report: ExperimentReport, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report_path = out / "report.json"
    report_path.write_text(
        json.dumps(report.as_dict(), sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    if report.curves:
        write_curves_csv(report.curves, out / "curves.csv")
    return report_path


# ---------------------------------------------------------------------------
# click surface

def _tuple_option(value: str | None, kind):
    if value is None:
        return None
    items = [v.strip() for v in value.split(",") if v.strip()]
    return tuple(kind(v) for v in items)


_COMMON_OPTIONS = [
    click.option("--config", "config_file", type=click.Path(exists=True),
                 default=None, help="Flat key=value config file."),
    click.option("--order", "P", type=int, default=None),
    click.option("--eta", type=float, default=None),
    click.option("--gamma", type=float, default=None),
    click.option("--lambda", "lam", type=float, default=None),
    click.option("--noise-var", "noise_var", type=float, default=None),
    click.option("--iters", "N", type=int, default=None),
    click.option("--seeds", type=str, default=None,
                 help="Comma-separated seed list."),
    click.option("--data", type=str, default=None,
                 help="CSV path or synthetic(d, n, seed)."),
    click.option("--target", type=str, default=None),
    click.option("--split", type=float, default=None),
    click.option("--standardize", is_flag=True, default=None),
    click.option("--intercept", is_flag=True, default=None),
    click.option("--one-hot", "one_hot", type=str, default=None),
    click.option("--init", "init_policy", type=str, default=None),
    click.option("--out", type=str, default=None),
    click.option("--eta-grid", "eta_grid", type=str, default=None),
    click.option("--gamma-grid", "gamma_grid", type=str, default=None),
    click.option("--convention", type=str, default=None),
]


def _with_common_options(f):
    for option in reversed(_COMMON_OPTIONS):
        f = option(f)
    return f


def _dispatch(task: str, params: dict) -> None:
    config_file = params.pop("config_file", None)
    params["seeds"] = _tuple_option(params.get("seeds"), int)
    params["eta_grid"] = _tuple_option(params.get("eta_grid"), float)
    params["gamma_grid"] = _tuple_option(params.get("gamma_grid"), float)
    params["one_hot"] = _tuple_option(params.get("one_hot"), str)
    try:
        _max_workers(1)
        file_values = parse_config_file(config_file) if config_file else {}
        config = make_config(task, file_values, params)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    try:
        report = run_experiment(config)
        path = write_report(report, config.out)
    except HolmcError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(1)
    click.echo(f"report: {path}")
    if config.task == "kernel-check":
        verdict = report.tables["kernel_check"]["pass"]
        click.echo(f"kernel-check: {'pass' if verdict else 'FAIL'}")
        if not verdict:
            sys.exit(1)


@click.group()
@click.version_option(version=__version__, prog_name="holmc")
def main() -> None:
    """High-order Langevin Monte Carlo experiment runner."""


@main.command()
@_with_common_options
def regression(**params) -> None:
    """Bayesian ridge regression: sample the posterior, track W2."""
    _dispatch("regression", params)


@main.command()
@_with_common_options
def classification(**params) -> None:
    """Bayesian logistic classification: track held-out accuracy."""
    _dispatch("classification", params)


@main.command(name="order-study")
@_with_common_options
def order_study(**params) -> None:
    """Stationary-bias order fit across chain orders."""
    _dispatch("order-study", params)


@main.command(name="kernel-check")
@_with_common_options
def kernel_check_cmd(**params) -> None:
    """Exactness self-test of the fourth-order closed-form tables."""
    _dispatch("kernel-check", params)


@main.command()
@_with_common_options
def certificate(**params) -> None:
    """Contraction certificate summary for the configured problem."""
    _dispatch("certificate", params)


if __name__ == "__main__":
    main()
