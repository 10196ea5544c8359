"""Verification suites binding every representation identity to a
pass/fail report.

Each suite runs a battery of randomized checks over deterministic
ensembles; the case list depends only on the configuration (dims, trials,
seed, tolerances), never on wall clock or evaluation order, so two runs
with the same arguments produce byte-identical reports. Trials may be
evaluated on a thread pool (``jobs``); results are slotted by index, so
the report is the same either way.

Tolerance keys (see ``TOL_DEFAULTS``) can be overridden one at a time;
the CLI exposes them as ``--tol KEY=VALUE`` and multiplies every default
by ``DST_TOL_SCALE`` when set.
"""

from __future__ import annotations

import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .adjoint import (
    adjoint,
    adjoint_axioms,
    baire_approximant,
    banach_deformed_spectral,
    banach_operator,
    dirichlet_laplacian,
    dirichlet_laplacian_demo,
    h_polar,
    intertwining_residual,
)
from .config import Tolerances
from .ensembles import Ensemble, generate
from .errors import ConfigError
from .fileio import digest
from .gexpr import evaluate
from .gexpr import parse as parse_g
from .kuelbs import LpSpace, build_kuelbs, canonical_duality_map, lax_diagnostic, steadman
from .linalg import EigenSystem, herm, hermitian_eigen, vnorm
from .polar import polar_decompose
from .rng import Rng, substream
from .spectral import deformed_of, integrate, spectral_measure, variation

__all__ = ["SuiteConfig", "CaseResult", "Report", "run_suite", "SUITE_NAMES", "TOL_DEFAULTS", "G_CORPUS"]

SUITE_NAMES = ("deformed", "funcalc", "kuelbs", "adjoint", "baire", "banach-spectral", "laplacian")

G_CORPUS = ("lambda", "lambda^2", "exp(-lambda)", "sin(lambda)", "sqrt(lambda)")

TOL_DEFAULTS: dict[str, float] = {
    "deformed.reconstruction": 1e-10,
    "deformed.support": 1e-10,
    "deformed.variation": 1e-12,
    "deformed.commutation": 1e-13,
    "deformed.distinctness": 1e-10,
    "funcalc.identity": 1e-9,
    "funcalc.classical": 1e-9,
    "kuelbs.continuity": 1e-12,
    "kuelbs.duality": 1e-10,
    "kuelbs.steadman": 1e-10,
    "kuelbs.gram_consistency": 1e-12,
    "kuelbs.dual_gram": 1e-12,
    "kuelbs.lax_margin": 0.0,
    "adjoint.contract": 1e-10,
    "adjoint.involution": 1e-10,
    "adjoint.accretive": 1e-10,
    "adjoint.natural": 1e-10,
    "adjoint.inverse": 1e-10,
    "baire.bound_slack": 1e-6,
    "baire.identity": 1e-10,
    "baire.intertwine": 1e-10,
    "baire.rate_low": 0.02,
    "baire.rate_high": 0.5,
    "banach.reconstruction": 1e-8,
    "banach.funcalc": 1e-8,
    "laplacian.contract": 1e-9,
    "laplacian.involution": 1e-9,
    "laplacian.accretive": 1e-9,
    "laplacian.natural": 1e-9,
    "laplacian.inverse": 1e-9,
}


@dataclass(frozen=True)
class SuiteConfig:
    dims: tuple[int, ...] = (2, 4, 8)
    trials: int = 5
    seed: int = 42
    ps: tuple[float, ...] = (1.5, 3.0)
    lambdas: tuple[float, ...] = (1e1, 1e2, 1e3, 1e4)
    laplacian_ns: tuple[int, ...] = (8, 32)
    tol: dict[str, float] = field(default_factory=dict)
    corrupt_gram: bool = False  # negative-control hook: invalidates the kuelbs suite
    jobs: int = 1

    def tolerance(self, key: str) -> float:
        if key in self.tol:
            return self.tol[key]
        if key not in TOL_DEFAULTS:
            raise ConfigError(f"unknown tolerance key {key!r}")
        return TOL_DEFAULTS[key]

    def to_obj(self) -> dict:
        return {
            "dims": list(self.dims),
            "trials": self.trials,
            "ps": list(self.ps),
            "lambdas": list(self.lambdas),
            "laplacian_ns": list(self.laplacian_ns),
            "tol_overrides": {k: self.tol[k] for k in sorted(self.tol)},
            "corrupt_gram": self.corrupt_gram,
        }


@dataclass(frozen=True)
class CaseResult:
    case_id: str
    inputs_digest: str
    metrics: dict[str, float]
    tolerances: dict[str, float]
    passed: bool

    def to_obj(self) -> dict:
        return {
            "id": self.case_id,
            "inputs_digest": self.inputs_digest,
            "metrics": {k: self.metrics[k] for k in sorted(self.metrics)},
            "tolerances": {k: self.tolerances[k] for k in sorted(self.tolerances)},
            "pass": self.passed,
        }


@dataclass(frozen=True)
class Report:
    suite: str
    seed: int
    config: dict
    cases: tuple[CaseResult, ...]
    timestamp: str | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def to_obj(self) -> dict:
        max_metrics: dict[str, float] = {}
        for c in self.cases:
            for k, v in c.metrics.items():
                if math.isfinite(v):
                    max_metrics[k] = max(max_metrics.get(k, -math.inf), v)
        obj = {
            "suite": self.suite,
            "version": __version__,
            "seed": self.seed,
            "config": self.config,
            "cases": [c.to_obj() for c in self.cases],
            "summary": {
                "total": len(self.cases),
                "passed": sum(1 for c in self.cases if c.passed),
                "all_pass": self.passed,
                "max_metrics": {k: max_metrics[k] for k in sorted(max_metrics)},
            },
        }
        if self.timestamp is not None:
            obj["timestamp"] = self.timestamp
        return obj


def _stream(cfg: SuiteConfig, label: str) -> int:
    """Deterministic substream id for a labelled part of a run."""
    return substream(cfg.seed, zlib.crc32(label.encode("utf-8")))


def _suite_weights(m: int) -> np.ndarray:
    """Geometric weights with the decay capped at 2^-19.

    Identical to the library default below dim 20; beyond that the floor
    keeps the canonical Gram's condition number near 5e5, so suites stay
    meaningful at any desk-scale dim instead of tripping the positivity
    gate around dim 45.
    """
    w = np.array([2.0 ** -min(k + 1, 19) for k in range(m)])
    return w / w.sum()


def _embedding(p: float, dim: int, tols: Tolerances):
    return build_kuelbs(LpSpace(dim=dim, p=p), weights=_suite_weights(dim), tols=tols)


def _map_ordered(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _support_match(support, sigma_nonzero) -> float:
    """Two-sided nearest-value distance between a support and a sigma list."""
    sup = np.asarray(support, dtype=np.float64)
    sig = np.asarray(sigma_nonzero, dtype=np.float64)
    if sup.size == 0 and sig.size == 0:
        return 0.0
    if sup.size == 0 or sig.size == 0:
        return math.inf
    worst = 0.0
    for s in sig:
        worst = max(worst, float(np.min(np.abs(sup - s))))
    for s in sup:
        worst = max(worst, float(np.min(np.abs(sig - s))))
    return worst


def _g_of_psd(es: EigenSystem, ast) -> np.ndarray:
    """g(T) through an eigendecomposition, clamping roundoff negatives."""
    vals = np.array([evaluate(ast, max(float(v), 0.0)) for v in es.values], dtype=np.complex128)
    return (es.vectors * vals) @ herm(es.vectors)


def _rel(delta: float, scale: float) -> float:
    return delta / (1.0 + scale)


# --------------------------------------------------------------------------
# deformed: reconstruction, support, variation, distinctness, commutation


def _suite_deformed(cfg: SuiteConfig, tols: Tolerances) -> list[CaseResult]:
    cases: list[CaseResult] = []
    for dim in cfg.dims:
        for kind in ("general", "hermitian", "negdef", "rankdef"):
            rank = max(1, dim // 2) if kind == "rankdef" else None
            ens = Ensemble(kind, dim, cfg.trials, _stream(cfg, f"deformed/{kind}/{dim}"), rank=rank)
            mats = generate(ens)

            def run_one(item, _kind=kind, _dim=dim, _seed=ens.seed):
                idx, a = item
                rng = Rng(substream(_seed, 10_000 + idx))
                f = deformed_of(a, tols=tols)
                recon = _rel(float(np.linalg.norm(f.reconstruct() - a)), float(np.linalg.norm(a)))

                sigma = np.linalg.svd(a, compute_uv=False)
                cut = tols.rank_threshold_rel(_dim) * (float(sigma[0]) if sigma.size else 0.0)
                support_err = _support_match(f.support, sigma[sigma > cut])

                var_excess = 0.0
                for _ in range(3):
                    phi = rng.vector(_dim)
                    var_excess = max(var_excess, variation(f, phi) - variation(f.source, phi))

                # summation-order independence: U (sum g dE) phi vs sum g d(UE) phi
                g = parse_g("exp(-lambda)")
                phi = rng.vector(_dim)
                via_deformed = integrate(g, f, phi)
                via_source = f.U @ integrate(g, f.source, phi)
                comm = _rel(float(np.linalg.norm(via_deformed - via_source)), float(np.linalg.norm(via_source)))

                metrics = {
                    "reconstruction": recon,
                    "support": support_err,
                    "variation_excess": var_excess,
                    "commutation": comm,
                }
                tol_used = {
                    "reconstruction": cfg.tolerance("deformed.reconstruction"),
                    "support": cfg.tolerance("deformed.support"),
                    "variation_excess": cfg.tolerance("deformed.variation"),
                    "commutation": cfg.tolerance("deformed.commutation"),
                }
                ok = all(metrics[k] <= tol_used[k] for k in metrics)

                if _kind == "negdef":
                    es = hermitian_eigen(a, tols=tols)
                    flip = _support_match(f.support, np.abs(es.values))
                    classical_max = float(max(spectral_measure(a, tols=tols).lambdas))
                    deformed_min = float(min(f.support)) if f.support else 0.0
                    metrics["distinctness_flip"] = flip
                    metrics["classical_max_atom"] = classical_max
                    metrics["deformed_min_support"] = deformed_min
                    tol_used["distinctness_flip"] = cfg.tolerance("deformed.distinctness")
                    ok = ok and flip <= tol_used["distinctness_flip"]
                    ok = ok and classical_max < 0.0 and deformed_min > 0.0

                return CaseResult(
                    case_id=f"deformed/{_kind}/n{_dim}/t{idx}",
                    inputs_digest=digest(a),
                    metrics=metrics,
                    tolerances=tol_used,
                    passed=ok,
                )

            cases.extend(_map_ordered(run_one, list(enumerate(mats)), cfg.jobs))
    return cases


# --------------------------------------------------------------------------
# funcalc: parsed-g calculus identity and classical agreement on PD inputs


def _suite_funcalc(cfg: SuiteConfig, tols: Tolerances) -> list[CaseResult]:
    cases: list[CaseResult] = []
    for dim in cfg.dims:
        ens = Ensemble("general", dim, cfg.trials, _stream(cfg, f"funcalc/{dim}"))
        mats = generate(ens)

        def run_one(item, _dim=dim):
            idx, a = item
            f = deformed_of(a, tols=tols)
            p = polar_decompose(a, tols=tols)
            et = hermitian_eigen(p.T, tols=tols)
            worst = 0.0
            for gsrc in G_CORPUS:
                ast = parse_g(gsrc)
                lhs = integrate(ast, f)
                rhs = p.U @ _g_of_psd(et, ast)
                worst = max(worst, _rel(float(np.linalg.norm(lhs - rhs)), float(np.linalg.norm(rhs))))

            # positive-definite input: deformed and classical calculi agree
            pd = a @ herm(a) + 0.5 * np.eye(_dim)
            fd = deformed_of(pd, tols=tols)
            ec = spectral_measure(pd, tols=tols)
            classical_worst = 0.0
            for gsrc in G_CORPUS:
                ast = parse_g(gsrc)
                lhs = integrate(ast, fd)
                rhs = integrate(ast, ec)
                classical_worst = max(
                    classical_worst, _rel(float(np.linalg.norm(lhs - rhs)), float(np.linalg.norm(rhs)))
                )

            metrics = {"identity": worst, "classical_agreement": classical_worst}
            tol_used = {
                "identity": cfg.tolerance("funcalc.identity"),
                "classical_agreement": cfg.tolerance("funcalc.classical"),
            }
            ok = all(metrics[k] <= tol_used[k] for k in metrics)
            return CaseResult(
                case_id=f"funcalc/n{_dim}/t{idx}",
                inputs_digest=digest(a),
                metrics=metrics,
                tolerances=tol_used,
                passed=ok,
            )

        cases.extend(_map_ordered(run_one, list(enumerate(mats)), cfg.jobs))
    return cases


# --------------------------------------------------------------------------
# kuelbs: embedding positivity, continuity, duality identities, Lax bound


def _suite_kuelbs(cfg: SuiteConfig, tols: Tolerances) -> list[CaseResult]:
    cases: list[CaseResult] = []
    for p in cfg.ps:
        for dim in cfg.dims:
            space = LpSpace(dim=dim, p=p)
            emb = _embedding(p, dim, tols)
            gram = emb.gram
            if cfg.corrupt_gram:
                bad = gram.copy()
                evs = np.linalg.eigvalsh(bad)
                bad[0, 0] -= 2.0 * float(evs[-1])  # inject a negative eigenvalue
                gram = bad
            gram_min = float(np.linalg.eigvalsh(gram)[0])

            rng = Rng(_stream(cfg, f"kuelbs/{p}/{dim}"))
            continuity = -math.inf
            duality_pair = 0.0
            duality_norm = 0.0
            steadman_rel = 0.0
            gram_consistency = 0.0
            for _ in range(max(cfg.trials * 4, 8)):
                u = rng.vector(dim)
                nb = space.norm(u)
                nh = math.sqrt(max(float(np.vdot(u, gram @ u).real), 0.0))
                continuity = max(continuity, nh - nb)

                fu = canonical_duality_map(u, space)
                duality_pair = max(duality_pair, abs(fu(u) - nb**2) / (1.0 + nb**2))
                duality_norm = max(duality_norm, abs(fu.dual_norm - nb) / (1.0 + nb))

                su = steadman(emb, u)
                steadman_rel = max(steadman_rel, abs(su(u) - nb**2) / (1.0 + nb**2))

                v = rng.vector(dim)
                atomwise = sum(
                    w * complex(fc @ u) * complex(fc @ v).conjugate()
                    for w, fc in zip(emb.weights, emb.functionals)
                )
                gram_consistency = max(gram_consistency, abs(atomwise - emb.h_inner(u, v)))

            dual_gram_err = 0.0
            for a_idx in range(min(dim, 4)):
                for b_idx in range(min(dim, 4)):
                    fa = emb.functionals[a_idx]
                    fb = emb.functionals[b_idx]
                    direct = sum(
                        w * complex(fa @ s) * complex(fb @ s).conjugate()
                        for w, s in zip(emb.weights, emb.seeds)
                    )
                    dual_gram_err = max(dual_gram_err, abs(direct - emb.dual_pairing(fa, fb)))

            # Lax diagnostic on metric-selfadjoint operators
            ens = Ensemble(
                "h_selfadjoint", dim, max(2, cfg.trials // 2),
                _stream(cfg, f"kuelbs/lax/{p}/{dim}"), gram=emb.gram,
            )
            lax_margin = -math.inf
            lax_selfadj = True
            for a in generate(ens):
                diag = lax_diagnostic(emb, a, tols=tols)
                lax_margin = max(lax_margin, diag.ratio - diag.bound)
                lax_selfadj = lax_selfadj and diag.is_h_selfadjoint

            metrics = {
                "gram_min_eig": gram_min,
                "continuity_excess": continuity,
                "duality_pairing": duality_pair,
                "duality_norm": duality_norm,
                "steadman_identity": steadman_rel,
                "gram_consistency": gram_consistency,
                "dual_gram": dual_gram_err,
                "lax_margin": lax_margin,
            }
            tol_used = {
                "continuity_excess": cfg.tolerance("kuelbs.continuity"),
                "duality_pairing": cfg.tolerance("kuelbs.duality"),
                "duality_norm": cfg.tolerance("kuelbs.duality"),
                "steadman_identity": cfg.tolerance("kuelbs.steadman"),
                "gram_consistency": cfg.tolerance("kuelbs.gram_consistency"),
                "dual_gram": cfg.tolerance("kuelbs.dual_gram"),
                "lax_margin": cfg.tolerance("kuelbs.lax_margin"),
            }
            ok = gram_min > 0.0 and lax_selfadj and all(metrics[k] <= tol_used[k] for k in tol_used)
            cases.append(
                CaseResult(
                    case_id=f"kuelbs/p{p}/n{dim}",
                    inputs_digest=digest(gram),
                    metrics=metrics,
                    tolerances=tol_used,
                    passed=ok,
                )
            )
    return cases


# --------------------------------------------------------------------------
# adjoint: defining contract, involution, axioms


def _suite_adjoint(cfg: SuiteConfig, tols: Tolerances) -> list[CaseResult]:
    cases: list[CaseResult] = []
    for p in cfg.ps:
        for dim in cfg.dims:
            emb = _embedding(p, dim, tols)
            ens = Ensemble("general", dim, cfg.trials, _stream(cfg, f"adjoint/{p}/{dim}"))
            mats = generate(ens)

            def run_one(item, _dim=dim, _p=p, _emb=emb, _seed=ens.seed):
                idx, a = item
                rng = Rng(substream(_seed, 20_000 + idx))
                op = banach_operator(a, _emb)
                pair = adjoint(op)
                contract = 0.0
                scale_a = float(np.linalg.norm(a))
                for _ in range(6):
                    u = rng.vector(_dim)
                    v = rng.vector(_dim)
                    den = 1.0 + scale_a * float(np.linalg.norm(u)) * float(np.linalg.norm(v))
                    contract = max(contract, pair.contract_residual(u, v) / den)
                second = adjoint(banach_operator(pair.astar, _emb))
                involution = _rel(float(np.linalg.norm(second.astar - a)), scale_a)
                probes = [rng.vector(_dim) for _ in range(4)]
                ax = adjoint_axioms(pair, probes=probes, tols=tols)

                metrics = {
                    "contract": contract,
                    "involution": involution,
                    "accretive_min": ax.accretive_min,
                    "natural_selfadjoint": ax.natural_selfadjoint_residual,
                    "inverse_norm": ax.inverse_norm,
                }
                tol_used = {
                    "contract": cfg.tolerance("adjoint.contract"),
                    "involution": cfg.tolerance("adjoint.involution"),
                    "natural_selfadjoint": cfg.tolerance("adjoint.natural"),
                }
                ok = all(metrics[k] <= tol_used[k] for k in tol_used)
                ok = ok and ax.accretive_min >= -cfg.tolerance("adjoint.accretive")
                ok = ok and ax.inverse_norm <= 1.0 + cfg.tolerance("adjoint.inverse")
                return CaseResult(
                    case_id=f"adjoint/p{_p}/n{_dim}/t{idx}",
                    inputs_digest=digest(a),
                    metrics=metrics,
                    tolerances=tol_used,
                    passed=ok,
                )

            cases.extend(_map_ordered(run_one, list(enumerate(mats)), cfg.jobs))
    return cases


# --------------------------------------------------------------------------
# baire: resolvent approximant error bound, rate window, identities


def _suite_baire(cfg: SuiteConfig, tols: Tolerances) -> list[CaseResult]:
    cases: list[CaseResult] = []
    lams = tuple(sorted(cfg.lambdas))
    for p in cfg.ps:
        for dim in cfg.dims:
            emb = _embedding(p, dim, tols)
            ens = Ensemble("general", dim, cfg.trials, _stream(cfg, f"baire/{p}/{dim}"))
            mats = generate(ens)

            def run_one(item, _dim=dim, _p=p, _emb=emb, _seed=ens.seed):
                idx, a = item
                rng = Rng(substream(_seed, 30_000 + idx))
                op = banach_operator(a, _emb)
                gp = h_polar(op, tols=tols)
                ell_h = herm(gp.chol)
                t_h_norm = float(np.linalg.norm(ell_h @ gp.T @ np.linalg.inv(ell_h), 2))
                sigma = np.linalg.svd(a, compute_uv=False)
                full_rank = sigma.size and sigma[-1] > 1e-6 * sigma[0]
                phis = [rng.vector(_dim) for _ in range(4)]

                bound_excess = -math.inf
                identity_worst = 0.0
                intertwine_worst = 0.0
                errors = []
                for lam in lams:
                    probe = baire_approximant(op, lam, gp=gp, tols=tols)
                    identity_worst = max(identity_worst, probe.identity_residual())
                    intertwine_worst = max(intertwine_worst, intertwining_residual(op, probe))
                    err_lam = 0.0
                    for phi in phis:
                        err = _emb.h_norm(probe.a_lambda @ phi - a @ phi)
                        bnd = _emb.h_norm(gp.Tbar @ (a @ phi)) / lam
                        err_lam = max(err_lam, err)
                        bound_excess = max(bound_excess, err - bnd * (1.0 + cfg.tolerance("baire.bound_slack")))
                    errors.append(err_lam)

                # the decade window describes the resolvent-dominated regime,
                # so rate ratios are asserted only once lambda clears ||T||_H
                rate_ok = True
                rate_min, rate_max = math.inf, -math.inf
                if full_rank:
                    for e_prev, e_next, l_prev, l_next in zip(errors, errors[1:], lams, lams[1:]):
                        if abs(l_next / l_prev - 10.0) < 1e-9 and e_prev > 0.0 and l_prev >= t_h_norm:
                            ratio = e_next / e_prev
                            rate_min = min(rate_min, ratio)
                            rate_max = max(rate_max, ratio)
                            rate_ok = rate_ok and (
                                cfg.tolerance("baire.rate_low") <= ratio <= cfg.tolerance("baire.rate_high")
                            )

                metrics = {
                    "bound_excess": bound_excess,
                    "identity": identity_worst,
                    "intertwine": intertwine_worst,
                    "rate_min": rate_min if math.isfinite(rate_min) else 0.0,
                    "rate_max": rate_max if math.isfinite(rate_max) else 0.0,
                }
                tol_used = {
                    "identity": cfg.tolerance("baire.identity"),
                    "intertwine": cfg.tolerance("baire.intertwine"),
                }
                ok = bound_excess <= 0.0 and rate_ok
                ok = ok and all(metrics[k] <= tol_used[k] for k in tol_used)
                return CaseResult(
                    case_id=f"baire/p{_p}/n{_dim}/t{idx}",
                    inputs_digest=digest(a),
                    metrics=metrics,
                    tolerances=tol_used,
                    passed=ok,
                )

            cases.extend(_map_ordered(run_one, list(enumerate(mats)), cfg.jobs))
    return cases


# --------------------------------------------------------------------------
# banach-spectral: metric deformed measure, lp reconstruction, calculus


def _suite_banach_spectral(cfg: SuiteConfig, tols: Tolerances) -> list[CaseResult]:
    cases: list[CaseResult] = []
    for p in cfg.ps:
        for dim in (d for d in cfg.dims if d <= 16):
            emb = _embedding(p, dim, tols)
            ens = Ensemble("general", dim, cfg.trials, _stream(cfg, f"banach-spectral/{p}/{dim}"))
            mats = generate(ens)

            def run_one(item, _dim=dim, _p=p, _emb=emb, _seed=ens.seed):
                idx, a = item
                rng = Rng(substream(_seed, 40_000 + idx))
                op = banach_operator(a, _emb)
                res = banach_deformed_spectral(op, tols=tols)
                recon_mat = res.measure.reconstruct()
                recon = 0.0
                probes = [np.eye(_dim, dtype=np.complex128)[:, k] for k in range(_dim)]
                probes += [rng.vector(_dim) for _ in range(3)]
                for phi in probes:
                    num = vnorm(recon_mat @ phi - a @ phi, _p)
                    den = 1.0 + vnorm(a @ phi, _p)
                    recon = max(recon, num / den)

                ast = parse_g("lambda^2")
                lhs = integrate(ast, res.measure)
                tt = res.polar.T
                rhs = res.polar.U @ (tt @ tt)
                fun = _rel(float(np.linalg.norm(lhs - rhs)), float(np.linalg.norm(rhs)))

                metrics = {"reconstruction_lp": recon, "funcalc_identity": fun}
                tol_used = {
                    "reconstruction_lp": cfg.tolerance("banach.reconstruction"),
                    "funcalc_identity": cfg.tolerance("banach.funcalc"),
                }
                ok = all(metrics[k] <= tol_used[k] for k in tol_used)
                return CaseResult(
                    case_id=f"banach-spectral/p{_p}/n{_dim}/t{idx}",
                    inputs_digest=digest(a),
                    metrics=metrics,
                    tolerances=tol_used,
                    passed=ok,
                )

            cases.extend(_map_ordered(run_one, list(enumerate(mats)), cfg.jobs))
    return cases


# --------------------------------------------------------------------------
# laplacian: adjoint demo on the discrete Dirichlet grid


def _suite_laplacian(cfg: SuiteConfig, tols: Tolerances) -> list[CaseResult]:
    cases: list[CaseResult] = []
    for n in cfg.laplacian_ns:
        rng = Rng(_stream(cfg, f"laplacian/{n}"))
        shift = np.zeros((n, n), dtype=np.complex128)
        shift[np.arange(n - 1), np.arange(1, n)] = 1.0  # upper shift
        operators = [
            ("identity", np.eye(n, dtype=np.complex128)),
            ("laplacian", dirichlet_laplacian(n)),
            ("shift", shift),
            ("random", rng.matrix(n, n)),
        ]
        for name, a in operators:
            probes = [rng.vector(n) for _ in range(4)]
            rep = dirichlet_laplacian_demo(n, r=3.0, a=a, probes=probes, tols=tols)
            metrics = {
                "contract": rep.contract_residual,
                "involution": rep.involution_residual,
                "accretive_min": rep.accretive_min,
                "natural_selfadjoint": rep.natural_selfadjoint_residual,
                "inverse_norm": rep.inverse_norm,
            }
            tol_used = {
                "contract": cfg.tolerance("laplacian.contract"),
                "involution": cfg.tolerance("laplacian.involution"),
                "natural_selfadjoint": cfg.tolerance("laplacian.natural"),
            }
            ok = all(metrics[k] <= tol_used[k] for k in tol_used)
            ok = ok and rep.accretive_min >= -cfg.tolerance("laplacian.accretive")
            ok = ok and rep.inverse_norm <= 1.0 + cfg.tolerance("laplacian.inverse")
            cases.append(
                CaseResult(
                    case_id=f"laplacian/n{n}/{name}",
                    inputs_digest=digest(a),
                    metrics=metrics,
                    tolerances=tol_used,
                    passed=ok,
                )
            )
    return cases


_SUITE_FNS = {
    "deformed": _suite_deformed,
    "funcalc": _suite_funcalc,
    "kuelbs": _suite_kuelbs,
    "adjoint": _suite_adjoint,
    "baire": _suite_baire,
    "banach-spectral": _suite_banach_spectral,
    "laplacian": _suite_laplacian,
}


def run_suite(
    name: str,
    cfg: SuiteConfig,
    *,
    tols: Tolerances | None = None,
    timestamp: str | None = None,
) -> Report:
    """Run one suite (or "all") and assemble its report."""
    tols = tols if tols is not None else Tolerances()
    if name == "all":
        cases: list[CaseResult] = []
        for suite in SUITE_NAMES:
            cases.extend(_SUITE_FNS[suite](cfg, tols))
    elif name in _SUITE_FNS:
        cases = _SUITE_FNS[name](cfg, tols)
    else:
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)} or 'all'")
    return Report(suite=name, seed=cfg.seed, config=cfg.to_obj(), cases=tuple(cases), timestamp=timestamp)
