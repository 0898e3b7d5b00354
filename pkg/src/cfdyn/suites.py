"""Verification suites: each runner returns a ``CheckReport`` tree.

The same runners back ``cfdyn verify`` and the acceptance tests, so the
numbers printed by the tool are the numbers the tests assert on.
"""
from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np

from .arith import GaussianInt, RationalComplex, format_complex
from .cf import (DIAMOND, check_identity_residual, choice_diamond, convergence_report,
                 cross_determinants, diamond_descent, expand)
from .compare import EqualityOptions, Verdict
from .config import VerifyConfig
from .diamond import verify_partition_lemma
from .natext import trap_experiment, verify_bijectivity, verify_psi
from .report import CheckReport, combine, verdict_status

__all__ = ["SUITES", "run_suite", "seeded_points", "random_digit_sequences",
           "check_determinants", "check_remainder_identity", "check_convergence", "check_choice",
           "TRAP_PAIRS"]

TRAP_PAIRS = 1000


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1e3


def _verdict_report(name: str, v: Verdict, samples: int = 0, seed: int = 0) -> CheckReport:
    wit = []
    if v.witness is not None:
        wit.append({"point": str(v.witness), "in": v.witness_in, "stage": v.stage})
    return CheckReport(name, verdict_status(v), samples, seed, witnesses=wit,
                       details={"verdict": v.status, "counts": v.counts})


def _sampled_report(name: str, d: dict, seed: int) -> CheckReport:
    if d["failures"]:
        status = "fail"
    elif d["checked"] == 0:
        status = "inconclusive"
    else:
        status = "pass"
    details = {k: v for k, v in d.items() if k != "witnesses"}
    return CheckReport(name, status, d["sampled"], seed, witnesses=list(d["witnesses"]), details=details)


def _options(cfg: VerifyConfig) -> EqualityOptions:
    return EqualityOptions(grid=cfg.grid, random=cfg.samples, seed=cfg.seed)


# ---------------------------------------------------------------------------
# region suites


def suite_partition(cfg: VerifyConfig) -> CheckReport:
    t0 = time.perf_counter()
    rep = verify_partition_lemma(_options(cfg))
    parts = [_verdict_report(name, v, cfg.samples, cfg.seed) for name, v in rep.rows.items()]
    return combine("partition", parts, cfg.samples, cfg.seed, _ms(t0))


def suite_bijectivity(cfg: VerifyConfig) -> CheckReport:
    t0 = time.perf_counter()
    rep = verify_bijectivity(cfg.samples, cfg.seed, _options(cfg), eps=cfg.epsilon)
    parts = [_verdict_report(f"hatZ{k} = Z{k}", v, cfg.samples, cfg.seed) for k, v in rep.hatz.items()]
    overlaps = [_verdict_report(name, v) for name, v in rep.overlaps.items()]
    parts.append(combine("image pieces disjoint", overlaps))
    parts.append(_sampled_report("F(D) in D", rep.invariance, cfg.seed))
    parts.append(_sampled_report("unique branch preimage", rep.injectivity, cfg.seed + 1))
    return combine("bijectivity", parts, cfg.samples, cfg.seed, _ms(t0),
                   details={"equal_verdicts": sum(v.status == "Equal" for v in rep.hatz.values())})


def suite_psi(cfg: VerifyConfig) -> CheckReport:
    t0 = time.perf_counter()
    rep = verify_psi(cfg.samples, cfg.seed, _options(cfg))
    parts = [CheckReport("stabilization", "pass" if rep.stabilized_at == 4 else "fail",
                         details={"stabilized_at": rep.stabilized_at})]
    parts += [_verdict_report(f"Psi{k} = A{k}", v, cfg.samples, cfg.seed) for k, v in rep.closed_forms.items()]
    parts += [_verdict_report(f"Z{k} in A{k}", v, cfg.samples, cfg.seed) for k, v in rep.z_in_a.items()]
    parts += [_verdict_report(f"V{k} in Psi{k}", v, cfg.samples, cfg.seed) for k, v in rep.v_in_psi.items()]
    parts.append(CheckReport("piece shapes", "pass" if rep.shapes_ok else "fail",
                             details={"rule": "each piece is a unit disk or a half-plane"}))
    parts.append(_sampled_report("F(Psi) in Psi", rep.invariance, cfg.seed))
    return combine("psi", parts, cfg.samples, cfg.seed, _ms(t0),
                   details={"stabilized_at": rep.stabilized_at})


def suite_trapping(cfg: VerifyConfig, pairs: int | None = None) -> CheckReport:
    t0 = time.perf_counter()
    pairs = TRAP_PAIRS if pairs is None else pairs
    rep = trap_experiment(pairs, cfg.seed, eps=cfg.epsilon)
    wit = [{"pair": e["pair"], "step": e["step"], "z": format_complex(e["z"]), "w": format_complex(e["w"])}
           for e in rep.escapes]
    entered = CheckReport("enter V within 200 steps", "pass" if rep.entered == pairs else "fail",
                          pairs, cfg.seed, details={"entered": rep.entered, "max_entry": rep.max_entry})
    stayed = CheckReport("stay in Psi for 500 steps", "pass" if rep.stayed == pairs else "fail",
                         pairs, cfg.seed, witnesses=wit, details={"stayed": rep.stayed})
    return combine("trapping", [entered, stayed], pairs, cfg.seed, _ms(t0))


# ---------------------------------------------------------------------------
# identities of the expansion


def seeded_points(n: int, seed: int, half_width: float = 5.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    u = rng.uniform(-half_width, half_width, size=(n, 2))
    return u[:, 0] + 1j * u[:, 1]


def random_digit_sequences(n: int, length: int, seed: int, bound: int = 10) -> list[list[GaussianInt]]:
    """Digits drawn uniformly from the box of radius ``bound`` with 1-norm at least 2."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        seq = []
        while len(seq) < length:
            a, b = (int(v) for v in rng.integers(-bound, bound + 1, size=2))
            if abs(a) + abs(b) >= 2:
                seq.append(GaussianInt(a, b))
        out.append(seq)
    return out


def check_determinants(sequences: int = 1000, length: int = 30, seed: int = 0) -> CheckReport:
    """p_n q_{n-1} - p_{n-1} q_n is one and the same unit along every sequence."""
    t0 = time.perf_counter()
    values = set()
    witnesses = []
    for i, seq in enumerate(random_digit_sequences(sequences, length, seed)):
        dets = cross_determinants(seq)
        vs = set(dets)
        if len(vs) != 1 and len(witnesses) < 5:
            witnesses.append({"sequence": i, "values": sorted(format_complex(v) for v in vs)})
        values |= vs
    units = {GaussianInt(1, 0), GaussianInt(-1, 0), GaussianInt(0, 1), GaussianInt(0, -1)}
    ok = len(values) == 1 and values <= units
    constant = format_complex(next(iter(values))) if len(values) == 1 else None
    return CheckReport("determinant constancy", "pass" if ok else "fail", sequences, seed, _ms(t0),
                       witnesses, details={"constant": constant, "claimed": "1+0i",
                                           "matches_claim": constant == "1+0i", "length": length})


def check_remainder_identity(points: int = 200, seed: int = 0, n_max: int = 15, tol: float = 1e-9) -> CheckReport:
    """max over points and n <= n_max of |p_n - q_n z - 1/(z_1...z_{n+1})|."""
    t0 = time.perf_counter()
    worst, worst_float, witnesses = 0.0, 0.0, []
    for z in seeded_points(points, seed):
        z = complex(z)
        exp = expand(z, DIAMOND, n_max + 2)
        for n in range(min(n_max + 1, len(exp.digits))):
            r = check_identity_residual(z, exp, n)
            worst = max(worst, r)
            # reported only: the stored binary64 remainders drift from the exact ones
            worst_float = max(worst_float, check_identity_residual(z, exp, n, exact_remainders_=False))
            if r >= tol and len(witnesses) < 5:
                witnesses.append({"z": format_complex(z), "n": n, "residual": r})
    return CheckReport("remainder identity", "fail" if witnesses else "pass", points, seed, _ms(t0),
                       witnesses, details={"max_residual": worst, "max_residual_float_remainders": worst_float,
                                "tolerance": tol, "n_max": n_max})


def check_convergence(points: int = 200, seed: int = 0, steps: int = 60,
                      err_tol: float = 1e-8, q_min: float = 1e6, quota: float = 0.99) -> CheckReport:
    t0 = time.perf_counter()
    reached, nonzero, worst = 0, 0, 0
    witnesses = []
    for z in seeded_points(points, seed):
        rep = convergence_report(complex(z), DIAMOND, steps)
        n = rep.first_index(err_tol, q_min)
        if n is not None:
            reached += 1
            worst = max(worst, n)
        elif len(witnesses) < 5:
            witnesses.append({"z": format_complex(complex(z)), "reason": "not reached"})
        nonzero += rep.q_nonzero
    ok = reached >= quota * points and nonzero == points
    return CheckReport("convergence", "pass" if ok else "fail", points, seed, _ms(t0), witnesses,
                       details={"reached": reached, "q_nonzero": nonzero, "max_index": worst,
                                "steps": steps})


def check_choice(points: int = 100_000, unit_points: int = 1000, seed: int = 0,
                 half_width: int = 10, bits: int = 16) -> CheckReport:
    """z - c(z) lies in the diamond, the descent budget holds, and |z - c(z)| < 1 on the unit circle."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    D = 2 ** bits
    P = rng.integers(-half_width * D, half_width * D + 1, size=points)
    Q = rng.integers(-half_width * D, half_width * D + 1, size=points)
    fails_phi, fails_budget = [], []
    for p, q in zip(P.tolist(), Q.tolist()):
        z = RationalComplex(Fraction(p, D), Fraction(q, D))
        a, steps = diamond_descent(z)
        d = z - a
        if abs(d.re) + abs(d.im) > 1:
            fails_phi.append(str(z))
        if steps > math.ceil(abs(z.re)) + math.ceil(abs(z.im)):
            fails_budget.append(str(z))
    theta = rng.uniform(0, 2 * math.pi, size=unit_points * 2)
    off_vertex = np.abs(((theta + math.pi / 4) % (math.pi / 2)) - math.pi / 4) > 1e-6
    theta = theta[off_vertex][:unit_points]
    fails_unit = []
    for t in theta:
        z = complex(math.cos(t), math.sin(t))
        if abs(z - complex(choice_diamond(z))) >= 1:
            fails_unit.append(format_complex(z))
    parts = [
        CheckReport("z - c(z) in diamond", "fail" if fails_phi else "pass", points, seed,
                    witnesses=fails_phi[:5], details={"failures": len(fails_phi), "exact": True}),
        CheckReport("descent step budget", "fail" if fails_budget else "pass", points, seed,
                    witnesses=fails_budget[:5], details={"failures": len(fails_budget)}),
        CheckReport("unit circle gap below 1", "fail" if fails_unit else "pass", len(theta), seed,
                    witnesses=fails_unit[:5], details={"failures": len(fails_unit)}),
    ]
    return combine("diamond choice", parts, points, seed, _ms(t0))


def suite_identities(cfg: VerifyConfig) -> CheckReport:
    t0 = time.perf_counter()
    parts = [check_determinants(1000, 30, cfg.seed), check_remainder_identity(200, cfg.seed),
             check_convergence(200, cfg.seed), check_choice(10 * cfg.samples, 1000, cfg.seed)]
    return combine("identities", parts, cfg.samples, cfg.seed, _ms(t0))


SUITES = {
    "partition": suite_partition,
    "bijectivity": suite_bijectivity,
    "trapping": suite_trapping,
    "psi": suite_psi,
    "identities": suite_identities,
}


def run_suite(name: str, cfg: VerifyConfig, **kw) -> CheckReport:
    return SUITES[name](cfg, **kw)
