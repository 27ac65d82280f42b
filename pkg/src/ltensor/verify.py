"""Seeded self-check suites run by ``ltensor verify``.

Each suite returns a list of :class:`Check` rows.  ``fault`` perturbs every
measured quantity so the suites can be shown to fail (negative control).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomp import householder_l_qr, l_svd
from .scalar import ts_inv, ts_mul, unity
from .tensor import (
    fro_norm,
    is_l_diagonal,
    is_orthogonal,
    l_product,
    to_slices,
)
from .tproduct import t_product_3, t_product_4
from .transforms import Kind, make_transform

__all__ = ["Check", "SUITES", "run_suites", "span_projector_gap", "format_table"]

FAULT = 1e-3
KINDS = ("dft", "dct", "dwt", "id")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    tol: float

    @property
    def passed(self):
        return bool(np.isfinite(self.value) and self.value <= self.tol)


def _transform(kind, rng, max_dim):
    if kind == "dwt":
        sizes = [n for n in (4, 8) if n <= max(max_dim, 4)]
        return make_transform(kind, rng.choice(sizes), rng.choice(sizes))
    return make_transform(kind, rng.integers(1, max_dim + 1), rng.integers(1, max_dim + 1))


def _rel(a, b):
    return fro_norm(np.asarray(a) - np.asarray(b)) / max(fro_norm(b), 1e-300)


def span_projector_gap(t, A, Q):
    """Largest per-slice gap between projectors onto the leading column spans of A and Q."""
    A_hat, Q_hat = to_slices(t, A), to_slices(t, Q)
    worst = 0.0
    for k in range(1, A.shape[1] + 1):
        a, q = A_hat[:, :, :k], Q_hat[:, :, :k]
        pa = a @ np.linalg.pinv(a)
        pq = q @ np.conj(np.swapaxes(q, -1, -2))
        worst = max(worst, float(np.max(np.linalg.norm(pa - pq, axis=(-2, -1)))))
    return worst


def suite_transforms(rng, max_dim, fault):
    out = []
    for kind in KINDS:
        err = 0.0
        for _ in range(10):
            t = _transform(kind, rng, max_dim)
            A = rng.standard_normal((2, 2) + t.shape)
            err = max(err, _rel(t.inverse(t.forward(A)) + fault, A))
        out.append(Check("transforms", f"{kind} round trip", err, 1e-12))
    return out


def suite_group(rng, max_dim, fault):
    out = []
    for kind in KINDS:
        t = _transform(kind, rng, max_dim)
        worst = 0.0
        for _ in range(20):
            a, b, c = (rng.standard_normal(t.shape) for _ in range(3))
            e = unity(t)
            ab_c = ts_mul(t, ts_mul(t, a, b), c)
            worst = max(
                worst,
                _rel(ab_c, ts_mul(t, a, ts_mul(t, b, c))),
                _rel(ts_mul(t, a, b), ts_mul(t, b, a)),
                _rel(ts_mul(t, a, e), a),
                _rel(ts_mul(t, a, ts_inv(t, a)), e),
            )
        out.append(Check("group", f"{kind} ring laws", worst + fault, 1e-10))
    return out


def suite_lsvd(rng, max_dim, fault):
    out = []
    for kind in KINDS:
        t = _transform(kind, rng, max_dim)
        n1, n2 = rng.integers(1, max_dim + 1, size=2)
        A = rng.standard_normal((n1, n2) + t.shape)
        f = l_svd(t, A)
        orth = 0.0 if is_orthogonal(t, f.U) and is_orthogonal(t, f.Vh) else np.inf
        diag = 0.0 if is_l_diagonal(f.S) else np.inf
        out.append(Check("lsvd", f"{kind} reconstruction", _rel(f.reconstruct(), A) + fault, 1e-10))
        out.append(Check("lsvd", f"{kind} orthogonal and diagonal", orth + diag + fault, 1e-10))
    return out


def suite_lqr(rng, max_dim, fault):
    out = []
    for kind in KINDS:
        t = _transform(kind, rng, max_dim)
        n2 = int(rng.integers(1, max_dim + 1))
        n1 = n2 + int(rng.integers(0, 3))
        A = rng.standard_normal((n1, n2) + t.shape)
        f = householder_l_qr(t, A)
        norm = fro_norm(A)
        lower = max((fro_norm(f.R[i, j]) for i in range(n1) for j in range(n2) if i > j), default=0.0)
        orth = 0.0 if is_orthogonal(t, f.Q) else np.inf
        out.append(Check("lqr", f"{kind} reconstruction", _rel(l_product(t, f.Q, f.R), A) + fault, 1e-10))
        out.append(Check("lqr", f"{kind} triangular", lower / norm + orth + fault, 1e-10))
        out.append(Check("lqr", f"{kind} span projectors", span_projector_gap(t, A, f.Q) + fault, 1e-8))
    return out


def suite_tproduct(rng, max_dim, fault):
    t3 = 0.0
    for _ in range(5):
        n1, m, n2, n3 = rng.integers(1, max_dim + 1, size=4)
        A = rng.standard_normal((n1, m, n3))
        B = rng.standard_normal((m, n2, n3))
        t = make_transform(Kind.DFT2, n3, 1)
        via_l = l_product(t, A[..., None], B[..., None])[..., 0]
        t3 = max(t3, _rel(via_l, t_product_3(A, B)))
    t4 = 0.0
    for _ in range(3):
        n1, m, n2, n3, n4 = rng.integers(1, min(max_dim, 4) + 1, size=5)
        A = rng.standard_normal((n1, m, n3, n4))
        B = rng.standard_normal((m, n2, n3, n4))
        t = make_transform(Kind.DFT2, n3, n4)
        t4 = max(t4, _rel(l_product(t, A, B), t_product_4(A, B)))
    return [
        Check("tproduct", "third-order vs dft L-product", t3 + fault, 1e-10),
        Check("tproduct", "fourth-order vs dft L-product", t4 + fault, 1e-9),
    ]


SUITES = {
    "transforms": suite_transforms,
    "group": suite_group,
    "lsvd": suite_lsvd,
    "lqr": suite_lqr,
    "tproduct": suite_tproduct,
}


def run_suites(names=None, seed=0, max_dim=6, fault=False):
    """Run the named suites (all by default) with one seeded generator each."""
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; expected some of {list(SUITES)}")
    if max_dim < 1:
        raise ValueError(f"max_dim must be >= 1, got {max_dim}")
    checks = []
    for name in names:
        # keyed by suite position so a filtered run reproduces the full run's rows
        rng = np.random.default_rng([seed, list(SUITES).index(name)])
        checks.extend(SUITES[name](rng, max_dim, FAULT if fault else 0.0))
    return checks


def format_table(checks):
    rows = [f"{'suite':<11} {'check':<34} {'value':>10} {'tol':>8}  result"]
    for c in checks:
        rows.append(
            f"{c.suite:<11} {c.name:<34} {c.value:>10.2e} {c.tol:>8.0e}  {'PASS' if c.passed else 'FAIL'}"
        )
    return "\n".join(rows)
