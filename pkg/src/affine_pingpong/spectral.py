"""Averaging operators of a generating set on finite quotients and their norms.

The plane model is the action of ``SA(2, Z/nZ)`` on ``(Z/nZ)^2``; the Cayley
model is the left-regular action of ``SA(2, F_p)`` on itself.  Norms are
taken on the mean-zero subspace.  Floating point is used here: every
estimate carries a residual bound and small state spaces are cross-checked
with a dense symmetric eigensolver.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .arith import AffineElement, rational_str
from .errors import BudgetExceeded

DENSE_LIMIT = 4000
CAYLEY_MAX_PRIME = 7
CLOSURE_CAP = 20000
AGREEMENT_TOL = 1e-9


@dataclass(frozen=True)
class QuotientElement:
    """``x -> A x + t`` over ``Z/nZ``, entries kept in ``[0, n)``."""

    a11: int
    a12: int
    a21: int
    a22: int
    t1: int
    t2: int
    n: int

    @classmethod
    def reduce(cls, g: AffineElement, n: int) -> "QuotientElement":
        if n < 2:
            raise ValueError("modulus must be at least 2")
        return cls(*(x % n for x in g.key()), n)

    @classmethod
    def identity(cls, n: int) -> "QuotientElement":
        return cls(1, 0, 0, 1, 0, 0, n)

    def __mul__(self, o: "QuotientElement") -> "QuotientElement":
        if o.n != self.n:
            raise ValueError("moduli differ")
        n = self.n
        return QuotientElement(
            (self.a11 * o.a11 + self.a12 * o.a21) % n,
            (self.a11 * o.a12 + self.a12 * o.a22) % n,
            (self.a21 * o.a11 + self.a22 * o.a21) % n,
            (self.a21 * o.a12 + self.a22 * o.a22) % n,
            (self.a11 * o.t1 + self.a12 * o.t2 + self.t1) % n,
            (self.a21 * o.t1 + self.a22 * o.t2 + self.t2) % n,
            n,
        )

    def inverse(self) -> "QuotientElement":
        n = self.n
        b11, b12, b21, b22 = self.a22, -self.a12, -self.a21, self.a11
        return QuotientElement(
            b11 % n, b12 % n, b21 % n, b22 % n, -(b11 * self.t1 + b12 * self.t2) % n, -(b21 * self.t1 + b22 * self.t2) % n, n
        )

    def apply(self, x: int, y: int) -> tuple[int, int]:
        n = self.n
        return (self.a11 * x + self.a12 * y + self.t1) % n, (self.a21 * x + self.a22 * y + self.t2) % n

    def det(self) -> int:
        return (self.a11 * self.a22 - self.a12 * self.a21) % self.n

    def is_identity(self) -> bool:
        return self == QuotientElement.identity(self.n)


def reduce_mod(S: Iterable[AffineElement], n: int) -> dict[QuotientElement, int]:
    """Reductions with multiplicities, in first-seen order."""
    out: dict[QuotientElement, int] = {}
    for g in S:
        q = QuotientElement.reduce(g, n)
        out[q] = out.get(q, 0) + 1
    return out


def sa2_order(p: int) -> int:
    return p**2 * p * (p * p - 1)


@dataclass
class ClosureResult:
    p: int
    order: int
    full_order: int

    @property
    def surjective(self) -> bool:
        return self.order == self.full_order

    def to_json(self) -> dict:
        verdict = "surjective" if self.surjective else f"proper-subgroup({self.order})"
        return {"p": self.p, "order": self.order, "full_order": self.full_order, "result": verdict}


def closure_check(S: Iterable[AffineElement], p: int, cap: int = CLOSURE_CAP) -> ClosureResult:
    """Order of the subgroup generated by ``S mod p``, by breadth-first closure."""
    gens = list(reduce_mod(S, p))
    start = QuotientElement.identity(p)
    seen = {start}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = s * g
            if h not in seen:
                seen.add(h)
                if len(seen) > cap:
                    raise BudgetExceeded(f"closure mod {p} exceeds {cap} elements")
                queue.append(h)
    return ClosureResult(p, len(seen), sa2_order(p))


def group_elements(p: int) -> list[QuotientElement]:
    """All of ``SA(2, F_p)`` in a fixed order."""
    if p > CAYLEY_MAX_PRIME:
        raise BudgetExceeded(f"Cayley model is limited to p <= {CAYLEY_MAX_PRIME}")
    out = []
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p == 1:
                        for t1 in range(p):
                            for t2 in range(p):
                                out.append(QuotientElement(a, b, c, d, t1, t2, p))
    return out


@dataclass
class SchreierOperator:
    """``P = C / weight``: ``C[x, y]`` counts generators (with multiplicity) taking ``x`` to ``y``."""

    counts: sp.csr_matrix
    weight: int
    modulus: int
    mode: str
    description: str = ""
    mean_zero: bool = True

    @property
    def states(self) -> int:
        return self.counts.shape[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        w = (self.counts @ v) / self.weight
        if self.mean_zero:
            w -= w.mean()
        return w

    def is_symmetric(self) -> bool:
        return (self.counts != self.counts.T).nnz == 0

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=1)).ravel()

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.counts[i, j]), self.weight)

    def components(self) -> int:
        return connected_components(self.counts, directed=False)[0]

    def dense(self) -> np.ndarray:
        P = self.counts.toarray() / self.weight
        if self.mean_zero:
            P = P - 1.0 / self.states
        return P


def schreier_operator(S: Sequence[AffineElement], n: int, mode: str = "plane") -> SchreierOperator:
    """Averaging operator of the uniform measure on the multiset ``S`` reduced mod ``n``."""
    red = reduce_mod(S, n)
    weight = sum(red.values())
    rows, cols, vals = [], [], []
    if mode == "plane":
        size = n * n
        for s, m in red.items():
            for x in range(n):
                for y in range(n):
                    u, v = s.apply(x, y)
                    rows.append(x * n + y)
                    cols.append(u * n + v)
                    vals.append(m)
    elif mode == "cayley":
        elems = group_elements(n)
        index = {g: i for i, g in enumerate(elems)}
        size = len(elems)
        for s, m in red.items():
            for i, g in enumerate(elems):
                rows.append(i)
                cols.append(index[s * g])
                vals.append(m)
    else:
        raise ValueError("mode must be 'plane' or 'cayley'")
    C = sp.csr_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=(size, size))
    C.sum_duplicates()
    desc = f"|S|={weight}, {len(red)} distinct mod {n}"
    return SchreierOperator(C, weight, n, mode, desc)


@dataclass
class GapEstimate:
    modulus: int
    mode: str
    set_size: int
    states: int
    norm_estimate: float
    residual: float
    certified_upper: float
    iterations: int
    converged: bool
    components: int
    dense_norm: float | None = None
    description: str = ""

    @property
    def kazhdan_lower(self) -> float:
        return max(0.0, 1.0 - self.certified_upper)

    @property
    def kappa_hat(self) -> float:
        return 1.0 - self.norm_estimate

    @property
    def dense_agrees(self) -> bool | None:
        if self.dense_norm is None:
            return None
        return abs(self.dense_norm - self.norm_estimate) <= AGREEMENT_TOL

    def sandwich_ok(self) -> bool:
        k = self.kappa_hat
        return -1e-12 <= k <= 1 + 1e-12 and k >= k * k / (16 * self.set_size) - 1e-15

    def to_json(self) -> dict:
        return {
            "n": self.modulus,
            "mode": self.mode,
            "set_size": self.set_size,
            "states": self.states,
            "norm": self.norm_estimate,
            "certified_upper": self.certified_upper,
            "kazhdan_lower": self.kazhdan_lower,
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "components": self.components,
            "dense_norm": self.dense_norm,
            "dense_agrees": self.dense_agrees,
            "sandwich_ok": self.sandwich_ok(),
            "description": self.description,
        }

    ROW_FIELDS = ("n", "set_size", "norm", "certified_upper", "kazhdan_lower", "iterations", "residual")

    def row(self) -> list[str]:
        j = self.to_json()
        return [str(j["n"]), str(j["set_size"])] + [f"{j[k]:.15f}" for k in ("norm", "certified_upper", "kazhdan_lower")] + [
            str(j["iterations"]),
            f"{j['residual']:.3e}",
        ]


def lanczos_extreme(op: SchreierOperator, tol: float = 1e-12, max_iter: int = 300, seed: int = 0):
    """Largest ``|theta|`` among Ritz values, with the Ritz residual.

    Full reorthogonalization; the constant vector is deflated inside every
    product.  Returns ``(theta_abs, residual, iterations, converged)``.
    """
    N = op.states
    dim = N - 1 if op.mean_zero else N
    if dim <= 0:
        return 0.0, 0.0, 0, True
    rng = np.random.default_rng(seed)
    v = np.ones(N) + 0.5 * rng.standard_normal(N)
    if op.mean_zero:
        v -= v.mean()
    v /= np.linalg.norm(v)
    Q = [v]
    alphas: list[float] = []
    betas: list[float] = []
    theta = resid = 0.0
    k = 0
    for k in range(1, min(max_iter, dim) + 1):
        w = op.matvec(Q[-1])
        alpha = float(Q[-1] @ w)
        alphas.append(alpha)
        basis = np.array(Q)
        w -= basis.T @ (basis @ w)
        w -= basis.T @ (basis @ w)
        beta = float(np.linalg.norm(w))
        T = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        vals, vecs = np.linalg.eigh(T)
        i = int(np.argmax(np.abs(vals)))
        theta = abs(float(vals[i]))
        resid = abs(beta * float(vecs[-1, i]))
        if resid <= tol or beta <= tol:
            return theta, resid, k, True
        betas.append(beta)
        Q.append(w / beta)
    return theta, resid, k, k >= dim


def dense_norm(op: SchreierOperator) -> float:
    vals = np.linalg.eigvalsh(op.dense())
    if op.mean_zero and op.states == 1:
        return 0.0
    return float(np.max(np.abs(vals)))


def operator_norm_est(
    op: SchreierOperator, tol: float = 1e-12, max_iter: int = 300, seed: int = 0, dense_check: bool = True
) -> GapEstimate:
    """Norm of ``P`` on the mean-zero subspace.

    ``certified_upper = min(1, theta + residual)``: some eigenvalue lies
    within the residual of the Ritz value.  When the state space is at most
    :data:`DENSE_LIMIT` a dense eigensolver runs as a cross-check.
    """
    theta, resid, iters, converged = lanczos_extreme(op, tol, max_iter, seed)
    dn = dense_norm(op) if dense_check and op.states <= DENSE_LIMIT else None
    return GapEstimate(
        modulus=op.modulus,
        mode=op.mode,
        set_size=op.weight,
        states=op.states,
        norm_estimate=min(theta, 1.0),
        residual=resid,
        certified_upper=min(1.0, theta + resid),
        iterations=iters,
        converged=converged,
        components=op.components(),
        dense_norm=dn,
        description=op.description,
    )


def gap_table(S: Sequence[AffineElement], moduli: Iterable[int], mode: str = "plane", **kw) -> list[GapEstimate]:
    return [operator_norm_est(schreier_operator(S, n, mode), **kw) for n in moduli]


def format_gap_table(rows: Sequence[GapEstimate], sep: str = "\t") -> str:
    lines = [sep.join(GapEstimate.ROW_FIELDS)]
    lines += [sep.join(r.row()) for r in rows]
    return "\n".join(lines) + "\n"


def _best_norm(est: GapEstimate) -> float:
    return est.dense_norm if est.dense_norm is not None else est.norm_estimate


def herz_compare(S: Sequence[AffineElement], p: int, tol: float = AGREEMENT_TOL) -> dict:
    """Plane-action norm against the regular-representation norm of ``SA(2, F_p)``."""
    plane = operator_norm_est(schreier_operator(S, p, "plane"))
    cayley = operator_norm_est(schreier_operator(S, p, "cayley"))
    pn, cn = _best_norm(plane), _best_norm(cayley)
    return {
        "p": p,
        "plane_norm": pn,
        "cayley_norm": cn,
        "slack": cn - pn,
        "holds": pn <= cn + tol,
        "plane": plane.to_json(),
        "cayley": cayley.to_json(),
    }


def margulis_set() -> list[AffineElement]:
    """Unit translations and the two standard unipotents, with inverses and the identity."""
    gens = [
        AffineElement.translation_by(1, 0),
        AffineElement.translation_by(0, 1),
        AffineElement.of(1, 2, 0, 1),
        AffineElement.of(1, 0, 2, 1),
    ]
    out = [AffineElement.identity()]
    for g in gens:
        out += [g, g.inverse()]
    return out


def implied_kazhdan(word_length: int) -> Fraction:
    """``(1/4) / (2 N)``: displacement constant halved, then spread over ``N`` letters."""
    if word_length < 1:
        raise ValueError("word length must be positive")
    return Fraction(1, 4) / (2 * word_length)


def l2_kazhdan_from_action(cert, n: int = 5) -> dict:
    """Implied Kazhdan bound for ``S`` from the certified pair, against a measured gap."""
    N = cert.word_length
    implied = implied_kazhdan(N)
    est = operator_norm_est(schreier_operator(cert.input_elements, n, "plane"))
    measured = 1.0 - _best_norm(est)
    return {
        "nonamenability_constant": "1/4",
        "word_length": N,
        "implied_kazhdan": rational_str(implied),
        "implied_kazhdan_approx": float(implied),
        "n": n,
        "measured_kappa": measured,
        "measured_kazhdan_lower": est.kazhdan_lower,
        "consistent": measured >= float(implied),
        "estimate": est.to_json(),
    }
