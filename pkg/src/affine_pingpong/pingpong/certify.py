"""End-to-end certification of a free, locally commutative pair inside S^N."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Sequence

from ..arith import (
    AffineElement,
    Mat2,
    NormInterval,
    WordPath,
    ball_layers,
    conjugation_reduce,
    eigenvectors_arith,
    rational_str,
    sqrt_bounds,
    wedge,
)
from ..arith.balls import DEFAULT_BALL_CAP
from ..errors import BudgetExceeded, PingPongError
from .search import exponents, find_general_position, find_hyperbolic, separation_select
from .table import (
    DiagonalFrame,
    Inequality,
    LinearFrame,
    TableParams,
    all_checks,
    linear_checks,
    minimal_power,
    power_checks,
    schedule_params,
    static_checks,
)

DATA_ETA_CAP = Fraction(1, 3000)


class CertificationError(PingPongError):
    """A check that holds by construction failed; indicates a bug or a degenerate input."""

    exit_code = 6


@dataclass(frozen=True)
class CertifyConfig:
    power_budget: int = 12
    ball_cap: int = DEFAULT_BALL_CAP
    eta_mode: str = "data"
    n4: int | None = None
    conj_budget: int = 256
    beam_width: int = 4
    slack: Fraction = Fraction(1)
    max_ell: int = 10**6

    def __post_init__(self):
        if self.eta_mode not in ("data", "norm"):
            raise ValueError("eta_mode must be 'data' or 'norm'")
        if self.power_budget < 1 or self.ball_cap < 1 or self.conj_budget < 1:
            raise ValueError("budgets must be positive")

    def to_json(self) -> dict:
        return {
            "power_budget": self.power_budget,
            "ball_cap": self.ball_cap,
            "eta_mode": self.eta_mode,
            "n4": self.n4,
            "conj_budget": self.conj_budget,
            "beam_width": self.beam_width,
            "slack": rational_str(self.slack),
            "max_ell": self.max_ell,
        }


def inverse_index(S: Sequence[AffineElement]) -> list[int]:
    lookup = {s.key(): i for i, s in enumerate(S)}
    out = []
    for s in S:
        j = lookup.get(s.inverse().key())
        if j is None:
            raise ValueError("generating set must be symmetric")
        out.append(j)
    return out


def invert_set_word(word: Sequence[int], inv: Sequence[int]) -> tuple[int, ...]:
    return tuple(inv[i] for i in reversed(word))


@dataclass
class FreePairCertificate:
    input_elements: list
    config: dict
    conjugator: Mat2
    reduced_norm: NormInterval
    a0_word: WordPath
    h0_word: WordPath
    exponents: dict
    case: int
    geometry: dict
    a: AffineElement
    h: AffineElement
    a_word: tuple
    h_word: tuple
    ell: int
    ell_bound: int
    within_bound: bool
    eta: Fraction
    eta_mode: str
    params: TableParams
    norm_h: NormInterval
    pythagorean: tuple
    frame: dict
    inequalities: list
    a_final: AffineElement
    b_final: AffineElement
    word_length: int
    kind: str = "affine"

    @property
    def b(self) -> AffineElement:
        return self.h * self.a * self.h.inverse()

    @property
    def reduced_set(self) -> list[AffineElement]:
        return [s.conjugate_by(self.conjugator) for s in self.input_elements]

    def failed(self) -> list[Inequality]:
        return [q for q in self.inequalities if not q.passed]


@dataclass
class LinearPairCertificate:
    input_elements: list
    config: dict
    conjugator: Mat2
    reduced_norm: NormInterval
    a_word: WordPath
    h_word: WordPath
    exponents: dict
    a: Mat2
    h: Mat2
    ell: int
    ell_bound: int
    within_bound: bool
    norm_h: NormInterval
    frame: dict
    inequalities: list
    a_final: AffineElement
    b_final: AffineElement
    word_length: int
    kind: str = "linear"

    def failed(self) -> list[Inequality]:
        return [q for q in self.inequalities if not q.passed]


def choose_eta(mode: str, frame: DiagonalFrame, reduced_norm: NormInterval, exps: dict) -> Fraction:
    """Separation parameter for the schedule.

    ``data``: one third of a rational lower bound of the smallest distance in
    the frame, capped at 1/3000 and rounded down to 12 decimals.
    ``norm``: ``U^-(2 N3 + N1)`` with ``U`` the norm bound rounded up to
    three decimals.
    """
    if mode == "norm":
        U = Fraction(ceil(reduced_norm.upper * 1000), 1000)
        return 1 / U ** (2 * exps["N3"] + exps["N1"])
    d2_lo = frame.min_dist_sq().enclose(96)[0]
    if d2_lo <= 0:
        raise CertificationError("smallest separation in the frame is not positive")
    d_lo = sqrt_bounds(d2_lo, 96)[0]
    eta = min(DATA_ETA_CAP, d_lo / 3)
    scale = 10**12
    rounded = Fraction(int(eta * scale), scale)
    return rounded if rounded > 0 else eta


def _certify_frame(params, frame, eta, max_ell) -> tuple[int, list[Inequality]]:
    static = static_checks(params, frame, eta)
    bad = [q.name for q in static if not q.passed]
    if bad:
        raise CertificationError("checks independent of the power failed: " + ", ".join(bad))

    def passes(ell: int) -> bool:
        return all(q.passed for q in power_checks(params, frame, eta, ell))

    try:
        ell = minimal_power(passes, 1, max_ell)
    except ValueError as exc:
        raise BudgetExceeded(str(exc)) from None
    return ell, all_checks(params, frame, eta, ell)


def certify_pair(S: Sequence[AffineElement], config: CertifyConfig = CertifyConfig()) -> FreePairCertificate:
    """Run the full search and emit a certificate for ``(a^ell, h a^ell h^-1)``."""
    S = list(S)
    inv = inverse_index(S)
    gamma, reduced_norm = conjugation_reduce(S, config.conj_budget, beam_width=config.beam_width)
    S_red = [s.conjugate_by(gamma) for s in S]
    a0, n1, a0_word = find_hyperbolic(S_red, config.power_budget, config.ball_cap)
    h0, n2, h0_word = find_general_position(S_red, a0, config.power_budget, config.ball_cap)
    exps = exponents(n1, n2, config.n4)
    report, case, (a, h, _b) = separation_select(
        a0, h0, S_red, exps["N4"], n5=exps["N5"], norm_theta_s=reduced_norm
    )
    wa, wh = a0_word.letters, h0_word.letters
    wb = wh + wa + invert_set_word(wh, inv)
    if case == 1:
        a_word, h_word = wa, wh
    elif case == 2:
        a_word, h_word = wa, wb * exps["N4"]
    else:
        a_word, h_word = wb, wa * exps["N4"]

    frame = DiagonalFrame(a, h)
    eta = choose_eta(config.eta_mode, frame, reduced_norm, exps)
    params = schedule_params(eta, frame.norm_h)
    ell, checks = _certify_frame(params, frame, eta, config.max_ell)

    ell_bound = 20 * (exps["N1"] + exps["N2"] + exps["N3"])
    a_pow = a**ell
    gamma_inv = gamma.adjugate()
    a_final = a_pow.conjugate_by(gamma_inv)
    b_final = (h * a_pow * h.inverse()).conjugate_by(gamma_inv)
    word_length = max(ell * len(a_word), ell * len(a_word) + 2 * len(h_word))
    return FreePairCertificate(
        input_elements=S,
        config=config.to_json(),
        conjugator=gamma,
        reduced_norm=reduced_norm,
        a0_word=a0_word,
        h0_word=h0_word,
        exponents=exps,
        case=case,
        geometry=report.to_json(),
        a=a,
        h=h,
        a_word=tuple(a_word),
        h_word=tuple(h_word),
        ell=ell,
        ell_bound=ell_bound,
        within_bound=ell <= ell_bound * config.slack,
        eta=eta,
        eta_mode=config.eta_mode,
        params=params,
        norm_h=frame.norm_h,
        pythagorean=(frame.alpha, frame.beta),
        frame=frame.summary(),
        inequalities=checks,
        a_final=a_final,
        b_final=b_final,
        word_length=word_length,
    )


def find_linear_general_position(
    S: Sequence[AffineElement], a0: AffineElement, max_power: int, ball_cap: int
) -> tuple[AffineElement, int, WordPath]:
    u, v = eigenvectors_arith(a0.linear)
    explored = 0
    for k, layer in enumerate(ball_layers(S, max_power, linear_only=True, cap=ball_cap), start=1):
        explored = k
        for w in sorted(layer, key=lambda w: w.evaluated.order_key()):
            hl = w.evaluated.linear
            if all(wedge(hl.apply(x), y) != 0 for x in (u, v) for y in (u, v)):
                return w.evaluated, k, w
        if not layer:
            break
    raise BudgetExceeded(f"no element in general position within S^{explored}", explored=explored)


def certify_linear_pair(S_lin: Sequence[Mat2], config: CertifyConfig = CertifyConfig()) -> LinearPairCertificate:
    """Projective ping-pong certificate for ``(a^ell, h a^ell h^-1)`` in SL(2, Z)."""
    S = [AffineElement(m) for m in S_lin]
    gamma, reduced_norm = conjugation_reduce(S, config.conj_budget, beam_width=config.beam_width)
    S_red = [s.conjugate_by(gamma) for s in S]
    a0, n1, a_word = find_hyperbolic(S_red, config.power_budget, config.ball_cap)
    h0, n2, h_word = find_linear_general_position(S_red, a0, config.power_budget, config.ball_cap)
    exps = exponents(n1, n2)
    frame = LinearFrame(a0.linear, h0.linear)

    def passes(ell: int) -> bool:
        return all(q.passed for q in linear_checks(frame, ell))

    try:
        ell = minimal_power(passes, 1, config.max_ell)
    except ValueError as exc:
        raise BudgetExceeded(str(exc)) from None
    bound = 2 * exps["N2"] + 4 * exps["N3"]
    gamma_inv = gamma.adjugate()
    a_pow = a0**ell
    return LinearPairCertificate(
        input_elements=S,
        config=config.to_json(),
        conjugator=gamma,
        reduced_norm=reduced_norm,
        a_word=a_word,
        h_word=h_word,
        exponents=exps,
        a=a0.linear,
        h=h0.linear,
        ell=ell,
        ell_bound=bound,
        within_bound=ell <= bound + 1,
        norm_h=frame.norm_h,
        frame=frame.summary(),
        inequalities=linear_checks(frame, ell),
        a_final=a_pow.conjugate_by(gamma_inv),
        b_final=(h0 * a_pow * h0.inverse()).conjugate_by(gamma_inv),
        word_length=ell * len(a_word) + 2 * len(h_word),
    )
