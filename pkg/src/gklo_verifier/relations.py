"""Relation checks: every defining relation and supporting lemma as an exact residual.

A check builds a residual DiffOperator and passes exactly when it is zero.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .difference import DiffOperator, anticommutator, commutator
from .errors import (
    CoefficientNotPolynomial,
    NonLinearPole,
    NotAPole,
    RepeatedPole,
    SubstitutionDegenerate,
    WrongCartanCase,
)
from .gklo import HALF, FamilySpec, GkloFamily
from .monopole import (
    MinusculeDatum,
    closed_form,
    dressing_residual,
    euler_oracle,
    power_dressing,
    theorem_image,
)
from .quiver import parity_sign
from .series import residue_at, truncate
from .symbolic import U, V, LinearForm, RationalFunction, Scalar, Variable, rf_equal, substitute

logger = logging.getLogger(__name__)

ISERRE_ASSUMPTION = (
    "iSerre for general modes (k1, k2, r) reduces to the case k1 = k2 = r = 0; "
    "only that case is verified here."
)

DOMAIN_FAILURES = (
    RepeatedPole,
    NonLinearPole,
    NotAPole,
    SubstitutionDegenerate,
    CoefficientNotPolynomial,
    ZeroDivisionError,
)


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class Suite(str, Enum):
    HH = "hh"
    HB = "hb"
    BB = "bb"
    SERRE0 = "serre0"
    SERRE1 = "serre1"
    ISERRE = "iserre"
    LEMMAS = "lemmas"
    MODES = "modes"
    MONOPOLE = "monopole"
    ALL = "all"

    @classmethod
    def expand(cls, suites: Iterable[Suite | str]) -> tuple[Suite, ...]:
        """Resolve names and 'all' into concrete suites in canonical order."""
        chosen = {cls(s) for s in suites}
        if cls.ALL in chosen:
            chosen = set(cls)
        return tuple(s for s in cls if s is not cls.ALL and s in chosen)


@dataclass(frozen=True)
class CheckTask:
    name: str
    indices: tuple[int, ...]

    @property
    def label(self) -> str:
        return f"{self.name}({','.join(map(str, self.indices))})"


@dataclass(frozen=True)
class RelationCheck:
    name: str
    indices: tuple[int, ...]
    status: CheckStatus
    reason: str | None = None
    detail: str | None = None
    residual_terms: tuple[str, ...] = ()
    elapsed: float = field(default=0.0, compare=False)
    # only kept for inline runs; worker results carry the text alone
    residual: DiffOperator | None = field(default=None, compare=False, repr=False)

    @property
    def label(self) -> str:
        return CheckTask(self.name, self.indices).label

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS


@dataclass(frozen=True)
class VerificationReport:
    spec: FamilySpec
    suites: tuple[Suite, ...]
    checks: tuple[RelationCheck, ...]
    cited_assumptions: tuple[str, ...] = ()

    def summary(self) -> dict[str, int]:
        counts = {"total": len(self.checks)}
        for status in CheckStatus:
            counts[status.value] = sum(1 for check in self.checks if check.status is status)
        return counts

    @property
    def ok(self) -> bool:
        return all(check.status is not CheckStatus.FAIL for check in self.checks)

    def timings(self) -> dict[str, float]:
        return {check.label: check.elapsed for check in self.checks}


Outcome = DiffOperator | tuple[DiffOperator, str]
ResidualFn = Callable[..., Outcome]

RELATIONS: dict[str, ResidualFn] = {}


def relation(name: str) -> Callable[[ResidualFn], ResidualFn]:
    def register(fn: ResidualFn) -> ResidualFn:
        RELATIONS[name] = fn
        return fn

    return register


def _scalar(family: GkloFamily, f: RationalFunction | Scalar) -> DiffOperator:
    return DiffOperator.scalar(family.torus, f)


def _require_c_minus_one(family: GkloFamily, i: int) -> None:
    ti = family.tau(i)
    if family.c(i, ti) != -1:
        raise WrongCartanCase(f"needs c_({i},{ti}) = -1, got {family.c(i, ti)}")


def _first_nonzero(cases: Iterable[tuple[str, DiffOperator]], torus) -> Outcome:
    for where, residual in cases:
        if not residual.is_zero():
            return residual, where
    return DiffOperator.zero(torus)


# generating-function relations


@relation("hh")
def hh_residual(family: GkloFamily, i: int, j: int) -> DiffOperator:
    residual = commutator(_scalar(family, family.build_H(i)), _scalar(family, family.H(j, family.v)))
    if j == family.tau(i):
        reflected = family.build_H(i).substitute({U: -family.u})
        residual = residual + _scalar(family, family.build_H(j) - reflected)
    return residual


@relation("hb")
def hb_residual(family: GkloFamily, i: int, j: int) -> DiffOperator:
    u, v, hbar = family.u, family.v, family.hbar
    c = family.c(i, j)
    c_mirror = family.c(family.tau(i), j)
    H = _scalar(family, family.build_H(i))
    B = family.B(j, v)
    B0 = family.B_coeff(j, 0)
    B1 = family.B_coeff(j, 1)
    prefactor = u * u - v * v - (hbar * hbar) * Fraction(c * c_mirror, 4)
    linear = hbar * (u * Fraction(c - c_mirror, 2) + v * Fraction(c + c_mirror, 2))
    return (
        prefactor * commutator(H, B)
        - linear * anticommutator(H, B)
        + commutator(H, B1)
        + v * commutator(H, B0)
        + (hbar * Fraction(c + c_mirror, 2)) * anticommutator(H, B0)
    )


@relation("bb")
def bb_residual(family: GkloFamily, i: int, j: int) -> DiffOperator:
    u, v, hbar = family.u, family.v, family.hbar
    Bi = family.build_B(i)
    Bj = family.B(j, v)
    residual = (
        (u - v) * commutator(Bi, Bj)
        - (hbar * Fraction(family.c(i, j), 2)) * anticommutator(Bi, Bj)
        - (commutator(family.B_coeff(i, 0), Bj) - commutator(Bi, family.B_coeff(j, 0)))
    )
    if j == family.tau(i):
        Hi = truncate(family.build_H(i), U)
        Hj = truncate(family.H(j, v), V)
        correction = (hbar * (u * 2 * Hi + v * 2 * Hj)) / (u + v)
        residual = residual + _scalar(family, correction)
    return residual


@relation("comm-serre")
def comm_serre_residual(family: GkloFamily, i: int, j: int) -> DiffOperator:
    if family.c(i, j) != 0:
        raise WrongCartanCase(f"commuting Serre needs c_({i},{j}) = 0, got {family.c(i, j)}")
    u, v = family.u, family.v
    residual = (u + v) * commutator(family.build_B(i), family.B(j, v))
    if j == family.tau(i):
        difference = truncate(family.H(j, v), V) - truncate(family.build_H(i), U)
        residual = residual - _scalar(family, family.hbar * difference)
    return residual


@relation("usual-serre")
def usual_serre_residual(family: GkloFamily, i: int, j: int) -> DiffOperator:
    ti = family.tau(i)
    if family.c(i, j) != -1 or j in (i, ti):
        raise WrongCartanCase(f"Serre needs c_({i},{j}) = -1 and {j} not in {{{i}, {ti}}}")
    first = family.B(i, family.torus.series("u1"))
    second = family.B(i, family.torus.series("u2"))
    Bj = family.B(j, family.v)
    return commutator(first, commutator(second, Bj)) + commutator(second, commutator(first, Bj))


@relation("iserre-zero")
def iserre_zero_residual(family: GkloFamily, i: int) -> DiffOperator:
    _require_c_minus_one(family, i)
    v, hbar = family.v, family.hbar
    B0 = family.B_coeff(i, 0)
    lhs = commutator(B0, commutator(B0, family.B(family.tau(i), v)))
    inner = commutator(family.B(i, 3 * v), _scalar(family, family.H(i, -v)))
    rhs = truncate(((v * hbar) * 4) * inner, V)
    return lhs - rhs


# lemmas


def _serre_word(p: DiffOperator, q: DiffOperator, t: DiffOperator) -> DiffOperator:
    return p * q * t - (p * t * q) * 2 + t * p * q


@relation("lemma.C-conjugation")
def c_conjugation_residual(family: GkloFamily, i: int, j: int, r: int, s: int) -> DiffOperator:
    y_ir = family.build_y(i, r)
    y_js = family.build_y(j, s)
    return y_js * y_ir - family.C_coeff(i, j, r, s) * (y_ir * y_js)


@relation("lemma.C-table")
def c_table_residual(family: GkloFamily, i: int, j: int, r: int, s: int) -> DiffOperator:
    return _scalar(family, family.C_coeff(i, j, r, s) - family.C_table(i, j, r, s))


@relation("lemma.D-conjugation")
def d_conjugation_residual(family: GkloFamily, i: int, j: int, s: int) -> DiffOperator:
    y_js = family.build_y(j, s)
    H = _scalar(family, family.build_H(i))
    return y_js * H - family.D_coeff(i, j, s) * (H * y_js)


@relation("lemma.D-table")
def d_table_residual(family: GkloFamily, i: int, j: int, s: int) -> DiffOperator:
    return _scalar(family, family.D_coeff(i, j, s) - family.D_table(i, j, s))


@relation("lemma.H-residue")
def h_residue_residual(family: GkloFamily, i: int, r: int, sign: int) -> DiffOperator:
    residue = residue_at(family.build_H(i), U, family.H_pole(i, r, sign))
    return _scalar(family, residue) - family.H_residue(i, r, sign)


@relation("lemma.H-truncation")
def h_truncation_residual(family: GkloFamily, i: int) -> DiffOperator:
    two_u_hbar_H = family.build_H(i) * ((family.u * family.hbar) * 2)
    return _scalar(family, truncate(two_u_hbar_H, U)) - family.two_uH_truncated(i)


@relation("lemma.H-truncation-c0")
def h_truncation_c0_residual(family: GkloFamily, i: int) -> DiffOperator:
    expected = family.H_truncated_c0(i)
    return _scalar(family, family.hbar * truncate(family.build_H(i), U)) - expected


@relation("lemma.H-special")
def h_special_residual(family: GkloFamily, i: int, r: int) -> DiffOperator:
    expected = family.H_special(i, r)
    at = -family.x(i, r) - family.hbar * Fraction(3, 2)
    return _scalar(family, family.build_H(i).substitute({U: at})) - expected


@relation("lemma.y-serre-distinct")
def y_serre_distinct_residual(family: GkloFamily, i: int, r1: int, r2: int, s: int) -> DiffOperator:
    _require_c_minus_one(family, i)
    a = family.build_y(i, r1)
    b = family.build_y(i, r2)
    t = family.build_y(family.tau(i), s)
    return _serre_word(a, b, t) + _serre_word(b, a, t)


@relation("lemma.y-serre-repeated")
def y_serre_repeated_residual(family: GkloFamily, i: int, r: int, s: int) -> DiffOperator:
    _require_c_minus_one(family, i)
    a = family.build_y(i, r)
    return _serre_word(a, a, family.build_y(family.tau(i), s))


@relation("lemma.y-tau-display")
def y_tau_display_residual(family: GkloFamily, i: int, r: int) -> DiffOperator:
    """y_{ti,r} from the constructor against its explicit display, for i in Q0+."""
    quiver = family.quiver
    ti = family.tau(i)
    x = family.x(i, r)
    hbar = family.hbar
    numerator = []
    for h in quiver.edges_into(i):
        if quiver.is_fixed(h):
            numerator.append(-2 * x + hbar * Fraction(3, 2))
    for _, t in quiver.edges_from(ti):
        numerator.extend(family.build_V(t).factors(-x + hbar * HALF))
    numerator.extend(family.build_W(i).factors(x - hbar * HALF))
    denominator = family.build_V_punctured(i, r).factors(x)
    coeff = RationalFunction.from_factors(
        family.alphabet, numerator, denominator, parity_sign(family.dim_v(i) - 1)
    )
    display = DiffOperator.shift(family.torus, family.torus.d(i, r, -1), coeff)
    return family.build_y(ti, r) - display


@relation("lemma.B-modes")
def b_modes_residual(family: GkloFamily, i: int) -> Outcome:
    return _first_nonzero(
        (
            (f"m = {m}", family.B_coeff(i, m) - family.B_coeff_closed(i, m))
            for m in range(family.max_mode + 1)
        ),
        family.torus,
    )


@relation("lemma.H-degree")
def h_degree_residual(family: GkloFamily, i: int) -> Outcome:
    mu = family.mu_pairing(i)
    degree, lead = family.build_H(i).leading_at_infinity(U)
    if degree != mu:
        return _scalar(family, 1), f"deg_u H_{i} = {degree}, expected {mu}"
    return _scalar(family, lead - family.hbar_zeta(i))


@relation("lemma.H-boundary")
def h_boundary_residual(family: GkloFamily, i: int) -> Outcome:
    low = -family.mu_pairing(i) - 1
    for r in (low - 2, low - 1):
        coeff = family.H_laurent(i, r)
        if not coeff.is_zero():
            return _scalar(family, coeff), f"H_({i},{r}) should vanish"
    top = family.H_coeff(i, low) - family.hbar_zeta(i)
    if not top.is_zero():
        return _scalar(family, top), f"H_({i},{low}) should equal hbar*zeta"
    return h_symmetry_residual(family, i)


def _slot_swaps(family: GkloFamily, i: int) -> Iterable[tuple[str, dict[Variable, LinearForm]]]:
    """Adjacent transpositions of the x slots of i and the w slots of i and tau(i)."""
    alphabet = family.alphabet
    p = i if family.quiver.is_plus(i) else family.tau(i)
    for a in range(1, family.dim_v(i)):
        left, right = Variable.x(p, a), Variable.x(p, a + 1)
        yield f"x_({i},{a}) <-> x_({i},{a + 1})", {left: alphabet.var(right), right: alphabet.var(left)}
    for k in sorted({i, family.tau(i)}):
        for a in range(1, family.dims.dim_w(k)):
            left, right = Variable.w(k, a), Variable.w(k, a + 1)
            yield f"w_({k},{a}) <-> w_({k},{a + 1})", {left: alphabet.var(right), right: alphabet.var(left)}


@relation("lemma.H-symmetry")
def h_symmetry_residual(family: GkloFamily, i: int) -> Outcome:
    swaps = list(_slot_swaps(family, i))
    for r in range(-family.mu_pairing(i) - 1, family.mode_order(i) + 1):
        coeff = family.H_coeff(i, r)
        for label, mapping in swaps:
            swapped = substitute(coeff, mapping)
            if not rf_equal(swapped, coeff):
                return _scalar(family, swapped - coeff), f"H_({i},{r}) changes under {label}"
    return DiffOperator.zero(family.torus)


@relation("lemma.zeta-constraint")
def zeta_constraint_residual(family: GkloFamily, i: int) -> Outcome:
    ti = family.tau(i)
    mu = family.mu_pairing(i)
    if mu != family.mu_pairing(ti):
        return _scalar(family, 1), f"mu_{i} = {mu} but mu_{ti} = {family.mu_pairing(ti)}"
    return _scalar(family, family.hbar_zeta(i) - parity_sign(mu) * family.hbar_zeta(ti))


# mode forms


@relation("modes.hh")
def hh_modes_residual(family: GkloFamily, i: int) -> Outcome:
    ti = family.tau(i)
    return _first_nonzero(
        (
            (f"s = {s}", _scalar(family, family.H_coeff(i, s) - family.H_coeff(ti, s) * parity_sign(s + 1)))
            for s in range(-family.mu_pairing(i) - 1, family.max_mode + 1)
        ),
        family.torus,
    )


@relation("modes.hb")
def hb_modes_residual(family: GkloFamily, i: int, j: int) -> Outcome:
    hbar = family.hbar
    c = family.c(i, j)
    c_mirror = family.c(family.tau(i), j)

    def H(r: int) -> DiffOperator:
        return _scalar(family, family.H_coeff(i, r))

    def B(s: int) -> DiffOperator:
        return family.B_coeff(j, s)

    def residual(r: int, s: int) -> DiffOperator:
        return (
            commutator(H(r + 2), B(s))
            - commutator(H(r), B(s + 2))
            - (hbar * Fraction(c - c_mirror, 2)) * anticommutator(H(r + 1), B(s))
            - (hbar * Fraction(c + c_mirror, 2)) * anticommutator(H(r), B(s + 1))
            - ((hbar * hbar) * Fraction(c * c_mirror, 4)) * commutator(H(r), B(s))
        )

    low = min(-family.mu_pairing(i) - 1, 0)
    return _first_nonzero(
        (
            (f"(r, s) = ({r}, {s})", residual(r, s))
            for r in range(low, family.max_mode + 1)
            for s in range(family.max_mode + 1)
        ),
        family.torus,
    )


@relation("modes.bb")
def bb_modes_residual(family: GkloFamily, i: int, j: int) -> Outcome:
    hbar = family.hbar
    c = family.c(i, j)
    delta = 1 if j == family.tau(i) else 0

    def residual(r: int, s: int) -> DiffOperator:
        Bi, Bi_next = family.B_coeff(i, r), family.B_coeff(i, r + 1)
        Bj, Bj_next = family.B_coeff(j, s), family.B_coeff(j, s + 1)
        total = (
            commutator(Bi_next, Bj)
            - commutator(Bi, Bj_next)
            - (hbar * Fraction(c, 2)) * anticommutator(Bi, Bj)
        )
        if delta:
            total = total + _scalar(family, hbar * (2 * parity_sign(r)) * family.H_coeff(j, r + s + 1))
        return total

    return _first_nonzero(
        (
            (f"(r, s) = ({r}, {s})", residual(r, s))
            for r in range(family.max_mode + 1)
            for s in range(family.max_mode + 1)
        ),
        family.torus,
    )


@relation("modes.serre0")
def serre0_modes_residual(family: GkloFamily, i: int, j: int) -> Outcome:
    if family.c(i, j) != 0:
        raise WrongCartanCase(f"commuting Serre needs c_({i},{j}) = 0, got {family.c(i, j)}")
    hbar = family.hbar
    delta = 1 if j == family.tau(i) else 0

    def residual(r: int, s: int) -> DiffOperator:
        total = commutator(family.B_coeff(i, r), family.B_coeff(j, s))
        if delta:
            total = total - _scalar(family, hbar * parity_sign(r) * family.H_coeff(j, r + s))
        return total

    return _first_nonzero(
        (
            (f"(r, s) = ({r}, {s})", residual(r, s))
            for r in range(family.max_mode + 1)
            for s in range(family.max_mode + 1)
        ),
        family.torus,
    )


# monopoles


@relation("monopole.theorem")
def monopole_theorem_residual(family: GkloFamily, i: int, m: int) -> DiffOperator:
    return theorem_image(family, i, m) - family.B_coeff(i, m)


@relation("monopole.oracle")
def monopole_oracle_residual(family: GkloFamily, i: int, sign: int) -> Outcome:
    datum = MinusculeDatum(i, sign)
    residual = euler_oracle(family, datum) - closed_form(family, datum)
    if residual.is_zero():
        return residual
    return residual, f"oracle differs from the closed form at {datum.describe(family)}"


@relation("monopole.dressing")
def monopole_dressing_residual(family: GkloFamily, i: int) -> DiffOperator:
    return dressing_residual(family, i, power_dressing(-1, -HALF, 1), power_dressing(1, 1, 2))


# planning


def _lemma_tasks(family: GkloFamily) -> list[CheckTask]:
    vertices = family.vertices
    tau = family.tau
    tasks: list[CheckTask] = []
    for i in vertices:
        for j in vertices:
            for r in family.slots(i):
                for s in family.slots(j):
                    if j == tau(i) and s == r:
                        continue
                    tasks.append(CheckTask("lemma.C-conjugation", (i, j, r, s)))
                    tasks.append(CheckTask("lemma.C-table", (i, j, r, s)))
    for i in vertices:
        for j in vertices:
            for s in family.slots(j):
                tasks.append(CheckTask("lemma.D-conjugation", (i, j, s)))
                tasks.append(CheckTask("lemma.D-table", (i, j, s)))
    for i in vertices:
        for r in family.slots(i):
            for sign in (-1, 1):
                tasks.append(CheckTask("lemma.H-residue", (i, r, sign)))
        tasks.append(CheckTask("lemma.H-truncation", (i,)))
        tasks.append(CheckTask("lemma.H-truncation-c0", (i,)))
        for r in family.slots(i):
            tasks.append(CheckTask("lemma.H-special", (i, r)))
        slots = list(family.slots(i))
        for r1 in slots:
            for r2 in slots:
                for s in slots:
                    if r1 < r2 and s not in (r1, r2):
                        tasks.append(CheckTask("lemma.y-serre-distinct", (i, r1, r2, s)))
        for r in slots:
            for s in slots:
                if r != s:
                    tasks.append(CheckTask("lemma.y-serre-repeated", (i, r, s)))
    for i in family.quiver.plus_vertices:
        for r in family.slots(i):
            tasks.append(CheckTask("lemma.y-tau-display", (i, r)))
    for name in (
        "lemma.B-modes",
        "lemma.H-degree",
        "lemma.H-boundary",
        "lemma.H-symmetry",
        "lemma.zeta-constraint",
    ):
        tasks.extend(CheckTask(name, (i,)) for i in vertices)
    return tasks


def plan_checks(family: GkloFamily, suites: Iterable[Suite | str]) -> list[CheckTask]:
    """The canonical, deterministic task list for the selected suites."""
    vertices = family.vertices
    pairs = [(i, j) for i in vertices for j in vertices]
    distinct = [(i, j) for i, j in pairs if i != j]
    tasks: list[CheckTask] = []
    for suite in Suite.expand(suites):
        match suite:
            case Suite.HH:
                tasks.extend(CheckTask("hh", p) for p in pairs)
            case Suite.HB:
                tasks.extend(CheckTask("hb", p) for p in pairs)
            case Suite.BB:
                tasks.extend(CheckTask("bb", p) for p in pairs)
            case Suite.SERRE0:
                tasks.extend(CheckTask("comm-serre", p) for p in distinct)
            case Suite.SERRE1:
                tasks.extend(CheckTask("usual-serre", p) for p in distinct)
            case Suite.ISERRE:
                tasks.extend(CheckTask("iserre-zero", (i,)) for i in vertices)
            case Suite.LEMMAS:
                tasks.extend(_lemma_tasks(family))
            case Suite.MODES:
                tasks.extend(CheckTask("modes.hh", (i,)) for i in vertices)
                tasks.extend(CheckTask("modes.hb", p) for p in pairs)
                tasks.extend(CheckTask("modes.bb", p) for p in pairs)
                tasks.extend(CheckTask("modes.serre0", p) for p in distinct)
            case Suite.MONOPOLE:
                for i in vertices:
                    tasks.extend(CheckTask("monopole.theorem", (i, m)) for m in range(family.max_mode + 1))
                for i in family.quiver.plus_vertices:
                    tasks.append(CheckTask("monopole.oracle", (i, 1)))
                    tasks.append(CheckTask("monopole.oracle", (i, -1)))
                    tasks.append(CheckTask("monopole.dressing", (i,)))
    return tasks


# running


def sample_residual(residual: DiffOperator, seed: int) -> Fraction | None:
    """First nonzero value of a residual coefficient at a random point, if any."""
    for k, (_, coeff) in enumerate(residual.terms):
        value = coeff.random_eval(seed + k)
        if value:
            return value
    return None


def run_check(
    family: GkloFamily,
    task: CheckTask,
    *,
    seed: int | None = None,
    keep_residual: bool = True,
) -> RelationCheck:
    try:
        fn = RELATIONS[task.name]
    except KeyError:
        raise ValueError(f"unknown check {task.name!r}") from None
    logger.info("running %s", task.label)
    start = time.perf_counter()
    try:
        outcome = fn(family, *task.indices)
    except WrongCartanCase as exc:
        elapsed = time.perf_counter() - start
        logger.info("skipped %s: %s", task.label, exc)
        return RelationCheck(task.name, task.indices, CheckStatus.SKIPPED, reason=str(exc), elapsed=elapsed)
    except DOMAIN_FAILURES as exc:
        elapsed = time.perf_counter() - start
        logger.warning("%s failed: %s", task.label, exc)
        return RelationCheck(
            task.name, task.indices, CheckStatus.FAIL, detail=f"{type(exc).__name__}: {exc}", elapsed=elapsed
        )
    residual, detail = outcome if isinstance(outcome, tuple) else (outcome, None)
    if seed is not None:
        value = sample_residual(residual, seed)
        if value is not None:
            elapsed = time.perf_counter() - start
            logger.warning("%s refuted at a random point (value %s)", task.label, value)
            return RelationCheck(
                task.name,
                task.indices,
                CheckStatus.FAIL,
                detail=f"nonzero at a random point (value {value})" + (f"; {detail}" if detail else ""),
                residual_terms=residual.term_texts(),
                elapsed=elapsed,
                residual=residual if keep_residual else None,
            )
    elapsed = time.perf_counter() - start
    if residual.is_zero():
        logger.info("%s passed in %.3fs", task.label, elapsed)
        return RelationCheck(task.name, task.indices, CheckStatus.PASS, elapsed=elapsed)
    logger.warning("%s failed with %d residual terms", task.label, len(residual))
    return RelationCheck(
        task.name,
        task.indices,
        CheckStatus.FAIL,
        detail=detail,
        residual_terms=residual.term_texts(),
        elapsed=elapsed,
        residual=residual if keep_residual else None,
    )


_worker_family: GkloFamily | None = None


def _init_worker(spec: FamilySpec) -> None:
    global _worker_family
    _worker_family = spec.build()


def _run_in_worker(task: CheckTask, seed: int | None) -> RelationCheck:
    assert _worker_family is not None
    return run_check(_worker_family, task, seed=seed, keep_residual=False)


def run_checks(
    spec: FamilySpec,
    tasks: Sequence[CheckTask],
    *,
    parallel: int = 1,
    fail_fast: bool = False,
    seed: int | None = None,
    family: GkloFamily | None = None,
) -> list[RelationCheck]:
    """Run tasks inline or on a process pool; results come back in task order."""
    results: list[RelationCheck] = []
    if parallel <= 1:
        family = family or spec.build()
        for task in tasks:
            check = run_check(family, task, seed=seed)
            results.append(check)
            if fail_fast and check.status is CheckStatus.FAIL:
                logger.warning("stopping after the first failure: %s", check.label)
                break
        return results

    with ProcessPoolExecutor(max_workers=parallel, initializer=_init_worker, initargs=(spec,)) as pool:
        futures = [pool.submit(_run_in_worker, task, seed) for task in tasks]
        for future in futures:
            check = future.result()
            results.append(check)
            if fail_fast and check.status is CheckStatus.FAIL:
                logger.warning("stopping after the first failure: %s", check.label)
                for pending in futures:
                    pending.cancel()
                break
    return results


def verify(
    spec: FamilySpec,
    suites: Iterable[Suite | str],
    *,
    parallel: int = 1,
    fail_fast: bool = False,
    seed: int | None = None,
) -> VerificationReport:
    family = spec.build()
    selected = Suite.expand(suites)
    tasks = plan_checks(family, selected)
    logger.info("planned %d checks for suites %s", len(tasks), ", ".join(s.value for s in selected))
    checks = run_checks(spec, tasks, parallel=parallel, fail_fast=fail_fast, seed=seed, family=family)
    assumptions = (ISERRE_ASSUMPTION,) if Suite.ISERRE in selected else ()
    return VerificationReport(spec, selected, tuple(checks), assumptions)


# single-relation entry points


def _check(family: GkloFamily, name: str, *indices: int) -> RelationCheck:
    return run_check(family, CheckTask(name, indices))


def check_hh(family: GkloFamily, i: int, j: int) -> RelationCheck:
    return _check(family, "hh", i, j)


def check_hb(family: GkloFamily, i: int, j: int) -> RelationCheck:
    return _check(family, "hb", i, j)


def check_bb(family: GkloFamily, i: int, j: int) -> RelationCheck:
    return _check(family, "bb", i, j)


def check_comm_serre(family: GkloFamily, i: int, j: int) -> RelationCheck:
    return _check(family, "comm-serre", i, j)


def check_usual_serre(family: GkloFamily, i: int, j: int) -> RelationCheck:
    return _check(family, "usual-serre", i, j)


def check_iserre_zero(family: GkloFamily, i: int) -> RelationCheck:
    return _check(family, "iserre-zero", i)


def check_lemma_suite(family: GkloFamily, scope: Iterable[str] | None = None) -> list[RelationCheck]:
    """Run the lemma checks, optionally only those named in scope (with or without the 'lemma.' prefix)."""
    tasks = _lemma_tasks(family)
    if scope is not None:
        wanted = {name if name.startswith("lemma.") else f"lemma.{name}" for name in scope}
        tasks = [task for task in tasks if task.name in wanted]
    return [run_check(family, task) for task in tasks]
