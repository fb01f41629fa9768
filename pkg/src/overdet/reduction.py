"""Degree-lowering reduction and elimination for overdetermined systems.

The two-polynomial step replaces a pair {f, g} of equal degree n in one
variable by an equivalent pair {c, d} of degree at most n-1: c cancels the
leading terms of f and g, and d is c multiplied by the variable with the
top power absorbed back through f.  Chaining the step reaches a linear pair,
which is solved directly and checked with a 2x2 consistency determinant.

Multivariate systems are treated one variable at a time: every equation is
viewed through its coefficients in the chosen variable (polynomials in the
remaining ones), reduced against a pivot by cross-multiplication so that all
arithmetic stays in the polynomial ring, and the terminal linear pivot gives
the variable as a ratio of coefficient polynomials.  Every cleared leading
coefficient is asserted nonzero and recorded as a side condition; results
are complete only on the locus where all recorded conditions hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    AllDegreeZeroError,
    DegreeMismatchError,
    NotUnivariateError,
    PivotDegenerateError,
    SystemShapeError,
    ZeroLeadingCoefficientError,
)
from .poly import NEG_INFINITY, Polynomial

SOLVED = "solved"
INCONSISTENT = "inconsistent"
RESIDUAL = "residual"
DEGENERATE = "degenerate"

PAIR_REDUCE = "pair-reduce"
ABSORB_MULTIPLY = "absorb-multiply"
LINEAR_SOLVE = "linear-solve"
INCONSISTENCY = "inconsistency"
RESIDUAL_STEP = "residual"
BRANCH_SKIPPED = "branch-skipped"


@dataclass(frozen=True)
class SideCondition:
    """A polynomial asserted nonzero; downstream results are conditional on it."""

    polynomial: Polynomial
    relation: str = "nonzero"

    def holds_at(self, point: Mapping[str, Fraction]) -> bool:
        return self.polynomial.evaluate(point) != 0

    def is_identically_violated(self) -> bool:
        return self.polynomial.is_zero()


@dataclass(frozen=True)
class ReductionStep:
    """One recorded transformation; outputs are exact combinations of inputs."""

    kind: str
    inputs: tuple[Polynomial, ...]
    outputs: tuple[Polynomial, ...]
    conditions: tuple[SideCondition, ...] = ()


@dataclass
class ReductionOutcome:
    """Result of a reduction run: status, verified solutions, residue, trace."""

    status: str
    solutions: list[dict[str, Fraction]] = field(default_factory=list)
    residual_system: list[Polynomial] = field(default_factory=list)
    trace: list[ReductionStep] = field(default_factory=list)
    conditions: list[SideCondition] = field(default_factory=list)


def _merge_condition(conditions: list[SideCondition], new: SideCondition) -> None:
    if all(existing.polynomial != new.polynomial for existing in conditions):
        conditions.append(new)


# -- two-polynomial step -----------------------------------------------------


def reduce_pair(
    f: Polynomial, g: Polynomial, var: str
) -> tuple[Polynomial, Polynomial, list[SideCondition]]:
    """Lower a pair of equal degree n in ``var`` to a pair of degree <= n-1.

    With a constant leading coefficient a of f, returns
    ``c = g - (lead(g)/a) * f`` and ``d = var*c - (c_top/a) * f`` where c_top
    is the coefficient of ``var**(n-1)`` in c.  With a polynomial leading
    coefficient the same combinations are formed cross-multiplied by a, and
    ``a != 0`` is recorded as an extra side condition.  The returned
    conditions always include ``c_top != 0``; when c_top is identically zero
    the condition is violated and the caller must fall back to {f, c}.
    """
    deg_f = f.degree_in(var)
    deg_g = g.degree_in(var)
    if deg_f != deg_g:
        raise DegreeMismatchError(
            f"degrees in {var} differ: {deg_f} vs {deg_g} (pad or pre-absorb first)"
        )
    if deg_f == NEG_INFINITY or int(deg_f) < 1:
        raise DegreeMismatchError(f"pair degree in {var} must be at least 1, got {deg_f}")
    n = int(deg_f)
    lead_f = f.coefficient_in(var, n)
    lead_g = g.coefficient_in(var, n)
    if lead_f.is_zero():
        raise ZeroLeadingCoefficientError(f"leading coefficient of {f} in {var} is zero")
    x = Polynomial.variable(var)
    conditions: list[SideCondition] = []
    if lead_f.is_constant():
        inv = Fraction(1) / lead_f.constant_value()
        c = g - f * lead_g * inv
        c_top = c.coefficient_in(var, n - 1)
        d = c * x - f * c_top * inv
    else:
        conditions.append(SideCondition(lead_f))
        c = g * lead_f - f * lead_g
        c_top = c.coefficient_in(var, n - 1)
        d = c * x * lead_f - f * c_top
    conditions.append(SideCondition(c_top))
    return c, d, conditions


# -- univariate chain --------------------------------------------------------


def _verified(polys: Sequence[Polynomial], point: Mapping[str, Fraction]) -> bool:
    return all(p.evaluate(point) == 0 for p in polys)


def _finish_survivor(
    survivor: Polynomial,
    var: str,
    originals: Sequence[Polynomial],
    trace: list[ReductionStep],
    conditions: list[SideCondition],
) -> ReductionOutcome:
    """Terminal handling once the pair has collapsed to a single constraint."""
    degree = survivor.degree_in(var)
    if degree == NEG_INFINITY:
        trace.append(ReductionStep(RESIDUAL_STEP, (survivor,), ()))
        return ReductionOutcome(DEGENERATE, trace=trace, conditions=conditions)
    degree = int(degree)
    if degree == 0:
        trace.append(ReductionStep(INCONSISTENCY, (survivor,), (survivor,)))
        return ReductionOutcome(INCONSISTENT, trace=trace, conditions=conditions)
    if degree == 1:
        a1 = survivor.coefficient_in(var, 1).constant_value()
        a0 = survivor.coefficient_in(var, 0).constant_value()
        root = -a0 / a1
        trace.append(ReductionStep(LINEAR_SOLVE, (survivor,), (Polynomial.zero(),)))
        point = {var: root}
        if not _verified(originals, point):
            trace.append(ReductionStep(BRANCH_SKIPPED, (survivor,), ()))
            return ReductionOutcome(INCONSISTENT, trace=trace, conditions=conditions)
        return ReductionOutcome(SOLVED, [point], trace=trace, conditions=conditions)
    trace.append(ReductionStep(RESIDUAL_STEP, (survivor,), (survivor,)))
    return ReductionOutcome(
        RESIDUAL, residual_system=[survivor], trace=trace, conditions=conditions
    )


def _linear_terminal(
    first: Polynomial,
    second: Polynomial,
    var: str,
    originals: Sequence[Polynomial],
    trace: list[ReductionStep],
    conditions: list[SideCondition],
) -> ReductionOutcome:
    """Solve a pair of linear equations and check the consistency determinant."""
    a1 = first.coefficient_in(var, 1)
    a0 = first.coefficient_in(var, 0)
    b1 = second.coefficient_in(var, 1)
    b0 = second.coefficient_in(var, 0)
    det = a1 * b0 - b1 * a0
    cond = SideCondition(a1)
    trace.append(ReductionStep(LINEAR_SOLVE, (first, second), (det,), (cond,)))
    _merge_condition(conditions, cond)
    if not det.is_zero():
        return ReductionOutcome(INCONSISTENT, trace=trace, conditions=conditions)
    root = -a0.constant_value() / a1.constant_value()
    point = {var: root}
    if not _verified(originals, point):
        trace.append(ReductionStep(BRANCH_SKIPPED, (first, second), ()))
        return ReductionOutcome(INCONSISTENT, trace=trace, conditions=conditions)
    return ReductionOutcome(SOLVED, [point], trace=trace, conditions=conditions)


def reduce_chain(f: Polynomial, g: Polynomial, var: str) -> ReductionOutcome:
    """Iterate the pair reduction on univariate constant-coefficient input
    until a linear pair (solved via the consistency determinant), a nonzero
    constant (inconsistent), or a surviving factor of degree >= 2 (residual).
    """
    for poly in (f, g):
        if poly.is_zero():
            raise NotUnivariateError("reduce_chain requires nonzero polynomials")
        extra = [v for v in poly.variables() if v != var]
        if extra:
            raise NotUnivariateError(
                f"reduce_chain requires univariate input; {poly} also involves {extra}"
            )
    trace: list[ReductionStep] = []
    conditions: list[SideCondition] = []
    current_f, current_g = f, g
    while True:
        deg_f = current_f.degree_in(var)
        deg_g = current_g.degree_in(var)
        if deg_f < deg_g:
            current_f, current_g = current_g, current_f
            deg_f, deg_g = deg_g, deg_f
        if deg_g == NEG_INFINITY:
            return _finish_survivor(current_f, var, (f, g), trace, conditions)
        deg_f, deg_g = int(deg_f), int(deg_g)
        if deg_g == 0:
            # a nonzero constant combination rules out every root
            trace.append(ReductionStep(INCONSISTENCY, (current_g,), (current_g,)))
            return ReductionOutcome(INCONSISTENT, trace=trace, conditions=conditions)
        if deg_f == 1 and deg_g == 1:
            return _linear_terminal(current_f, current_g, var, (f, g), trace, conditions)
        if deg_f == deg_g:
            c, d, pair_conditions = reduce_pair(current_f, current_g, var)
            trace.append(
                ReductionStep(PAIR_REDUCE, (current_f, current_g), (c, d), tuple(pair_conditions))
            )
            for cond in pair_conditions:
                _merge_condition(conditions, cond)
            if c.is_zero():
                # proportional pair: only one independent constraint survives
                return _finish_survivor(current_f, var, (f, g), trace, conditions)
            c_degree = int(c.degree_in(var))
            if c_degree == deg_f - 1:
                # working pair continues scaled to primitive form (same roots)
                current_f, current_g = _primitive_part(c), _primitive_part(d)
                continue
            if c_degree == 0:
                trace.append(ReductionStep(INCONSISTENCY, (c,), (c,)))
                return ReductionOutcome(INCONSISTENT, trace=trace, conditions=conditions)
            # c lost more than one degree: keep f and continue with {f, c}
            current_g = _primitive_part(c)
            continue
        # unequal degrees: raise g to degree n-1 by multiplication, then
        # absorb one more multiplication through f
        x = Polynomial.variable(var)
        c = current_g
        for _ in range(deg_f - 1 - deg_g):
            c = c * x
        lead_f = current_f.coefficient_in(var, deg_f).constant_value()
        c_top = c.coefficient_in(var, deg_f - 1)
        d = c * x - current_f * c_top * (Fraction(1) / lead_f)
        trace.append(ReductionStep(ABSORB_MULTIPLY, (current_f, current_g), (c, d)))
        current_f, current_g = c, _primitive_part(d)


# -- rational roots of a univariate survivor ---------------------------------


# divisor scans beyond this take too long; enumeration is then declined
_ENUMERATION_LIMIT = 10 ** 12


def _divisors(n: int) -> list[int]:
    n = abs(n)
    found = set()
    k = 1
    while k * k <= n:
        if n % k == 0:
            found.add(k)
            found.add(n // k)
        k += 1
    return sorted(found)


def _rational_roots(poly: Polynomial, var: str) -> list[Fraction] | None:
    """All rational roots via exact divisor enumeration, or None when the
    coefficients are too large to enumerate divisors for."""
    coeffs = [c.constant_value() for c in poly.coefficients_in(var)]
    if not coeffs:
        return []
    denominator_lcm = 1
    for c in coeffs:
        denominator_lcm = denominator_lcm * c.denominator // _gcd(denominator_lcm, c.denominator)
    ints = [int(c * denominator_lcm) for c in coeffs]
    shared = 0
    for value in ints:
        shared = _gcd(shared, value)
    if shared > 1:
        ints = [value // shared for value in ints]
    low = 0
    while low < len(ints) and ints[low] == 0:
        low += 1
    roots = set()
    if low > 0:
        roots.add(Fraction(0))
    ints = ints[low:]
    if len(ints) <= 1:
        return sorted(roots)
    constant, lead = ints[0], ints[-1]
    if abs(constant) > _ENUMERATION_LIMIT or abs(lead) > _ENUMERATION_LIMIT:
        return None
    candidates = {
        Fraction(sign * p, q)
        for p in _divisors(constant)
        for q in _divisors(lead)
        for sign in (1, -1)
    }
    for candidate in candidates:
        if poly.evaluate({var: candidate}) == 0:
            roots.add(candidate)
    return sorted(roots)


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _primitive_part(poly: Polynomial) -> Polynomial:
    """Divide out the positive rational content; the zero set is unchanged.

    Keeps coefficient growth under control across chained cross-multiplied
    reductions; a pure function of its input, so recorded steps stay
    reproducible.
    """
    if poly.is_zero():
        return poly
    coefficients = [coeff for _, coeff in poly.ordered_terms()]
    numerator_gcd = 0
    denominator_lcm = 1
    for coeff in coefficients:
        numerator_gcd = _gcd(numerator_gcd, coeff.numerator)
        denominator_lcm = denominator_lcm * coeff.denominator // _gcd(
            denominator_lcm, coeff.denominator
        )
    content = Fraction(numerator_gcd, denominator_lcm)
    if content == 1:
        return poly
    return poly * (Fraction(1) / content)


def _split_off_roots(
    poly: Polynomial, var: str, roots: Sequence[Fraction]
) -> Polynomial:
    """Divide out (var - r) for each root as often as it divides exactly."""
    remaining = poly
    x = Polynomial.variable(var)
    for root in roots:
        while True:
            coeffs = [c.constant_value() for c in remaining.coefficients_in(var)]
            if len(coeffs) <= 1:
                break
            # synthetic division by (var - root)
            quotient = [Fraction(0)] * (len(coeffs) - 1)
            carry = Fraction(0)
            for k in range(len(coeffs) - 1, 0, -1):
                quotient[k - 1] = coeffs[k] + carry
                carry = quotient[k - 1] * root
            if coeffs[0] + carry != 0:
                break
            remaining = Polynomial.zero((var,))
            for power, c in enumerate(quotient):
                remaining = remaining + x ** power * c
    return remaining


# -- elimination of one variable ---------------------------------------------


@dataclass
class _EliminationResult:
    reduced: list[Polynomial]
    conditions: list[SideCondition]
    steps: list[ReductionStep]
    pivot_original_index: int
    lin_coeff: Polynomial  # coefficient of the variable in the terminal pivot
    lin_const: Polynomial  # remaining part of the terminal pivot
    duplicates_only: bool  # every non-pivot equation collapsed via constants


def _eliminate(system: Sequence[Polynomial], var: str) -> _EliminationResult:
    equations = list(system)
    degrees = [e.degree_in(var) for e in equations]
    if all(d == NEG_INFINITY or int(d) < 1 for d in degrees):
        raise AllDegreeZeroError(f"no equation involves {var}")
    conditions: list[SideCondition] = []
    steps: list[ReductionStep] = []
    x = Polynomial.variable(var)
    duplicates_only = True
    while True:
        degrees = [e.degree_in(var) for e in equations]
        positive = [
            i for i, d in enumerate(degrees) if d != NEG_INFINITY and int(d) >= 1
        ]
        if not positive:
            raise PivotDegenerateError(
                f"{var} vanished from every equation during elimination"
            )
        pivot_index = min(positive, key=lambda i: (int(degrees[i]), i))
        pivot = equations[pivot_index]
        pivot_degree = int(degrees[pivot_index])
        pivot_lead = pivot.coefficient_in(var, pivot_degree)
        if pivot_lead.is_zero():
            raise PivotDegenerateError("pivot has identically zero leading coefficient")
        higher = [
            i
            for i in positive
            if i != pivot_index and int(degrees[i]) >= pivot_degree
        ]
        if higher:
            for index in higher:
                reduced = equations[index]
                while True:
                    degree = reduced.degree_in(var)
                    if degree == NEG_INFINITY or int(degree) < pivot_degree:
                        break
                    lead = reduced.coefficient_in(var, int(degree))
                    shift = x ** (int(degree) - pivot_degree)
                    combination = _primitive_part(
                        reduced * pivot_lead - pivot * lead * shift
                    )
                    cond = SideCondition(pivot_lead)
                    steps.append(
                        ReductionStep(
                            PAIR_REDUCE, (reduced, pivot), (combination,), (cond,)
                        )
                    )
                    _merge_condition(conditions, cond)
                    if not (lead.is_constant() and pivot_lead.is_constant()):
                        duplicates_only = False
                    reduced = combination
                equations[index] = reduced
                if not reduced.is_zero():
                    duplicates_only = False
            continue
        if pivot_degree == 1:
            break
        # the pivot alone still carries the variable: lower its degree by
        # multiplying a nonzero mate up and absorbing the top power
        mates = [
            i for i, e in enumerate(equations) if i != pivot_index and not e.is_zero()
        ]
        if not mates:
            raise PivotDegenerateError(
                f"no independent equation remains to lower the degree of the pivot in {var}"
            )
        mate_index = mates[0]
        mate = equations[mate_index]
        mate_degree = mate.degree_in(var)
        mate_degree = 0 if mate_degree == NEG_INFINITY else int(mate_degree)
        raised = mate * x ** (pivot_degree - mate_degree)
        raised_lead = raised.coefficient_in(var, pivot_degree)
        combination = _primitive_part(pivot * raised_lead - raised * pivot_lead)
        cond = SideCondition(raised_lead)
        steps.append(
            ReductionStep(ABSORB_MULTIPLY, (pivot, mate), (combination,), (cond,))
        )
        _merge_condition(conditions, cond)
        duplicates_only = False
        equations[pivot_index] = combination
    reduced_system = [e for i, e in enumerate(equations) if i != pivot_index]
    lin_coeff = equations[pivot_index].coefficient_in(var, 1)
    lin_const = equations[pivot_index].coefficient_in(var, 0)
    return _EliminationResult(
        reduced=reduced_system,
        conditions=conditions,
        steps=steps,
        pivot_original_index=pivot_index,
        lin_coeff=lin_coeff,
        lin_const=lin_const,
        duplicates_only=duplicates_only,
    )


def eliminate_variable(
    system: Sequence[Polynomial], var: str
) -> tuple[list[Polynomial], list[SideCondition], list[ReductionStep]]:
    """Eliminate ``var`` from a system of m+1 equations, returning the m
    cross-consistency equations in the remaining variables plus the recorded
    side conditions and the step-by-step trace."""
    result = _eliminate(system, var)
    return result.reduced, result.conditions, result.steps


# -- full solve ---------------------------------------------------------------


def _occurring_variables(system: Sequence[Polynomial]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for poly in system:
        for var in poly.variables():
            seen.setdefault(var)
    return tuple(seen)


def _complete_univariate(
    outcome: ReductionOutcome, system: Sequence[Polynomial], var: str
) -> ReductionOutcome:
    """Enumerate the rational roots of a residual survivor and verify them."""
    if outcome.status != RESIDUAL or len(outcome.residual_system) != 1:
        return outcome
    survivor = outcome.residual_system[0]
    roots = _rational_roots(survivor, var)
    if roots is None:
        return outcome  # enumeration infeasible: the residual stands as-is
    verified = [
        {var: root} for root in roots if _verified(system, {var: root})
    ]
    cofactor = _split_off_roots(survivor, var, roots)
    cofactor_degree = cofactor.degree_in(var)
    fully_split = cofactor_degree != NEG_INFINITY and int(cofactor_degree) == 0
    if fully_split:
        if verified:
            return ReductionOutcome(
                SOLVED, verified, trace=outcome.trace, conditions=outcome.conditions
            )
        return ReductionOutcome(
            INCONSISTENT, trace=outcome.trace, conditions=outcome.conditions
        )
    return ReductionOutcome(
        RESIDUAL,
        verified,
        residual_system=[cofactor],
        trace=outcome.trace,
        conditions=outcome.conditions,
    )


def _solve_recursive(
    system: Sequence[Polynomial], variables: Sequence[str]
) -> ReductionOutcome:
    if len(variables) == 1:
        var = variables[0]
        nonzero = [p for p in system if not p.is_zero()]
        if not nonzero:
            return ReductionOutcome(DEGENERATE)
        if len(nonzero) == 1:
            outcome = _finish_survivor(nonzero[0], var, nonzero, [], [])
            return _complete_univariate(outcome, nonzero, var)
        outcome = reduce_chain(nonzero[0], nonzero[1], var)
        if len(nonzero) > 2 and outcome.status == SOLVED:
            outcome.solutions = [
                p for p in outcome.solutions if _verified(nonzero, p)
            ]
            if not outcome.solutions:
                outcome.status = INCONSISTENT
        return _complete_univariate(outcome, nonzero, var)

    var = variables[-1]
    elimination = _eliminate(system, var)
    inner = _solve_recursive(elimination.reduced, variables[:-1])
    trace = elimination.steps + inner.trace
    conditions = list(elimination.conditions)
    for cond in inner.conditions:
        _merge_condition(conditions, cond)

    if inner.status == INCONSISTENT:
        return ReductionOutcome(INCONSISTENT, trace=trace, conditions=conditions)

    pivot_relation = elimination.lin_coeff * Polynomial.variable(var) + elimination.lin_const
    if inner.status in (RESIDUAL, DEGENERATE):
        status = DEGENERATE if inner.status == DEGENERATE and elimination.duplicates_only else RESIDUAL
        residual = list(inner.residual_system) + [pivot_relation]
        trace.append(ReductionStep(RESIDUAL_STEP, (pivot_relation,), (pivot_relation,)))
        return ReductionOutcome(
            status,
            solutions=[],
            residual_system=residual,
            trace=trace,
            conditions=conditions,
        )

    solutions: list[dict[str, Fraction]] = []
    for point in inner.solutions:
        denominator = elimination.lin_coeff.evaluate(point)
        if denominator == 0:
            trace.append(
                ReductionStep(
                    BRANCH_SKIPPED,
                    (elimination.lin_coeff,),
                    (),
                    (SideCondition(elimination.lin_coeff),),
                )
            )
            continue
        value = -elimination.lin_const.evaluate(point) / denominator
        candidate = dict(point)
        candidate[var] = value
        if not _verified(system, candidate):
            trace.append(ReductionStep(BRANCH_SKIPPED, tuple(system), ()))
            continue
        solutions.append(candidate)
    if not solutions:
        return ReductionOutcome(INCONSISTENT, trace=trace, conditions=conditions)
    return ReductionOutcome(SOLVED, solutions, trace=trace, conditions=conditions)


def solve_overdetermined(
    system: Sequence[Polynomial], variables: Sequence[str] | None = None
) -> ReductionOutcome:
    """Solve a system of m+1 polynomial equations in m variables.

    Variables are eliminated from the last one down to a single univariate
    pair; solved values are back-substituted in reverse order and every
    returned point is re-verified by exact evaluation against the input
    system.  Points on loci where a recorded side condition vanishes are not
    enumerated (the corresponding branches are skipped, not explored).
    """
    polys = list(system)
    if variables is None:
        variables = _occurring_variables(polys)
    variables = tuple(variables)
    if len(polys) < len(variables) + 1:
        raise SystemShapeError(
            f"need {len(variables) + 1} equations for {len(variables)} variables, "
            f"got {len(polys)} (system is not overdetermined enough)"
        )
    if len(polys) > len(variables) + 1:
        raise SystemShapeError(
            f"need exactly {len(variables) + 1} equations for {len(variables)} "
            f"variables, got {len(polys)}"
        )
    if not variables:
        raise SystemShapeError("system involves no variables")
    outcome = _solve_recursive(polys, variables)
    outcome.solutions.sort(key=lambda pt: tuple(pt[v] for v in variables if v in pt))
    return outcome
