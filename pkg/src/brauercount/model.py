"""Family specifications, divisor/residue bookkeeping and predicted exponents.

Three kinds of family are supported:

* :class:`NormFormFamily` -- fibres ``N_{E_i}(x) = N_E(1, t_1, ..., t_n)`` over
  the norm-one torus compactified in P^n, one cyclic twist E_i per entry;
* :class:`ConicBundle` -- ``f0(t) x^2 + f1(t) y^2 + f2(t) z^2 = 0`` over P^1;
* :class:`DiagonalConics` -- ``a x^2 + b y^2 + c z^2 = 0`` over the
  coefficient space P^2.

Base points are passed either as :class:`~brauercount.heights.ProjPoint`
(homogeneous coordinates, the form used by the counting engine) or as a
tuple of rationals in the affine chart ``x0 = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence, Union

from . import poly
from .arith import (
    NormFormSpec,
    as_fraction,
    hilbert_symbol,
    is_prime,
    kronecker,
    norm_form_value,
    ramified_places,
    squarefree_kernel,
    factor,
)
from .brauer import is_norm_quadratic, is_squarefree
from .errors import InputError, PreconditionError, UndefinedAtPoint
from .heights import ProjPoint

MODULAR_TEST_PRIMES = 40


# --------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class CyclicTwist:
    degree: int
    disc: int | None = None

    def __post_init__(self):
        if self.degree < 1:
            raise InputError("twist degree must be positive")
        if self.degree == 2:
            if self.disc is None:
                raise InputError("a quadratic twist needs its discriminant 'disc'")
            if self.disc == 1 or not is_squarefree(self.disc):
                raise InputError(f"disc = {self.disc} must be squarefree and != 0, 1")

    @property
    def evaluable(self) -> bool:
        return self.degree == 2


@dataclass(frozen=True)
class NormFormFamily:
    E: NormFormSpec
    twists: tuple = ()
    linearly_disjoint: bool = True

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(self.twists))

    @property
    def base_dim(self) -> int:
        return self.E.arity

    @property
    def evaluable(self) -> bool:
        return all(tw.evaluable for tw in self.twists)


@dataclass(frozen=True)
class ConicBundle:
    f0: tuple
    f1: tuple
    f2: tuple

    def __post_init__(self):
        for name in ("f0", "f1", "f2"):
            f = poly.trim(int(c) for c in getattr(self, name))
            if not f:
                raise InputError(f"{name} must be a nonzero polynomial")
            object.__setattr__(self, name, f)

    @property
    def polys(self) -> tuple:
        return (self.f0, self.f1, self.f2)

    @property
    def f(self) -> tuple:
        return poly.mul(poly.mul(self.f0, self.f1), self.f2)

    @property
    def base_dim(self) -> int:
        return 1

    evaluable = True


@dataclass(frozen=True)
class DiagonalConics:
    n: int = 2

    def __post_init__(self):
        if self.n != 2:
            raise InputError("only the ternary diagonal family (n = 2) is supported")

    @property
    def base_dim(self) -> int:
        return 2

    evaluable = True


FamilySpec = Union[NormFormFamily, ConicBundle, DiagonalConics]


@dataclass(frozen=True)
class DivisorDatum:
    label: str
    residue_order: int
    component_degree: int

    def __post_init__(self):
        if self.residue_order != self.component_degree:
            raise InputError("residue order must equal the minimal component degree")


@dataclass(frozen=True)
class Model:
    rho: int
    divisors: tuple
    delta: Fraction
    rho_B: Fraction
    predicted_exponent: Fraction
    conjectural: bool = False
    notes: tuple = field(default=())

    @property
    def predicted_theta(self) -> Fraction:
        """Exponent of log B in N(B) ~ c B (log B)^theta."""
        return self.predicted_exponent


# --------------------------------------------------------------------------
# exponents


def delta_from_components(degrees: Sequence[int]) -> Fraction:
    if any(d < 1 for d in degrees):
        raise InputError("component degrees must be >= 1")
    return sum((1 - Fraction(1, d) for d in degrees), Fraction(0))


def factor_poly(f: Sequence[int]) -> list[tuple[tuple, int]]:
    """Irreducible factors over Q with multiplicities (degree <= 6)."""
    return poly.factor_over_q(f)


def _gf2_rank(values: Sequence[int]) -> int:
    """Rank of the subgroup of Q*/Q*^2 generated by the given squarefree integers."""
    primes = sorted({p for v in values for p in factor(v).primes()})
    index = {p: i + 1 for i, p in enumerate(primes)}
    basis: list[int] = []
    for v in values:
        fv = factor(v)
        vec = (1 if fv.sign < 0 else 0)
        for p, e in fv.factors:
            if e % 2:
                vec |= 1 << index[p]
        for b in basis:
            vec = min(vec, vec ^ b)
        if vec:
            basis.append(vec)
    return len(basis)


def _quadratic_subfield_disc(E: NormFormSpec) -> int | None:
    if E.degree == 2:
        return squarefree_kernel(E.discriminant)
    return None


def _norm_form_residue_order(spec: NormFormFamily) -> tuple[int, list[str]]:
    notes = []
    for tw in spec.twists:
        if (spec.E.degree) % tw.degree:
            raise PreconditionError(
                f"twist degree {tw.degree} does not divide n+1 = {spec.E.degree}; "
                "the class is then ramified along t0 = 0 (needs n_i | n+1)"
            )
    product = 1
    for tw in spec.twists:
        product *= tw.degree
    quad = [tw.disc for tw in spec.twists if tw.degree == 2]
    all_quadratic = len(quad) == len(spec.twists)
    dE = _quadratic_subfield_disc(spec.E)
    if spec.linearly_disjoint:
        if quad:
            gens = quad + ([dE] if dE is not None else [])
            if _gf2_rank(gens) < len(gens):
                raise PreconditionError(
                    "declared linearly disjoint, but the quadratic fields "
                    f"{sorted(set(gens))} are dependent modulo squares"
                )
        return product, notes
    if not all_quadratic:
        raise PreconditionError(
            "residue order of non-disjoint families is only computed for quadratic twists"
        )
    if dE is None and spec.E.degree % 2 == 0 and spec.E.degree > 2:
        raise PreconditionError(
            "cannot decide which twists become trivial over an even-degree E of degree > 2"
        )
    if not quad:
        return 1, notes
    rank_all = _gf2_rank(quad + ([dE] if dE is not None else []))
    rank_e = 1 if dE is not None else 0
    notes.append("residue order computed from the 2-rank of the twist discriminants")
    return 2 ** (rank_all - rank_e), notes


def build_model(spec: FamilySpec) -> Model:
    if isinstance(spec, NormFormFamily):
        order, notes = _norm_form_residue_order(spec)
        if not spec.evaluable:
            notes.append("twists of degree > 2 are symbolic only: point evaluation unavailable")
        divisors = (DivisorDatum("D_{E/Q}", order, order),)
        rho = 1
        conjectural = False
    elif isinstance(spec, ConicBundle):
        f = spec.f
        if poly.degree(f) > poly.MAX_FACTOR_DEGREE:
            raise InputError(f"deg f = {poly.degree(f)} exceeds {poly.MAX_FACTOR_DEGREE}")
        degs = [poly.degree(g) for g in spec.polys]
        if len({d % 2 for d in degs}) != 1:
            raise PreconditionError(
                f"degrees {degs} of f0, f1, f2 must agree mod 2 (smooth fibre at infinity)"
            )
        facs = factor_poly(f)
        if any(e > 1 for _, e in facs):
            raise PreconditionError("f = f0*f1*f2 must be squarefree (separable)")
        divisors = []
        notes = []
        for g, _ in facs:
            i = next(i for i, fi in enumerate(spec.polys) if not poly.divmod_poly(fi, g)[1])
            label = f"{_poly_str(g)} | f{i}"
            divisors.append(DivisorDatum(label, 2, 2))
            cls = classify_conic_fiber(spec, g, i)
            if not cls.nonsplit:
                notes.append(
                    f"fibre over {label} is split; the m/2 count assumes it has been "
                    "contracted away (non-square residue normalization)"
                )
        divisors = tuple(divisors)
        rho = 1
        conjectural = False
    elif isinstance(spec, DiagonalConics):
        divisors = tuple(DivisorDatum(lbl, 2, 2) for lbl in ("a=0", "b=0", "c=0"))
        rho = 3
        conjectural = True
        notes = ["exponent is conjectural; only upper and lower bounds are known"]
    else:
        raise InputError(f"unknown family spec {spec!r}")
    delta = delta_from_components([d.residue_order for d in divisors])
    rho_B = rho - delta
    return Model(
        rho=rho,
        divisors=tuple(divisors),
        delta=delta,
        rho_B=rho_B,
        predicted_exponent=rho_B - 1,
        conjectural=conjectural,
        notes=tuple(notes),
    )


def _poly_str(g: Sequence[int]) -> str:
    terms = []
    for k in range(len(g) - 1, -1, -1):
        c = g[k]
        if not c:
            continue
        mon = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        if mon and abs(c) == 1:
            coef = "-" if c < 0 else "+"
        else:
            coef = f"{c:+d}"
        terms.append(f"{coef}{mon}")
    s = "".join(terms).lstrip("+")
    return s or "0"


# --------------------------------------------------------------------------
# fibres


def _require_evaluable(spec):
    if not spec.evaluable:
        raise InputError("point evaluation needs quadratic twists only")


def norm_value_at(spec: NormFormFamily, t) -> Fraction:
    if isinstance(t, ProjPoint):
        return Fraction(spec.E.norm_homogeneous(t.coords))
    return norm_form_value(spec.E, [as_fraction(x) for x in t])


def conic_values_at(spec: ConicBundle, t) -> tuple:
    """(f0, f1, f2) at t, homogenized on P^1 with t = x1/x0."""
    if isinstance(t, ProjPoint):
        x0, x1 = t.coords
        return tuple(Fraction(poly.evaluate_homogeneous(f, x1, x0, poly.degree(f))) for f in spec.polys)
    (tv,) = t if isinstance(t, (tuple, list)) else (t,)
    return tuple(Fraction(poly.evaluate(f, as_fraction(tv))) for f in spec.polys)


def conic_locally_soluble(a: Fraction, b: Fraction, c: Fraction) -> bool:
    """a x^2 + b y^2 + c z^2 = 0 is soluble at every place of Q."""
    u, w = -a * c, -b * c
    return all(hilbert_symbol(u, w, v) == 1 for v in ramified_places(u, w))


def fiber_has_point(spec: FamilySpec, t) -> bool:
    if isinstance(spec, NormFormFamily):
        _require_evaluable(spec)
        m = norm_value_at(spec, t)
        if m == 0:
            raise UndefinedAtPoint(f"{t} lies on the boundary divisor (norm 0)")
        return all(is_norm_quadratic(m, tw.disc) for tw in spec.twists)
    if isinstance(spec, ConicBundle):
        vals = conic_values_at(spec, t)
        if any(v == 0 for v in vals):
            raise UndefinedAtPoint(f"some f_i vanishes at {t}")
        return conic_locally_soluble(*vals)
    if isinstance(spec, DiagonalConics):
        coeffs = tuple(as_fraction(x) for x in (t.coords if isinstance(t, ProjPoint) else t))
        if len(coeffs) != 3:
            raise InputError("diagonal conics are parametrized by (a, b, c)")
        if any(x == 0 for x in coeffs):
            raise UndefinedAtPoint(f"degenerate conic {coeffs}")
        return conic_locally_soluble(*coeffs)
    raise InputError(f"unknown family spec {spec!r}")


def in_open_locus(spec: FamilySpec, t) -> bool:
    try:
        if isinstance(spec, NormFormFamily):
            return norm_value_at(spec, t) != 0
        if isinstance(spec, ConicBundle):
            return all(v != 0 for v in conic_values_at(spec, t))
        coeffs = t.coords if isinstance(t, ProjPoint) else t
        return all(x != 0 for x in coeffs)
    except UndefinedAtPoint:
        return False


# --------------------------------------------------------------------------
# split / non-split fibres of conic bundles


@dataclass(frozen=True)
class FiberClassification:
    nonsplit: bool
    exact: bool
    note: str = ""

    @property
    def kind(self) -> str:
        return "nonsplit" if self.nonsplit else "split"


def _is_rational_square(x: Fraction) -> bool:
    from math import isqrt

    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def _rational_sqrt(x: Fraction) -> Fraction | None:
    from math import isqrt

    if not _is_rational_square(x):
        return None
    return Fraction(isqrt(x.numerator), isqrt(x.denominator))


def is_square_in_quadratic_field(A: Fraction, B: Fraction, D: int) -> bool:
    """Whether A + B*sqrt(D) is a square in Q(sqrt D), D a non-square integer.

    If (c + e*sqrt D)^2 = A + B*sqrt D then c^2 - D e^2 = +-n where n^2 is the
    norm and c^2 = (A +- n)/2.
    """
    n = _rational_sqrt(A * A - D * B * B)
    if n is None:
        return False
    for c2 in ((A + n) / 2, (A - n) / 2):
        if _is_rational_square(c2):
            c = _rational_sqrt(c2)
            if c != 0:
                e = B / (2 * c)
                if c * c + D * e * e == A:
                    return True
            else:
                # c = 0: need D e^2 = A, B = 0
                if B == 0 and A != 0 and _is_rational_square(A / D):
                    return True
    return False


def _roots_mod(g: Sequence[int], p: int) -> list[int]:
    return [r for r in range(p) if poly.evaluate(g, r) % p == 0]


def classify_conic_fiber(spec: ConicBundle, g: Sequence[int], i: int) -> FiberClassification:
    """Split type of the fibre over the irreducible factor g of f_i."""
    g = poly.primitive_part(g)
    if i not in (0, 1, 2) or poly.divmod_poly(spec.polys[i], g)[1]:
        raise InputError(f"{g} does not divide f{i}")
    j, k = [x for x in (0, 1, 2) if x != i]
    u = poly.mul(poly.mul(spec.polys[j], spec.polys[k]), (-1,))
    _, r = poly.divmod_poly(u, g)  # -f_j f_k reduced mod g, Fraction coefficients
    r = list(r) + [Fraction(0)] * (poly.degree(g) - len(r))
    dg = poly.degree(g)
    if dg == 1:
        alpha = Fraction(-g[0], g[1])
        val = poly.evaluate([Fraction(c) for c in r], alpha) if r else Fraction(0)
        if val == 0:
            raise InputError("f is not squarefree at this factor")
        return FiberClassification(not _is_rational_square(val), True)
    if dg == 2:
        # monic x^2 + p x + q; x = (-p + sqrt(D))/2 with D = p^2 - 4q
        p_, q_ = Fraction(g[1], g[2]), Fraction(g[0], g[2])
        Dq = p_ * p_ - 4 * q_
        # scale D to an integer in the same square class
        D = Dq.numerator * Dq.denominator
        s = Fraction(1, Dq.denominator)  # sqrt(Dq) = s * sqrt(D)
        r0, r1 = r[0], r[1]
        A = r0 - r1 * p_ / 2
        B = r1 / 2 * s
        if A == 0 and B == 0:
            raise InputError("f is not squarefree at this factor")
        return FiberClassification(not is_square_in_quadratic_field(A, B, D), True)
    # degree >= 3: reduce at primes where g has a root
    disc = int(poly.to_sympy(g).discriminant())
    bad = abs(disc * g[-1]) * lcm(*[Fraction(c).denominator for c in r])
    tested = 0
    p = 2
    while tested < MODULAR_TEST_PRIMES and p < 10**5:
        p += 1
        if not is_prime(p) or bad % p == 0:
            continue
        roots = _roots_mod(g, p)
        if not roots:
            continue
        tested += 1
        for root in roots:
            val = 0
            for c in reversed(r):
                c = Fraction(c)
                val = (val * root + c.numerator * pow(c.denominator, -1, p)) % p
            if val and kronecker(val, p) == -1:
                return FiberClassification(True, True, f"non-residue at p = {p}")
    return FiberClassification(
        False, False, f"residue at all roots mod {tested} split primes; square status not certified"
    )
