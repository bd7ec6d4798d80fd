"""F2 linear algebra on int bitsets, bigraded chain complexes, and Laurent
polynomial bookkeeping.

Vectors over F2 are Python ints: bit i is the coefficient of generator i.
All elimination pivots on the lowest set bit, i.e. the lowest generator
index, so every basis, representative and quotient coordinate is
deterministic given the generator order.

Alexander exponents are doubled everywhere: the monomial t^(a/2) is stored
under the integer key a.  Maslov exponents (the u variable) are plain ints.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional

from .errors import InvariantViolation, NoSolution, NotDivisible


# --- core elimination --------------------------------------------------------

def low_bit(v: int) -> int:
    return v & -v


class Basis:
    """Row space in echelon form with lowest-set-bit pivots (one pivot per
    low bit, so reduction touches only the support of the vector), with
    optional tracking of each row as a combination of the vectors fed to
    add()."""

    def __init__(self, vecs: Iterable[int] = ()):  # convenience constructor
        self.piv: dict[int, tuple[int, int]] = {}  # low bit -> (vector, combo)
        for v in vecs:
            self.add(v)

    def reduce(self, v: int, combo: int = 0) -> tuple[int, int]:
        out = 0
        piv = self.piv
        while v:
            b = v & -v
            hit = piv.get(b)
            if hit is None:
                out |= b
                v ^= b
            else:
                v ^= hit[0]
                combo ^= hit[1]
        return out, combo

    def add(self, v: int, combo: int = 0) -> bool:
        """Insert v; return True if it enlarged the span."""
        v, combo = self.reduce(v, combo)
        if not v:
            return False
        self.piv[low_bit(v)] = (v, combo)
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    @property
    def dim(self) -> int:
        return len(self.piv)

    def vectors(self) -> list[int]:
        return [self.piv[b][0] for b in sorted(self.piv)]


def rank(vecs: Iterable[int]) -> int:
    return Basis(vecs).dim


def mat_apply(cols: list[int], vec: int) -> int:
    """Apply the matrix with the given columns to a domain bitset."""
    out = 0
    while vec:
        out ^= cols[low_bit(vec).bit_length() - 1]
        vec &= vec - 1
    return out


def kernel_and_image(
    cols: list[int], dom: Optional[list[int]] = None
) -> tuple[list[int], Basis]:
    """Kernel basis (as domain bitsets, in domain order) and image basis of
    the map sending domain vector dom[i] (default e_i) to cols[i]."""
    if dom is None:
        dom = [1 << i for i in range(len(cols))]
    b = Basis()
    ker = []
    for v, d in zip(cols, dom):
        residue, combo = b.reduce(v, d)
        if residue:
            b.piv[low_bit(residue)] = (residue, combo)
        else:
            ker.append(combo)
    return ker, b


def solve(cols: list[int], target: int) -> int:
    """A domain bitset x with (matrix)(x) = target, or NoSolution."""
    b = Basis()
    for i, v in enumerate(cols):
        b.add(v, 1 << i)
    residue, combo = b.reduce(target)
    if residue:
        raise NoSolution("target not in column span")
    return combo


def quotient_coords(sub: Basis, reps: list[int]) -> Callable[[int], int]:
    """Coordinate map of the quotient (span(sub) + span(reps)) / span(sub) in
    the basis [reps]; raises NoSolution on vectors outside the total span."""
    piv = Basis()
    for r in sub.vectors():
        piv.add(r, 0)
    for i, r in enumerate(reps):
        if not piv.add(r, 1 << i):
            raise InvariantViolation("representatives not independent mod subspace")

    def coord(v: int) -> int:
        residue, c = piv.reduce(v)
        if residue:
            raise NoSolution("vector not in span")
        return c

    return coord


# --- bigraded complexes ------------------------------------------------------

Bigrading = tuple[int, int]  # (Maslov, doubled Alexander)


@dataclass
class Homology:
    """Homology of a bigraded complex: cycle representatives (each
    homogeneous), the boundary subspace, and the rank table."""

    reps: list[int]
    boundaries: Basis
    gradings: list[Bigrading]
    table: dict[Bigrading, int]

    @property
    def total_rank(self) -> int:
        return len(self.reps)


@dataclass
class BigradedComplex:
    """Finite F2 chain complex with (M, 2A)-homogeneous generators and a
    differential of bidegree (-1, 0)."""

    gens: list[Hashable]
    gr: dict[Hashable, Bigrading]
    cols: list[int]
    index: dict[Hashable, int] = field(default_factory=dict)

    @classmethod
    def from_boundary(cls, gens, gr, bnd) -> "BigradedComplex":
        gens = list(gens)
        index = {x: i for i, x in enumerate(gens)}
        cols = []
        for x in gens:
            v = 0
            for y in bnd(x):
                v ^= 1 << index[y]
            cols.append(v)
        return cls(gens=gens, gr=dict(gr), cols=cols, index=index)

    def __post_init__(self):
        if not self.index:
            self.index = {x: i for i, x in enumerate(self.gens)}

    @property
    def dim(self) -> int:
        return len(self.gens)

    def grading_of(self, vec: int) -> Bigrading:
        """Common bigrading of a homogeneous vector."""
        grs = set()
        while vec:
            grs.add(self.gr[self.gens[low_bit(vec).bit_length() - 1]])
            vec &= vec - 1
        if len(grs) != 1:
            raise InvariantViolation(f"vector not homogeneous: gradings {sorted(grs)}")
        return grs.pop()

    def check(self, bidegree: Bigrading = (-1, 0)) -> None:
        """Verify d^2 = 0 and homogeneity of the differential."""
        dm, da = bidegree
        for i, x in enumerate(self.gens):
            m, a = self.gr[x]
            v = self.cols[i]
            while v:
                j = low_bit(v).bit_length() - 1
                my, ay = self.gr[self.gens[j]]
                if (my - m, ay - a) != (dm, da):
                    raise InvariantViolation(
                        f"d({x}) hits {self.gens[j]}: bidegree ({my - m}, {ay - a})"
                    )
                v &= v - 1
            if mat_apply(self.cols, self.cols[i]):
                raise InvariantViolation(f"d^2 != 0 at generator {x}")

    def homology(self) -> Homology:
        ker, im = kernel_and_image(self.cols)
        acc = Basis()
        for r in im.vectors():
            acc.add(r)
        reps = [k for k in ker if acc.add(k)]
        gradings = [self.grading_of(r) for r in reps]
        table = Counter(gradings)
        return Homology(reps=reps, boundaries=im, gradings=gradings, table=dict(table))

    def solve(self, b: int) -> int:
        """y with (differential)(y) = b, or NoSolution."""
        return solve(self.cols, b)

    def induced_map(self, other: "BigradedComplex", fcols: list[int],
                    h_src: Homology, h_tgt: Homology) -> list[int]:
        """Matrix of the map induced on homology by the chain map fcols,
        in the representative coordinates of h_src and h_tgt."""
        coord = quotient_coords(h_tgt.boundaries, h_tgt.reps)
        return [coord(mat_apply(fcols, rep)) for rep in h_src.reps]


def check_chain_map(src: BigradedComplex, tgt: BigradedComplex,
                    fcols: list[int]) -> bool:
    return all(
        mat_apply(fcols, src.cols[i]) == mat_apply(tgt.cols, fcols[i])
        for i in range(src.dim)
    )


# --- Laurent polynomials -----------------------------------------------------

class TPoly:
    """Laurent polynomial in t over Z with doubled exponents: the coefficient
    of t^(a/2) is stored under key a."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = {a: v for a, v in dict(coeffs or {}).items() if v}

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __add__(self, other):
        out = Counter(self.c)
        for a, v in other.c.items():
            out[a] += v
        return TPoly(out)

    def __sub__(self, other):
        out = Counter(self.c)
        for a, v in other.c.items():
            out[a] -= v
        return TPoly(out)

    def __neg__(self):
        return TPoly({a: -v for a, v in self.c.items()})

    def __mul__(self, other):
        out = Counter()
        for a, va in self.c.items():
            for b, vb in other.c.items():
                out[a + b] += va * vb
        return TPoly(out)

    def __pow__(self, k: int):
        out = TPoly({0: 1})
        for _ in range(k):
            out = out * self
        return out

    def divide_exact(self, other: "TPoly") -> "TPoly":
        """Exact quotient; raises NotDivisible on a remainder or a divisor
        without +-1 leading coefficient."""
        if not other:
            raise NotDivisible("division by zero polynomial")
        lead = max(other.c)
        if other.c[lead] not in (1, -1):
            raise NotDivisible("divisor leading coefficient is not a unit")
        rem = dict(self.c)
        out = Counter()
        # the lowest exponent of an exact quotient (lowest terms of a product
        # never cancel, so they multiply out)
        low_shift = (min(self.c) - min(other.c)) if self.c else 0
        while rem:
            top = max(rem)
            q = rem[top] * other.c[lead]  # lead is +-1
            shift = top - lead
            if shift < low_shift:
                raise NotDivisible("remainder is not divisible")
            out[shift] += q
            for b, vb in other.c.items():
                rem[b + shift] = rem.get(b + shift, 0) - q * vb
                if rem[b + shift] == 0:
                    del rem[b + shift]
            if rem and max(rem) >= top:
                raise NotDivisible("long division does not terminate")
        return TPoly(out)

    def __repr__(self):
        return f"TPoly({self.terms()})"

    def terms(self):
        return sorted(self.c.items(), reverse=True)


ONE_MINUS_TINV = TPoly({0: 1, -2: -1})       # 1 - t^-1
THALF_MINUS = TPoly({1: 1, -1: -1})          # t^(1/2) - t^(-1/2)


class LaurentPoly2:
    """Laurent polynomial over Z in u (Maslov) and t (Alexander); keys are
    (u-exponent, doubled t-exponent)."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = {k: v for k, v in dict(coeffs or {}).items() if v}

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly2) and self.c == other.c

    def __add__(self, other):
        out = Counter(self.c)
        for k, v in other.c.items():
            out[k] += v
        return LaurentPoly2(out)

    def __mul__(self, other):
        out = Counter()
        for (m1, a1), v1 in self.c.items():
            for (m2, a2), v2 in other.c.items():
                out[(m1 + m2, a1 + a2)] += v1 * v2
        return LaurentPoly2(out)

    def __pow__(self, k: int):
        out = LaurentPoly2({(0, 0): 1})
        for _ in range(k):
            out = out * self
        return out

    def divide_exact(self, other: "LaurentPoly2") -> "LaurentPoly2":
        """Exact quotient; the divisor's lexicographically top term must have
        coefficient +-1."""
        if not other:
            raise NotDivisible("division by zero polynomial")
        lead = max(other.c)
        if other.c[lead] not in (1, -1):
            raise NotDivisible("divisor leading coefficient is not a unit")
        rem = dict(self.c)
        out = Counter()
        # lex is a monomial order, so the lex-lowest term of an exact quotient
        # is the difference of the lex-lowest terms
        if self.c:
            lo_s, lo_o = min(self.c), min(other.c)
            low_shift = (lo_s[0] - lo_o[0], lo_s[1] - lo_o[1])
        else:
            low_shift = (0, 0)
        while rem:
            top = max(rem)
            q = rem[top] * other.c[lead]
            shift = (top[0] - lead[0], top[1] - lead[1])
            if shift < low_shift:
                raise NotDivisible("remainder is not divisible")
            out[shift] += q
            for k, v in other.c.items():
                kk = (k[0] + shift[0], k[1] + shift[1])
                rem[kk] = rem.get(kk, 0) - q * v
                if rem[kk] == 0:
                    del rem[kk]
            if rem and max(rem) >= top:
                raise NotDivisible("long division does not terminate")
        return LaurentPoly2(out)

    def terms(self):
        return sorted(self.c.items(), reverse=True)

    def __repr__(self):
        return f"LaurentPoly2({self.terms()})"


V_FACTOR = LaurentPoly2({(0, 0): 1, (-1, -2): 1})  # 1 + u^-1 t^-1


def poincare(table: dict[Bigrading, int]) -> LaurentPoly2:
    """Poincare polynomial of a rank table: sum rank u^M t^A."""
    return LaurentPoly2({k: v for k, v in table.items()})


def strip_V(p: LaurentPoly2, k: int) -> LaurentPoly2:
    """Exact quotient p / (1 + u^-1 t^-1)^k."""
    out = p
    for _ in range(k):
        out = out.divide_exact(V_FACTOR)
    return out


def euler(p: LaurentPoly2) -> TPoly:
    """Graded Euler characteristic: substitute u -> -1."""
    out = Counter()
    for (m, a2), v in p.c.items():
        out[a2] += (-1) ** (m % 2) * v
    return TPoly(out)


def euler_of_table(table: dict[Bigrading, int]) -> TPoly:
    return euler(poincare(table))


def alexander_polynomial(g) -> TPoly:
    """Alexander polynomial from the graded Euler characteristic of the grid
    homology, by exact division by the extra-basepoint factors.  Knots are
    normalized so Delta(1) = 1; links and singular knots are reported as the
    raw exact quotient."""
    from .grid_model import grid_complex

    chi = euler_of_table(grid_complex(g).homology().table)
    if g.singular:
        div = ONE_MINUS_TINV ** (g.n - 1)
    else:
        div = ONE_MINUS_TINV ** (g.n - g.components) * THALF_MINUS ** (g.components - 1)
    delta = chi.divide_exact(div)
    if not g.singular and g.components == 1 and sum(delta.c.values()) < 0:
        delta = -delta
    return delta


def tensor_strip(table: dict[Bigrading, int], factor_shift: Bigrading,
                 power: int) -> dict[Bigrading, int]:
    """Invert tensoring with (F + F[shift])^power on a rank table; raises
    NotDivisible if the table is not such a tensor product."""
    cur = dict(table)
    dm, da = factor_shift
    for _ in range(power):
        nxt: Counter = Counter()
        work = Counter(cur)
        # peel greedily from the top (max M, then max A): top class must
        # come from the unshifted summand
        while work:
            key = max(k for k, v in work.items() if v)
            m, a = key
            k = work[key]
            if k <= 0:
                raise NotDivisible("rank table is not divisible by the factor")
            nxt[key] += k
            work[key] -= k
            work[(m + dm, a + da)] -= k
            work = Counter({kk: vv for kk, vv in work.items() if vv})
        if any(v < 0 for v in nxt.values()):
            raise NotDivisible("rank table is not divisible by the factor")
        cur = dict(nxt)
    return {k: v for k, v in sorted(cur.items())}
