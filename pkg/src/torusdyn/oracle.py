"""Independent verification: finite models, numeric roots, modular density tests.

Nothing here feeds the exact classification path; these are the cross-checks.
The one numeric ingredient in the whole package (companion-matrix eigenvalues)
lives here, as does the randomized-prime machinery, which takes explicit seeds
so runs are reproducible.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import OracleError, PreconditionError
from .intlinalg import (
    IntMatrix,
    Lattice,
    charpoly,
    left_kernel_saturated,
    mat_vec,
    solve_rational,
    vec_mat,
)
from .kummer import KummerNumber, Point, char_eval
from .polyalg import IntPoly, cyclotomic_part, divisors
from .torus import AffineMonomialMap

_STATE_SPACE_CAP = 200_000


# -- finite dynamical models ---------------------------------------------------


@dataclass(frozen=True)
class FiniteModelRun:
    """Full orbit decomposition of u -> A*u + g on (Z/d)^n.

    The map is a bijection because gcd(d, det A) = 1, so the state space
    splits into disjoint cycles; ``orbits`` lists them, each as a tuple of
    states in visiting order.
    """

    modulus: int
    dimension: int
    matrix_mod: tuple[tuple[int, ...], ...]
    translation_exponents: tuple[int, ...]
    orbits: tuple[tuple[tuple[int, ...], ...], ...]

    def period_of(self, state: tuple[int, ...]) -> int:
        for orbit in self.orbits:
            if state in orbit:
                return len(orbit)
        raise KeyError(state)

    def periods(self) -> list[int]:
        return sorted(len(o) for o in self.orbits)


def finite_model_run(phi: AffineMonomialMap, d: int) -> FiniteModelRun:
    """Exhaust the orbit structure of phi reduced modulo d-torsion.

    Requires every coordinate of the translation to be torsion of order
    dividing d, and gcd(d, |det A|) = 1 so the reduced map is a bijection.
    """
    if d < 1:
        raise PreconditionError("modulus must be positive")
    n = phi.dim
    if math.gcd(d, abs(phi.det)) != 1:
        raise PreconditionError(f"modulus {d} shares a factor with |det A| = {abs(phi.det)}")
    g = []
    for coord in phi.translation:
        if not coord.is_torsion():
            raise PreconditionError("translation must be torsion for a finite model")
        t = coord.torsion
        if d % t.denominator != 0:
            raise PreconditionError(f"translation order {t.denominator} does not divide {d}")
        g.append(t.numerator * (d // t.denominator) % d)
    if d**n > _STATE_SPACE_CAP:
        raise PreconditionError(f"state space {d}^{n} exceeds {_STATE_SPACE_CAP}")
    amod = phi.matrix.mod(d)

    def step(u: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((x + gg) % d for x, gg in zip(mat_vec(amod, u), g))

    seen: set[tuple[int, ...]] = set()
    orbits: list[tuple[tuple[int, ...], ...]] = []
    for u in itertools.product(range(d), repeat=n):
        if u in seen:
            continue
        orbit = [u]
        v = step(u)
        while v != u:
            orbit.append(v)
            v = step(v)
        seen.update(orbit)
        orbits.append(tuple(orbit))
    return FiniteModelRun(d, n, tuple(tuple(r) for r in amod.to_rows()), tuple(g), tuple(orbits))


# -- numeric roots ---------------------------------------------------------------


def numeric_roots(p: IntPoly, tol: float = 1e-9) -> list[complex]:
    """Roots of p as floating approximations (companion-matrix eigenvalues).

    Every root is residual-checked: |p(root)| must not exceed tol times the
    coefficient scale at that root, else an OracleError reports
    non-convergence.
    """
    if p.degree < 1:
        raise PreconditionError("numeric_roots requires degree >= 1")
    roots = np.roots([float(c) for c in reversed(p.coeffs)])
    out = []
    for z in roots:
        z = complex(z)
        val = 0j
        for c in reversed(p.coeffs):
            val = val * z + c
        scale = sum(abs(c) * max(1.0, abs(z)) ** i for i, c in enumerate(p.coeffs))
        if abs(val) > tol * scale:
            raise OracleError(f"root {z} of {p} did not converge: residual {abs(val):.3g}")
        out.append(z)
    return out


# -- modular embeddings ------------------------------------------------------------


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _generator_mod(q: int) -> int:
    fac = []
    m = q - 1
    f = 2
    while f * f <= m:
        if m % f == 0:
            fac.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        fac.append(m)
    for g in range(2, q):
        if all(pow(g, (q - 1) // pf, q) != 1 for pf in fac):
            return g
    raise AssertionError("no generator found")


def _discrete_log(q: int, g: int, h: int) -> int:
    """Baby-step giant-step solution of g^x = h (mod q)."""
    m = math.isqrt(q - 1) + 1
    table = {}
    cur = 1
    for j in range(m):
        table.setdefault(cur, j)
        cur = cur * g % q
    factor = pow(g, -m, q)
    y = h % q
    for i in range(m):
        if y in table:
            return (i * m + table[y]) % (q - 1)
        y = y * factor % q
    raise AssertionError("discrete log not found")


@dataclass(frozen=True)
class ModularEmbedding:
    """Specialization of the subgroup generated by given coordinates into F_q^*.

    Torsion goes to elements of exact matching order (q = 1 mod the lcm M of
    torsion orders); each base prime p goes through a discrete logarithm
    divisible by every exponent denominator that p carries, so rational
    powers land on actual group elements.

    Branch consistency: square roots of primes are the one place where the
    complex values satisfy additive identities with roots of unity (Gauss
    sums, e.g. sqrt(3) = zeta_12 + 1/zeta_12).  Whenever the quadratic field
    Q(sqrt(D)) generated by a product of the embedded radicals lies inside
    Q(zeta_M), the chosen branches are corrected against the Gauss-sum value
    modulo q, so the embedding extends to a ring specialization and linear
    relations over characteristic zero reduce faithfully.  Higher radicals
    (cube roots and beyond) never meet cyclotomic fields, so no further
    constraints exist.
    """

    prime: int
    generator: int
    torsion_lcm: int
    prime_logs: tuple[tuple[int, int], ...]

    def embed(self, x: KummerNumber) -> int:
        q = self.prime
        exp = x.torsion.numerator * ((q - 1) // x.torsion.denominator)
        logs = dict(self.prime_logs)
        for p, e in x.primes:
            lg = logs[p]
            num = e.numerator * lg
            assert num % e.denominator == 0
            exp += num // e.denominator
        return pow(self.generator, exp % (q - 1), q)


def _cyclotomic_sqrt_mod(d: int, q: int, g: int) -> int:
    """Image of the positive square root of squarefree d under zeta_k -> g^((q-1)/k).

    Uses the classical quadratic Gauss sum for the odd part and
    zeta_8 + 1/zeta_8 for the factor 2; requires the relevant roots of unity
    to exist mod q (the caller checks disc(Q(sqrt d)) | q - 1).
    """
    val = 1
    d0 = d
    if d0 % 2 == 0:
        z8 = pow(g, (q - 1) // 8, q)
        val = (z8 + pow(z8, -1, q)) % q
        d0 //= 2
    if d0 > 1:
        zd = pow(g, (q - 1) // d0, q)
        gauss = sum(pow(zd, (a * a) % d0, q) for a in range(d0)) % q
        if d0 % 4 == 3:
            i4 = pow(g, (q - 1) // 4, q)
            gauss = gauss * pow(i4, -1, q) % q
        val = val * gauss % q
    assert val * val % q == d % q
    return val


def _consistent_branches(needed: dict[int, int], logs: dict[int, int], torsion_lcm: int, q: int, g: int) -> dict[int, int] | None:
    """Flip square-root branches (log += q-1) so every quadratic subfield of the
    torsion's cyclotomic field gets its Gauss-sum value.  Returns adjusted logs,
    or None if no consistent assignment exists modulo this prime."""
    even = sorted(p for p, n_p in needed.items() if n_p % 2 == 0)
    if not even:
        return logs
    rows = []  # (mask over `even`, required flip parity)
    for r in range(1, len(even) + 1):
        for subset in itertools.combinations(range(len(even)), r):
            d = math.prod(even[i] for i in subset)
            disc = d if d % 4 == 1 else 4 * d
            if torsion_lcm % disc != 0:
                continue
            cur = 1
            for i in subset:
                cur = cur * pow(g, (logs[even[i]] // 2) % (q - 1), q) % q
            target = _cyclotomic_sqrt_mod(d, q, g)
            if cur == target:
                delta = 0
            elif cur == (q - target) % q:
                delta = 1
            else:
                return None
            mask = 0
            for i in subset:
                mask |= 1 << i
            rows.append((mask, delta))
    # solve the F2 system for the flip pattern (kept in reduced echelon form)
    pivots: list[tuple[int, int, int]] = []  # (pivot_bit, mask, delta)
    for mask, delta in rows:
        for pb, pm, pd in pivots:
            if mask >> pb & 1:
                mask ^= pm
                delta ^= pd
        if mask == 0:
            if delta:
                return None
            continue
        pb = mask.bit_length() - 1
        pivots = [
            (qb, qm ^ mask, qd ^ delta) if qm >> pb & 1 else (qb, qm, qd) for qb, qm, qd in pivots
        ]
        pivots.append((pb, mask, delta))
    flips = 0
    for pb, _, pd in pivots:  # free variables stay unflipped
        if pd:
            flips |= 1 << pb
    out = dict(logs)
    for i, p in enumerate(even):
        if flips >> i & 1:
            out[p] = logs[p] + (q - 1)
    return out


def _try_embedding(values: list[KummerNumber], q: int) -> ModularEmbedding | None:
    torsion_lcm = math.lcm(*(v.torsion.denominator for v in values)) if values else 1
    if (q - 1) % torsion_lcm != 0:
        return None
    needed: dict[int, int] = {}
    for v in values:
        for p, e in v.primes:
            needed[p] = math.lcm(needed.get(p, 1), e.denominator)
    if any(p % q == 0 for p in needed):
        return None
    g = _generator_mod(q)
    logs: dict[int, int] = {}
    for p, n_p in sorted(needed.items()):
        lg = _discrete_log(q, g, p % q)
        if lg % n_p != 0:
            return None
        logs[p] = lg
    logs = _consistent_branches(needed, logs, torsion_lcm, q, g)
    if logs is None:
        return None
    emb = ModularEmbedding(q, g, torsion_lcm, tuple(sorted(logs.items())))
    # homomorphism spot-checks on the generators
    for p in logs:
        assert emb.embed(KummerNumber.from_rational(p)) == p % q
    if torsion_lcm > 1:
        z = emb.embed(KummerNumber.root_of_unity(torsion_lcm))
        assert pow(z, torsion_lcm, q) == 1 and all(
            pow(z, torsion_lcm // f, q) != 1 for f in (2, 3, 5, 7, 11) if torsion_lcm % f == 0
        )
    return emb


def build_embedding(
    values: list[KummerNumber], rng: random.Random, retries: int = 32
) -> tuple[ModularEmbedding, int]:
    """Construct an embedding, retrying over random admissible primes.

    Admissibility of q (every base prime an N_p-th power residue) is decided
    by one modular exponentiation per base prime, so the scan can afford the
    roughly prod(N_p) candidates it takes to find an admissible one; the
    expensive generator/discrete-log construction only runs on survivors.
    Returns (embedding, admissible primes tried).  Raises OracleError when
    the budget is exhausted.
    """
    torsion_lcm = math.lcm(*(v.torsion.denominator for v in values)) if values else 1
    needed: dict[int, int] = {}
    for v in values:
        for p, e in v.primes:
            needed[p] = math.lcm(needed.get(p, 1), e.denominator)
    step = math.lcm(torsion_lcm, *needed.values()) if needed else torsion_lcm
    expected = math.prod(needed.values()) if needed else 1
    t_lo = max(2, (1 << 20) // step)
    span = max(1 << 14, 512 * expected)
    t = rng.randrange(t_lo, t_lo + span)
    wrap = t_lo + 2 * span
    attempts = 0
    scanned = 0
    scan_cap = 8 * span
    while attempts < retries and scanned < scan_cap:
        scanned += 1
        q = step * t + 1
        t = t + 1 if t + 1 < wrap else t_lo
        if not _is_prime(q):
            continue
        if any(p % q == 0 or pow(p, (q - 1) // n_p, q) != 1 for p, n_p in needed.items()):
            continue
        attempts += 1
        emb = _try_embedding(values, q)
        if emb is not None:
            return emb, attempts
    raise OracleError(f"no admissible prime found ({attempts} candidates in {scanned} scanned)")


# -- hypersurface containment refutation ----------------------------------------------


@dataclass(frozen=True)
class ContainmentResult:
    """Outcome of the low-degree hypersurface test.

    NOT_CONTAINED certifies (through a modular specialization) that no
    nonzero polynomial of total degree <= degree_bound vanishes on all the
    points.  UNDECIDED is always inconclusive, never a containment claim.
    """

    status: str
    degree_bound: int
    point_count: int
    monomial_count: int
    prime: int | None
    rank: int | None
    attempts: int

    @property
    def not_contained(self) -> bool:
        return self.status == "NOT_CONTAINED"


def _monomials(n: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    def rec(prefix, remaining, left):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for e in range(left + 1):
            rec(prefix + [e], remaining - 1, left - e)
    rec([], n, degree)
    return sorted(out)


def _rank_mod(rows: list[list[int]], q: int) -> int:
    work = [list(r) for r in rows]
    rank = 0
    ncols = len(work[0]) if work else 0
    for j in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][j] % q), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][j], -1, q)
        work[rank] = [x * inv % q for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][j] % q:
                f = work[i][j]
                work[i] = [(x - f * y) % q for x, y in zip(work[i], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def hypersurface_containment(
    points: list[Point], degree_bound: int, seed: int = 0, retries: int = 32
) -> ContainmentResult:
    """One-sided test that no hypersurface of bounded degree contains all points.

    The monomial evaluation matrix (rows = points, columns = monomials of
    total degree <= degree_bound, constants included) is pushed through a
    modular embedding; full column rank modulo the chosen prime refutes any
    vanishing relation in characteristic zero.  Rank deficits trigger a
    retry with a fresh prime and finally UNDECIDED.
    """
    if not points:
        raise PreconditionError("need at least one point")
    if degree_bound < 1:
        raise PreconditionError("degree bound must be >= 1")
    n = len(points[0])
    if any(len(p) != n for p in points):
        raise PreconditionError("points of mixed dimension")
    monos = _monomials(n, degree_bound)
    if len(points) < len(monos):
        return ContainmentResult("UNDECIDED", degree_bound, len(points), len(monos), None, None, 0)
    # translating the whole configuration by a fixed torus element maps the
    # degree <= D hypersurfaces bijectively onto themselves, so dividing out
    # the first point preserves the verdict while cancelling shared radicals
    shift = tuple(c.inverse() for c in points[0])
    moved = [tuple(a * s for a, s in zip(p, shift)) for p in points]
    coords = [c for p in moved for c in p]
    values = [[char_eval(p, m) for m in monos] for p in moved]
    rng = random.Random(seed)
    attempts = 0
    while attempts < retries:
        try:
            emb, used = build_embedding(coords, rng, retries - attempts)
        except OracleError:
            break
        attempts += used
        rows = [[emb.embed(v) for v in row] for row in values]
        rank = _rank_mod(rows, emb.prime)
        if rank == len(monos):
            return ContainmentResult(
                "NOT_CONTAINED", degree_bound, len(points), len(monos), emb.prime, rank, attempts
            )
    return ContainmentResult("UNDECIDED", degree_bound, len(points), len(monos), None, None, attempts)


# -- exact orbit prefixes ---------------------------------------------------------------


def orbit_sample(phi: AffineMonomialMap, x: Point, n: int) -> list[Point]:
    """The exact orbit prefix x, phi(x), ..., phi^(n-1)(x)."""
    if n < 1:
        raise PreconditionError("orbit length must be >= 1")
    return phi.orbit(x, n)


# -- brute-force invariant coset search ---------------------------------------------------


def _hnf_lattices_bounded(n: int, cap: int):
    """All nonzero sublattices of Z^n with canonical HNF entries bounded by cap
    (and determinant <= cap when full rank).  Exponential in n; a desk-scale
    device for n <= 3.

    Enumeration is directly over canonical Hermite forms: pick pivot columns,
    positive pivot values <= cap, entries above a later pivot reduced into
    [0, that pivot), and free entries in [-cap, cap].
    """
    for k in range(1, n + 1):
        for pivots in itertools.combinations(range(n), k):
            for piv_vals in itertools.product(range(1, cap + 1), repeat=k):
                if k == n:
                    det = math.prod(piv_vals)
                    if det > cap:
                        continue
                per_row = []
                for i in range(k):
                    choices = []
                    for col in range(pivots[i] + 1, n):
                        if col in pivots:
                            choices.append(range(0, piv_vals[pivots.index(col)]))
                        else:
                            choices.append(range(-cap, cap + 1))
                    per_row.append(list(itertools.product(*choices)))
                for tails in itertools.product(*per_row):
                    rows = tuple(
                        (0,) * pivots[i] + (piv_vals[i],) + tuple(tails[i]) for i in range(k)
                    )
                    yield Lattice(n, rows)


def _solvable_over_divisible(m: IntMatrix, rhs: list[KummerNumber]) -> bool:
    """Whether m * e(c) = exponents(rhs) has a solution point c, layer by layer."""
    for p in sorted({q for v in rhs for q in v.prime_support()}):
        if solve_rational(m, [v.prime_exponent(p) for v in rhs]) is None:
            return False
    torsion = [v.torsion for v in rhs]
    for u in left_kernel_saturated(m).basis:
        if sum(Fraction(ui) * t for ui, t in zip(u, torsion)) % 1 != 0:
            return False
    return True


def invariant_coset_search(
    phi: AffineMonomialMap, index_cap: int, extra_periods: int = 12, iterate_cap: int = 360
) -> list[tuple[Lattice, int]]:
    """Exhaustively search for periodic cosets of bounded complexity.

    Candidate annihilator lattices run over every nonzero sublattice of the
    character lattice with HNF entries (and full-rank index) bounded by
    index_cap; candidate periods over the fixed-character iterate set plus
    1..extra_periods.  A pair (L, l) is reported when the subgroup cut out by
    L satisfies L*A^l = L and the coset equation phi^l(c*H) = c*H is solvable
    for some base point c, decided exactly over the divisible coordinate
    group.  An empty result certifies that no invariant proper coset (hence
    no proper invariant subvariety built from them) exists at this scale.
    """
    n = phi.dim
    a = phi.matrix
    factors, _ = cyclotomic_part(charpoly(a))
    periods = set(range(1, extra_periods + 1))
    if factors:
        periods.update(divisors(math.lcm(*(d for d, _ in factors))))
    periods = sorted(ell for ell in periods if ell <= iterate_cap)
    eye = IntMatrix.identity(n)
    per_ell = []
    for ell in periods:
        it = phi.iterate(ell)
        gamma_l = it.translation
        primes = sorted({p for c in gamma_l for p in c.prime_support()})
        exps = {p: [c.prime_exponent(p) for c in gamma_l] for p in primes}
        tors = [c.torsion for c in gamma_l]
        per_ell.append((ell, it.matrix, it.matrix - eye, gamma_l, exps, tors))
    found: list[tuple[Lattice, int]] = []
    for lat in _hnf_lattices_bounded(n, index_cap):
        basis = lat.basis
        for ell, alc, alc_m1, gamma_l, exps, tors in per_ell:
            moved = Lattice.from_rows(n, [vec_mat(b, alc) for b in basis])
            if moved != lat:
                continue
            m_rows = [vec_mat(b, alc_m1) for b in basis]
            if all(x == 0 for row in m_rows for x in row):
                # the coset equation degenerates to chi_b(gamma_l) = 1 for all b
                ok = all(
                    all(sum(b[j] * e[j] for j in range(n)) == 0 for e in exps.values())
                    and sum(b[j] * tors[j] for j in range(n)) % 1 == 0
                    for b in basis
                )
            else:
                m = IntMatrix.from_rows(m_rows, n)
                rhs = [char_eval(gamma_l, b).inverse() for b in basis]
                ok = _solvable_over_divisible(m, rhs)
            if ok:
                found.append((lat, ell))
                break
    return found
