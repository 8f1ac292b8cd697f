import random
from fractions import Fraction

import pytest

from torusdyn.dynamics import periodic_torsion_points
from torusdyn.errors import PreconditionError
from torusdyn.intlinalg import IntMatrix
from torusdyn.kummer import one_point, parse_point
from torusdyn.oracle import (
    build_embedding,
    finite_model_run,
    hypersurface_containment,
    invariant_coset_search,
    numeric_roots,
    orbit_sample,
)
from torusdyn.polyalg import IntPoly, cyclotomic, quasi_unipotence, spectral_radius
from torusdyn.torus import AffineMonomialMap

from conftest import rand_kummer


def test_finite_model_doubling_mod7():
    phi = AffineMonomialMap.build([[2]], one_point(1))
    run = finite_model_run(phi, 7)
    assert run.periods() == [1, 3, 3]
    assert run.period_of((0,)) == 1
    assert run.period_of((1,)) == 3 and run.period_of((3,)) == 3


def test_finite_model_trivial_modulus():
    phi = AffineMonomialMap.build([[5]], one_point(1))
    run = finite_model_run(phi, 1)
    assert run.periods() == [1]


def test_finite_model_shear_bijection():
    phi = AffineMonomialMap.build([[1, 1], [0, 1]], parse_point(["1", "zeta(5)"]))
    run = finite_model_run(phi, 5)
    assert sum(run.periods()) == 25
    # equivariance against the exact orbit
    x = parse_point(["zeta(5)", "zeta(5)^3"])
    state = (1, 3)
    exact = orbit_sample(phi, x, 10)
    cur = state
    for point in exact:
        assert tuple(int(c.torsion * 5) % 5 for c in point) == cur
        orbit = next(o for o in run.orbits if cur in o)
        cur = orbit[(orbit.index(cur) + 1) % len(orbit)]


def test_finite_model_preconditions():
    with pytest.raises(PreconditionError):
        finite_model_run(AffineMonomialMap.build([[2]], one_point(1)), 2)
    with pytest.raises(PreconditionError):
        finite_model_run(AffineMonomialMap.build([[1]], parse_point(["2"])), 3)


def test_finite_model_agrees_with_periodic_points():
    a2 = IntMatrix.from_rows([[2, 1], [1, 1]])
    phi = AffineMonomialMap(a2, one_point(2))
    for d in (3, 5, 7):
        run = finite_model_run(phi, d)
        for point, period in periodic_torsion_points(a2, d, budget=200):
            state = tuple(int(c.torsion * d) % d for c in point)
            assert run.period_of(state) == period


def test_numeric_roots_examples():
    roots = sorted(abs(z) for z in numeric_roots(IntPoly.from_coeffs([1, -3, 1])))
    assert abs(roots[0] - 0.3819660113) < 1e-9
    assert abs(roots[1] - 2.6180339887) < 1e-9
    assert [round(abs(z), 9) for z in numeric_roots(IntPoly.from_coeffs([-1, 1]))] == [1.0]
    assert all(abs(abs(z) - 1) < 1e-9 for z in numeric_roots(cyclotomic(4)))
    with pytest.raises(PreconditionError):
        numeric_roots(IntPoly.one())


def test_numeric_roots_agree_with_exact_classification():
    rng = random.Random(600)
    for _ in range(100):
        deg = rng.randint(1, 6)
        coeffs = [rng.randint(-8, 8) for _ in range(deg)] + [1]
        p = IntPoly.from_coeffs(coeffs)
        qu = quasi_unipotence(p)
        near_one = all(abs(abs(z) - 1) < 1e-9 for z in numeric_roots(p))
        assert (qu is not None) == near_one
        lo, hi = spectral_radius(p, Fraction(1, 10**4))
        top = max(abs(z) for z in numeric_roots(p))
        assert float(lo) - 1e-9 <= top <= float(hi) + 1e-9


def test_embedding_is_homomorphism():
    rng = random.Random(601)
    vals = [rand_kummer(rng) for _ in range(8)]
    emb, _ = build_embedding(vals, random.Random(0))
    q = emb.prime
    for _ in range(40):
        a, b = rng.choice(vals), rng.choice(vals)
        assert emb.embed(a * b) == emb.embed(a) * emb.embed(b) % q
        assert emb.embed(a.inverse()) == pow(emb.embed(a), -1, q)


def test_containment_orbit_example():
    phi = AffineMonomialMap.build([[1, 0], [0, 1]], parse_point(["2", "3"]))
    pts = orbit_sample(phi, one_point(2), 21)
    res = hypersurface_containment(pts, 3, seed=0)
    assert res.not_contained and res.rank == res.monomial_count == 10


def test_containment_equal_points_undecided():
    pts = [parse_point(["2", "3"])] * 12
    res = hypersurface_containment(pts, 1, seed=0)
    assert res.status == "UNDECIDED"


def test_containment_too_few_points():
    res = hypersurface_containment([one_point(2)], 3, seed=0)
    assert res.status == "UNDECIDED" and res.attempts == 0


def test_containment_vertical_cosets():
    # five cosets {y = zeta_5^k} with five samples each: no conic contains all 25
    pts = []
    for k in range(5):
        for t in (2, 3, 5, 7, 11):
            pts.append(parse_point([str(t), f"zeta(5)^{k}" if k else "1"]))
    res = hypersurface_containment(pts, 2, seed=1)
    assert res.not_contained and res.monomial_count == 6


def test_containment_replay_stability():
    phi = AffineMonomialMap.build([[1, 0], [0, 1]], parse_point(["2", "3"]))
    pts = orbit_sample(phi, one_point(2), 25)
    primes = set()
    for seed in range(5):
        res = hypersurface_containment(pts, 3, seed=seed)
        assert res.not_contained
        primes.add(res.prime)
    assert len(primes) > 1  # genuinely different certificates, same verdict


def test_containment_preconditions():
    with pytest.raises(PreconditionError):
        hypersurface_containment([], 3)
    with pytest.raises(PreconditionError):
        hypersurface_containment([one_point(2)], 0)


def test_orbit_sample_examples():
    phi = AffineMonomialMap.build([[1, 0], [0, 1]], parse_point(["2", "3"]))
    orbit = orbit_sample(phi, one_point(2), 4)
    assert orbit == [
        one_point(2),
        parse_point(["2", "3"]),
        parse_point(["4", "9"]),
        parse_point(["8", "27"]),
    ]
    ident = AffineMonomialMap.build([[1, 0], [0, 1]], one_point(2))
    assert orbit_sample(ident, parse_point(["5", "7"]), 3) == [parse_point(["5", "7"])] * 3
    shear = AffineMonomialMap.build([[1, 1], [0, 1]], parse_point(["1", "3"]))
    assert orbit_sample(shear, one_point(2), 3) == [
        one_point(2),
        parse_point(["1", "3"]),
        parse_point(["3", "9"]),
    ]


def test_coset_search_finds_fibration_cosets():
    phi = AffineMonomialMap.build([[2, 0], [0, 1]], one_point(2))
    found = invariant_coset_search(phi, 4)
    assert found
    from torusdyn.intlinalg import Lattice

    assert any(lat == Lattice.from_rows(2, [[0, 1]]) for lat, _ in found)


def test_coset_search_wild_map_empty():
    phi = AffineMonomialMap.build([[1, 0], [0, 1]], parse_point(["2", "3"]))
    assert invariant_coset_search(phi, 12) == []


def test_coset_search_hyperbolic_fixed_point():
    phi = AffineMonomialMap.build([[2, 1], [1, 1]], one_point(2))
    found = invariant_coset_search(phi, 2)
    from torusdyn.intlinalg import Lattice

    assert any(lat == Lattice.full(2) and ell == 1 for lat, ell in found)
