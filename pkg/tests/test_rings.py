import random

import pytest

from koszulkit.errors import DomainMismatchError, InvalidInputError, NotFactorableError
from koszulkit.rings import ZZ, fpx, is_prime, ring_from_token

F2 = fpx(2)
F3 = fpx(3)


def test_ext_gcd_integers():
    g, s, t = ZZ.ext_gcd(6, 4)
    assert g == 2
    assert s * 6 + t * 4 == 2


def test_ext_gcd_absorbing_zero():
    for a in (5, -5, 0):
        g, s, t = ZZ.ext_gcd(a, 0)
        assert g == abs(a)
        assert t == 0
        assert s * a == g


def test_ext_gcd_f2_polynomials():
    x2p1 = F2.poly([1, 0, 1])
    xp1 = F2.poly([1, 1])
    g, s, t = F2.ext_gcd(x2p1, xp1)
    assert g == xp1
    # Bezout identity and divisibility, checked by re-multiplication.
    assert F2.add(F2.mul(s, x2p1), F2.mul(t, xp1)) == g
    assert F2.mul(g, F2.div_exact(x2p1, g)) == x2p1
    assert F2.mul(g, F2.div_exact(xp1, g)) == xp1


@pytest.mark.parametrize("ring,seed", [(ZZ, 1), (F2, 2), (F3, 3)])
def test_ext_gcd_properties(ring, seed):
    rng = random.Random(seed)
    for _ in range(200):
        if ring is ZZ:
            a, b = rng.randint(-40, 40), rng.randint(-40, 40)
        else:
            a = ring.poly([rng.randrange(ring.p) for _ in range(rng.randint(0, 4))])
            b = ring.poly([rng.randrange(ring.p) for _ in range(rng.randint(0, 4))])
        g, s, t = ring.ext_gcd(a, b)
        assert ring.add(ring.mul(s, a), ring.mul(t, b)) == g
        assert ring.divides(g, a) and ring.divides(g, b)
        # canonical associate
        assert ring.normalize(g)[1] == g


def test_normalize_examples():
    assert ZZ.normalize(-6) == (-1, 6)
    assert ZZ.normalize(0) == (1, 0)
    unit, canon = F3.normalize(F3.poly([2, 2]))
    assert canon == F3.poly([1, 1])
    assert F3.mul(unit, canon) == F3.poly([2, 2])


@pytest.mark.parametrize("ring", [ZZ, F2, F3])
def test_normalize_idempotent(ring):
    rng = random.Random(17)
    for _ in range(100):
        if ring is ZZ:
            a = rng.randint(-50, 50)
        else:
            a = ring.poly([rng.randrange(ring.p) for _ in range(rng.randint(0, 4))])
        _, canon = ring.normalize(a)
        assert ring.normalize(canon) == (ring.one, canon)


def test_factor_examples():
    assert ZZ.factor(12) == {2: 2, 3: 1}
    assert ZZ.factor(7) == {7: 1}
    assert F2.factor(F2.poly([0, 1, 1])) == {F2.poly([0, 1]): 1, F2.poly([1, 1]): 1}


@pytest.mark.parametrize("ring,seed", [(ZZ, 5), (F2, 6), (F3, 7)])
def test_factor_remultiplies(ring, seed):
    rng = random.Random(seed)
    for _ in range(60):
        if ring is ZZ:
            a = rng.randint(2, 4000) * rng.choice((1, -1))
        else:
            a = ring.poly([rng.randrange(ring.p) for _ in range(rng.randint(2, 5))])
            if ring.is_zero(a) or ring.is_unit(a):
                continue
        unit, _ = ring.normalize(a)
        product = unit
        for p, mult in ring.factor(a).items():
            assert ring.is_canonical_prime(p)
            for _ in range(mult):
                product = ring.mul(product, p)
        assert product == a


def test_factor_rejects_zero_and_units():
    with pytest.raises(NotFactorableError):
        ZZ.factor(0)
    with pytest.raises(NotFactorableError):
        ZZ.factor(-1)
    with pytest.raises(NotFactorableError):
        F2.factor(F2.one)


def test_domain_mismatch():
    with pytest.raises(DomainMismatchError):
        ZZ.ext_gcd(6, (1,))
    with pytest.raises(DomainMismatchError):
        F3.ext_gcd((1, 2), 5)
    with pytest.raises(DomainMismatchError):
        F3.validate((1, 5))
    with pytest.raises(DomainMismatchError):
        F3.validate((1, 0))
    with pytest.raises(DomainMismatchError):
        ZZ.validate(True)


def test_prime_field_requires_prime():
    with pytest.raises(InvalidInputError):
        fpx(4)
    assert is_prime(2) and is_prime(97) and not is_prime(91)


def test_ring_tokens():
    assert ring_from_token("Z") is ZZ
    assert ring_from_token("fpx:5").p == 5
    with pytest.raises(InvalidInputError):
        ring_from_token("fpx:abc")
    with pytest.raises(InvalidInputError):
        ring_from_token("Q")


def test_polynomial_division():
    a = F3.poly([1, 0, 2, 1])
    b = F3.poly([2, 1])
    q, r = F3.divmod(a, b)
    assert F3.add(F3.mul(q, b), r) == a
    assert F3.measure(r) < F3.measure(b)
