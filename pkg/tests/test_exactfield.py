import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsla.errors import NonSplit, NoSuchRoot
from gsla.fields import (
    Cyclotomic,
    PrimeField,
    Rationals,
    cyclotomic_polynomial,
    poly_mul,
    rational_reconstruct,
)
from gsla.idempotent import CommAlgebra, idempotents_commutative
from gsla.linalg import Matrix, Subspace

Q = Rationals()
F = Fraction


def mat(rows):
    return Matrix(Q, [[F(x) for x in r] for r in rows])


# ----------------------------------------------------------------------
# cyclotomic polynomials
# ----------------------------------------------------------------------

def test_cyclotomic_base_cases():
    assert cyclotomic_polynomial(1) == (F(-1), F(1))         # t - 1
    assert cyclotomic_polynomial(4) == (F(1), F(0), F(1))    # t^2 + 1
    assert cyclotomic_polynomial(6) == (F(1), F(-1), F(1))   # t^2 - t + 1


@pytest.mark.parametrize("n", range(1, 25))
def test_cyclotomic_product_property(n):
    prod = [F(1)]
    for d in range(1, n + 1):
        if n % d == 0:
            prod = poly_mul(prod, list(cyclotomic_polynomial(d)))
    target = [F(-1)] + [F(0)] * (n - 1) + [F(1)]
    assert prod == target


# ----------------------------------------------------------------------
# field arithmetic and inverses
# ----------------------------------------------------------------------

def test_field_inv_identity():
    assert Q.inv(Q.one()) == Q.one()


def test_field_inv_cyclotomic_zeta4():
    K = Cyclotomic(4)
    z = K.zeta()
    assert K.inv(z) == K.neg(z)            # 1/zeta = -zeta since zeta^2 = -1
    assert K.mul(z, K.inv(z)) == K.one()


def test_field_inv_prime_97():
    Fp = PrimeField(97)
    assert Fp.inv(3) == 65                 # 3*65 = 195 = 2*97 + 1
    assert Fp.mul(3, 65) == 1


@given(st.fractions(min_value=-50, max_value=50).filter(lambda q: q != 0))
def test_inv_involution_rationals(q):
    assert Q.inv(Q.inv(q)) == q
    assert Q.mul(q, Q.inv(q)) == Q.one()


@given(st.lists(st.integers(min_value=-5, max_value=5), min_size=2, max_size=2))
def test_inv_involution_cyclotomic(coords):
    K = Cyclotomic(4)
    a = tuple(F(c) for c in coords)
    if K.is_zero(a):
        return
    assert K.inv(K.inv(a)) == a
    assert K.mul(a, K.inv(a)) == K.one()


def test_primitive_roots():
    K = Cyclotomic(4)
    assert K.root_of_unity(4) == K.zeta()
    assert Q.root_of_unity(2) == F(-1)
    assert PrimeField(7).root_of_unity(3) == 2  # ord(2) mod 7 is 3: 2, 4, 1
    with pytest.raises(NoSuchRoot):
        Q.root_of_unity(3)
    with pytest.raises(NoSuchRoot):
        Cyclotomic(3).root_of_unity(6)  # m | n rule is literal
    with pytest.raises(NoSuchRoot):
        PrimeField(7).root_of_unity(5)


def test_root_orders_are_exact():
    K = Cyclotomic(12)
    for m in (1, 2, 3, 4, 6, 12):
        w = K.root_of_unity(m)
        x = K.one()
        for k in range(1, m):
            x = K.mul(x, w)
            assert x != K.one()
        assert K.mul(x, w) == K.one()


def test_scalar_literals_round_trip():
    K = Cyclotomic(4)
    a = K.parse("1/2 - 3*z^2")
    assert a == K.add(K.from_fraction(F(1, 2)), K.scale(K.mul(K.zeta(), K.zeta()), F(-3)))
    assert K.parse(K.format(a)) == a
    assert Q.parse("-7/3") == F(-7, 3)
    assert PrimeField(11).parse("13") == 2


# ----------------------------------------------------------------------
# rref / kernel / subspaces
# ----------------------------------------------------------------------

def test_rref_examples():
    red, rank, _ = mat([[0, 0], [0, 0]]).rref()
    assert rank == 0
    red, rank, _ = mat([[1, 1], [1, -1]]).rref()
    assert rank == 2 and red.rows == Matrix.identity(Q, 2).rows
    red, rank, _ = mat([[2, 4]]).rref()
    assert rank == 1 and red.rows[0] == [F(1), F(2)]


@given(
    st.lists(
        st.lists(st.integers(min_value=-4, max_value=4), min_size=3, max_size=3),
        min_size=1,
        max_size=4,
    )
)
@settings(max_examples=60)
def test_rref_idempotent_and_canonical(rows):
    m = mat(rows)
    red, rank, piv = m.rref()
    again, rank2, piv2 = red.rref()
    assert again.rows == red.rows and rank == rank2 and piv == piv2
    # shuffling rows and adding multiples preserves the row space, hence the RREF
    rng = random.Random(7)
    rows2 = [list(r) for r in rows]
    rng.shuffle(rows2)
    if len(rows2) > 1:
        rows2[0] = [a + 2 * b for a, b in zip(rows2[0], rows2[1])]
    red2 = mat(rows2).rref()[0]
    keep = [r for r in red.rows if any(x != 0 for x in r)]
    keep2 = [r for r in red2.rows if any(x != 0 for x in r)]
    assert keep == keep2


def test_kernel_examples():
    assert Matrix.identity(Q, 3).kernel().nrows == 0
    k = mat([[1, 1]]).kernel()
    assert k.rows == [[F(1), F(-1)]]
    assert mat([[1, 2], [2, 4]]).kernel().nrows == 1


def sub(vectors, ambient=3):
    return Subspace.from_vectors(Q, ambient, [[F(x) for x in v] for v in vectors])


def test_intersection_examples():
    u = sub([[1, 0, 0], [0, 1, 0]])
    assert u.intersect(u) == u
    e1, e2 = sub([[1, 0, 0]]), sub([[0, 1, 0]])
    assert e1.intersect(e2).is_zero()
    v = sub([[0, 1, 0], [0, 0, 1]])
    assert u.intersect(v) == sub([[0, 1, 0]])


def enumerate_subspace(field, space):
    """Brute-force element set of a subspace over a small prime field."""
    p = field.p
    elems = set()
    rows = space.basis()
    coeffs = [[]]
    for _ in rows:
        coeffs = [c + [k] for c in coeffs for k in range(p)]
    for c in coeffs:
        v = [0] * space.ambient
        for ci, row in zip(c, rows):
            v = [(x + ci * y) % p for x, y in zip(v, row)]
        elems.add(tuple(v))
    if not rows:
        elems.add((0,) * space.ambient)
    return elems


@pytest.mark.parametrize("p", [2, 3])
def test_intersection_against_bruteforce_enumeration(p):
    Fp = PrimeField(p)
    rng = random.Random(p)
    for _ in range(25):
        dim = 4
        vs1 = [[rng.randrange(p) for _ in range(dim)] for _ in range(2)]
        vs2 = [[rng.randrange(p) for _ in range(dim)] for _ in range(2)]
        u = Subspace.from_vectors(Fp, dim, vs1)
        v = Subspace.from_vectors(Fp, dim, vs2)
        w = u.intersect(v)
        brute = enumerate_subspace(Fp, u) & enumerate_subspace(Fp, v)
        assert enumerate_subspace(Fp, w) == brute


def test_dimension_formula_on_random_pairs():
    rng = random.Random(0)
    for _ in range(100):
        dim = rng.randrange(1, 5)
        u = sub([[rng.randrange(-3, 4) for _ in range(dim)] for _ in range(rng.randrange(3))], dim)
        v = sub([[rng.randrange(-3, 4) for _ in range(dim)] for _ in range(rng.randrange(3))], dim)
        assert u.dim + v.dim == u.add(v).dim + u.intersect(v).dim


# ----------------------------------------------------------------------
# rational reconstruction
# ----------------------------------------------------------------------

def test_rational_reconstruct_examples():
    assert rational_reconstruct(0, 97, 9) == F(0)
    assert rational_reconstruct(65, 97, 9) == F(1, 3)
    # brute-force oracle: the only |a| <= 3, 0 < b <= 3 with a = 50b (mod 97)
    hits = {
        F(a, b)
        for a in range(-3, 4)
        for b in range(1, 4)
        if (a - b * 50) % 97 == 0
    }
    assert hits == {F(3, 2)}  # 2*50 = 100 = 3 (mod 97)
    assert rational_reconstruct(50, 97, 3) == F(3, 2)
    # a residue genuinely outside every small fraction: brute-force confirms none
    none_hits = [
        (a, b)
        for a in range(-3, 4)
        for b in range(1, 4)
        if (a - b * 29) % 97 == 0
    ]
    assert not none_hits
    assert rational_reconstruct(29, 97, 3) is None


def test_rational_reconstruct_round_trip():
    from gsla.fields import is_prime

    p = 2000029
    assert is_prime(p) and p % 4 == 1 and p > 2 * 10 ** 6
    rng = random.Random(1)
    bound = 1000
    assert 2 * bound * bound < p
    for _ in range(1000):
        a = rng.randrange(-bound, bound + 1)
        b = rng.randrange(1, bound + 1)
        from math import gcd

        g = gcd(abs(a), b)
        if g:
            a, b = a // g, b // g
        residue = a * pow(b, -1, p) % p
        assert rational_reconstruct(residue, p, bound) == F(a, b)


# ----------------------------------------------------------------------
# idempotent engine
# ----------------------------------------------------------------------

def group_algebra_z2():
    # basis 1, u with u^2 = 1
    one = [F(1), F(0)]
    u = [F(0), F(1)]
    mult = [[one, u], [u, one]]
    return CommAlgebra(Q, 2, mult, one)


def test_idempotents_group_algebra_z2():
    A = group_algebra_z2()
    out = idempotents_commutative(A)
    assert sorted(out) == sorted([[F(1, 2), F(1, 2)], [F(1, 2), F(-1, 2)]])


def test_idempotents_local_algebra():
    # basis 1, x with x^2 = 0
    one = [F(1), F(0)]
    x = [F(0), F(1)]
    zero = [F(0), F(0)]
    A = CommAlgebra(Q, 2, [[one, x], [x, zero]], one)
    assert idempotents_commutative(A) == [one]


def group_algebra_z4_over_Qi():
    K = Cyclotomic(4)

    def vec(k):
        return [K.one() if i == k else K.zero() for i in range(4)]

    mult = [[vec((i + j) % 4) for j in range(4)] for i in range(4)]
    return K, CommAlgebra(K, 4, mult, vec(0))


def test_idempotents_group_algebra_z4():
    K, A = group_algebra_z4_over_Qi()
    out = idempotents_commutative(A)
    assert len(out) == 4
    # independent oracle: e_j = (1/4) sum_k zeta^(-jk) u^k, verified idempotent here
    z = K.zeta()
    expected = []
    for j in range(4):
        e = [K.mul(K.from_fraction(F(1, 4)), K.pow(z, (-j * k) % 4)) for k in range(4)]
        assert A.is_idempotent(e)
        expected.append(e)
    assert sorted(out) == sorted(expected)


def test_idempotents_orthogonal_complete():
    K, A = group_algebra_z4_over_Qi()
    out = idempotents_commutative(A)
    total = [K.zero()] * 4
    for e in out:
        assert A.mul_vec(e, e) == e
        total = [K.add(a, b) for a, b in zip(total, e)]
    assert total == A.unit
    for i, e in enumerate(out):
        for e2 in out[i + 1:]:
            assert all(K.is_zero(x) for x in A.mul_vec(e, e2))


def test_idempotents_nonsplit_quadratic_field():
    # Q[t]/(t^2 - 2) is a field: no splitting is discoverable over Q
    one = [F(1), F(0)]
    t = [F(0), F(1)]
    two = [F(2), F(0)]
    A = CommAlgebra(Q, 2, [[one, t], [t, two]], one)
    with pytest.raises(NonSplit):
        idempotents_commutative(A)
