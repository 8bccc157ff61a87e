"""Primitive idempotents of commutative associative algebras over Q or Q(zeta_n).

The engine reduces the algebra modulo a prime p = 1 (mod n), splits a generic
element's minimal polynomial over F_p by brute-force root scanning, forms the
CRT indicator idempotents, Hensel-lifts them through e <- 3e^2 - 2e^3 until
the modulus exceeds 2*bound^2, and reconstructs rational coordinates.  For
cyclotomic coefficients the same computation runs once per embedding
zeta -> g^r and the coordinate vector is recovered through a Vandermonde
solve; every candidate is re-verified exactly, so a wrong lift can only lead
to a retry, never to a wrong answer.  Three failed primes report NonSplit.
"""

from __future__ import annotations


from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, lcm

from .errors import NonSplit, NotCommutative
from .fields import (
    Cyclotomic,
    Field,
    PrimeField,
    Rationals,
    is_prime,
    primitive_root_mod_p,
    rational_reconstruct,
)
from .linalg import Subspace
from .util import derive_rng

DEFAULT_BOUND = 2 ** 64


@dataclass
class CommAlgebra:
    """Commutative associative unital algebra by structure constants.

    mult[i][j] is the coefficient vector of b_i * b_j; unit is the
    coefficient vector of the identity element.
    """

    field: Field
    dim: int
    mult: list
    unit: list

    def mul_vec(self, u, v):
        F = self.field
        z = F.zero()
        out = [z] * self.dim
        for i, ui in enumerate(u):
            if ui == z:
                continue
            row = self.mult[i]
            for j, vj in enumerate(v):
                if vj == z:
                    continue
                c = F.mul(ui, vj)
                for k, w in enumerate(row[j]):
                    if w != z:
                        out[k] = F.add(out[k], F.mul(c, w))
        return out

    def basis_vec(self, i):
        z = self.field.zero()
        v = [z] * self.dim
        v[i] = self.field.one()
        return v

    def is_idempotent(self, e):
        return self.mul_vec(e, e) == list(e)

    def verify(self):
        """Commutativity, associativity and the unit law; NotCommutative on failure."""
        F = self.field
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if self.mult[i][j] != self.mult[j][i]:
                    raise NotCommutative(f"b{i}*b{j} != b{j}*b{i}")
        for i in range(self.dim):
            bi = self.basis_vec(i)
            if self.mul_vec(self.unit, bi) != bi:
                raise NotCommutative(f"unit fails on b{i}")
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.mult[i][j]
                for k in range(self.dim):
                    left = self.mul_vec(ij, self.basis_vec(k))
                    right = self.mul_vec(self.basis_vec(i), self.mult[j][k])
                    if left != right:
                        raise NotCommutative(f"associativity fails at ({i},{j},{k})")
        return True


def idempotents_commutative(A: CommAlgebra, bound=DEFAULT_BOUND, seed=0):
    """All primitive pairwise-orthogonal idempotents summing to 1, exactly.

    Splits completely when A is split semisimple over its field; coarser
    systems (e.g. local algebras) come out as far as the modular engine can
    see them.  Raises NonSplit after three failed primes, NotCommutative if
    A is not commutative/associative/unital.
    """
    A.verify()
    if isinstance(A.field, PrimeField):
        raise NonSplit("idempotent engine runs over rationals or cyclotomic fields only")
    system = _split_recursive(A, bound, seed, depth=0)
    if system is None:
        raise NonSplit("no idempotent decomposition discoverable at the configured bounds")
    F = A.field
    # exact final verification of the full system
    one = A.unit
    total = [F.zero()] * A.dim
    for e in system:
        if not A.is_idempotent(e):
            raise NonSplit("reconstructed idempotent failed exact verification")
        total = [F.add(a, b) for a, b in zip(total, e)]
    if total != list(one):
        raise NonSplit("idempotent system does not sum to the unit")
    for i, e in enumerate(system):
        for e2 in system[i + 1:]:
            if any(x != F.zero() for x in A.mul_vec(e, e2)):
                raise NonSplit("idempotent system is not orthogonal")
    return sorted(system)


def _split_recursive(A, bound, seed, depth):
    if A.dim == 1:
        return [list(A.unit)]
    system = _split_once(A, bound, seed)
    if system is None:
        return None
    if len(system) == A.dim or depth >= 6:
        return system
    out = []
    for e in system:
        sub = _subalgebra(A, e)
        if sub is None or sub[0].dim <= 1:
            out.append(e)
            continue
        subalg, basis = sub
        finer = _split_recursive(subalg, bound, seed + 1, depth + 1)
        if finer is None or len(finer) == 1:
            out.append(e)
        else:
            F = A.field
            for fe in finer:
                vec = [F.zero()] * A.dim
                for c, row in zip(fe, basis):
                    if c != F.zero():
                        for k, w in enumerate(row):
                            vec[k] = F.add(vec[k], F.mul(c, w))
                out.append(vec)
    return out


def _subalgebra(A, e):
    """(CommAlgebra on e*A with unit e, basis rows) or None if 1-dimensional."""
    F = A.field
    rows = [A.mul_vec(e, A.basis_vec(i)) for i in range(A.dim)]
    span = Subspace.from_vectors(F, A.dim, rows)
    d = span.dim
    if d <= 1:
        return None
    basis = span.basis()
    mult = []
    for i in range(d):
        row = []
        for j in range(d):
            prod = A.mul_vec(basis[i], basis[j])
            coords = span.coords_of(prod)
            if coords is None:
                return None
            row.append(coords)
        mult.append(row)
    unit_coords = span.coords_of(e)
    if unit_coords is None:
        return None
    return CommAlgebra(F, d, mult, unit_coords), basis


# ----------------------------------------------------------------------
# modular internals
# ----------------------------------------------------------------------

def _coords(field, x):
    if isinstance(field, Rationals):
        return [x]
    return list(x)


def _coord_count(field):
    return field.degree if isinstance(field, Cyclotomic) else 1


def _root_order(field):
    return field.n if isinstance(field, Cyclotomic) else 1


def _denominator_lcm(A):
    out = 1
    for block in A.mult:
        for vec in block:
            for x in vec:
                for q in _coords(A.field, x):
                    out = lcm(out, q.denominator)
    for x in A.unit:
        for q in _coords(A.field, x):
            out = lcm(out, q.denominator)
    return out


def _suitable_primes(n_root, avoid, count):
    """First `count` primes p = 1 (mod n_root) above 10^4 avoiding the denominators."""
    out = []
    step = max(n_root, 1)
    p = 10007
    while len(out) < count:
        if (step == 1 or p % step == 1) and is_prime(p) and avoid % p != 0:
            out.append(p)
        p += 1
    return out


def _split_once(A, bound, seed):
    denlcm = _denominator_lcm(A)
    n_root = _root_order(A.field)
    primes = _suitable_primes(n_root, denlcm, 3)
    for attempt, p in enumerate(primes):
        got = _attempt_prime(A, p, bound << attempt, seed + attempt)
        if got is not None:
            return got
    return None


def _attempt_prime(A, p, bound, seed):
    F = A.field
    D = A.dim
    n_root = _root_order(A.field)
    deg = _coord_count(F)
    rs = [r for r in range(max(n_root, 1)) if gcd(r, n_root) == 1] or [0]

    target = 2 * bound * bound + 1
    moduli = [p]
    while moduli[-1] < target:
        moduli.append(moduli[-1] * moduli[-1])

    g = pow(primitive_root_mod_p(p), (p - 1) // n_root, p) if n_root > 1 else 1

    rng = derive_rng(seed, p, "generic")
    for _ in range(4):
        coeffs = [rng.randrange(-9, 10) for _ in range(D)]
        lifted = {}
        ok = True
        for r in rs:
            got = _attempt_embedding(A, p, moduli, g, r, coeffs)
            if got is None:
                ok = False
                break
            lifted[r] = got
        if not ok:
            continue
        counts = {len(v) for v in lifted.values()}
        if len(counts) != 1:
            continue
        system = _reconstruct_system(A, p, moduli[-1], g, rs, lifted, bound)
        if system is not None:
            return system
    return None


def _lift_root_of_unity(g, n_root, moduli):
    """Hensel lift of the order-n root g along x^n - 1 for each modulus."""
    out = {moduli[0]: g % moduli[0]}
    cur = g
    for m in moduli[1:]:
        fx = (pow(cur, n_root, m) - 1) % m
        dfx = (n_root * pow(cur, n_root - 1, m)) % m
        cur = (cur - fx * pow(dfx, -1, m)) % m
        out[m] = cur
    return out


def _reduce_scalar_mod(field, x, node, m):
    """Image of a field scalar in Z/m under zeta -> node."""
    acc = 0
    npow = 1
    for q in _coords(field, x):
        if q.numerator:
            acc = (acc + q.numerator * pow(q.denominator, -1, m) * npow) % m
        npow = (npow * node) % m
    return acc


def _reduce_constants(A, node, m):
    D = A.dim
    mult = [[[_reduce_scalar_mod(A.field, w, node, m) for w in A.mult[i][j]] for j in range(D)] for i in range(D)]
    unit = [_reduce_scalar_mod(A.field, w, node, m) for w in A.unit]
    return mult, unit


def _alg_mul_mod(mult, u, v, m, D):
    out = [0] * D
    for i in range(D):
        ui = u[i]
        if not ui:
            continue
        row = mult[i]
        for j in range(D):
            vj = v[j]
            if not vj:
                continue
            c = ui * vj % m
            rij = row[j]
            for k in range(D):
                w = rij[k]
                if w:
                    out[k] = (out[k] + c * w) % m
    return out


def _attempt_embedding(A, p, moduli, g, r, coeffs):
    """Idempotent system of A reduced via zeta -> g^r, lifted to the last modulus."""
    D = A.dim
    n_root = _root_order(A.field)
    if n_root > 1:
        lifts = _lift_root_of_unity(g, n_root, moduli)
        nodes = {m: pow(lifts[m], r, m) for m in moduli}
    else:
        nodes = {m: 1 for m in moduli}

    mult_p, unit_p = _reduce_constants(A, nodes[p], p)
    a = [c % p for c in coeffs]

    minpoly = _minpoly_in_algebra(mult_p, unit_p, a, p, D)
    system_p = _indicator_idempotents(mult_p, unit_p, a, minpoly, p, D)
    if system_p is None:
        return None

    system = system_p
    for m in moduli[1:]:
        mult_m, _ = _reduce_constants(A, nodes[m], m)
        lifted = []
        for e in system:
            e = [x % m for x in e]
            e2 = _alg_mul_mod(mult_m, e, e, m, D)
            e3 = _alg_mul_mod(mult_m, e2, e, m, D)
            lifted.append([(3 * x2 - 2 * x3) % m for x2, x3 in zip(e2, e3)])
        system = lifted
    return system


def _minpoly_in_algebra(mult, unit, a, p, D):
    """Monic minimal polynomial of a inside the algebra, coefficients mod p."""
    basis = []  # (reduced vector, expression over powers, pivot)
    cur = list(unit)
    k = 0
    while True:
        vec = list(cur)
        expr = {k: 1}
        for bvec, bexpr, piv in basis:
            c = vec[piv]
            if c:
                vec = [(x - c * y) % p for x, y in zip(vec, bvec)]
                for kk, vv in bexpr.items():
                    expr[kk] = (expr.get(kk, 0) - c * vv) % p
        piv = next((i for i, x in enumerate(vec) if x), None)
        if piv is None:
            top = max(kk for kk, vv in expr.items() if vv)
            inv = pow(expr[top], -1, p)
            out = [0] * (top + 1)
            for kk, vv in expr.items():
                out[kk] = vv * inv % p
            return out
        inv = pow(vec[piv], -1, p)
        vec = [x * inv % p for x in vec]
        expr = {kk: vv * inv % p for kk, vv in expr.items()}
        basis.append((vec, expr, piv))
        cur = _alg_mul_mod(mult, cur, a, p, D)
        k += 1
        if k > D + 1:
            raise AssertionError("minimal polynomial search exceeded dimension bound")


def _poly_mod_ops(p):
    def trim(f):
        while f and f[-1] % p == 0:
            f.pop()
        return f

    def mul(f, g):
        if not f or not g:
            return []
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    out[i + j] = (out[i + j] + a * b) % p
        return trim(out)

    def divmod_(f, g):
        f = [x % p for x in f]
        dg = len(g) - 1
        inv = pow(g[-1], -1, p)
        q = [0] * max(len(f) - dg, 0)
        while len(f) - 1 >= dg and f:
            c = f[-1] * inv % p
            k = len(f) - 1 - dg
            q[k] = c
            for i, b in enumerate(g):
                f[k + i] = (f[k + i] - c * b) % p
            trim(f)
        return trim(q), f

    def xgcd(f, g):
        r0, r1 = list(f), list(g)
        s0, s1 = [1], []
        t0, t1 = [], [1]
        while r1:
            q, r = divmod_(r0, r1)
            r0, r1 = r1, r

            def sub(a, b):
                n = max(len(a), len(b))
                a = a + [0] * (n - len(a))
                b = b + [0] * (n - len(b))
                return trim([(x - y) % p for x, y in zip(a, b)])

            s0, s1 = s1, sub(s0, mul(q, s1))
            t0, t1 = t1, sub(t0, mul(q, t1))
        inv = pow(r0[-1], -1, p)
        return [x * inv % p for x in r0], [x * inv % p for x in s0], [x * inv % p for x in t0]

    def deriv(f):
        return trim([(i * c) % p for i, c in enumerate(f)][1:])

    return mul, divmod_, xgcd, deriv, trim


def _indicator_idempotents(mult, unit, a, minpoly, p, D):
    """CRT indicator idempotents of F_p[a] from the roots of the minimal polynomial."""
    mul, divmod_, xgcd, deriv, trim = _poly_mod_ops(p)
    m = list(minpoly)
    md = deriv(m)
    if md:
        gpoly, _, _ = xgcd(m, md)
        mfree, _ = divmod_(m, gpoly)
    else:
        return None  # derivative vanished: inseparable, cannot split here
    roots = [x for x in range(p) if _poly_eval(mfree, x, p) == 0]
    if len(roots) != len(mfree) - 1:
        return None  # minimal polynomial does not split over F_p
    idems = []
    for lam in roots:
        lin = [(-lam) % p, 1]
        e_k = 0
        rest = list(m)
        while True:
            q, r = divmod_(rest, lin)
            if r:
                break
            rest = q
            e_k += 1
        factor = [1]
        for _ in range(e_k):
            factor = mul(factor, lin)
        qk, _ = divmod_(m, factor)
        _, u, _ = xgcd(qk, factor)
        _, uk = divmod_(mul(qk, u), m)
        idems.append(_poly_eval_algebra(uk, mult, unit, a, p, D))
    # exact mod-p sanity: orthogonal system summing to 1
    total = [0] * D
    for e in idems:
        e2 = _alg_mul_mod(mult, e, e, p, D)
        if e2 != e:
            return None
        total = [(x + y) % p for x, y in zip(total, e)]
    if total != [x % p for x in unit]:
        return None
    for i, e in enumerate(idems):
        for e2 in idems[i + 1:]:
            if any(_alg_mul_mod(mult, e, e2, p, D)):
                return None
    return idems


def _poly_eval(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _poly_eval_algebra(f, mult, unit, a, p, D):
    acc = [0] * D
    for c in reversed(f):
        acc = _alg_mul_mod(mult, acc, a, p, D)
        if c:
            acc = [(x + c * u) % p for x, u in zip(acc, unit)]
    return acc


def _reconstruct_system(A, p, modulus, g, rs, lifted, bound):
    """Match per-embedding systems, Vandermonde-solve the zeta-coordinates, verify."""
    F = A.field
    D = A.dim
    deg = _coord_count(F)
    n_root = _root_order(A.field)

    if deg == 1:
        out = []
        for e in sorted(lifted[rs[0]]):
            vec = []
            for c in e:
                q = rational_reconstruct(c % modulus, modulus, bound)
                if q is None:
                    return None
                vec.append(_scalar_from_fractions(F, [q]))
            if not A.is_idempotent(vec):
                return None
            out.append(vec)
        return out

    # nodes for the Vandermonde: the lifted order-n root, one power per embedding
    ghat = _lift_root_of_unity(g, n_root, [p, *_modulus_chain(p, modulus)])[modulus]
    nodes = [pow(ghat, r, modulus) for r in rs]
    vinv = _vandermonde_inverse(nodes, deg, modulus, p)
    if vinv is None:
        return None

    base = sorted(lifted[rs[0]])
    pools = {r: list(lifted[r]) for r in rs[1:]}
    out = []
    for e1 in base:
        found = None
        for combo in product(*(range(len(pools[r])) for r in rs[1:])):
            vectors = [e1] + [pools[r][idx] for r, idx in zip(rs[1:], combo)]
            cand = _solve_and_verify(A, vectors, vinv, modulus, bound, deg)
            if cand is not None:
                found = (cand, combo)
                break
        if found is None:
            return None
        cand, combo = found
        out.append(cand)
        for r, idx in sorted(zip(rs[1:], combo), key=lambda t: -t[1]):
            pools[r].pop(idx)
    return out


def _modulus_chain(p, modulus):
    out = []
    m = p
    while m < modulus:
        m = m * m
        out.append(m)
    return out


def _vandermonde_inverse(nodes, deg, modulus, p):
    rows = []
    for x in nodes:
        row = [1]
        for _ in range(deg - 1):
            row.append(row[-1] * x % modulus)
        rows.append(row)
    n = len(rows)
    aug = [rows[i] + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] % p != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, modulus)
        aug[col] = [x * inv % modulus for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [(x - c * y) % modulus for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _solve_and_verify(A, vectors, vinv, modulus, bound, deg):
    F = A.field
    D = A.dim
    vec = []
    for c in range(D):
        rhs = [v[c] % modulus for v in vectors]
        fracs = []
        for row in vinv:
            acc = 0
            for w, b in zip(row, rhs):
                acc = (acc + w * b) % modulus
            q = rational_reconstruct(acc, modulus, bound)
            if q is None:
                return None
            fracs.append(q)
        vec.append(_scalar_from_fractions(F, fracs))
    if all(F.is_zero(x) for x in vec):
        return None
    if not A.is_idempotent(vec):
        return None
    return vec


def _scalar_from_fractions(F, fracs):
    if isinstance(F, Rationals):
        return Fraction(fracs[0])
    return tuple(Fraction(q) for q in fracs)
