"""Built-in constructors for the standard ingredients and worked examples:
sl_n, the Pauli-graded sl_2 and its 2x2 matrix module, sl_2 irreducibles,
the swap-graded sl_2 + sl_2 pair modules, the two-dimensional module over a
small abelian algebra, and the characteristic-p loop algebra."""

from __future__ import annotations

from fractions import Fraction

from .errors import BadCharacteristic
from .gradedmod import GradedModule, LoopModule, loop_module
from .groups import FinAbGroup, Subgroup, full_subgroup, subgroup_generate, trivial_subgroup
from .lie import GradedLieAlgebra
from .linalg import Matrix
from .loopalg import LoopAlgebra, loop_algebra

TRIVIAL_GROUP = FinAbGroup((1,))


def _matrix_units(n):
    return {(i, j): [[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)]
            for i in range(n) for j in range(n)}


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[r][k] * b[k][c] for k in range(n)) for c in range(n)] for r in range(n)]


def _mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _structure_constants_from_matrices(field, mats, basis_coords):
    """Bracket table of a list of matrices, coordinates via basis_coords(mat)."""
    out = []
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            comm = _mat_sub(_mat_mul(mats[i], mats[j]), _mat_mul(mats[j], mats[i]))
            coords = basis_coords(comm)
            coeffs = {k: field.from_fraction(Fraction(v)) for k, v in enumerate(coords) if v}
            out.append((i, j, coeffs))
    return out


def sl_n(field, n) -> GradedLieAlgebra:
    """sl_n with the standard unit/coroot basis, trivially graded."""
    p = field.characteristic()
    if n < 2:
        raise ValueError("n must be at least 2")
    if p and n % p == 0:
        raise BadCharacteristic(f"sl_{n} is not simple when char divides n")
    mats = []
    for i in range(n):
        for j in range(n):
            if i != j:
                mats.append([[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)])
    for k in range(n - 1):
        mats.append([[ (1 if r == c == k else -1 if r == c == k + 1 else 0)
                      for c in range(n)] for r in range(n)])

    def coords(m):
        out = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    out.append(m[i][j])
        # coefficient of h_k = E_kk - E_(k+1)(k+1) is the partial diagonal sum
        s = 0
        for k in range(n - 1):
            s += m[k][k]
            out.append(s)
        return out

    table = _structure_constants_from_matrices(field, mats, coords)
    dim = n * n - 1
    return GradedLieAlgebra(field, TRIVIAL_GROUP, [(0,)] * dim, table)


def sl2(field) -> GradedLieAlgebra:
    """sl_2 with basis (h, e, f), trivially graded: [h,e]=2e, [h,f]=-2f, [e,f]=h."""
    if field.characteristic() == 2:
        raise BadCharacteristic("sl_2 needs char != 2")
    two = field.from_int(2)
    one = field.one()
    table = [
        (0, 1, {1: two}),
        (0, 2, {2: field.neg(two)}),
        (1, 2, {0: one}),
    ]
    return GradedLieAlgebra(field, TRIVIAL_GROUP, [(0,)] * 3, table)


PAULI_GROUP = FinAbGroup((2, 2))


def pauli_sl2(field) -> GradedLieAlgebra:
    """sl_2 graded by Z2 x Z2: h at (1,0), e+f at (0,1), e-f at (1,1)."""
    if field.characteristic() == 2:
        raise BadCharacteristic("the Pauli grading needs char != 2")
    two = field.from_int(2)
    table = [
        (0, 1, {2: two}),               # [h, e+f] = 2(e-f)
        (0, 2, {1: two}),               # [h, e-f] = 2(e+f)
        (1, 2, {0: field.neg(two)}),    # [e+f, e-f] = -2h
    ]
    return GradedLieAlgebra(field, PAULI_GROUP, [(1, 0), (0, 1), (1, 1)], table)


def sl2_graded_by(field, group: FinAbGroup, P: Subgroup, grading: str, gamma=None) -> GradedLieAlgebra:
    """sl_2 as a Q/P-graded algebra: 'trivial', 'cartan' (h at 0, e at gamma,
    f at -gamma), or 'pauli' when Q/P is a Klein four-group."""
    from .groups import QuotientGroup

    qm = QuotientGroup.make(group, P)
    a = sl2(field)
    if grading == "trivial":
        degs = [group.identity()] * 3
        order = (0, 1, 2)
    elif grading == "cartan":
        gamma = group.reduce_elem(gamma)
        degs = [group.identity(), qm.rep(gamma), qm.rep(group.neg(gamma))]
        order = (0, 1, 2)
    elif grading == "pauli":
        if qm.order != 4 or any(qm.add(r, r) != group.identity() for r in qm.reps):
            raise ValueError("pauli grading needs Q/P isomorphic to Z2 x Z2")
        reps = [r for r in qm.reps if r != group.identity()]
        degs = [reps[0], reps[1], reps[2]]
        return _pauli_on(field, group, P, degs)
    else:
        raise ValueError(f"unknown sl2 grading {grading!r}")
    table = [(i, j, dict(row)) for (i, j), row in a.sc.items() if i < j]
    return GradedLieAlgebra(field, group, [degs[i] for i in order], table, modulus=P, fine=False)


def _pauli_on(field, group, P, degs):
    two = field.from_int(2)
    table = [
        (0, 1, {2: two}),
        (0, 2, {1: two}),
        (1, 2, {0: field.neg(two)}),
    ]
    return GradedLieAlgebra(field, group, degs, table, modulus=P, fine=False)


def sl2_gradings(field, group, P):
    """Named admissible sl_2 gradings by Q/P available in this catalog."""
    from .groups import QuotientGroup

    qm = QuotientGroup.make(group, P)
    out = [("trivial", sl2_graded_by(field, group, P, "trivial"))]
    for rep in qm.reps:
        if rep == group.identity():
            continue
        out.append((f"cartan{rep}", sl2_graded_by(field, group, P, "cartan", rep)))
    if qm.order == 4 and all(qm.add(r, r) == group.identity() for r in qm.reps):
        out.append(("pauli", sl2_graded_by(field, group, P, "pauli")))
    return out


def matrix2_module(field) -> GradedModule:
    """All 2x2 matrices as a Pauli-graded sl_2-module under left multiplication.

    Module basis: identity at (0,0), diag(1,-1) at (1,0), E12+E21 at (0,1),
    E12-E21 at (1,1)."""
    g = pauli_sl2(field)
    I2 = [[1, 0], [0, 1]]
    H = [[1, 0], [0, -1]]
    U = [[0, 1], [1, 0]]
    W = [[0, 1], [-1, 0]]
    module_basis = [I2, H, U, W]
    alg_mats = [H, U, W]

    def coords(m):
        # m = a*I + b*H + c*U + d*W
        a = Fraction(m[0][0] + m[1][1], 2)
        b = Fraction(m[0][0] - m[1][1], 2)
        c = Fraction(m[0][1] + m[1][0], 2)
        d = Fraction(m[0][1] - m[1][0], 2)
        return [a, b, c, d]

    action = []
    for i, x in enumerate(alg_mats):
        for j, v in enumerate(module_basis):
            img = _mat_mul(x, v)
            coeffs = {k: field.from_fraction(c) for k, c in enumerate(coords(img)) if c}
            if coeffs:
                action.append((i, j, coeffs))
    return GradedModule(g, [(0, 0), (1, 0), (0, 1), (1, 1)], action)


def sl2_irrep_action(field, m):
    """Action triples of V(m) over the basis (h, e, f): standard weight basis."""
    p = field.characteristic()
    if p and p <= m:
        raise BadCharacteristic(f"V({m}) needs char 0 or p > m")
    action = []
    for j in range(m + 1):
        action.append((0, j, {j: field.from_int(m - 2 * j)}))          # h
        if j > 0:
            action.append((1, j, {j - 1: field.from_int(j * (m - j + 1))}))  # e
        if j < m:
            action.append((2, j, {j + 1: field.one()}))                 # f
    return action


def sl2_irrep(field, m) -> GradedModule:
    """V(m) over the trivially graded sl_2."""
    g = sl2(field)
    return GradedModule(g, [(0,)] * (m + 1), sl2_irrep_action(field, m))


PAIR_GROUP = FinAbGroup((2,))


def pair_algebra(field) -> GradedLieAlgebra:
    """sl_2 + sl_2 with the swap grading: (x,x) at 0, (x,-x) at 1."""
    if field.characteristic() == 2:
        raise BadCharacteristic("the swap grading needs char != 2")
    a = sl2(field)
    dim = 6
    degs = [(0,)] * 3 + [(1,)] * 3

    def pair_bracket(i, j):
        # basis: s_i = (x_i, x_i) for i<3, a_i = (x_i, -x_i) for i>=3
        xi, si = i % 3, i < 3
        xj, sj = j % 3, j < 3
        row = a.sc.get((xi, xj), {})
        out = {}
        for k, v in row.items():
            if si == sj:
                out[k] = v          # (x,y)+(x,y) parity: lands in degree 0
            else:
                out[k + 3] = v      # mixed parity lands in degree 1
        return out

    table = []
    for i in range(dim):
        for j in range(i + 1, dim):
            row = pair_bracket(i, j)
            if row:
                table.append((i, j, row))
    return GradedLieAlgebra(field, PAIR_GROUP, degs, table)


def pair_module(field, h1, h2) -> GradedModule:
    """L(h1,h2) + L(h2,h1) over the swap-graded sl_2 + sl_2.

    L(a,b) = V(a) (x) V(b) with the componentwise action.  For the flip
    s: L(h1,h2) -> L(h2,h1), the basis (u_j, s u_j) sits in degree 0 and
    (u_j, -s u_j) in degree 1; the action is computed in the ambient
    L1 + L2 coordinates and re-expressed in this basis."""
    g = pair_algebra(field)
    F = field
    A1 = _tensor_action(field, h1, h2)
    A2 = _tensor_action(field, h2, h1)
    d = (h1 + 1) * (h2 + 1)

    def flip(j):
        r, c = divmod(j, h2 + 1)
        return c * (h1 + 1) + r

    # basis vectors inside the 2d-dimensional ambient L1 (+) L2
    basis = []
    degrees = []
    for j in range(d):
        basis.append({j: F.one(), d + flip(j): F.one()})
        degrees.append((0,))
    for j in range(d):
        basis.append({j: F.one(), d + flip(j): F.neg(F.one())})
        degrees.append((1,))
    B = Matrix(F, [[vec.get(c, F.zero()) for c in range(2 * d)] for vec in basis])
    from .linalg import solve_linear

    Bt = B.transpose()
    action = []
    for i in range(6):
        xi, plus = i % 3, i < 3
        sign = F.one() if plus else F.neg(F.one())
        for col, vec in enumerate(basis):
            img = [F.zero()] * (2 * d)
            for c, cc in vec.items():
                if c < d:
                    for k, v in A1.get((xi, c), {}).items():
                        img[k] = F.add(img[k], F.mul(cc, v))
                else:
                    for k, v in A2.get((xi, c - d), {}).items():
                        img[d + k] = F.add(img[d + k], F.mul(cc, F.mul(sign, v)))
            coords = solve_linear(Bt, img)
            coeffs = {k: v for k, v in enumerate(coords) if not F.is_zero(v)}
            if coeffs:
                action.append((i, col, coeffs))
    return GradedModule(g, degrees, action)


def _tensor_action(field, a, b):
    """(h,e,f) acting on V(a) (x) V(b) through the first tensor factor index
    grid j = r*(b+1)+c; the second factor action is the flip composition."""
    act_a = {}
    for (i, j, coeffs) in sl2_irrep_action(field, a):
        act_a[(i, j)] = coeffs
    act_b = {}
    for (i, j, coeffs) in sl2_irrep_action(field, b):
        act_b[(i, j)] = coeffs
    out = {}
    for i in range(3):
        for r in range(a + 1):
            for c in range(b + 1):
                j = r * (b + 1) + c
                coeffs = {}
                for k, v in act_a.get((i, r), {}).items():
                    coeffs[k * (b + 1) + c] = v
                for k, v in act_b.get((i, c), {}).items():
                    kk = r * (b + 1) + k
                    coeffs[kk] = field.add(coeffs.get(kk, field.zero()), v)
                if coeffs:
                    out[(i, j)] = coeffs
    return out


def symmetric_graded_L(field, h) -> GradedModule:
    """L(h,h) with the Z2-grading by flip eigenspaces over the swap-graded algebra."""
    g = pair_algebra(field)
    F = field
    d = (h + 1) * (h + 1)

    def flip(j):
        r, c = divmod(j, h + 1)
        return c * (h + 1) + r

    basis = []   # vectors in the L(h,h) coordinate space
    degrees = []
    for j in range(d):
        fj = flip(j)
        if j == fj:
            basis.append({j: F.one()})
            degrees.append((0,))
        elif j < fj:
            basis.append({j: F.one(), fj: F.one()})
            degrees.append((0,))
            basis.append({j: F.one(), fj: F.neg(F.one())})
            degrees.append((1,))
    # single-factor actions of (x, +-x): x through factor 1 +- x through factor 2
    act1, act2 = {}, {}
    for i in range(3):
        for r in range(h + 1):
            for c in range(h + 1):
                j = r * (h + 1) + c
                c1 = {}
                for k, v in dict(_single(field, h, i, r)).items():
                    c1[k * (h + 1) + c] = v
                if c1:
                    act1[(i, j)] = c1
                c2 = {}
                for k, v in dict(_single(field, h, i, c)).items():
                    c2[r * (h + 1) + k] = v
                if c2:
                    act2[(i, j)] = c2

    mat_rows = [[vec.get(j, F.zero()) for j in range(d)] for vec in basis]
    B = Matrix(F, mat_rows)
    from .linalg import solve_linear

    Bt = B.transpose()
    action = []
    for i in range(6):
        xi, plus = i % 3, i < 3
        for col, vec in enumerate(basis):
            img = [F.zero()] * d
            for j, cc in vec.items():
                for k, v in act1.get((xi, j), {}).items():
                    img[k] = F.add(img[k], F.mul(cc, v))
                for k, v in act2.get((xi, j), {}).items():
                    w = F.mul(cc, v) if plus else F.neg(F.mul(cc, v))
                    img[k] = F.add(img[k], w)
            coords = solve_linear(Bt, img)
            coeffs = {k: v for k, v in enumerate(coords) if not F.is_zero(v)}
            if coeffs:
                action.append((i, col, coeffs))
    return GradedModule(g, degrees, action)


def _single(field, m, i, j):
    for (ii, jj, coeffs) in sl2_irrep_action(field, m):
        if ii == i and jj == j:
            return coeffs
    return {}


EX1_GROUP = FinAbGroup((2, 2))


def ex1_module(field):
    """The worked 2-dimensional module over a 3-dimensional abelian algebra.

    Returns (g, W, V, P): g abelian with basis at (0,0), (1,0), (0,1);
    W has basis w_00, w_10 with g_(i,j) w_a = w_(a + (i,j)) (zero off the
    support); V is the 1-dimensional quotient target with P = Z2 x {0}."""
    g = GradedLieAlgebra(field, EX1_GROUP, [(0, 0), (1, 0), (0, 1)], [])
    one = field.one()
    # W basis order: w_00 (degree (0,0)), w_10 (degree (1,0))
    action_w = [
        (0, 0, {0: one}), (0, 1, {1: one}),   # g_00 acts as identity
        (1, 0, {1: one}), (1, 1, {0: one}),   # g_10 swaps
        # g_01 sends both to w_01, w_11 = 0
    ]
    W = GradedModule(g, [(0, 0), (1, 0)], action_w)
    P = subgroup_generate(EX1_GROUP, [(1, 0)])
    regraded = g.regrade_by_quotient(P)
    action_v = [(0, 0, {0: one}), (1, 0, {0: one})]
    V = GradedModule(regraded, [(0, 0)], action_v, modulus=P)
    return g, W, V, P


def ex1_loop_module(field) -> LoopModule:
    g, W, V, P = ex1_module(field)
    return loop_module(g, P, V)


def example0_algebra(p) -> LoopAlgebra:
    """g(Z_p, Z_p, sl_2) over F_p: graded simple but with nilpotent ideals."""
    from .fields import PrimeField

    if p == 2:
        raise BadCharacteristic("needs p != 2 so that sl_2 is simple")
    field = PrimeField(p)
    group = FinAbGroup((p,))
    P = full_subgroup(group)
    base = sl2_graded_by(field, group, P, "trivial")
    return loop_algebra(group, P, base)


def direct_sum_algebra(a: GradedLieAlgebra, b: GradedLieAlgebra) -> GradedLieAlgebra:
    """a (+) b with zero cross brackets; requires one field and one group."""
    if a.field != b.field or a.group != b.group:
        raise ValueError("direct sum needs one field and one grading group")
    table = [(i, j, dict(row)) for (i, j), row in a.sc.items() if i < j]
    off = a.dim
    table += [(i + off, j + off, {k + off: v for k, v in row.items()})
              for (i, j), row in b.sc.items() if i < j]
    return GradedLieAlgebra(a.field, a.group, list(a.degrees) + list(b.degrees), table)


def adjoint_module(g: GradedLieAlgebra, shift=None) -> GradedModule:
    """g acting on itself; degrees optionally shifted by a group element."""
    shift = g.group.reduce_elem(shift) if shift is not None else g.group.identity()
    degrees = [g.group.add(d, shift) for d in g.degrees]
    action = []
    for (i, j), row in g.sc.items():
        action.append((i, j, dict(row)))
    return GradedModule(g, degrees, action)


def trivial_module(g: GradedLieAlgebra, degree=None) -> GradedModule:
    degree = g.group.reduce_elem(degree) if degree is not None else g.group.identity()
    return GradedModule(g, [degree], [])


def direct_sum_module(W1: GradedModule, W2: GradedModule) -> GradedModule:
    if W1.algebra is not W2.algebra and W1.algebra.sc != W2.algebra.sc:
        raise ValueError("direct sum needs modules over one algebra")
    degrees = list(W1.degrees) + list(W2.degrees)
    action = []
    for (i, j), row in W1.act.items():
        action.append((i, j, dict(row)))
    off = W1.dim
    for (i, j), row in W2.act.items():
        action.append((i, j + off, {k + off: v for k, v in row.items()}))
    return GradedModule(W1.algebra, degrees, action, W1.modulus)
