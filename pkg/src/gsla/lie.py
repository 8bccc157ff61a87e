"""Graded Lie algebras via structure constants.

An algebra carries its field, a finite abelian group Q, a grading modulus P
(trivial for honest Q-gradings; a regraded algebra is graded by Q/P with
degrees stored as canonical coset representatives), fine degrees per basis
vector, and a sparse antisymmetric bracket table.  Verification, closures,
Killing form, centroid, support/size and the graded-simplicity verdicts all
live here.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from itertools import combinations

from .errors import (
    EmptySubspace,
    FieldMismatch,
    NonSplit,
    SearchCapExceeded,
)
from .groups import FinAbGroup, QuotientGroup, Subgroup, subgroup_generate, trivial_subgroup
from .idempotent import CommAlgebra, idempotents_commutative
from .linalg import Matrix, Subspace, sparse_kernel
from .util import derive_rng

DEFAULT_SUBSET_CAP = 2 ** 16
DEFAULT_PROBES = 8


@dataclass
class AlgebraReport:
    antisymmetry: list
    jacobi: list
    grading: list
    minimal: bool
    noncommutative: bool

    @property
    def passed(self):
        return not (self.antisymmetry or self.jacobi or self.grading)

    def as_dict(self):
        return {
            "antisymmetry_failures": self.antisymmetry,
            "jacobi_failures": self.jacobi,
            "grading_failures": self.grading,
            "minimal": self.minimal,
            "noncommutative": self.noncommutative,
            "passed": self.passed,
        }


@dataclass
class SimplicityVerdict:
    status: str  # SimpleCertified | NotSimple | Unknown
    witness: Subspace = None
    detail: str = ""


@dataclass
class GradedSimpleVerdict:
    status: str  # GradedSimple | NotGradedSimple | ProbablyGradedSimple | Inconclusive
    witness: Subspace = None
    detail: str = ""
    evidence: dict = dfield(default_factory=dict)


class GradedLieAlgebra:
    def __init__(self, field, group: FinAbGroup, degrees, brackets, modulus=None,
                 fine=True, full_table=False):
        """brackets: iterable of (i, j, {k: scalar}).

        With full_table=False only i < j entries are accepted and the
        antisymmetric completion is implicit; with full_table=True the table
        is stored as given so verify() can report antisymmetry failures.
        """
        self.field = field
        self.group = group
        self.modulus = modulus if modulus is not None else trivial_subgroup(group)
        self.degrees = tuple(group.reduce_elem(d) for d in degrees)
        self.dim = len(self.degrees)
        self.fine = fine
        self._quotient = QuotientGroup.make(group, self.modulus)
        sc = {}
        for i, j, coeffs in brackets:
            clean = {k: v for k, v in coeffs.items() if not field.is_zero(v)}
            if not clean:
                continue
            if full_table:
                sc[(i, j)] = dict(clean)
            else:
                if i >= j:
                    raise ValueError("implicit-antisymmetry table wants i < j entries")
                sc[(i, j)] = dict(clean)
                sc[(j, i)] = {k: field.neg(v) for k, v in clean.items()}
        self.sc = sc
        self._components = {}
        for idx, d in enumerate(self.degrees):
            rep = self._quotient.rep(d)
            self._components.setdefault(rep, []).append(idx)
        self._components = {k: tuple(v) for k, v in self._components.items()}
        self._ad_cache = {}
        self._generators = None
        self._centroid = None

    # -- basic structure --------------------------------------------------

    def effective_degree(self, i):
        return self._quotient.rep(self.degrees[i])

    def quotient(self):
        return self._quotient

    def components(self):
        return self._components

    def component_indices(self, rep):
        return self._components.get(self._quotient.rep(rep), ())

    def support(self):
        return sorted(self._components)

    def zero_vec(self):
        return [self.field.zero()] * self.dim

    def basis_vec(self, i):
        v = self.zero_vec()
        v[i] = self.field.one()
        return v

    def bracket_basis(self, i, j):
        return self.sc.get((i, j), {})

    def bracket_vec(self, u, v):
        F = self.field
        z = F.zero()
        out = self.zero_vec()
        for i, ui in enumerate(u):
            if ui == z:
                continue
            for j, vj in enumerate(v):
                if vj == z:
                    continue
                row = self.sc.get((i, j))
                if not row:
                    continue
                c = F.mul(ui, vj)
                for k, w in row.items():
                    out[k] = F.add(out[k], F.mul(c, w))
        return out

    def ad_matrix(self, i):
        """Matrix of ad(b_i): column j holds [b_i, b_j]."""
        if i not in self._ad_cache:
            F = self.field
            m = Matrix.zeros(F, self.dim, self.dim)
            for j in range(self.dim):
                for k, w in self.sc.get((i, j), {}).items():
                    m.rows[k][j] = w
            self._ad_cache[i] = m
        return self._ad_cache[i]

    def ad_of_vector(self, u):
        F = self.field
        m = Matrix.zeros(F, self.dim, self.dim)
        for i, ui in enumerate(u):
            if F.is_zero(ui):
                continue
            ad = self.ad_matrix(i)
            for r in range(self.dim):
                row = ad.rows[r]
                mrow = m.rows[r]
                for c in range(self.dim):
                    if not F.is_zero(row[c]):
                        mrow[c] = F.add(mrow[c], F.mul(ui, row[c]))
        return m

    def generators(self):
        """Indices of basis vectors that generate g as a Lie algebra (cached)."""
        if self._generators is not None:
            return self._generators
        span = Subspace.zero(self.field, self.dim)
        gens = []
        for i in range(self.dim):
            if span.contains_vector(self.basis_vec(i)):
                continue
            gens.append(i)
            span = self._bracket_closure(span.add(
                Subspace.from_vectors(self.field, self.dim, [self.basis_vec(i)])))
            if span.is_full():
                break
        self._generators = gens
        return gens

    def _bracket_closure(self, S):
        cur = S
        while True:
            bas = cur.basis()
            rows = list(bas)
            for u in bas:
                for v in bas:
                    rows.append(self.bracket_vec(u, v))
            bigger = Subspace.from_vectors(self.field, self.dim, rows)
            if bigger.dim == cur.dim:
                return cur
            cur = bigger

    # -- verification ------------------------------------------------------

    def verify(self) -> AlgebraReport:
        F = self.field
        anti = []
        for (i, j), row in self.sc.items():
            if i > j:
                continue
            if i == j:
                if any(not F.is_zero(v) for v in row.values()):
                    anti.append((i, j))
                continue
            mirror = self.sc.get((j, i), {})
            for k in set(row) | set(mirror):
                a = row.get(k, F.zero())
                b = mirror.get(k, F.zero())
                if not F.is_zero(F.add(a, b)):
                    anti.append((i, j))
                    break
        for (j, i), row in self.sc.items():
            # a one-sided entry with zero mirror is an antisymmetry failure too
            if j > i and (i, j) not in self.sc and any(not F.is_zero(v) for v in row.values()):
                anti.append((i, j))
        jac = []
        for i, j, k in combinations(range(self.dim), 3):
            s = self._jacobiator(i, j, k)
            if any(not F.is_zero(x) for x in s):
                jac.append((i, j, k))
        grading = []
        qm = self._quotient
        for (i, j), row in self.sc.items():
            target = qm.add(self.degrees[i], self.degrees[j])
            for k, v in row.items():
                if F.is_zero(v):
                    continue
                if self.effective_degree(k) != target:
                    grading.append((i, j, k))
        gens = list(self.support()) + [g for g in self.modulus.generators]
        minimal = subgroup_generate(self.group, gens).is_full()
        noncomm = any(
            any(not F.is_zero(v) for v in row.values()) for row in self.sc.values()
        )
        return AlgebraReport(sorted(set(anti)), jac, grading, minimal, noncomm)

    def _jacobiator(self, i, j, k):
        F = self.field
        out = self.zero_vec()
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = self.sc.get((b, c), {})
            for m, v in inner.items():
                for n, w in self.sc.get((a, m), {}).items():
                    out[n] = F.add(out[n], F.mul(v, w))
        return out

    # -- subspace machinery -------------------------------------------------

    def ideal_closure(self, S: Subspace) -> Subspace:
        """Least ideal containing S: closure under bracketing with generators."""
        gens = self.generators()
        cur = S
        while True:
            bas = cur.basis()
            rows = list(bas)
            for i in gens:
                for v in bas:
                    rows.append(self.bracket_vec(self.basis_vec(i), v))
            bigger = Subspace.from_vectors(self.field, self.dim, rows)
            if bigger.dim == cur.dim:
                return cur
            cur = bigger

    def is_ideal(self, S: Subspace) -> bool:
        return self.ideal_closure(S) == S

    def center(self) -> Subspace:
        stacked = Matrix(self.field, [])
        for i in range(self.dim):
            stacked = stacked.stack(self.ad_matrix(i))
        if stacked.nrows == 0:
            return Subspace.full(self.field, self.dim)
        ker = stacked.kernel()
        return Subspace.from_vectors(self.field, self.dim, ker.rows)

    def killing_gram(self):
        """Gram matrix of the Killing form and its nondegeneracy flag."""
        F = self.field
        kappa = Matrix.zeros(F, self.dim, self.dim)
        for i in range(self.dim):
            for j in range(i, self.dim):
                acc = F.zero()
                for k in range(self.dim):
                    row = self.sc.get((i, k))
                    if not row:
                        continue
                    for l, v in row.items():
                        w = self.sc.get((j, l), {}).get(k)
                        if w is not None:
                            acc = F.add(acc, F.mul(v, w))
                kappa.rows[i][j] = acc
                kappa.rows[j][i] = acc
        return kappa, kappa.rank() == self.dim

    def derived_subspace(self) -> Subspace:
        rows = []
        for (i, j), row in self.sc.items():
            if i < j:
                vec = self.zero_vec()
                for k, v in row.items():
                    vec[k] = v
                rows.append(vec)
        return Subspace.from_vectors(self.field, self.dim, rows)

    # -- centroid ------------------------------------------------------------

    def centroid(self):
        """Centroid as matrices with the grading split and a CommAlgebra view.

        Solved degree by degree: a degree-gamma centroid element is a block
        map g_alpha -> g_(alpha+gamma) commuting with ad of a generating set,
        which suffices since ad([x,y]) = [ad x, ad y].  Cached.
        """
        if self._centroid is not None:
            return self._centroid
        gens = self.generators()
        qm = self._quotient
        comps = self._components
        mats = []
        by_degree = {}
        for gamma in sorted(qm.reps):
            basis = self._centroid_degree(gamma, gens, comps, qm)
            if basis:
                by_degree[gamma] = list(range(len(mats), len(mats) + len(basis)))
                mats.extend(basis)
        self._centroid = CentroidData.build(self, mats, by_degree)
        return self._centroid

    def _centroid_degree(self, gamma, gens, comps, qm):
        """Basis of degree-gamma centroid maps as matrices.

        A degree-gamma map phi has block variables M[r][c] with
        eff(r) = eff(c) + gamma; phi(ad_x b_c) = ad_x phi(b_c) per generator
        x and basis index c gives one scalar row per coordinate of the target
        component eff(c) + eff(x) + gamma.
        """
        F = self.field
        var_index = {}
        for alpha, idxs in comps.items():
            tgt = comps.get(qm.add(alpha, gamma), ())
            for c in idxs:
                for r in tgt:
                    var_index[(r, c)] = len(var_index)
        if not var_index:
            return []
        rows = []
        for x in gens:
            dx = self.effective_degree(x)
            for c in range(self.dim):
                target = qm.add(qm.add(self.effective_degree(c), dx), gamma)
                row_for = {r: {} for r in comps.get(target, ())}
                for k, v in self.sc.get((x, c), {}).items():  # phi([x, b_c])
                    for r in comps.get(target, ()):
                        var = var_index.get((r, k))
                        if var is not None:
                            d = row_for[r]
                            d[var] = F.add(d.get(var, F.zero()), v)
                for m in comps.get(qm.add(self.effective_degree(c), gamma), ()):
                    var = var_index.get((m, c))
                    if var is None:
                        continue
                    for k, v in self.sc.get((x, m), {}).items():  # -[x, phi(b_c)]
                        d = row_for.setdefault(k, {})
                        d[var] = F.sub(d.get(var, F.zero()), v)
                for row in row_for.values():
                    row = {kk: vv for kk, vv in row.items() if not F.is_zero(vv)}
                    if row:
                        rows.append(row)
        ker = sparse_kernel(F, rows, len(var_index))
        out = []
        rev = {v: k for k, v in var_index.items()}
        for vec in ker.rows:
            m = Matrix.zeros(F, self.dim, self.dim)
            for pos, val in enumerate(vec):
                if not F.is_zero(val):
                    r, c = rev[pos]
                    m.rows[r][c] = val
            out.append(m)
        return out

    # -- structural certificates ----------------------------------------------

    def simplicity_certificate(self, seed=0, probes=DEFAULT_PROBES) -> SimplicityVerdict:
        report = self.verify()
        if not report.noncommutative:
            return SimplicityVerdict("NotSimple", Subspace.full(self.field, self.dim),
                                     "algebra is commutative")
        cent = self.centroid()
        if self.field.characteristic() == 0:
            _, nondeg = self.killing_gram()
            if nondeg and cent.dim == 1:
                return SimplicityVerdict("SimpleCertified", detail="Killing nondegenerate, centroid scalar")
        witness = self._find_ideal_witness(cent, seed, probes)
        if witness is not None:
            return SimplicityVerdict("NotSimple", witness)
        return SimplicityVerdict("Unknown")

    def _find_ideal_witness(self, cent, seed, probes):
        # centroid idempotent route (exact fields only)
        if cent is not None and cent.comm_algebra is not None:
            try:
                idems = idempotents_commutative(cent.comm_algebra, seed=seed)
            except NonSplit:
                idems = []
            if len(idems) > 1:
                for e in idems:
                    mat = cent.matrix_of(e)
                    img = Subspace.from_vectors(self.field, self.dim, mat.transpose().rows)
                    img = self.ideal_closure(img)
                    if 0 < img.dim < self.dim:
                        return img
        # homogeneous basis probes
        for i in range(self.dim):
            cl = self.ideal_closure(Subspace.from_vectors(self.field, self.dim, [self.basis_vec(i)]))
            if 0 < cl.dim < self.dim:
                return cl
        # random two-component probes
        supp = self.support()
        for a_idx in range(len(supp)):
            for b_idx in range(a_idx + 1, len(supp)):
                rng = derive_rng(seed, "ideal-probe", supp[a_idx], supp[b_idx])
                for t in range(probes):
                    vec = self.zero_vec()
                    for comp in (supp[a_idx], supp[b_idx]):
                        for i in self._components[comp]:
                            vec[i] = self.field.from_int(rng.choice((-2, -1, 1, 2)))
                    cl = self.ideal_closure(Subspace.from_vectors(self.field, self.dim, [vec]))
                    if 0 < cl.dim < self.dim:
                        return cl
        return None

    def support_of_subspace(self, U: Subspace):
        out = set()
        for alpha, idxs in self._components.items():
            cols = set(idxs)
            if any(any(not self.field.is_zero(row[c]) for c in cols) for row in U.mat.rows):
                out.add(alpha)
        return out

    def size_of_subspace(self, U: Subspace, cap=DEFAULT_SUBSET_CAP):
        """Minimum support cardinality over nonzero elements of U."""
        if U.is_zero():
            raise EmptySubspace("size of the zero subspace")
        supp = sorted(self.support_of_subspace(U))
        tested = 0
        for r in range(1, len(supp) + 1):
            for S in combinations(supp, r):
                tested += 1
                if tested > cap:
                    raise SearchCapExceeded(f"size() exceeded {cap} subsets")
                coords = [i for alpha in S for i in self._components[alpha]]
                if not U.coordinate_slice(coords).is_zero():
                    return r
        raise AssertionError("nonzero subspace must meet some component set")

    def minimal_support_span(self, U: Subspace, cap=DEFAULT_SUBSET_CAP):
        """Span of all elements of U of minimal support, with that size."""
        r = self.size_of_subspace(U, cap)
        supp = sorted(self.support_of_subspace(U))
        total = Subspace.zero(self.field, self.dim)
        tested = 0
        for S in combinations(supp, r):
            tested += 1
            if tested > cap:
                raise SearchCapExceeded(f"minimal support span exceeded {cap} subsets")
            coords = [i for alpha in S for i in self._components[alpha]]
            piece = U.coordinate_slice(coords)
            if not piece.is_zero():
                total = total.add(piece)
        return total, r

    def component_subspace(self, reps):
        coords = [i for rep in reps for i in self.component_indices(rep)]
        vecs = []
        for c in coords:
            vecs.append(self.basis_vec(c))
        return Subspace.from_vectors(self.field, self.dim, vecs)

    def graded_simple_check(self, seed=0, probes=DEFAULT_PROBES) -> GradedSimpleVerdict:
        F = self.field
        report = self.verify()
        if not report.noncommutative:
            return GradedSimpleVerdict("NotGradedSimple", Subspace.full(F, self.dim),
                                       "algebra is commutative")
        tier_a = all(len(idxs) <= 1 for idxs in self._components.values())
        if not tier_a and F.characteristic() == 0:
            # sufficient certificate, cheaper than the closure sweep below
            _, nondeg = self.killing_gram()
            if nondeg:
                gens = self.generators()
                zero_piece = self._centroid_degree(
                    self._quotient.rep(self.group.identity()), gens,
                    self._components, self._quotient)
                if len(zero_piece) == 1:
                    return GradedSimpleVerdict(
                        "GradedSimple",
                        detail="tier B: Killing nondegenerate and scalar degree-0 graded centroid")
        # homogeneous basis closures catch any graded ideal meeting a basis line
        for i in range(self.dim):
            cl = self.ideal_closure(Subspace.from_vectors(F, self.dim, [self.basis_vec(i)]))
            if 0 < cl.dim < self.dim:
                return GradedSimpleVerdict("NotGradedSimple", cl,
                                           f"closure of homogeneous basis vector {i} is proper")
        if tier_a:
            # complete: every homogeneous vector is a scalar multiple of a basis vector
            return GradedSimpleVerdict("GradedSimple", detail="tier A: 1-dimensional components")
        hit = 0
        for alpha, idxs in sorted(self._components.items()):
            for t in range(probes):
                rng = derive_rng(seed, "graded-probe", alpha, t)
                vec = self.zero_vec()
                for i in idxs:
                    vec[i] = F.from_int(rng.randrange(-2, 3))
                if all(F.is_zero(vec[i]) for i in idxs):
                    vec[idxs[0]] = F.one()
                cl = self.ideal_closure(Subspace.from_vectors(F, self.dim, [vec]))
                if 0 < cl.dim < self.dim:
                    return GradedSimpleVerdict("NotGradedSimple", cl,
                                               f"closure of a random homogeneous vector in {alpha}")
                hit += 1
        if not self.derived_subspace().is_full():
            return GradedSimpleVerdict("Inconclusive", detail="[g,g] proper; probes found nothing",
                                       evidence={"probes": hit})
        return GradedSimpleVerdict("ProbablyGradedSimple",
                                   detail="all homogeneous probes generate the algebra",
                                   evidence={"probes": hit})

    def regrade_by_quotient(self, P: Subgroup) -> "GradedLieAlgebra":
        """Same structure constants, degrees pushed to Q/P canonical representatives."""
        if not self.modulus.is_trivial():
            raise ValueError("regrade expects an algebra graded by Q itself")
        brackets = [(i, j, dict(row)) for (i, j), row in self.sc.items()]
        return GradedLieAlgebra(self.field, self.group, self.degrees, brackets,
                                modulus=P, fine=self.fine, full_table=True)

    def is_graded_subspace(self, S: Subspace) -> bool:
        total = 0
        for alpha in self._components:
            coords = [i for i in self._components[alpha]]
            total += S.coordinate_slice(coords).dim
        return total == S.dim


class CentroidData:
    """Centroid basis matrices, their grading split, and a CommAlgebra view."""

    def __init__(self, algebra, mats, by_degree, unit_coords, table, commutative, perfect):
        self.algebra = algebra
        self.mats = mats
        self.by_degree = by_degree
        self.unit_coords = unit_coords
        self.table = table
        self.commutative = commutative
        self.perfect = perfect
        self.comm_algebra = (
            CommAlgebra(algebra.field, len(mats), table, unit_coords) if commutative and table else None
        )

    @classmethod
    def build(cls, algebra, mats, by_degree):
        F = algebra.field
        n = algebra.dim
        flat = Subspace.from_vectors(F, n * n, [[x for row in m.rows for x in row] for m in mats])
        ident = [x for row in Matrix.identity(F, n).rows for x in row]
        unit_coords = flat.coords_of(ident)
        if unit_coords is None:
            raise AssertionError("identity must lie in the centroid")
        # coords_of works against the RREF basis; re-express the given mats there
        coords = [flat.coords_of([x for row in m.rows for x in row]) for m in mats]
        basis_change = Matrix(F, coords)
        table = []
        commutative = True
        for i, mi in enumerate(mats):
            row = []
            for j, mj in enumerate(mats):
                prod = mi.mul(mj)
                pc = flat.coords_of([x for r in prod.rows for x in r])
                if pc is None:
                    raise AssertionError("centroid is not closed under composition")
                sol = _solve_coords(F, basis_change, pc)
                row.append(sol)
            table.append(row)
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                if table[i][j] != table[j][i]:
                    commutative = False
        unit_sol = _solve_coords(F, basis_change, unit_coords)
        perfect = algebra.derived_subspace().is_full()
        return cls(algebra, mats, by_degree, unit_sol, table, commutative, perfect)

    @property
    def dim(self):
        return len(self.mats)

    def degree_dims(self):
        return {gamma: len(idxs) for gamma, idxs in self.by_degree.items()}

    def matrix_of(self, coeffs):
        F = self.algebra.field
        n = self.algebra.dim
        out = Matrix.zeros(F, n, n)
        for c, m in zip(coeffs, self.mats):
            if F.is_zero(c):
                continue
            for r in range(n):
                orow, mrow = out.rows[r], m.rows[r]
                for k in range(n):
                    if not F.is_zero(mrow[k]):
                        orow[k] = F.add(orow[k], F.mul(c, mrow[k]))
        return out


def _solve_coords(F, basis_change, target):
    """Solve basis_change^T x = target: coordinates of target in the mats basis."""
    from .linalg import solve_linear

    sol = solve_linear(basis_change.transpose(), target)
    if sol is None:
        raise AssertionError("coordinate solve failed on a closed system")
    return sol
