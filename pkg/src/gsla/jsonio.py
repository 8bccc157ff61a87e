"""JSON schemas for fields, groups, algebras and modules (format 1).

Scalars travel as literal strings: polynomials in z with rational
coefficients for cyclotomic fields (z is the distinguished primitive root),
plain rationals over Q, decimal integers over F_p.  Bracket and action
tables store only what is nonzero; algebra tables store i < j entries with
the antisymmetric completion implicit.  Parse failures raise InputError
carrying the JSON path of the offending entry.
"""

from __future__ import annotations

from .errors import InputError
from .fields import Cyclotomic, Field, PrimeField, Rationals, field_from_spec
from .gradedmod import GradedModule, LoopModule, loop_module
from .groups import FinAbGroup, Subgroup, subgroup_generate, trivial_subgroup
from .lie import GradedLieAlgebra
from .linalg import Matrix
from .loopalg import LoopAlgebra, loop_algebra

FORMAT = 1


def _need(d, key, path, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise InputError(f"{path}.{key}", "missing required field")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise InputError(f"{path}.{key}", f"expected {kind.__name__}, got {type(v).__name__}")
    return v


def field_to_json(field: Field):
    if isinstance(field, Rationals):
        return {"kind": "rationals"}
    if isinstance(field, Cyclotomic):
        return {"kind": "cyclotomic", "n": field.n}
    if isinstance(field, PrimeField):
        return {"kind": "prime", "p": field.p}
    raise InputError("$.field", f"unknown field object {field!r}")


def field_from_json(d, path="$.field"):
    kind = _need(d, "kind", path, str)
    try:
        if kind == "rationals":
            return field_from_spec("rationals")
        if kind == "cyclotomic":
            return field_from_spec("cyclotomic", n=_need(d, "n", path, int))
        if kind == "prime":
            return field_from_spec("prime", p=_need(d, "p", path, int))
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(path, str(exc))
    raise InputError(f"{path}.kind", f"unknown field kind {kind!r}")


def group_to_json(group: FinAbGroup):
    return {"moduli": list(group.moduli)}


def group_from_json(d, path="$.group"):
    moduli = _need(d, "moduli", path, list)
    if not all(isinstance(m, int) and m >= 1 for m in moduli):
        raise InputError(f"{path}.moduli", "moduli must be positive integers")
    return FinAbGroup(tuple(moduli))


def subgroup_to_json(P: Subgroup):
    return {"generators": [list(x) for x in P.generators]}


def subgroup_from_json(group, d, path="$.modulus"):
    gens = _need(d, "generators", path, list)
    try:
        return subgroup_generate(group, [tuple(x) for x in gens])
    except Exception as exc:
        raise InputError(f"{path}.generators", str(exc))


def _scalar(field, text, path):
    if not isinstance(text, str):
        raise InputError(path, f"scalar literal must be a string, got {type(text).__name__}")
    try:
        return field.parse(text)
    except InputError:
        raise InputError(path, f"bad scalar literal {text!r}")


def algebra_to_json(g: GradedLieAlgebra, loop: LoopAlgebra = None):
    out = {
        "format": FORMAT,
        "field": field_to_json(g.field),
        "group": group_to_json(g.group),
        "dim": g.dim,
        "degrees": [list(d) for d in g.degrees],
        "brackets": [],
    }
    if not g.modulus.is_trivial():
        out["modulus"] = subgroup_to_json(g.modulus)
    for (i, j), row in sorted(g.sc.items()):
        if i >= j:
            continue
        coeffs = [{"k": k, "c": g.field.format(v)} for k, v in sorted(row.items())]
        out["brackets"].append({"i": i, "j": j, "coeffs": coeffs})
    if loop is not None:
        out["loop"] = {
            "subgroup": subgroup_to_json(loop.subgroup),
            "base": algebra_to_json(loop.base),
        }
    return out


def algebra_from_json(d, path="$"):
    if _need(d, "format", path, int) != FORMAT:
        raise InputError(f"{path}.format", f"unsupported format {d['format']}")
    field = field_from_json(_need(d, "field", path), f"{path}.field")
    group = group_from_json(_need(d, "group", path), f"{path}.group")
    dim = _need(d, "dim", path, int)
    degrees_raw = _need(d, "degrees", path, list)
    if len(degrees_raw) != dim:
        raise InputError(f"{path}.degrees", f"expected {dim} degrees, got {len(degrees_raw)}")
    degrees = []
    for n, dg in enumerate(degrees_raw):
        try:
            degrees.append(group.reduce_elem(tuple(dg)))
        except Exception as exc:
            raise InputError(f"{path}.degrees[{n}]", str(exc))
    modulus = None
    if "modulus" in d:
        modulus = subgroup_from_json(group, d["modulus"], f"{path}.modulus")
    brackets = []
    for n, ent in enumerate(_need(d, "brackets", path, list)):
        p = f"{path}.brackets[{n}]"
        i = _need(ent, "i", p, int)
        j = _need(ent, "j", p, int)
        if not (0 <= i < dim and 0 <= j < dim):
            raise InputError(p, f"basis index out of range in ({i},{j})")
        if i >= j:
            raise InputError(p, "store only i < j entries; antisymmetry is implicit")
        coeffs = {}
        for m, co in enumerate(_need(ent, "coeffs", p, list)):
            k = _need(co, "k", f"{p}.coeffs[{m}]", int)
            if not 0 <= k < dim:
                raise InputError(f"{p}.coeffs[{m}].k", f"index {k} out of range")
            coeffs[k] = _scalar(field, _need(co, "c", f"{p}.coeffs[{m}]"), f"{p}.coeffs[{m}].c")
        brackets.append((i, j, coeffs))
    fine = modulus is None
    g = GradedLieAlgebra(field, group, degrees, brackets, modulus=modulus, fine=fine)
    return g


def loop_from_json(d, path="$"):
    """Rebuild a LoopAlgebra from an algebra document carrying a loop block."""
    if "loop" not in d:
        return None
    block = d["loop"]
    base = algebra_from_json(_need(block, "base", f"{path}.loop"), f"{path}.loop.base")
    P = subgroup_from_json(base.group, _need(block, "subgroup", f"{path}.loop"), f"{path}.loop.subgroup")
    return loop_algebra(base.group, P, base)


def module_to_json(W: GradedModule, loop: LoopModule = None):
    out = {
        "format": FORMAT,
        "algebra": algebra_to_json(W.algebra),
        "dim": W.dim,
        "degrees": [list(d) for d in W.degrees],
        "action": [],
    }
    if not W.modulus.is_trivial():
        out["modulus"] = subgroup_to_json(W.modulus)
    for (i, j), row in sorted(W.act.items()):
        coeffs = [{"k": k, "c": W.field.format(v)} for k, v in sorted(row.items())]
        out["action"].append({"xi": i, "vj": j, "coeffs": coeffs})
    if loop is not None:
        out["loop"] = {
            "subgroup": subgroup_to_json(loop.subgroup),
            "base": module_to_json(loop.base),
        }
    return out


def module_from_json(d, path="$"):
    if _need(d, "format", path, int) != FORMAT:
        raise InputError(f"{path}.format", f"unsupported format {d['format']}")
    algebra = algebra_from_json(_need(d, "algebra", path), f"{path}.algebra")
    dim = _need(d, "dim", path, int)
    degrees_raw = _need(d, "degrees", path, list)
    if len(degrees_raw) != dim:
        raise InputError(f"{path}.degrees", f"expected {dim} degrees, got {len(degrees_raw)}")
    degrees = []
    for n, dg in enumerate(degrees_raw):
        try:
            degrees.append(algebra.group.reduce_elem(tuple(dg)))
        except Exception as exc:
            raise InputError(f"{path}.degrees[{n}]", str(exc))
    modulus = None
    if "modulus" in d:
        modulus = subgroup_from_json(algebra.group, d["modulus"], f"{path}.modulus")
    action = []
    for n, ent in enumerate(_need(d, "action", path, list)):
        p = f"{path}.action[{n}]"
        i = _need(ent, "xi", p, int)
        j = _need(ent, "vj", p, int)
        if not (0 <= i < algebra.dim):
            raise InputError(f"{p}.xi", f"algebra index {i} out of range")
        if not (0 <= j < dim):
            raise InputError(f"{p}.vj", f"module index {j} out of range")
        coeffs = {}
        for m, co in enumerate(_need(ent, "coeffs", p, list)):
            k = _need(co, "k", f"{p}.coeffs[{m}]", int)
            if not 0 <= k < dim:
                raise InputError(f"{p}.coeffs[{m}].k", f"index {k} out of range")
            coeffs[k] = _scalar(algebra.field, _need(co, "c", f"{p}.coeffs[{m}]"), f"{p}.coeffs[{m}].c")
        action.append((i, j, coeffs))
    W = GradedModule(algebra, degrees, action, modulus=modulus)
    return W


def loop_module_from_json(d, path="$"):
    if "loop" not in d:
        return None
    block = d["loop"]
    base = module_from_json(_need(block, "base", f"{path}.loop"), f"{path}.loop.base")
    P = subgroup_from_json(base.group, _need(block, "subgroup", f"{path}.loop"), f"{path}.loop.subgroup")
    # the ambient algebra of the module document is the Q-graded one
    W = module_from_json({k: v for k, v in d.items() if k != "loop"}, path)
    return loop_module(W.algebra, P, base)


def matrix_to_json(m: Matrix, field):
    return [[field.format(x) for x in row] for row in m.rows]
