"""Group constructors and the textual group-spec grammar.

Grammar::

    cyclic:n | abelian:n1,n2,... | dihedral:n | quaternion:n | sym:n | alt:n
    | heisenberg:p | semidirect:n,m,r | perm:<path> | direct(<spec>,<spec>)
    | gqp:p,q | fieldmod:p^f,n

``dihedral:n`` has order 2n, ``quaternion:n`` is the generalised quaternion
group of order n (a power of two, at least 8), ``semidirect:n,m,r`` is
C_n x| C_m with b a b^-1 = a^r.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

from .fields import field, is_prime
from .group import ENUM_CAP, CapExceeded, FiniteGroup, GroupError


class SpecError(GroupError):
    """Malformed group spec or violated arithmetic precondition."""


# permutations: zero-based image tuples, composed left to right


def perm_mul(a: tuple, b: tuple) -> tuple:
    return tuple(b[x] for x in a)


def perm_inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def perm_fmt(a: tuple) -> str:
    seen, cycles = set(), []
    for i in range(len(a)):
        if i in seen or a[i] == i:
            continue
        cyc, j = [i], a[i]
        seen.add(i)
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = a[j]
        cycles.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(cycles) or "()"


def cycle(n: int, *points: int) -> tuple:
    """Zero-based permutation of degree ``n`` given one-based cycle points."""
    img = list(range(n))
    pts = [x - 1 for x in points]
    for a, b in zip(pts, pts[1:] + pts[:1]):
        img[a] = b
    return tuple(img)


def _check_cap(spec: str, order: int, cap: int | None) -> None:
    cap = ENUM_CAP if cap is None else cap
    if order > cap:
        raise CapExceeded(f"{spec}: order {order} exceeds enumeration cap {cap}")


def abelian_group(moduli, spec: str | None = None, cap=None) -> FiniteGroup:
    moduli = tuple(int(n) for n in moduli)
    if any(n < 1 for n in moduli):
        raise SpecError("abelian moduli must be positive")
    spec = spec or "abelian:" + ",".join(map(str, moduli))
    order = math.prod(moduli)
    _check_cap(spec, order, cap)
    k = len(moduli)

    def mul(a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, moduli))

    def inv(a):
        return tuple((-x) % n for x, n in zip(a, moduli))

    gens = []
    for i, n in enumerate(moduli):
        if n > 1:
            g = [0] * k
            g[i] = 1
            gens.append(tuple(g))
    G = FiniteGroup(spec, (0,) * k, gens, mul, inv, order=order, enum_cap=cap)
    G.meta["kind"] = "abelian"
    G.meta["moduli"] = moduli
    return G


def cyclic_group(n: int, cap=None) -> FiniteGroup:
    return abelian_group((n,), spec=f"cyclic:{n}", cap=cap)


def dihedral_group(n: int, cap=None) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; payload (a, b) means r^a s^b."""
    if n < 1:
        raise SpecError("dihedral:n needs n >= 1")
    spec = f"dihedral:{n}"
    _check_cap(spec, 2 * n, cap)

    def mul(x, y):
        a, b = x
        c, d = y
        return ((a + (c if b == 0 else -c)) % n, (b + d) % 2)

    def inv(x):
        a, b = x
        return ((-a) % n, 0) if b == 0 else x

    gens = [(1 % n, 0), (0, 1)]
    return FiniteGroup(spec, (0, 0), gens, mul, inv, order=2 * n, enum_cap=cap)


def quaternion_group(n: int, cap=None) -> FiniteGroup:
    """Generalised quaternion group of order n = 2^k >= 8; payload (a, b) = x^a y^b."""
    if n < 8 or n & (n - 1):
        raise SpecError("quaternion:n needs n a power of two, n >= 8")
    spec = f"quaternion:{n}"
    _check_cap(spec, n, cap)
    h = n // 2  # order of x
    m = h // 2  # y^2 = x^m

    def mul(x, y):
        a, b = x
        c, d = y
        e = a + (c if b == 0 else -c)
        if b and d:
            e += m
        return (e % h, (b + d) % 2)

    return FiniteGroup(spec, (0, 0), [(1, 0), (0, 1)], mul, order=n, enum_cap=cap)


def symmetric_group(n: int, cap=None) -> FiniteGroup:
    if n < 1:
        raise SpecError("sym:n needs n >= 1")
    spec = f"sym:{n}"
    _check_cap(spec, math.factorial(n), cap)
    gens = []
    if n >= 2:
        gens.append(cycle(n, 1, 2))
    if n >= 3:
        gens.append(cycle(n, *range(1, n + 1)))
    G = FiniteGroup(spec, tuple(range(n)), gens, perm_mul, perm_inv,
                    order=math.factorial(n), enum_cap=cap, fmt=perm_fmt)
    G.meta["kind"] = "perm"
    G.meta["degree"] = n
    return G


def alternating_group(n: int, cap=None) -> FiniteGroup:
    if n < 1:
        raise SpecError("alt:n needs n >= 1")
    spec = f"alt:{n}"
    order = max(1, math.factorial(n) // 2)
    _check_cap(spec, order, cap)
    gens = [cycle(n, 1, 2, k) for k in range(3, n + 1)]
    G = FiniteGroup(spec, tuple(range(n)), gens, perm_mul, perm_inv,
                    order=order, enum_cap=cap, fmt=perm_fmt)
    G.meta["kind"] = "perm"
    G.meta["degree"] = n
    return G


def perm_group(degree: int, generators, spec: str | None = None, cap=None) -> FiniteGroup:
    """Permutation group from zero-based image tuples."""
    gens = []
    for g in generators:
        g = tuple(g)
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise SpecError(f"not a permutation of degree {degree}: {g}")
        gens.append(g)
    G = FiniteGroup(spec or f"perm[{degree}]", tuple(range(degree)), gens,
                    perm_mul, perm_inv, enum_cap=cap, fmt=perm_fmt)
    G.meta["kind"] = "perm"
    G.meta["degree"] = degree
    return G


def load_perm_json(path, cap=None) -> FiniteGroup:
    try:
        data = json.loads(Path(path).read_text())
        degree = int(data["degree"])
        gens = [[int(x) - 1 for x in g] for g in data["generators"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise SpecError(f"malformed permutation file {path}: {exc}") from exc
    return perm_group(degree, gens, spec=f"perm:{path}", cap=cap)


def heisenberg_group(p: int, cap=None) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over F_p: extraspecial of exponent p (p odd)."""
    if not is_prime(p):
        raise SpecError(f"heisenberg:{p}: {p} is not prime")
    spec = f"heisenberg:{p}"
    _check_cap(spec, p**3, cap)

    def mul(x, y):
        a, b, c = x
        d, e, f = y
        return ((a + d) % p, (b + e) % p, (c + f + a * e) % p)

    def inv(x):
        a, b, c = x
        return ((-a) % p, (-b) % p, (-c + a * b) % p)

    return FiniteGroup(spec, (0, 0, 0), [(1, 0, 0), (0, 1, 0)], mul, inv, order=p**3, enum_cap=cap)


def metacyclic_group(n: int, m: int, r: int, cap=None) -> FiniteGroup:
    """C_n x| C_m with b a b^-1 = a^r; payload (x, y) = a^x b^y."""
    if n < 1 or m < 1 or pow(r, m, n) != 1 % n or math.gcd(r, n) != 1:
        raise SpecError(f"semidirect:{n},{m},{r}: need r^m = 1 mod n with gcd(r, n) = 1")
    spec = f"semidirect:{n},{m},{r}"
    _check_cap(spec, n * m, cap)
    powers = [pow(r, k, n) for k in range(m)]

    def mul(x, y):
        return ((x[0] + y[0] * powers[x[1]]) % n, (x[1] + y[1]) % m)

    return FiniteGroup(spec, (0, 0), [(1 % n, 0), (0, 1 % m)], mul, order=n * m, enum_cap=cap)


def direct_product(A: FiniteGroup, B: FiniteGroup, cap=None) -> FiniteGroup:
    spec = f"direct({A.spec},{B.spec})"
    order = A.order * B.order
    _check_cap(spec, order, cap)

    def mul(x, y):
        return (A.mul(x[0], y[0]), B.mul(x[1], y[1]))

    def inv(x):
        return (A.inv(x[0]), B.inv(x[1]))

    gens = [(g, B.identity) for g in A.generators] + [(A.identity, g) for g in B.generators]
    G = FiniteGroup(spec, (A.identity, B.identity), gens, mul, inv, order=order, enum_cap=cap,
                    fmt=lambda x: f"({A.fmt(x[0])},{B.fmt(x[1])})")
    G.meta["factors"] = (A, B)
    return G


def fieldmod_group(p: int, f: int, n: int, cap=None) -> FiniteGroup:
    """V x| <h> with V = GF(p^f)^n and h a primitive element acting by scalars.

    Payload ``(v, k)`` means the translation v followed by h^k; the product
    is ``(a, k)(b, l) = (a h^l + b, k + l)``.  ``meta`` records V's indices
    through the ``normal_part`` predicate.
    """
    if not is_prime(p) or f < 1 or n < 1:
        raise SpecError(f"fieldmod:{p}^{f},{n}: need p prime, f >= 1, n >= 1")
    F = field(p, f)
    spec = f"fieldmod:{p}^{f},{n}" if f > 1 else f"fieldmod:{p},{n}"
    e = F.size - 1
    order = F.size**n * e
    _check_cap(spec, order, cap)
    hp = [F.power(F.primitive, k) for k in range(e)]
    add, fmul = F.add_tab, F.mul_tab

    def act(v, k):
        s = hp[k]
        return tuple(fmul[x][s] for x in v)

    def mul(x, y):
        a, k = x
        b, l = y
        return (tuple(add[s][t] for s, t in zip(act(a, l), b)), (k + l) % e)

    def inv(x):
        a, k = x
        kk = (-k) % e
        return (tuple(F.neg(s) for s in act(a, kk)), kk)

    gens = []
    for i in range(n):
        v = [0] * n
        v[i] = 1
        gens.append((tuple(v), 0))
    gens.append(((0,) * n, 1 % e))
    G = FiniteGroup(spec, ((0,) * n, 0), gens, mul, inv, order=order, enum_cap=cap)
    G.meta.update(kind="fieldmod", field=F, dim=n, act=act, normal_part=lambda x: x[1] == 0)
    return G


def _split_args(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SpecError(f"unbalanced parentheses in {body!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise SpecError(f"unbalanced parentheses in {body!r}")
    parts.append("".join(cur).strip())
    # kinds start with a letter, so bare numeric pieces belong to the previous spec
    merged: list[str] = []
    for part in parts:
        if merged and re.fullmatch(r"\d+(\^\d+)?", part):
            merged[-1] += "," + part
        else:
            merged.append(part)
    return merged


def _ints(spec: str, args: str, count: int | None = None) -> list[int]:
    try:
        vals = [int(x) for x in args.split(",")]
    except ValueError:
        raise SpecError(f"{spec}: expected integers") from None
    if count is not None and len(vals) != count:
        raise SpecError(f"{spec}: expected {count} integer(s)")
    return vals


def construct(spec: str, cap: int | None = None) -> FiniteGroup:
    """Build the group described by ``spec`` (see module docstring)."""
    spec = spec.strip()
    m = re.fullmatch(r"direct\((.*)\)", spec)
    if m:
        parts = _split_args(m.group(1))
        if len(parts) < 2:
            raise SpecError(f"{spec}: direct() needs at least two factors")
        G = construct(parts[0], cap)
        for part in parts[1:]:
            G = direct_product(G, construct(part, cap), cap)
        return G
    if ":" not in spec:
        raise SpecError(f"cannot parse group spec {spec!r}")
    kind, args = spec.split(":", 1)
    if kind == "cyclic":
        (n,) = _ints(spec, args, 1)
        if n < 1:
            raise SpecError(f"{spec}: order must be positive")
        return cyclic_group(n, cap)
    if kind == "abelian":
        return abelian_group(_ints(spec, args), spec=spec, cap=cap)
    if kind == "dihedral":
        return dihedral_group(*_ints(spec, args, 1), cap=cap)
    if kind == "quaternion":
        return quaternion_group(*_ints(spec, args, 1), cap=cap)
    if kind == "sym":
        return symmetric_group(*_ints(spec, args, 1), cap=cap)
    if kind == "alt":
        return alternating_group(*_ints(spec, args, 1), cap=cap)
    if kind == "heisenberg":
        return heisenberg_group(*_ints(spec, args, 1), cap=cap)
    if kind == "semidirect":
        return metacyclic_group(*_ints(spec, args, 3), cap=cap)
    if kind == "perm":
        return load_perm_json(args, cap)
    if kind == "fieldmod":
        m = re.fullmatch(r"\s*(\d+)(?:\^(\d+))?\s*,\s*(\d+)\s*", args)
        if not m:
            raise SpecError(f"{spec}: expected fieldmod:p^f,n")
        return fieldmod_group(int(m.group(1)), int(m.group(2) or 1), int(m.group(3)), cap)
    if kind == "gqp":
        from .gqp import GqpGroup

        p, q = _ints(spec, args, 2)
        return GqpGroup(p, q).as_finite_group(cap)
    raise SpecError(f"unknown group kind {kind!r}")
