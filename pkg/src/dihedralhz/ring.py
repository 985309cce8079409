"""The closed-form multiplicative structure of the graded homotopy ring.

Monomials Sigma^{-s} u_{2a}^i u_{ga}^j a_a^k a_g^l fall into eight families
plus zero; each grading collects finitely many of them.  Multiplication is
exponent addition with prefix bookkeeping: the families indexed by negative
powers of the orientation classes carry literal integer prefixes 2, p, 2p,
and products divide exactly by the target prefix.

Sublevels for the cyclic subgroups use the analogous closed forms in
u_lambda, a_lambda (index-p subgroup) and u_{2sigma}, a_sigma (index-p
reflection subgroup), with at most one canonical generator per grading.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .abelian import FgAbGroup, FgAbMap, Presentation
from .dihedral import Grading, GroupSpec

FAMILIES = ("F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "ZERO")


class UndefinedLevelPair(Exception):
    pass


class GradingMismatch(Exception):
    pass


class ElementSyntaxError(Exception):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Monomial:
    """Exponent tuple (s, i, j, k, l) for Sigma^{-1}, u2a, uga, aa, ag."""

    s: int
    i: int
    j: int
    k: int
    l: int

    def degree(self) -> Grading:
        return Grading(
            -self.s + 2 * self.i + self.j,
            -2 * self.i + self.j - self.k,
            -self.j - self.l,
        )

    def exponents(self):
        return (self.s, self.i, self.j, self.k, self.l)


def classify(m: Monomial) -> str:
    s, i, j, k, l = m.exponents()
    if s == 0:
        if i >= 0 and j >= 0 and k >= 0 and l >= 0:
            return "ZERO" if (k >= 1 and l >= 1) else "F1"
        if k == 0 and l == 0:
            if i <= -1 and j >= 0:
                return "F2"
            if i >= 0 and j <= -1:
                return "F3"
            if i <= -1 and j <= -1:
                return "F4"
        if i <= -1 and j >= 0 and k == 0 and l >= 1:
            return "F5"
        if i >= 0 and j <= -1 and k >= 1 and l == 0:
            return "F6"
        return "ZERO"
    if s == 1:
        if j <= -1 and l <= -1 and k == 0:
            return "F7"
        if i <= -1 and k <= -1 and l == 0:
            return "F8"
        return "ZERO"
    return "ZERO"


def family_prefix(tag: str, p: int) -> int:
    return {"F2": 2, "F3": p, "F4": 2 * p}.get(tag, 1)


def family_torsion(m: Monomial, p: int) -> int:
    """0 for an infinite cyclic family, else the torsion order."""
    tag = classify(m)
    if tag == "F1":
        if m.k >= 1:
            return 2
        if m.l >= 1:
            return p
        return 0
    if tag in ("F2", "F3", "F4"):
        return 0
    if tag in ("F5", "F7"):
        return p
    if tag in ("F6", "F8"):
        return 2
    return 1  # ZERO


def monomials_at(spec: GroupSpec, g: Grading):
    """All nonzero-family monomials of the given degree, canonical order."""
    out = []
    bound = abs(g.a) + abs(g.b) + 2 * abs(g.c) + 4
    for s in (0, 1):
        for l in range(-bound, bound + 1):
            j = -g.c - l
            if (g.a + s - j) % 2:
                continue
            i = (g.a + s - j) // 2
            k = -2 * i + j - g.b
            m = Monomial(s, i, j, k, l)
            if classify(m) != "ZERO":
                assert m.degree() == g
                out.append(m)
    out.sort(key=lambda m: m.exponents())
    return out


def group_at(spec: GroupSpec, g: Grading):
    """(FgAbGroup, canonical basis strings) of the top-level group."""
    monos = monomials_at(spec, g)
    labels = [format_element(element(spec, 1, m)) for m in monos]
    rels = []
    for idx, m in enumerate(monos):
        t = family_torsion(m, spec.p)
        if t:
            row = [0] * len(monos)
            row[idx] = t
            rels.append(tuple(row))
    return Presentation(len(monos), tuple(rels)).group(), labels


@dataclass(frozen=True)
class RingElement:
    """coeff * (prefixed canonical generator of the monomial's family)."""

    p: int
    coeff: int
    mono: Monomial  # meaningless when coeff == 0

    @property
    def is_zero(self):
        return self.coeff == 0

    def degree(self):
        if self.is_zero:
            return None
        return self.mono.degree()


_UNIT = Monomial(0, 0, 0, 0, 0)


def element(spec: GroupSpec, coeff: int, mono: Monomial) -> RingElement:
    """Normalized element: zero family and torsion reduction applied."""
    t = family_torsion(mono, spec.p)
    if t:
        coeff %= t
    if coeff == 0:
        return RingElement(spec.p, 0, _UNIT)
    return RingElement(spec.p, coeff, mono)


def zero_element(spec: GroupSpec) -> RingElement:
    return RingElement(spec.p, 0, _UNIT)


def one_element(spec: GroupSpec) -> RingElement:
    return RingElement(spec.p, 1, _UNIT)


def add(spec: GroupSpec, x: RingElement, y: RingElement) -> RingElement:
    if x.is_zero:
        return y
    if y.is_zero:
        return x
    if x.mono != y.mono:
        raise GradingMismatch("sum of distinct monomials is not supported")
    return element(spec, x.coeff + y.coeff, x.mono)


def multiply(spec: GroupSpec, x: RingElement, y: RingElement) -> RingElement:
    p = spec.p
    if x.is_zero or y.is_zero:
        return zero_element(spec)
    if x.mono.s + y.mono.s >= 2:
        return zero_element(spec)
    m = Monomial(
        x.mono.s + y.mono.s,
        x.mono.i + y.mono.i,
        x.mono.j + y.mono.j,
        x.mono.k + y.mono.k,
        x.mono.l + y.mono.l,
    )
    tag = classify(m)
    if tag == "ZERO":
        return zero_element(spec)
    value = (
        x.coeff
        * family_prefix(classify(x.mono), p)
        * y.coeff
        * family_prefix(classify(y.mono), p)
    )
    prefix = family_prefix(tag, p)
    if value % prefix:
        raise AssertionError("prefix division is not exact")
    return element(spec, value // prefix, m)


# ---------------------------------------------------------------------------
# sublevels


@dataclass(frozen=True)
class CyclicElement:
    """coeff times the canonical generator at one cyclic-level grading.

    For the index-2 cyclic level the grading is x + y*lambda, for the
    reflection level x + y*sigma; the underlying level stores the integer
    dimension in x with y = 0.
    """

    level: str  # "Cp", "C2" or "e"
    x: int
    y: int
    coeff: int

    @property
    def is_zero(self):
        return self.coeff == 0


def cyclic_group_at(spec: GroupSpec, level: str, x: int, y: int):
    """(FgAbGroup, generator string or None, prefix) at one sublevel grading."""
    p = spec.p
    if level == "e":
        if x == 0:
            return FgAbGroup(1, ()), "1", 1
        return FgAbGroup.zero(), None, 1
    if level == "Cp":
        u, a, tor, idx = "ul", "al", p, 1
    elif level == "C2":
        u, a, tor, idx = "u2s", "as", 2, 2
    else:
        raise UndefinedLevelPair(f"unknown level {level!r}")
    if x >= 0 and x % 2 == 0:
        m = x // 2
        n = -y - idx * m
        if n == 0:
            return FgAbGroup(1, ()), _pow_str(u, m) or "1", 1
        if n > 0:
            return FgAbGroup(0, (tor,)), _join(_pow_str(u, m), _pow_str(a, n)), 1
        return FgAbGroup.zero(), None, 1
    if x < 0 and x % 2 == 0:
        i = -x // 2
        if y == idx * i:
            return FgAbGroup(1, ()), f"{tor}*{_pow_str(u, -i)}", tor
        return FgAbGroup.zero(), None, 1
    # odd x: desuspended torsion cone, needs an inverted orientation class
    if x <= -3:
        j = (-1 - x) // 2
        i = y - idx * j
        if i >= 1:
            gen = _join("S^-1", _pow_str(u, -j), _pow_str(a, -i))
            return FgAbGroup(0, (tor,)), gen, 1
    return FgAbGroup.zero(), None, 1


def _pow_str(sym, e):
    return f"{sym}^{e}" if e else ""


def _join(*parts):
    return "*".join(x for x in parts if x)


def cyclic_element(spec, level, x, y, coeff) -> CyclicElement:
    group, gen, _prefix = cyclic_group_at(spec, level, x, y)
    if gen is None:
        return CyclicElement(level, x, y, 0)
    if group.torsion:
        coeff %= group.torsion[0]
    return CyclicElement(level, x, y, coeff)


def restricted_xy(g: Grading, level: str):
    if level == "Cp":
        return (g.a + g.b, g.c)
    if level == "C2":
        return (g.a + g.c, g.b + g.c)
    if level == "e":
        return (g.virtual_dimension, 0)
    raise UndefinedLevelPair(f"unknown level {level!r}")


def res(spec: GroupSpec, from_tag, to_tag, x):
    """Restriction along the subgroup ladder."""
    if from_tag == "G" and to_tag in ("Cp", "C2"):
        return _res_from_top(spec, to_tag, x)
    if from_tag in ("Cp", "C2") and to_tag == "e":
        return _res_to_underlying(spec, x)
    if from_tag == "G" and to_tag == "e":
        return _res_to_underlying(spec, _res_from_top(spec, "Cp", x))
    if from_tag == to_tag:
        return x
    raise UndefinedLevelPair(f"res {from_tag} -> {to_tag}")


def _res_from_top(spec: GroupSpec, level, x: RingElement) -> CyclicElement:
    if x.is_zero:
        return CyclicElement(level, 0, 0, 0)
    g = x.mono.degree()
    rx, ry = restricted_xy(g, level)
    killed = x.mono.k if level == "Cp" else x.mono.l
    if killed >= 1 or (x.mono.s == 1 and (
        (level == "Cp" and classify(x.mono) == "F8")
        or (level == "C2" and classify(x.mono) == "F7")
    )):
        return CyclicElement(level, rx, ry, 0)
    value = x.coeff * family_prefix(classify(x.mono), spec.p)
    _group, gen, prefix = cyclic_group_at(spec, level, rx, ry)
    if gen is None:
        return CyclicElement(level, rx, ry, 0)
    assert value % prefix == 0
    return cyclic_element(spec, level, rx, ry, value // prefix)


def _res_to_underlying(spec: GroupSpec, x: CyclicElement) -> CyclicElement:
    if x.is_zero:
        return CyclicElement("e", 0, 0, 0)
    group, gen, prefix = cyclic_group_at(spec, x.level, x.x, x.y)
    # only torsion-free classes survive; they all live over dimension 0
    if group.torsion or gen is None:
        return CyclicElement("e", 0, 0, 0)
    return cyclic_element(spec, "e", 0, 0, x.coeff * prefix)


def tr(spec: GroupSpec, from_tag, to_tag, x, g: Grading):
    """Transfer along the ladder; g is the ambient top-level grading."""
    if from_tag in ("Cp", "C2") and to_tag == "G":
        return _tr_to_top(spec, from_tag, x, g)
    if from_tag == "e" and to_tag in ("Cp", "C2"):
        return _tr_from_underlying(spec, to_tag, x, g)
    raise UndefinedLevelPair(f"tr {from_tag} -> {to_tag}")


def _tr_to_top(spec: GroupSpec, level, x: CyclicElement, g: Grading):
    rx, ry = restricted_xy(g, level)
    if not x.is_zero and (x.x, x.y) != (rx, ry):
        raise GradingMismatch("element grading does not restrict from g")
    index = 2 if level == "Cp" else spec.p
    if x.is_zero:
        return zero_element(spec)
    torsion_target = cyclic_group_at(spec, level, rx, ry)[0].torsion
    for m in monomials_at(spec, g):
        cand = element(spec, 1, m)
        image = _res_from_top(spec, level, cand)
        if image.is_zero:
            continue
        r = image.coeff
        assert index % r == 0 or torsion_target, (g, level, r)
        if torsion_target:
            # res is onto a torsion class: tr(y) = (index / r) * cand with
            # the inverse of r taken mod the torsion order
            t = torsion_target[0]
            rinv = pow(r % t, -1, t)
            return element(spec, x.coeff * index * rinv, m)
        return element(spec, x.coeff * (index // r), m)
    # no monomial restricts nontrivially; a free class at the index-2 level
    # still transfers onto the 2-torsion desuspended classes, which live in
    # the image of the transfer even though their restriction vanishes
    source_group = cyclic_group_at(spec, level, rx, ry)[0]
    if level == "Cp" and not source_group.torsion:
        for m in monomials_at(spec, g):
            if family_torsion(m, spec.p) == 2 and m.s == 1:
                return element(spec, x.coeff, m)
    return zero_element(spec)


def _tr_from_underlying(spec: GroupSpec, level, x: CyclicElement, g: Grading):
    rx, ry = restricted_xy(g, level)
    d = restricted_xy(g, "e")[0]
    if x.is_zero or d != 0:
        return CyclicElement(level, rx, ry, 0)
    index = spec.p if level == "Cp" else 2
    group, gen, prefix = cyclic_group_at(spec, level, rx, ry)
    if gen is None:
        return CyclicElement(level, rx, ry, 0)
    probe = cyclic_element(spec, level, rx, ry, 1)
    r_elem = _res_to_underlying(spec, probe)
    if r_elem.is_zero:
        # desuspended torsion classes over a nonzero underlying group come
        # from homotopy orbits, so the transfer hits them with coefficient 1
        if group.torsion and level == "C2":
            return cyclic_element(spec, level, rx, ry, x.coeff)
        return CyclicElement(level, rx, ry, 0)
    r = r_elem.coeff
    if group.torsion:
        t = group.torsion[0]
        rinv = pow(r % t, -1, t)
        return cyclic_element(spec, level, rx, ry, x.coeff * index * rinv)
    assert index % r == 0
    return cyclic_element(spec, level, rx, ry, x.coeff * (index // r))


# ---------------------------------------------------------------------------
# formatting and parsing


_GEN_ORDER = ("S", "u2a", "uga", "aa", "ag")


def format_element(x: RingElement) -> str:
    if x.is_zero:
        return "0"
    m = x.mono
    prefix = family_prefix(classify(m), x.p)
    coeff = x.coeff * prefix
    parts = []
    if m.s:
        parts.append("S^-1")
    for sym, e in (("u2a", m.i), ("uga", m.j), ("aa", m.k), ("ag", m.l)):
        if e:
            parts.append(f"{sym}^{e}")
    if coeff != 1 or not parts:
        parts.insert(0, str(coeff))
    return "*".join(parts)


_TOKEN = re.compile(r"(-?\d+)|(u2a|uga|aa|ag|u2g|a2g|S)|(\^)|(\*)")


def parse_element(spec: GroupSpec, text: str) -> RingElement:
    """Parse per the grammar: [int "*"] factor ("*" factor)*."""
    factors, coeff = _tokenize(text)
    s = i = j = k = l = 0
    for gen, e, pos in factors:
        if gen == "S":
            if e != -1:
                raise ElementSyntaxError("S requires exponent -1", pos)
            s += 1
        elif gen == "u2a":
            i += e
        elif gen == "uga":
            j += e
        elif gen == "aa":
            k += e
        elif gen == "ag":
            l += e
        elif gen == "u2g":
            i += e
            j += 2 * e
        elif gen == "a2g":
            l += 2 * e
    if s > 1:
        return zero_element(spec)
    m = Monomial(s, i, j, k, l)
    tag = classify(m)
    if tag == "ZERO":
        return zero_element(spec)
    prefix = family_prefix(tag, spec.p)
    t = family_torsion(m, spec.p)
    if coeff % prefix:
        if t:
            coeff = coeff * pow(prefix % t, -1, t)
        else:
            raise GradingMismatch(
                f"coefficient {coeff} is not a multiple of the prefix {prefix}"
            )
    else:
        coeff //= prefix
    return element(spec, coeff, m)


def _tokenize(text):
    pos = 0
    coeff = 1
    factors = []
    expect_factor = True
    n = len(text)
    first = True
    while pos < n:
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ElementSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if mt.group(1) is not None:
            if not (first and expect_factor):
                raise ElementSyntaxError("integer only allowed as prefix", pos)
            coeff = int(mt.group(1))
            pos = mt.end()
            first = False
            if pos < n:
                if text[pos] != "*":
                    raise ElementSyntaxError("expected '*' after coefficient", pos)
                pos += 1
            continue
        if mt.group(2) is not None:
            if not expect_factor:
                raise ElementSyntaxError("expected '*' between factors", pos)
            gen = mt.group(2)
            pos = mt.end()
            e = 1
            if pos < n and text[pos] == "^":
                pos += 1
                me = re.match(r"-?\d+", text[pos:])
                if not me:
                    raise ElementSyntaxError("expected integer exponent", pos)
                e = int(me.group(0))
                pos += me.end()
            factors.append((gen, e, mt.start()))
            expect_factor = False
            first = False
            if pos < n:
                if text[pos] != "*":
                    raise ElementSyntaxError("expected '*' between factors", pos)
                pos += 1
                expect_factor = True
            continue
        raise ElementSyntaxError("malformed element", pos)
    if expect_factor and not first:
        if not factors:
            pass  # bare integer
        else:
            raise ElementSyntaxError("dangling '*'", n)
    if not factors and first:
        raise ElementSyntaxError("empty element", 0)
    return factors, coeff


# ---------------------------------------------------------------------------
# full Mackey functor at one grading


def _weyl_sign(g: Grading, level_x: int) -> int:
    """Sign of the Weyl involution on the canonical index-p-level generator.

    The reflection reverses each of the b alpha-lines and each lambda
    orientation; the canonical generator carries m = x/2-ish lambda
    orientation classes.  Calibrated against the cellular computation."""
    m = _u_lambda_exponent(level_x)
    return -1 if (g.b + m) % 2 else 1


def _u_lambda_exponent(x: int) -> int:
    if x % 2 == 0:
        return x // 2
    return -((-1 - x) // 2)


def mackey_at(spec: GroupSpec, g: Grading):
    """MackeyAnswer built from the closed forms at all four levels."""
    from .oracle import MackeyAnswer

    p = spec.p
    top_group, top_labels = group_at(spec, g)
    monos = monomials_at(spec, g)
    level_data = {}
    for level in ("Cp", "C2", "e"):
        x, y = restricted_xy(g, level)
        grp, gen, prefix = cyclic_group_at(spec, level, x, y)
        level_data[level] = (grp, gen, prefix, x, y)
    groups = {
        "G": top_group,
        "Cp": level_data["Cp"][0],
        "C2": level_data["C2"][0],
        "e": level_data["e"][0],
    }
    # top presentation indexed by the canonical monomial order so the
    # structure-map matrices line up with monos
    rels = []
    for idx, m in enumerate(monos):
        t = family_torsion(m, p)
        if t:
            row = [0] * len(monos)
            row[idx] = t
            rels.append(tuple(row))
    pres = {tag: _presentation_of(groups[tag]) for tag in ("Cp", "C2", "e")}
    pres["G"] = Presentation(len(monos), tuple(rels))

    res_maps = {}
    for level in ("Cp", "C2"):
        cols = []
        for m in monos:
            img = _res_from_top(spec, level, element(spec, 1, m))
            cols.append(img.coeff)
        ngen = pres[level].ngens
        matrix = [cols] if ngen else []
        res_maps[("G", level)] = FgAbMap(pres["G"], pres[level], matrix)
    for level in ("Cp", "C2"):
        probe = cyclic_element(spec, level, *restricted_xy(g, level), coeff=1)
        img = _res_to_underlying(spec, probe)
        src, dst = pres[level], pres["e"]
        value = img.coeff if not probe.is_zero else 0
        matrix = [[value] * src.ngens] if dst.ngens else []
        res_maps[(level, "e")] = FgAbMap(src, dst, matrix)

    tr_maps = {}
    for level in ("Cp", "C2"):
        probe = cyclic_element(spec, level, *restricted_xy(g, level), coeff=1)
        img = _tr_to_top(spec, level, probe, g)
        src = pres[level]
        if src.ngens:
            matrix = [
                [img.coeff if (not img.is_zero and img.mono == m) else 0]
                for m in monos
            ]
        else:
            matrix = [[] for _ in range(pres["G"].ngens)]
        tr_maps[(level, "G")] = FgAbMap(src, pres["G"], matrix)
    for level in ("Cp", "C2"):
        probe = CyclicElement("e", 0, 0, 1)
        if pres["e"].ngens:
            img = _tr_from_underlying(spec, level, probe, g)
            matrix = [[img.coeff]] if pres[level].ngens else []
        else:
            matrix = [[] for _ in range(pres[level].ngens)]
        tr_maps[("e", level)] = FgAbMap(pres["e"], pres[level], matrix)

    if pres["Cp"].ngens:
        w = _weyl_sign(g, restricted_xy(g, "Cp")[0])
        weyl = FgAbMap(pres["Cp"], pres["Cp"], [[w]])
    else:
        weyl = FgAbMap.identity_map(pres["Cp"])
    if pres["e"].ngens:
        sign = g.orientation_sign
        e_tau = FgAbMap(pres["e"], pres["e"], [[sign]])
        e_xi = FgAbMap.identity_map(pres["e"])
    else:
        e_tau = FgAbMap.identity_map(pres["e"])
        e_xi = FgAbMap.identity_map(pres["e"])

    return MackeyAnswer(
        p=p,
        grading=g,
        groups=groups,
        res=res_maps,
        tr=tr_maps,
        weyl=weyl,
        e_tau=e_tau,
        e_xi=e_xi,
    )


def _presentation_of(group: FgAbGroup) -> Presentation:
    n = group.free_rank + len(group.torsion)
    rels = []
    for idx, t in enumerate(group.torsion):
        row = [0] * n
        row[group.free_rank + idx] = t
        rels.append(tuple(row))
    return Presentation(n, tuple(rels))
