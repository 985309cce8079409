"""The dihedral group D_2p and its grading lattice.

Elements are written xi^i * tau^j with 0 <= i < p, j in {0, 1} and the
relation tau * xi = xi^(p-1) * tau.  The subgroup ladder is the four-node
lattice e < C2, Cp < G with C2 = <tau> as the chosen representative of its
conjugacy class.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


SUBGROUPS = ("e", "C2", "Cp", "G")


def _is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class GroupSpec:
    p: int

    def __post_init__(self):
        if not _is_prime(self.p) or self.p < 3:
            raise ValueError(f"p must be an odd prime, got {self.p}")

    @property
    def order(self):
        return 2 * self.p

    def elements(self):
        return [GroupElement(self, i, j) for j in (0, 1) for i in range(self.p)]

    def identity(self):
        return GroupElement(self, 0, 0)

    def xi(self):
        return GroupElement(self, 1, 0)

    def tau(self):
        return GroupElement(self, 0, 1)

    def subgroup_elements(self, tag):
        if tag == "e":
            return [self.identity()]
        if tag == "C2":
            return [self.identity(), self.tau()]
        if tag == "Cp":
            return [GroupElement(self, i, 0) for i in range(self.p)]
        if tag == "G":
            return self.elements()
        raise ValueError(f"unknown subgroup tag {tag!r}")

    def subgroup_order(self, tag):
        return {"e": 1, "C2": 2, "Cp": self.p, "G": 2 * self.p}[tag]

    def index(self, larger, smaller):
        if not contains(larger, smaller):
            raise ValueError(f"{smaller} is not contained in {larger}")
        return self.subgroup_order(larger) // self.subgroup_order(smaller)


def contains(larger, smaller):
    order = {"e": 0, "C2": 1, "Cp": 2, "G": 3}
    if smaller == larger:
        return True
    if smaller == "e":
        return True
    if larger == "G":
        return True
    return False


@dataclass(frozen=True)
class GroupElement:
    spec: GroupSpec
    i: int
    j: int

    def __post_init__(self):
        assert 0 <= self.i < self.spec.p and self.j in (0, 1)

    def __mul__(self, other):
        assert self.spec == other.spec
        p = self.spec.p
        # xi^i tau^j * xi^k tau^l = xi^(i + (-1)^j k) tau^(j+l)
        k = other.i if self.j == 0 else (-other.i) % p
        return GroupElement(self.spec, (self.i + k) % p, (self.j + other.j) % 2)

    def inverse(self):
        p = self.spec.p
        if self.j == 0:
            return GroupElement(self.spec, (-self.i) % p, 0)
        return GroupElement(self.spec, self.i, 1)

    def is_identity(self):
        return self.i == 0 and self.j == 0

    def __repr__(self):
        if self.is_identity():
            return "1"
        xi = "" if self.i == 0 else ("xi" if self.i == 1 else f"xi^{self.i}")
        tau = "tau" if self.j else ""
        return xi + ("*" if xi and tau else "") + tau


def multiply_elements(x: GroupElement, y: GroupElement) -> GroupElement:
    return x * y


def conjugate_subgroup(g, tag):
    """Elements of g * H * g^-1 for the standard subgroup H."""
    return [g * h * g.inverse() for h in g.spec.subgroup_elements(tag)]


def double_cosets(spec: GroupSpec, h_tag, k_tag):
    """H\\G/K double cosets: list of (representative, coset elements,
    intersection H ∩ rep·K·rep^-1 as a list of elements)."""
    H = spec.subgroup_elements(h_tag)
    K = spec.subgroup_elements(k_tag)
    seen = set()
    out = []
    for g in spec.elements():
        if g in seen:
            continue
        coset = {h * g * k for h in H for k in K}
        seen |= coset
        conj = set(conjugate_subgroup(g, k_tag))
        inter = [h for h in H if h in conj]
        out.append((g, sorted(coset, key=lambda e: (e.j, e.i)), inter))
    return out


@dataclass(frozen=True)
class Grading:
    """A point a + b*alpha + c*gamma of the RO(D_2p) grading lattice."""

    a: int
    b: int
    c: int

    def __add__(self, other):
        return Grading(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other):
        return Grading(self.a - other.a, self.b - other.b, self.c - other.c)

    def scale(self, k):
        return Grading(k * self.a, k * self.b, k * self.c)

    @property
    def virtual_dimension(self):
        return self.a + self.b + 2 * self.c

    @property
    def orientation_sign(self):
        """Sign of the G-action on the top homology of the underlying sphere:
        det(tau) = -1 on both alpha and gamma, det(xi) = +1."""
        return -1 if (self.b + self.c) % 2 else 1

    def serialize(self):
        return f"{self.a},{self.b},{self.c}"

    @staticmethod
    def parse(text):
        parts = text.split(",")
        if len(parts) != 3:
            raise ValueError(f"grading must be 'a,b,c', got {text!r}")
        return Grading(*(int(x) for x in parts))


def restrict_grading(g: Grading, tag):
    """Image of a + b*alpha + c*gamma under restriction to a subgroup.

    C2: (a+c) + (b+c)*sigma;  Cp: (a+b) + c*lambda;  e: dimension a+b+2c.
    Returned as a dict together with the orientation character exponent.
    """
    if tag == "G":
        data = {"a": g.a, "b": g.b, "c": g.c}
    elif tag == "C2":
        data = {"trivial": g.a + g.c, "sigma": g.b + g.c}
    elif tag == "Cp":
        data = {"trivial": g.a + g.b, "lambda": g.c}
    elif tag == "e":
        data = {"dimension": g.virtual_dimension}
    else:
        raise ValueError(f"unknown subgroup tag {tag!r}")
    data["orientation_exponent"] = (g.b + g.c) % 2
    return data


@lru_cache(maxsize=None)
def group_spec(p):
    return GroupSpec(p)
