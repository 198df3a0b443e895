"""Normal-chain orbit posets of finite groups and the acyclicity pipeline.

The fusion system is always ``F_S(G)`` for an explicit finite group ``G``
with Sylow ``p``-subgroup ``S``.  Isomorphism of chains in ``S`` is then
``G``-conjugacy, and a fully normalized representative is one maximizing
``|⋂ N_S(Q_i)|`` over the orbit.

Objects of the returned poset are conjugacy classes of chains
``Q_0 < ... < Q_n`` of nontrivial subgroups of ``S`` with every ``Q_i``
normal in ``Q_n``.  The degree is ``n`` and arrows go from a chain to its
faces, so the degree decreases along arrows (this is ``[S_⊲]^op``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .covering import (
    Certificate,
    CoveringFamily,
    GlobalFamily,
    Tower,
    acyclicity_certificate,
    build_Fp_tower,
    check_adequate,
    check_global_adequate,
    simplexlike_covering_family,
    validate_global,
)
from .derived import cohomology
from .errors import InvalidInput, TrivialSylow
from .exactalg import FgAbGroup
from .poset import GradedPoset

Subgroup = frozenset[int]
Chain = tuple[Subgroup, ...]

MAX_ORDER = 200


# ---------------------------------------------------------------------------
# Finite groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A group on ``0..n-1`` given by its multiplication table."""

    table: tuple[tuple[int, ...], ...]
    identity: int = 0
    name: str = "G"
    labels: tuple[str, ...] | None = None
    elements: tuple | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        problems = self.problems()
        if problems:
            raise InvalidInput(f"{self.name} is not a group", problems)

    def problems(self) -> list[str]:
        t, n, e = self.table, len(self.table), self.identity
        if any(len(row) != n for row in t):
            return ["multiplication table is not square"]
        if any(not 0 <= x < n for row in t for x in row):
            return ["table entries out of range"]
        if not 0 <= e < n:
            return ["identity index out of range"]
        out = []
        for a in range(n):
            if t[e][a] != a or t[a][e] != a:
                out.append(f"{e} is not a two-sided identity for {a}")
                break
        for a in range(n):
            if e not in t[a] or sorted(t[a]) != list(range(n)):
                out.append(f"element {a} has no inverse")
                break
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                out.append(f"associativity fails at ({a},{b},{c})")
                break
        return out

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def _inverse(self) -> tuple[int, ...]:
        return tuple(row.index(self.identity) for row in self.table)

    def inv(self, a: int) -> int:
        return self._inverse[a]

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    @cached_property
    def _element_lookup(self) -> dict:
        if self.elements is None:
            return {(k,): k for k in range(self.order)}
        out = {}
        for k, x in enumerate(self.elements):
            out[tuple(x) if isinstance(x, tuple) else (x,)] = k
        return out

    def element_index(self, token: Sequence[int]) -> int:
        """Index of the element written as a list of integers.

        Permutation groups use the image list, ``C<n>`` a single residue,
        ``D``/``Q`` the exponent pair ``[a, b]`` of ``x^a y^b``; groups given
        by a bare table use ``[k]`` for index ``k``.
        """
        key = tuple(token)
        if key not in self._element_lookup:
            raise InvalidInput(f"{list(token)} is not an element of {self.name}")
        return self._element_lookup[key]

    def element_token(self, a: int) -> list[int]:
        if self.elements is None:
            return [a]
        x = self.elements[a]
        return list(x) if isinstance(x, tuple) else [x]

    def hom_from_images(self, gens: Sequence[int], dst: "FiniteGroup", images: Sequence[int]) -> tuple[int, ...]:
        """Extend ``gens[k] -> images[k]`` to a homomorphism; raises if it is not well defined."""
        if len(gens) != len(images):
            raise InvalidInput("need one image per generator")
        f = {self.identity: dst.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, h in zip(gens, images):
                    y, z = self.mul(g, x), dst.mul(h, f[x])
                    if y in f:
                        if f[y] != z:
                            raise InvalidInput("generator images do not define a homomorphism")
                    else:
                        f[y] = z
                        nxt.append(y)
            frontier = nxt
        if len(f) != self.order:
            raise InvalidInput("the given generators do not generate the group")
        out = tuple(f[x] for x in range(self.order))
        for a in range(self.order):
            for b in range(self.order):
                if out[self.mul(a, b)] != dst.mul(out[a], out[b]):
                    raise InvalidInput("generator images do not define a homomorphism")
        return out

    def conj(self, g: int, h: Iterable[int]) -> Subgroup:
        """``g h g^-1`` elementwise."""
        gi = self.inv(g)
        return frozenset(self.mul(self.mul(g, x), gi) for x in h)

    def closure(self, gens: Iterable[int]) -> Subgroup:
        """Subgroup generated by ``gens``."""
        out = {self.identity}
        frontier = list(set(gens) - out)
        out |= set(frontier)
        while frontier:
            new = []
            for a in frontier:
                for b in list(out):
                    for c in (self.mul(a, b), self.mul(b, a)):
                        if c not in out:
                            out.add(c)
                            new.append(c)
            frontier = new
        return frozenset(out)

    @cached_property
    def subgroups(self) -> tuple[Subgroup, ...]:
        """Every subgroup, sorted by order then by elements."""
        if self.order > MAX_ORDER:
            raise InvalidInput(f"subgroup enumeration is capped at order {MAX_ORDER}")
        found = {self.closure([a]) for a in range(self.order)}
        frontier = set(found)
        cyclic = list(found)
        while frontier:
            new = set()
            for h in frontier:
                for c in cyclic:
                    if not c <= h:
                        k = self.closure(h | c)
                        if k not in found:
                            new.add(k)
            found |= new
            frontier = new
        return tuple(sorted(found, key=lambda h: (len(h), sorted(h))))

    def normalizer(self, h: Subgroup, within: Iterable[int] | None = None) -> Subgroup:
        pool = range(self.order) if within is None else within
        return frozenset(g for g in pool if self.conj(g, h) == h)

    def is_normal(self, h: Subgroup, k: Subgroup) -> bool:
        """``h ⊴ k`` (assumes ``h <= k``)."""
        return all(self.conj(g, h) == h for g in k)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_function(cls, elements: Sequence, mul: Callable, name: str = "G") -> "FiniteGroup":
        idx = {x: k for k, x in enumerate(elements)}
        if len(idx) != len(elements):
            raise InvalidInput("duplicate group elements")
        try:
            table = tuple(tuple(idx[mul(a, b)] for b in elements) for a in elements)
        except KeyError as exc:
            raise InvalidInput(f"product {exc} leaves the element set") from None
        ident = [k for k, a in enumerate(elements) if all(mul(a, b) == b for b in elements)]
        if not ident:
            raise InvalidInput("no identity element")
        return cls(table, ident[0], name, tuple(str(x) for x in elements), tuple(elements))

    @classmethod
    def from_permutations(cls, gens: Sequence[Sequence[int]], name: str = "G") -> "FiniteGroup":
        """Permutation group generated by ``gens`` (images of ``0..m-1``)."""
        gens = [tuple(g) for g in gens]
        m = len(gens[0]) if gens else 1
        if any(sorted(g) != list(range(m)) for g in gens):
            raise InvalidInput("generators must be permutations of the same set")
        ident = tuple(range(m))
        elems = [ident]
        seen = {ident}
        for x in elems:
            for g in gens:
                y = tuple(g[i] for i in x)
                if y not in seen:
                    if len(seen) >= MAX_ORDER:
                        raise InvalidInput(f"group order exceeds {MAX_ORDER}")
                    seen.add(y)
                    elems.append(y)
        elems.sort()
        # (a*b)(i) = a(b(i)): apply b first.
        return cls.from_function(elems, lambda a, b: tuple(a[i] for i in b), name)


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup.from_function(list(range(n)), lambda a, b: (a + b) % n, f"C{n}")


def _metacyclic(m: int, square: int, name: str) -> FiniteGroup:
    """``<x, y | x^m, y^2 = x^square, y x y^-1 = x^-1>`` on pairs ``(a, b) = x^a y^b``."""

    def mul(u, v):
        a, b = u
        c, d = v
        if b == 0:
            return ((a + c) % m, d)
        if d == 0:
            return ((a - c) % m, 1)
        return ((a - c + square) % m, 0)

    elems = [(a, b) for b in (0, 1) for a in range(m)]
    return FiniteGroup.from_function(elems, mul, name)


def dihedral(order: int) -> FiniteGroup:
    """Dihedral group of the given order (``D8`` has 8 elements)."""
    if order < 2 or order % 2:
        raise InvalidInput("dihedral order must be even and at least 2")
    return _metacyclic(order // 2, 0, f"D{order}")


def quaternion(order: int = 8) -> FiniteGroup:
    """Generalized quaternion group of order ``2^k >= 8``."""
    if order < 8 or order & (order - 1):
        raise InvalidInput("quaternion order must be a power of 2, at least 8")
    return _metacyclic(order // 2, order // 4, f"Q{order}")


def symmetric(n: int) -> FiniteGroup:
    gens = [tuple(range(n))] if n < 2 else [(1, 0) + tuple(range(2, n)), tuple(range(1, n)) + (0,)]
    return FiniteGroup.from_permutations(gens, f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n < 3:
        return FiniteGroup.from_permutations([tuple(range(max(n, 1)))], f"A{n}")
    gens = [tuple([1, 2, 0] + list(range(3, n)))]
    for k in range(3, n):
        p = list(range(n))
        p[0], p[1], p[k] = p[1], p[k], p[0]
        gens.append(tuple(p))
    return FiniteGroup.from_permutations(gens, f"A{n}")


_BUILTINS = {"C": cyclic, "D": dihedral, "Q": quaternion, "S": symmetric, "A": alternating}


def builtin_group(name: str) -> FiniteGroup:
    """``C<n>``, ``D<order>``, ``Q<order>``, ``S<n>`` or ``A<n>``; e.g. ``D8``, ``S4``."""
    key, num = name[:1].upper(), name[1:]
    if key not in _BUILTINS or not num.isdigit():
        raise InvalidInput(f"unknown builtin group {name!r}; use C<n>, D<order>, Q<order>, S<n> or A<n>")
    return _BUILTINS[key](int(num))


def _prime_power(n: int, p: int) -> int:
    k = 1
    while n % p == 0:
        n //= p
        k *= p
    return k


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def sylow(g: FiniteGroup, p: int) -> Subgroup:
    """A Sylow ``p``-subgroup (the first one in the sorted subgroup list)."""
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    target = _prime_power(g.order, p)
    return next(h for h in g.subgroups if len(h) == target)


# ---------------------------------------------------------------------------
# Chains and their orbits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainOrbit:
    """A ``G``-class of normal chains in ``S``; ``representative`` is its first member."""

    name: str
    representative: Chain
    members: frozenset[Chain]

    @property
    def degree(self) -> int:
        return len(self.representative) - 1


@dataclass(eq=False)
class OrbitPoset:
    group: FiniteGroup
    prime: int
    sylow: Subgroup
    poset: GradedPoset
    orbits: Mapping[str, ChainOrbit]
    subgroup_names: Mapping[Subgroup, str]
    _orbit_of: dict[Chain, str] = field(default_factory=dict, repr=False)

    def orbit_of(self, chain: Chain) -> str:
        return self._orbit_of[chain]


def _chain_key(names: Mapping[Subgroup, str], order: Mapping[Subgroup, int], c: Chain):
    return tuple(order[q] for q in c)


def normal_chains(g: FiniteGroup, s: Subgroup) -> list[Chain]:
    """Strict chains of nontrivial subgroups of ``s``, each normal in the top one."""
    subs = [h for h in g.subgroups if h <= s and len(h) > 1]
    out: list[Chain] = []

    def extend(chain: Chain) -> None:
        out.append(chain)
        top = chain[-1]
        for h in subs:
            if top < h and all(g.is_normal(q, h) for q in chain):
                extend(chain + (h,))

    for h in subs:
        extend((h,))
    return out


def normal_chain_orbit_data(g: FiniteGroup, p: int) -> OrbitPoset:
    s = sylow(g, p)
    if len(s) == 1:
        raise TrivialSylow(f"the Sylow {p}-subgroup of {g.name} is trivial")
    subs = [h for h in g.subgroups if h <= s]
    order = {h: k for k, h in enumerate(subs)}
    names = {h: ("S" if h == s else f"Q{k}") for k, h in enumerate(subs)}
    chains = normal_chains(g, s)
    chain_set = set(chains)
    orbit_of: dict[Chain, str] = {}
    orbits: dict[str, ChainOrbit] = {}
    for c in sorted(chains, key=lambda c: (len(c), _chain_key(names, order, c))):
        if c in orbit_of:
            continue
        members = set()
        for x in range(g.order):
            d = tuple(g.conj(x, q) for q in c)
            if d in chain_set:
                members.add(d)
        nm = "[" + "<".join(names[q] for q in c) + "]"
        orbits[nm] = ChainOrbit(nm, c, frozenset(members))
        for d in members:
            orbit_of[d] = nm
    arrows = set()
    for nm, orb in orbits.items():
        c = orb.representative
        if len(c) > 1:
            for k in range(len(c)):
                arrows.add((nm, orbit_of[c[:k] + c[k + 1 :]]))
    objs = tuple((nm, o.degree) for nm, o in orbits.items())
    poset = GradedPoset(objs, tuple(sorted(arrows, key=lambda a: (list(orbits).index(a[0]), list(orbits).index(a[1])))), "decreasing")
    ok, _ = poset.opposite().is_simplex_like()
    if not ok:
        raise AssertionError("normal chain orbit poset is not simplex-like")
    return OrbitPoset(g, p, s, poset, orbits, names, orbit_of)


def normal_chain_orbit_poset(g: FiniteGroup, p: int) -> GradedPoset:
    """``[S_⊲]^op`` for ``F_S(G)``: decreasing degree, arrows from a chain to its faces."""
    return normal_chain_orbit_data(g, p).poset


# ---------------------------------------------------------------------------
# The K family and the pairing ψ
# ---------------------------------------------------------------------------


def _meet_normalizers(g: FiniteGroup, s: Subgroup, c: Chain) -> Subgroup:
    out = s
    for q in c:
        out = out & g.normalizer(q, s)
    return out


def best_representatives(data: OrbitPoset, name: str) -> list[tuple[Chain, Subgroup]]:
    """Members of the orbit maximizing ``|⋂ N_S(Q_i)|``, with that intersection."""
    g, s = data.group, data.sylow
    scored = [(c, _meet_normalizers(g, s, c)) for c in data.orbits[name].members]
    top = max(len(m) for _, m in scored)
    return sorted(((c, m) for c, m in scored if len(m) == top), key=lambda cm: [sorted(q) for q in cm[0]])


def build_K_family(g: FiniteGroup, p: int, data: OrbitPoset | None = None) -> GlobalFamily:
    """``K_n`` = orbits whose best representative has ``⋂ N_S(Q'_i) = Q'_n``."""
    data = data or normal_chain_orbit_data(g, p)
    sets: dict[int, list[str]] = {q: [] for q in range(data.poset.max_degree + 1)}
    for nm, orb in data.orbits.items():
        c, m = best_representatives(data, nm)[0]
        if m == c[-1]:
            sets[orb.degree].append(nm)
    return GlobalFamily.from_mapping(data.poset, sets)


@dataclass(frozen=True)
class PsiReport:
    mapping: Mapping[str, str]
    well_defined: bool
    lands_in_K: bool
    injective: bool
    surjective: bool

    @property
    def ok(self) -> bool:
        return self.well_defined and self.lands_in_K and self.injective and self.surjective


def psi_bijection(data: OrbitPoset, k: GlobalFamily) -> PsiReport:
    """``[Q_0<...<Q_n] -> [Q'_0<...<Q'_n<⋂N_S(Q'_i)]`` on ``Ob_n \\ K_n``, with every property checked."""
    kset = {nm for q in range(data.poset.max_degree + 1) for nm in k.K(q)}
    mapping: dict[str, str] = {}
    well_defined = True
    for nm, orb in data.orbits.items():
        if nm in kset:
            continue
        images = set()
        for c, m in best_representatives(data, nm):
            ext = c + (m,)
            if not (c[-1] < m and all(data.group.is_normal(q, m) for q in c)):
                well_defined = False
                continue
            images.add(data.orbit_of(ext))
        if len(images) != 1:
            well_defined = False
        if images:
            mapping[nm] = min(images)
    lands = all(v in kset and data.orbits[v].degree == data.orbits[u].degree + 1 for u, v in mapping.items())
    injective = len(set(mapping.values())) == len(mapping)
    targets = {nm for nm in kset if data.orbits[nm].degree >= 1}
    surjective = set(mapping.values()) == targets
    return PsiReport(mapping, well_defined, lands, injective, surjective)


# ---------------------------------------------------------------------------
# Full pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WebbReport:
    group: str
    prime: int
    sylow_order: int
    objects_per_degree: tuple[int, ...]
    k_sizes: tuple[int, ...]
    psi: PsiReport
    covering_adequate: bool
    global_violations: tuple[str, ...]
    global_adequate: bool
    certificate: Certificate
    cochain_cohomology: tuple[FgAbGroup, ...]

    @property
    def cohomology_acyclic(self) -> bool:
        h = self.cochain_cohomology
        return h[0] == FgAbGroup(1, ()) and all(x.is_zero for x in h[1:])

    @property
    def agrees(self) -> bool:
        return self.certificate.acyclic == self.cohomology_acyclic

    @property
    def ok(self) -> bool:
        return (
            self.psi.ok
            and self.covering_adequate
            and not self.global_violations
            and self.global_adequate
            and self.certificate.acyclic
            and self.k_sizes[0] == 1
            and self.agrees
        )


def webb_verify(g: FiniteGroup, p: int) -> WebbReport:
    """Covering family, K family, ψ, certificate and a direct cochain computation."""
    data = normal_chain_orbit_data(g, p)
    poset = data.poset
    fam: CoveringFamily = simplexlike_covering_family(poset)
    adequate = bool(check_adequate(poset, fam))
    k = build_K_family(g, p, data)
    tower: Tower = build_Fp_tower(poset, fam)
    violations = validate_global(poset, tower, k)
    gl_ok = bool(check_global_adequate(poset, k))
    cert = acyclicity_certificate(poset, fam, k, tower)
    h = tuple(cohomology(poset))
    report = WebbReport(
        g.name,
        p,
        len(data.sylow),
        tuple(len(poset.objects_of_degree(q)) for q in range(poset.max_degree + 1)),
        tuple(len(k.K(q)) for q in range(poset.max_degree + 1)),
        psi_bijection(data, k),
        adequate,
        tuple(violations),
        gl_ok,
        cert,
        h,
    )
    if not report.agrees:
        raise AssertionError(f"certificate {cert.verdict} disagrees with cochain cohomology {h}")
    return report
