"""Transition coefficients between the two dual bases over a family.

Over a bi-sequence family the two bases indexed by the family's
multisegments are unitriangular with respect to Bruhat order on the
(double-coset) permutation indices, and the two directions of expansion
are mutually inverse matrices.  The supported families are the strongly
regular bi-sequences and their m-fold replications; anything else raises
UnsupportedFamily, because the dimension parameter entering the
coefficients is not available in general.

For a strongly regular family the index set is the interval of S_k above
the minimal permutation, every coset is a singleton, and the dimension gap
between members sigma <= omega is length(omega) - length(sigma).  For an
m-replication the indices are double cosets of the block parabolic W_m,
represented by their minimal elements, and the dimension gap is taken to
be the length difference of those representatives.  On pairs coming from
the normalizer of W_m (representatives t_m(x)) this equals
m**2 (length difference downstairs), the value the closed-form parabolic
coefficients use; elsewhere it is the natural extension, and the
inversion identity is insensitive to the choice since any per-index
normalization conjugates out of the matrix product.

Expansion coefficients, rendered in v with q = v**-2:

* basis E in terms of basis G, entry (sigma, omega):
      v**c(sigma,omega) * P_{omega~ w0, sigma~ w0}(q)
* basis G in terms of basis E, entry (sigma, omega):
      v**c(sigma,omega) * eps(omega~) * sum over x in the coset sigma of
          eps(x) * P_{x, omega~}(q)

Both closed parabolic forms (the translated ordinary polynomial for E in
G, the alternating-sum polynomial for G in E, each with the monomial
v**(m**2 length gap) and sign eps(sigma omega)**m) must agree entrywise
with these on replicated families; coeff_parab assembles them for
comparison.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Literal

from .kl import KLTable, _kl_row, kl_poly, parabolic_kl_neg1, parabolic_kl_q
from .poly import LaurentPoly
from .segcomb import (
    BelowSigma0,
    BiSequence,
    Multisegment,
    is_regular,
    is_strongly_regular,
    multisegment_of,
    replicate,
    sigma0,
)
from .pbw import PBWElement, product_expansion_guarded
from .symgroup import (
    NotComparable,
    Perm,
    bruhat_leq,
    compose,
    length,
    longest_element,
    parity,
    permutations_of,
)


class UnsupportedFamily(ValueError):
    """The bi-sequence is neither strongly regular nor a replication of a
    strongly regular one; its dimension parameters are not available."""


Direction = Literal["e2g", "g2e"]


def _canon_direction(direction: str) -> Direction:
    d = direction.lower().replace("-", "").replace("_", "").replace("*", "")
    if d in ("e2g", "eing", "eintog"):
        return "e2g"
    if d in ("g2e", "gine", "gintoe"):
        return "g2e"
    raise ValueError(f"unknown direction {direction!r}")


def family_replication(A: BiSequence) -> tuple[BiSequence, int]:
    """Split A as the m-fold replication of a strongly regular base.

    Returns (base, m); m = 1 when A itself is strongly regular.  Raises
    UnsupportedFamily otherwise.
    """
    if is_strongly_regular(A):
        return A, 1
    runs_a: list[tuple[int, int]] = []
    for val, grp in itertools.groupby(A.a):
        runs_a.append((val, sum(1 for _ in grp)))
    runs_b: list[tuple[int, int]] = []
    for val, grp in itertools.groupby(A.b):
        runs_b.append((val, sum(1 for _ in grp)))
    lengths = {m for _, m in runs_a} | {m for _, m in runs_b}
    if len(lengths) != 1:
        raise UnsupportedFamily(f"{A} is not a uniform replication")
    m = lengths.pop()
    if m < 2 or len(runs_a) != len(runs_b):
        raise UnsupportedFamily(f"{A} is not a replication of a regular family")
    base = BiSequence(tuple(v for v, _ in runs_a), tuple(v for v, _ in runs_b))
    if not is_strongly_regular(base):
        raise UnsupportedFamily(f"the base {base} of {A} is not strongly regular")
    return base, m


def _a_runs(A: BiSequence) -> list[tuple[int, int]]:
    runs = []
    start = 0
    for i in range(1, A.k):
        if A.a[i] != A.a[i - 1]:
            runs.append((start, i))
            start = i
    runs.append((start, A.k))
    return runs


@dataclass
class FamilyCosets:
    """Double cosets of a replicated family, keyed by their multisegments.

    Each permutation w of S_n pairs a_i with b_{w(i)}; two permutations
    give the same multiset of pairs exactly when they lie in the same
    double coset of the block parabolic.  Since the left ends are fixed by
    position, the multiset is captured by sorting the assigned right ends
    within each run of equal left ends.
    """

    A: BiSequence
    reps: dict[tuple, Perm] = field(default_factory=dict)
    members: dict[tuple, list[tuple[Perm, int]]] = field(default_factory=dict)

    @classmethod
    def build(cls, A: BiSequence) -> "FamilyCosets":
        n = A.k
        b = A.b
        runs = _a_runs(A)
        reps: dict[tuple, Perm] = {}
        replen: dict[tuple, int] = {}
        members: dict[tuple, list[tuple[Perm, int]]] = {}
        for w, lw in permutations_with_length(n):
            bs = [b[j - 1] for j in w]
            key = tuple(x for start, stop in runs for x in sorted(bs[start:stop]))
            bucket = members.get(key)
            if bucket is None:
                members[key] = [(w, -1 if lw % 2 else 1)]
                replen[key] = lw
                reps[key] = w
            else:
                bucket.append((w, -1 if lw % 2 else 1))
                if lw < replen[key]:
                    replen[key] = lw
                    reps[key] = w
        return cls(A, reps, members)

    def key_of(self, w: Perm) -> tuple:
        b = self.A.b
        bs = [b[j - 1] for j in w]
        return tuple(x for start, stop in _a_runs(self.A)
                     for x in sorted(bs[start:stop]))

    def rep_of(self, w: Perm) -> Perm:
        return self.reps[self.key_of(w)]


_COSETS_CACHE: dict[tuple[tuple[int, ...], tuple[int, ...]], FamilyCosets] = {}
_COSETS_CACHE_LIMIT = 3


def _family_cosets(A: BiSequence) -> FamilyCosets:
    key = (A.a, A.b)
    hit = _COSETS_CACHE.get(key)
    if hit is not None:
        return hit
    built = FamilyCosets.build(A)
    if len(_COSETS_CACHE) >= _COSETS_CACHE_LIMIT:
        _COSETS_CACHE.pop(next(iter(_COSETS_CACHE)))
    _COSETS_CACHE[key] = built
    return built


def _check_family(A: BiSequence, omega: Perm) -> tuple[Perm, Perm]:
    """Validate the family and the top permutation; returns (sigma0, omega~)."""
    base, m = family_replication(A)
    s0 = sigma0(A)
    if len(omega) != A.k:
        raise ValueError("permutation size does not match the family")
    if m == 1:
        top = omega
    else:
        top = _family_cosets(A).rep_of(omega)
    if not bruhat_leq(s0, top):
        raise BelowSigma0(f"{omega} lies below sigma0({A}) = {s0}")
    return s0, top


def expand_E_in_G(table: KLTable, A: BiSequence, omega: Perm) -> dict[Perm, LaurentPoly]:
    """Coefficients of the G-basis expansion of E(M_omega(A)).

    Keys are the minimal (double-)coset representatives sigma~ between
    sigma0(A) and omega~.
    """
    s0, top = _check_family(A, omega)
    base, m = family_replication(A)
    n = A.k
    w0 = longest_element(n)
    topw0 = compose(top, w0)
    out: dict[Perm, LaurentPoly] = {}
    lt = length(top)
    if m == 1:
        candidates: Iterable[Perm] = permutations_of(n)
    else:
        candidates = _family_cosets(A).reps.values()
    for rep in candidates:
        if not (bruhat_leq(s0, rep) and bruhat_leq(rep, top)):
            continue
        p = kl_poly(table, topw0, compose(rep, w0))
        if p.is_zero():
            continue
        out[rep] = LaurentPoly.v(lt - length(rep)) * p
    return out


def expand_G_in_E(table: KLTable, A: BiSequence, omega: Perm) -> dict[Perm, LaurentPoly]:
    """Coefficients of the E-basis expansion of G(M_omega(A)).

    Entry at sigma is the signed sum of ordinary polynomials over all
    members of the double coset sigma, with the same monomial prefactor as
    the other direction.
    """
    s0, top = _check_family(A, omega)
    base, m = family_replication(A)
    n = A.k
    lt = length(top)
    eps_top = parity(top)
    out: dict[Perm, LaurentPoly] = {}
    if m == 1:
        for rep in permutations_of(n):
            if not (bruhat_leq(s0, rep) and bruhat_leq(rep, top)):
                continue
            p = kl_poly(table, rep, top)
            if p.is_zero():
                continue
            sign = eps_top * parity(rep)
            out[rep] = LaurentPoly.v(lt - length(rep)) * p * sign
        return out

    cosets = _family_cosets(A)
    row = _kl_row(table, top)
    active: dict[tuple, Perm] = {}
    for key, rep in cosets.reps.items():
        if bruhat_leq(s0, rep) and bruhat_leq(rep, top):
            active[key] = rep
    for key, rep in active.items():
        acc = None
        for member, eps in cosets.members[key]:
            p = row.get(member)
            if not p:
                continue
            term = {d: eps * c for d, c in enumerate(p) if c}
            if acc is None:
                acc = term
            else:
                for d, c in term.items():
                    acc[d] = acc.get(d, 0) + c
        if not acc:
            continue
        poly = LaurentPoly.from_q_coeffs({d: c for d, c in acc.items() if c})
        if poly.is_zero():
            continue
        out[rep] = LaurentPoly.v(lt - length(rep)) * poly * eps_top
    return out


def expansion_as_pbw(A: BiSequence, coeffs: dict[Perm, LaurentPoly]) -> PBWElement:
    """Reindex an expansion from coset representatives to multisegments."""
    return PBWElement({multisegment_of(A, rep): c for rep, c in coeffs.items()})


def coeff_parab(table: KLTable, A: BiSequence, sigma: Perm, omega: Perm,
                m: int, direction: str) -> LaurentPoly:
    """Closed form of one transition entry on an m-replicated regular family.

    direction 'e2g': the coefficient of G at the coset of sigma in the
    expansion of E at the coset of omega, namely the monomial
    v**(m**2 gap) times the translated parabolic polynomial of
    (omega w0, sigma w0).  direction 'g2e': the coefficient of E in G,
    the same monomial times the sign eps(sigma omega)**m times the
    alternating-sum parabolic polynomial of (sigma, omega).
    """
    d = _canon_direction(direction)
    if not is_regular(A):
        raise UnsupportedFamily(f"{A} is not regular")
    s0 = sigma0(A)
    if not bruhat_leq(s0, sigma):
        raise BelowSigma0(f"{sigma} lies below sigma0({A}) = {s0}")
    if not bruhat_leq(sigma, omega):
        raise NotComparable(f"{sigma} is not below {omega}")
    k = A.k
    gap = m * m * (length(omega) - length(sigma))
    mono = LaurentPoly.v(gap)
    if d == "e2g":
        w0 = longest_element(k)
        p = parabolic_kl_neg1(table, compose(omega, w0), compose(sigma, w0), m)
        return mono * p
    sign = (parity(sigma) * parity(omega)) ** m
    return mono * parabolic_kl_q(table, sigma, omega, m) * sign


def g_star_power_with_taint(table: KLTable, A: BiSequence, omega: Perm,
                            m: int) -> tuple[PBWElement, frozenset[Multisegment]]:
    """E-basis expansion of the m-th power of G(M_omega(A)) together with
    the set of multisegments whose coefficients the exchange rules cannot
    determine (dropped from the expansion)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if not is_strongly_regular(A):
        raise UnsupportedFamily(f"{A} is not strongly regular")
    one_copy = expansion_as_pbw(A, expand_G_in_E(table, A, omega))
    return product_expansion_guarded([one_copy] * m)


def g_star_power_in_E(table: KLTable, A: BiSequence, omega: Perm, m: int) -> PBWElement:
    """E-basis expansion of the m-th power of G(M_omega(A)), computed by
    expanding one factor over the strongly regular family and multiplying
    the copies through the straightening engine.

    Coefficients at multisegments that cross products can only reach
    through exchanges outside the implemented rule set are omitted; the
    companion g_star_power_with_taint reports exactly which ones.
    """
    return g_star_power_with_taint(table, A, omega, m)[0]


@dataclass
class TransitionMatrix:
    """A dense transition matrix over the Bruhat-upward index set of a family."""

    A: BiSequence
    direction: Direction
    index: list[Perm]
    entries: dict[tuple[Perm, Perm], LaurentPoly]

    def entry(self, row: Perm, col: Perm) -> LaurentPoly:
        return self.entries.get((row, col), LaurentPoly.zero())

    def product(self, other: "TransitionMatrix") -> dict[tuple[Perm, Perm], LaurentPoly]:
        out: dict[tuple[Perm, Perm], LaurentPoly] = {}
        for r in self.index:
            for c in self.index:
                acc = LaurentPoly.zero()
                for mid in self.index:
                    x = self.entries.get((r, mid))
                    y = other.entries.get((mid, c))
                    if x is not None and y is not None:
                        acc = acc + x * y
                if not acc.is_zero():
                    out[(r, c)] = acc
        return out

    def is_inverse_of(self, other: "TransitionMatrix") -> bool:
        prod = self.product(other)
        for r in self.index:
            for c in self.index:
                want = LaurentPoly.one() if r == c else LaurentPoly.zero()
                if prod.get((r, c), LaurentPoly.zero()) != want:
                    return False
        return True


def transition_matrix(table: KLTable, A: BiSequence, direction: str) -> TransitionMatrix:
    """The full matrix over all indices above sigma0(A)."""
    d = _canon_direction(direction)
    base, m = family_replication(A)
    s0 = sigma0(A)
    if m == 1:
        index = [w for w in permutations_of(A.k) if bruhat_leq(s0, w)]
    else:
        index = [rep for rep in _family_cosets(A).reps.values() if bruhat_leq(s0, rep)]
    index.sort(key=lambda w: (length(w), w))
    expander = expand_E_in_G if d == "e2g" else expand_G_in_E
    entries: dict[tuple[Perm, Perm], LaurentPoly] = {}
    for col in index:
        for row, coeff in expander(table, A, col).items():
            entries[(row, col)] = coeff
    return TransitionMatrix(A, d, index, entries)
