"""Words in a right-angled Artin group and automorphisms acting on them.

A signed generator is a pair ``(vertex, sign)`` with sign +1 or -1, and a word
is a tuple of signed generators. Words are printed as space separated tokens,
``a^-1`` standing for the inverse of ``a``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .graph import DefiningGraph, components_minus_star, graph_automorphisms

SignedGenerator = tuple[str, int]
Word = tuple[SignedGenerator, ...]

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(\^-1|⁻¹|\^\+?1)?$")


def letter_str(x: SignedGenerator) -> str:
    v, s = x
    return v if s == 1 else f"{v}^-1"


def parse_letter(token: str) -> SignedGenerator:
    m = _TOKEN.match(token)
    if not m:
        raise ValueError(f"cannot parse generator {token!r}")
    sign = -1 if m.group(2) in ("^-1", "⁻¹") else 1
    return (m.group(1), sign)


def parse_word(text: str) -> Word:
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    return tuple(parse_letter(t) for t in text.split())


def word_str(w: Word) -> str:
    return " ".join(letter_str(x) for x in w) if w else "1"


def inverse(w: Iterable[SignedGenerator]) -> Word:
    return tuple((v, -s) for v, s in reversed(tuple(w)))


def commutator(x: SignedGenerator, y: SignedGenerator) -> Word:
    return (x, y, (x[0], -x[1]), (y[0], -y[1]))


def reduce_word(G: DefiningGraph, w: Iterable[SignedGenerator]) -> list[SignedGenerator]:
    """Cancel every pair ``x ... x^-1`` whose intermediate letters commute with x.

    Letters are inserted one at a time; a new letter is cancelled against the
    most recent letter on the same vertex it can be shuffled next to. The
    output contains no cancellable pair.
    """
    out: list[SignedGenerator] = []
    for v, s in w:
        G._check(v)
        if s not in (1, -1):
            raise ValueError(f"bad sign {s}")
        for i in range(len(out) - 1, -1, -1):
            u, t = out[i]
            if u == v:
                if t == -s:
                    del out[i]
                    break
                out.append((v, s))
                break
            if not G.adjacent(u, v):
                out.append((v, s))
                break
        else:
            out.append((v, s))
    return out


def _letter_key(G: DefiningGraph, x: SignedGenerator):
    return (G.index(x[0]), 0 if x[1] == 1 else 1)


def normal_form(G: DefiningGraph, w: Iterable[SignedGenerator]) -> Word:
    """Shortlex-least reduced representative of ``w``.

    After free/commuting cancellation, the lexicographically least shuffle is
    read off greedily: at each step emit the least letter that can be moved
    to the front.
    """
    rest = reduce_word(G, w)
    out = []
    while rest:
        best = None
        for i, (v, s) in enumerate(rest):
            if all(G.adjacent(u, v) for u, _ in rest[:i]):
                if best is None or _letter_key(G, rest[i]) < _letter_key(G, rest[best]):
                    best = i
        out.append(rest.pop(best))
    return tuple(out)


def words_equal(G: DefiningGraph, w1: Iterable[SignedGenerator], w2: Iterable[SignedGenerator]) -> bool:
    return normal_form(G, tuple(w1) + inverse(w2)) == ()


@dataclass
class Endomorphism:
    """An endomorphism of A_Gamma, given by the image of each generator."""

    images: dict[str, Word]
    kind: str = "map"
    name: str = ""
    tag: str | None = None
    inverse: "Endomorphism | None" = field(default=None, repr=False, compare=False)

    def __call__(self, G: DefiningGraph, w: Iterable[SignedGenerator]) -> Word:
        return apply_endomorphism(G, self, w)

    def to_dict(self) -> dict[str, str]:
        return {v: word_str(w) for v, w in self.images.items()}


def endomorphism(G: DefiningGraph, images: Mapping[str, Word | str], **kw) -> Endomorphism:
    """Build a total endomorphism; generators not mentioned are fixed."""
    full = {}
    for v in G.vertices:
        img = images.get(v, ((v, 1),))
        full[v] = parse_word(img) if isinstance(img, str) else tuple(img)
    for v in images:
        G._check(v)
    return Endomorphism(full, **kw)


def identity(G: DefiningGraph) -> Endomorphism:
    return endomorphism(G, {}, kind="identity", name="id")


def apply_endomorphism(G: DefiningGraph, phi: Endomorphism, w: Iterable[SignedGenerator]) -> Word:
    out: list[SignedGenerator] = []
    for v, s in w:
        img = phi.images[v]
        out.extend(img if s == 1 else inverse(img))
    return normal_form(G, out)


def compose(G: DefiningGraph, phi: Endomorphism, psi: Endomorphism) -> Endomorphism:
    """``phi o psi``: apply psi first."""
    return Endomorphism({v: apply_endomorphism(G, phi, psi.images[v]) for v in G.vertices},
                        kind="composite", name=f"{phi.name}*{psi.name}")


def is_identity(G: DefiningGraph, phi: Endomorphism) -> bool:
    return all(normal_form(G, phi.images[v]) == ((v, 1),) for v in G.vertices)


def verify_relators(G: DefiningGraph, phi: Endomorphism) -> bool:
    for e in G.edges:
        v, w = G.sorted(e)
        if apply_endomorphism(G, phi, commutator((v, 1), (w, 1))):
            return False
    return True


def inversion(G: DefiningGraph, v: str) -> Endomorphism:
    phi = endomorphism(G, {v: ((v, -1),)}, kind="inversion", name=f"i_{v}")
    phi.inverse = phi
    return phi


def partial_conjugation(G: DefiningGraph, v: str, C: Iterable[str], sign: int = 1) -> Endomorphism:
    """``w -> v w v^-1`` for w in C (``v^-1 w v`` when sign is -1)."""
    C = G.sorted(C)
    x = (v, sign)
    images = {w: (x, (w, 1), (v, -sign)) for w in C}
    name = f"chi_{letter_str(x)},{{{','.join(C)}}}"
    return endomorphism(G, images, kind="partial_conjugation", name=name)


def transvection(G: DefiningGraph, v: str, w: str, sign: int = 1) -> Endomorphism:
    """Left transvection ``w -> v w`` (``v^-1 w`` when sign is -1)."""
    if v == w or not G.link(w) <= G.star(v):
        raise ValueError(f"no transvection of {w} by {v}")
    tag = "twist" if G.star(w) <= G.star(v) else "fold"
    return endomorphism(G, {w: ((v, sign), (w, 1))}, kind="transvection",
                        name=f"phi_{letter_str((v, sign))},{w}", tag=tag)


def graph_automorphism(G: DefiningGraph, perm: Mapping[str, str]) -> Endomorphism:
    name = "sigma_" + "".join(perm[v] for v in G.vertices)
    return endomorphism(G, {v: ((perm[v], 1),) for v in G.vertices}, kind="graph", name=name)


def ls_generators(G: DefiningGraph) -> list[Endomorphism]:
    """Graph automorphisms, inversions, partial conjugations and left transvections.

    Every generator carries its explicit inverse in ``.inverse``.
    """
    gens = []
    for perm in graph_automorphisms(G):
        phi = graph_automorphism(G, perm)
        back = {w: v for v, w in perm.items()}
        phi.inverse = graph_automorphism(G, back)
        gens.append(phi)
    for v in G.vertices:
        gens.append(inversion(G, v))
    for v in G.vertices:
        for C in components_minus_star(G, v):
            phi = partial_conjugation(G, v, C)
            phi.inverse = partial_conjugation(G, v, C, sign=-1)
            gens.append(phi)
    for v in G.vertices:
        for w in G.vertices:
            if v != w and G.link(w) <= G.star(v):
                phi = transvection(G, v, w)
                phi.inverse = transvection(G, v, w, sign=-1)
                gens.append(phi)
    return gens


def whitehead_automorphism(G: DefiningGraph, P, m: str) -> Endomorphism:
    """The Whitehead automorphism of a partition at a maximal split generator ``m``.

    ``m`` must lie in max(P): a split generator strictly fold-below the base
    does not give a well defined map. With m on the plus side: ``m -> m^-1``; a split v with v on the plus side
    goes to ``v m^-1``, with v on the minus side to ``m v``; an unsplit
    generator whose letters lie on the minus side is conjugated by m;
    everything else is fixed. The result is an involution.
    """
    from .partitions import PartitionError, sing_and_max, validate_partition

    ok, reason = validate_partition(G, P)
    if not ok:
        raise PartitionError(f"invalid partition: {reason}")
    sing, mx = sing_and_max(G, P)
    if m not in sing:
        raise PartitionError(f"{m} is not split by the partition")
    if m not in mx:
        raise PartitionError(f"{m} is split but not fold-equivalent to the base")
    plus, minus = (P.plus, P.minus) if (m, 1) in P.plus else (P.minus, P.plus)
    images = {m: ((m, -1),)}
    for v in G.vertices:
        if v == m:
            continue
        if v in sing:
            images[v] = ((v, 1), (m, -1)) if (v, 1) in plus else ((m, 1), (v, 1))
        elif (v, 1) in minus:
            images[v] = ((m, 1), (v, 1), (m, -1))
    phi = endomorphism(G, images, kind="whitehead", name=f"phi({P},{m})")
    phi.inverse = phi
    return phi
