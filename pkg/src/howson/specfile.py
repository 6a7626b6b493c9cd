"""Text formats: subgroup spec files, group presentations, HNN embedding.

Subgroup grammar, one statement per line ('#' starts a comment):

    ambient: free rank=<n> [torsion=[m1,m2,...] | qmodz]
    gen: <word>
    gen: <word> | (r1,r2,...)      # torsion ambient
    gen: <word> | p/q              # qmodz ambient
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import abelian
from .abelian import AbGroup, QmodZElement, TorsionElement
from .product import GeneratorPair
from .words import MAX_PARSE_RANK, Alphabet, Word

DEFAULT_MAX_AMBIENT = 10**6


class SpecSyntaxError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnificationError(ValueError):
    """The two subgroup files do not fit in a common ambient group."""


@dataclass(frozen=True)
class SubgroupSpecFile:
    rank: int
    kind: str  # "none" | "torsion" | "qmodz"
    moduli: tuple[int, ...]
    gens: tuple[tuple[str, object], ...]  # (word text, None | residues | Fraction)


_AMBIENT_RE = re.compile(
    r"ambient:\s*free\s+rank=(\d+)"
    r"(?:\s+torsion=\[([0-9,\s]*)\]|\s+(qmodz))?\s*$"
)
_GEN_RE = re.compile(r"gen:\s*(\S+)\s*(?:\|\s*(\S+)\s*)?$")


def parse_subgroup(text: str) -> SubgroupSpecFile:
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((no, stripped))
    if not lines:
        raise SpecSyntaxError(1, "missing ambient declaration")
    no, head = lines[0]
    m = _AMBIENT_RE.fullmatch(head)
    if not m:
        raise SpecSyntaxError(no, f"bad ambient declaration: {head!r}")
    rank = int(m.group(1))
    if not 1 <= rank <= MAX_PARSE_RANK:
        raise SpecSyntaxError(no, f"free rank must be in 1..{MAX_PARSE_RANK}")
    if m.group(2) is not None:
        kind = "torsion"
        try:
            moduli = tuple(int(t) for t in m.group(2).split(","))
        except ValueError:
            raise SpecSyntaxError(no, "bad torsion moduli list") from None
        if len(set(moduli)) != len(moduli) or any(d < 2 for d in moduli):
            raise SpecSyntaxError(no, "torsion moduli must be distinct and >= 2")
    elif m.group(3):
        kind, moduli = "qmodz", ()
    else:
        kind, moduli = "none", ()

    alphabet = Alphabet(rank)
    gens = []
    for no, line in lines[1:]:
        g = _GEN_RE.fullmatch(line)
        if not g:
            raise SpecSyntaxError(no, f"bad generator line: {line!r}")
        word_text, torsion_text = g.group(1), g.group(2)
        try:
            Word.parse(alphabet, word_text)
        except ValueError as exc:
            raise SpecSyntaxError(no, str(exc)) from None
        payload: object = None
        if torsion_text is not None:
            if kind == "none":
                raise SpecSyntaxError(no, "torsion part in a torsion-free ambient")
            if kind == "torsion":
                tm = re.fullmatch(r"\(([-0-9,\s]*)\)", torsion_text)
                if not tm:
                    raise SpecSyntaxError(no, f"bad torsion tuple: {torsion_text!r}")
                try:
                    residues = tuple(int(t) for t in tm.group(1).split(","))
                except ValueError:
                    raise SpecSyntaxError(no, "bad torsion tuple") from None
                if len(residues) != len(moduli):
                    raise SpecSyntaxError(no, "torsion tuple length != moduli count")
                payload = tuple(r % d for r, d in zip(residues, moduli))
            else:
                qm = re.fullmatch(r"(-?\d+)/(\d+)", torsion_text)
                if not qm or int(qm.group(2)) == 0:
                    raise SpecSyntaxError(no, f"bad fraction: {torsion_text!r}")
                payload = Fraction(int(qm.group(1)), int(qm.group(2))) % 1
        elif kind == "torsion":
            payload = (0,) * len(moduli)
        elif kind == "qmodz":
            payload = Fraction(0)
        gens.append((word_text, payload))
    return SubgroupSpecFile(rank, kind, moduli, tuple(gens))


def serialize_subgroup(spec: SubgroupSpecFile) -> str:
    head = f"ambient: free rank={spec.rank}"
    if spec.kind == "torsion":
        head += f" torsion=[{','.join(str(d) for d in spec.moduli)}]"
    elif spec.kind == "qmodz":
        head += " qmodz"
    lines = [head]
    for word_text, payload in spec.gens:
        if spec.kind == "none":
            lines.append(f"gen: {word_text}")
        elif spec.kind == "torsion":
            lines.append(
                f"gen: {word_text} | ({','.join(str(r) for r in payload)})"
            )
        else:
            lines.append(
                f"gen: {word_text} | {payload.numerator}/{payload.denominator}"
            )
    return "\n".join(lines) + "\n"


def _torsion_elements(spec: SubgroupSpecFile) -> list[TorsionElement]:
    return [
        TorsionElement.make(list(zip(spec.moduli, payload)))
        for _, payload in spec.gens
    ]


def _common_ambient(
    specs: Sequence[SubgroupSpecFile], max_ambient: int
) -> AbGroup:
    kinds = {s.kind for s in specs} - {"none"}
    if not kinds:
        return AbGroup(())
    if len(kinds) > 1:
        raise UnificationError("cannot mix torsion-list and Q/Z ambients")
    if kinds == {"torsion"}:
        moduli = sorted({d for s in specs for d in s.moduli})
        ambient = AbGroup(tuple(moduli))
    else:
        denoms = [
            payload.denominator
            for s in specs
            if s.kind == "qmodz"
            for _, payload in s.gens
        ]
        ambient = AbGroup((lcm(1, *denoms),))
    if ambient.order > max_ambient:
        raise abelian.AmbientTooLargeError(
            f"ambient order {ambient.order} exceeds bound {max_ambient}"
        )
    return ambient


def _embed_gens(
    spec: SubgroupSpecFile, alphabet: Alphabet, ambient: AbGroup
) -> list[GeneratorPair]:
    pairs = []
    if spec.kind == "torsion":
        pos = {d: i for i, d in enumerate(ambient.moduli)}
        for (word_text, payload), el in zip(spec.gens, _torsion_elements(spec)):
            vec = [0] * ambient.rank
            for m, r in el.support:
                vec[pos[m]] = r
            pairs.append(
                GeneratorPair(Word.parse(alphabet, word_text), ambient.element(vec))
            )
    elif spec.kind == "qmodz":
        big_l = ambient.moduli[0]
        for word_text, payload in spec.gens:
            img = payload.numerator * (big_l // payload.denominator)
            pairs.append(
                GeneratorPair(Word.parse(alphabet, word_text), ambient.element([img]))
            )
    else:
        for word_text, _ in spec.gens:
            pairs.append(
                GeneratorPair(Word.parse(alphabet, word_text), ambient.zero())
            )
    return pairs


def embed_spec(
    spec: SubgroupSpecFile, max_ambient: int = DEFAULT_MAX_AMBIENT
) -> tuple[Alphabet, AbGroup, list[GeneratorPair]]:
    """Reduce one spec file to (alphabet, finite ambient, generator pairs)."""
    ambient = _common_ambient([spec], max_ambient)
    alphabet = Alphabet(spec.rank)
    return alphabet, ambient, _embed_gens(spec, alphabet, ambient)


def unify_specs(
    s1: SubgroupSpecFile,
    s2: SubgroupSpecFile,
    max_ambient: int = DEFAULT_MAX_AMBIENT,
) -> tuple[Alphabet, AbGroup, list[GeneratorPair], list[GeneratorPair]]:
    """Embed two spec files into a common (F_n, A)."""
    ambient = _common_ambient([s1, s2], max_ambient)
    alphabet = Alphabet(max(s1.rank, s2.rank))
    return (
        alphabet,
        ambient,
        _embed_gens(s1, alphabet, ambient),
        _embed_gens(s2, alphabet, ambient),
    )


@dataclass(frozen=True)
class Presentation:
    """A group presentation; relators are words in the generators."""

    generators: tuple[str, ...]
    relators: tuple[tuple[tuple[str, int], ...], ...]

    def __post_init__(self) -> None:
        names = set(self.generators)
        if len(names) != len(self.generators):
            raise ValueError("duplicate generator names")
        for rel in self.relators:
            for name, _ in rel:
                if name not in names:
                    raise ValueError(f"relator uses unknown generator {name!r}")


_NAME_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def _parse_relator_token(
    token: str, gens: set[str], line_no: int
) -> list[tuple[str, int]]:
    m = _NAME_RE.fullmatch(token)
    if m and m.group(1) in gens:
        exp = int(m.group(2)) if m.group(2) else 1
        return [(m.group(1), exp)] if exp else []
    # uppercase aliasing for single-letter generators: "abA" = a b a^-1
    if all(c.isalpha() and c.lower() in gens for c in token):
        return [(c.lower(), 1 if c.islower() else -1) for c in token]
    raise SpecSyntaxError(line_no, f"bad relator token: {token!r}")


def parse_presentation(text: str) -> Presentation:
    gens: tuple[str, ...] | None = None
    relators = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gens:"):
            if gens is not None:
                raise SpecSyntaxError(no, "duplicate gens line")
            gens = tuple(line[len("gens:"):].split())
        elif line.startswith("rel:"):
            if gens is None:
                raise SpecSyntaxError(no, "rel before gens")
            factors: list[tuple[str, int]] = []
            for token in line[len("rel:"):].split():
                factors.extend(_parse_relator_token(token, set(gens), no))
            relators.append(tuple(factors))
        else:
            raise SpecSyntaxError(no, f"unknown statement: {line!r}")
    if gens is None:
        raise SpecSyntaxError(1, "missing gens line")
    return Presentation(gens, tuple(relators))


def serialize_presentation(p: Presentation) -> str:
    lines = ["gens: " + " ".join(p.generators) if p.generators else "gens:"]
    for rel in p.relators:
        tokens = [name if exp == 1 else f"{name}^{exp}" for name, exp in rel]
        lines.append("rel: " + " ".join(tokens))
    return "\n".join(lines) + "\n"


def hnn_embed(p: Presentation) -> Presentation:
    """Embed a countable presented group into a 2-generator group.

    Adds generators a, b, t and the HNN relators t^-1 a t = b and, for the
    i-th original generator c_i, t^-1 b^-i a b^i t = c_i a^-i b a^i; the
    result is generated by {a, t} alone.
    """
    for name in ("a", "b", "t"):
        if name in p.generators:
            raise ValueError(f"input generators may not use the name {name!r}")
    generators = p.generators + ("a", "b", "t")
    relators = list(p.relators)
    relators.append((("t", -1), ("a", 1), ("t", 1), ("b", -1)))
    for i, c in enumerate(p.generators, start=1):
        relators.append(
            (
                ("t", -1),
                ("b", -i),
                ("a", 1),
                ("b", i),
                ("t", 1),
                ("a", -i),
                ("b", -1),
                ("a", i),
                (c, -1),
            )
        )
    return Presentation(generators, tuple(relators))
