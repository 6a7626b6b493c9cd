"""Command-line surface.

Commands: intersect, rank, basis, member, witness, fuzz, hnn-embed.
Output is a flat `key = value` block (or JSON with --json); exit codes are
0 on success, 1 when a verified identity or bound fails, 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from typing import Sequence

from . import abelian, product, stallings
from .abelian import AbElement, AbGroup, AmbientTooLargeError
from .product import GeneratorPair, ProductSubgroup
from .specfile import (
    DEFAULT_MAX_AMBIENT,
    SpecSyntaxError,
    SubgroupSpecFile,
    UnificationError,
    embed_spec,
    hnn_embed,
    parse_presentation,
    parse_subgroup,
    serialize_presentation,
    unify_specs,
)
from .words import Alphabet, Word


def _fmt(value) -> str:
    if value is True:
        return "true"
    if value is False:
        return "false"
    if value == math.inf:
        return "infinite"
    return str(value)


def _emit(pairs: list[tuple[str, object]], as_json: bool) -> None:
    if as_json:
        out = {}
        for key, value in pairs:
            out[key] = "infinite" if value == math.inf else value
        print(json.dumps(out, indent=2))
    else:
        for key, value in pairs:
            print(f"{key} = {_fmt(value)}")


def _fmt_ambient(ambient: AbGroup) -> str:
    if ambient.rank == 0:
        return "trivial"
    return "[" + ",".join(str(d) for d in ambient.moduli) + "]"


def _fmt_torsion(el: AbElement) -> str:
    return "(" + ",".join(str(r) for r in el.residues) + ")"


def _gen_lines(p: ProductSubgroup) -> list[str]:
    lines = []
    for gp in p.generator_pairs():
        if p.ambient.rank == 0:
            lines.append(str(gp.word))
        else:
            lines.append(f"{gp.word} | {_fmt_torsion(gp.torsion)}")
    return lines


def _read_spec(path: str) -> SubgroupSpecFile:
    with open(path, encoding="utf-8") as fh:
        return parse_subgroup(fh.read())


def cmd_intersect(args: argparse.Namespace) -> int:
    spec_h = _read_spec(args.file_h)
    spec_k = _read_spec(args.file_k)
    alphabet, ambient, gens_h, gens_k = unify_specs(
        spec_h, spec_k, args.max_ambient
    )
    sub_h = product.normalize(alphabet, ambient, gens_h)
    sub_k = product.normalize(alphabet, ambient, gens_k)
    meet = product.p_intersect(sub_h, sub_k)
    rk_h, rk_k, rk_i = (
        product.p_rank(sub_h),
        product.p_rank(sub_k),
        product.p_rank(meet),
    )
    hn_ok = product.check_hanna_neumann(sub_h.proj, sub_k.proj)
    kp_ok = product.check_kp_bound(max(1, ambient.order), rk_h, rk_k, rk_i)
    pairs: list[tuple[str, object]] = [
        ("ambient", _fmt_ambient(ambient)),
        ("free_rank", alphabet.n),
        ("rank_h", rk_h),
        ("rank_k", rk_k),
        ("rank_intersection", rk_i),
        ("proj_index_h", stallings.index(sub_h.proj)),
        ("proj_index_k", stallings.index(sub_k.proj)),
        ("proj_index_intersection", stallings.index(meet.proj)),
        ("fiber_order_intersection", meet.fiber.order),
        ("hanna_neumann_ok", hn_ok),
        ("kp_bound_ok", kp_ok),
    ]
    for i, line in enumerate(_gen_lines(meet), start=1):
        pairs.append((f"gen_{i}", line))
    _emit(pairs, args.json)
    return 0 if hn_ok and kp_ok else 1


def cmd_rank(args: argparse.Namespace) -> int:
    alphabet, ambient, gens = embed_spec(_read_spec(args.file), args.max_ambient)
    sub = product.normalize(alphabet, ambient, gens)
    _emit(
        [
            ("ambient", _fmt_ambient(ambient)),
            ("rank", product.p_rank(sub)),
            ("proj_rank", stallings.rank(sub.proj)),
            ("fiber_min_generators", abelian.min_generators(sub.fiber)),
            ("proj_index", stallings.index(sub.proj)),
        ],
        args.json,
    )
    return 0


def cmd_basis(args: argparse.Namespace) -> int:
    alphabet, ambient, gens = embed_spec(_read_spec(args.file), args.max_ambient)
    sub = product.normalize(alphabet, ambient, gens)
    pairs: list[tuple[str, object]] = [
        ("ambient", _fmt_ambient(ambient)),
        ("rank", product.p_rank(sub)),
    ]
    for i, line in enumerate(_gen_lines(sub), start=1):
        pairs.append((f"gen_{i}", line))
    _emit(pairs, args.json)
    return 0


def cmd_member(args: argparse.Namespace) -> int:
    spec = _read_spec(args.file)
    probe_line = f"gen: {args.word}"
    if args.torsion is not None:
        probe_line += f" | {args.torsion}"
    probe_text = _ambient_header(spec) + "\n" + probe_line + "\n"
    probe = parse_subgroup(probe_text)
    alphabet, ambient, gens, probe_gens = unify_specs(
        spec, probe, args.max_ambient
    )
    sub = product.normalize(alphabet, ambient, gens)
    result = product.p_membership(sub, probe_gens[0])
    _emit([("member", result)], args.json)
    return 0


def _ambient_header(spec: SubgroupSpecFile) -> str:
    head = f"ambient: free rank={spec.rank}"
    if spec.kind == "torsion":
        head += f" torsion=[{','.join(str(d) for d in spec.moduli)}]"
    elif spec.kind == "qmodz":
        head += " qmodz"
    return head


def cmd_witness(args: argparse.Namespace) -> int:
    if min(args.h, args.k, args.l) < 2:
        print("error: witness parameters must be >= 2", file=sys.stderr)
        return 2
    report = product.witness(args.h, args.k, args.l)
    pairs: list[tuple[str, object]] = [
        ("h", report.h),
        ("k", report.k),
        ("l", report.l),
        ("rk_h", report.rk_h),
        ("rk_k", report.rk_k),
        ("rk_hk", report.rk_hk),
        ("expected_rk_hk", report.l * (report.h - 1) * (report.k - 1) + 1),
        ("index_h", report.index_h),
        ("index_k0", report.index_k0),
        ("index_hk", report.index_hk),
        ("identity", "PASS" if report.identity_holds else "FAIL"),
        ("kp_bound", "PASS" if report.kp_bound_holds else "FAIL"),
    ]
    for i, line in enumerate(_gen_lines(report.subgroup_h), start=1):
        pairs.append((f"h_gen_{i}", line))
    for i, line in enumerate(_gen_lines(report.subgroup_k), start=1):
        pairs.append((f"k_gen_{i}", line))
    _emit(pairs, args.json)
    return 0 if report.identity_holds and report.kp_bound_holds else 1


def _random_word(rng: random.Random, alphabet: Alphabet, max_len: int) -> Word:
    length = rng.randint(1, max_len)
    letters: list[int] = []
    while len(letters) < length:
        s = rng.choice([g for g in range(1, alphabet.n + 1)] * 2)
        s = s if rng.random() < 0.5 else -s
        if letters and letters[-1] == -s:
            continue
        letters.append(s)
    return Word(alphabet, letters)


def _random_subgroup(
    rng: random.Random, alphabet: Alphabet, max_gens: int, max_len: int
) -> tuple[list[Word], stallings.SubgroupGraph]:
    gens = [
        _random_word(rng, alphabet, max_len)
        for _ in range(rng.randint(1, max_gens))
    ]
    return gens, stallings.from_generators(alphabet, gens)


def cmd_fuzz(args: argparse.Namespace) -> int:
    rng = random.Random(args.seed)
    alphabet = Alphabet(2)
    checked = {"hanna_neumann": 0, "pullback_symmetry": 0, "generator_membership": 0, "schreier": 0}
    violations: dict[str, list[int]] = {key: [] for key in checked}
    for _ in range(args.count):
        trial_seed = rng.randrange(2**32)
        trng = random.Random(trial_seed)
        gens_h, graph_h = _random_subgroup(trng, alphabet, args.max_gens, args.max_len)
        gens_k, graph_k = _random_subgroup(trng, alphabet, args.max_gens, args.max_len)

        checked["hanna_neumann"] += 1
        if not product.check_hanna_neumann(graph_h, graph_k):
            violations["hanna_neumann"].append(trial_seed)

        checked["pullback_symmetry"] += 1
        if stallings.pullback(graph_h, graph_k) != stallings.pullback(
            graph_k, graph_h
        ):
            violations["pullback_symmetry"].append(trial_seed)

        checked["generator_membership"] += 1
        w = Word(alphabet)
        for _ in range(4):
            g = trng.choice(gens_h)
            w = w * (g if trng.random() < 0.5 else ~g)
        if not stallings.membership(graph_h, w):
            violations["generator_membership"].append(trial_seed)

        checked["schreier"] += 1
        modulus = trng.randint(2, 6)
        target = AbGroup((modulus,))
        images = [
            target.element((trng.randrange(modulus),)) for _ in range(2)
        ]
        preimage = stallings.finite_quotient_preimage(
            stallings.whole_group(alphabet),
            images,
            abelian.subgroup_from_generators(target, []),
        )
        idx = stallings.index(preimage)
        if idx == math.inf or stallings.rank(preimage) != idx * (alphabet.n - 1) + 1:
            violations["schreier"].append(trial_seed)

    pairs: list[tuple[str, object]] = [("count", args.count), ("seed", args.seed)]
    total_bad = 0
    for key in checked:
        pairs.append((f"{key}_checked", checked[key]))
        pairs.append((f"{key}_violations", len(violations[key])))
        total_bad += len(violations[key])
        for i, bad_seed in enumerate(violations[key], start=1):
            pairs.append((f"{key}_reproducer_{i}", bad_seed))
    pairs.append(("violations", total_bad))
    _emit(pairs, args.json)
    return 0 if total_bad == 0 else 1


def cmd_hnn_embed(args: argparse.Namespace) -> int:
    with open(args.file, encoding="utf-8") as fh:
        pres = parse_presentation(fh.read())
    embedded = hnn_embed(pres)
    if args.json:
        print(
            json.dumps(
                {
                    "generators": list(embedded.generators),
                    "relators": [
                        [[name, exp] for name, exp in rel]
                        for rel in embedded.relators
                    ],
                    "two_generator_set": ["a", "t"],
                },
                indent=2,
            )
        )
    else:
        sys.stdout.write(serialize_presentation(embedded))
        print("# two-generator set: a t")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="howson",
        description="Subgroup intersections and ranks in F_n and F_n x A",
    )
    parser.add_argument("--json", action="store_true", help="JSON output")
    parser.add_argument(
        "--max-ambient",
        type=int,
        default=DEFAULT_MAX_AMBIENT,
        metavar="N",
        help="bound on the reduced finite ambient order (default 10^6)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("intersect", help="intersect two subgroup files")
    p.add_argument("file_h")
    p.add_argument("file_k")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("rank", help="rank of a subgroup file")
    p.add_argument("file")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("basis", help="canonical generators of a subgroup file")
    p.add_argument("file")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("member", help="membership test")
    p.add_argument("file")
    p.add_argument("word")
    p.add_argument("torsion", nargs="?")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("witness", help="rank-identity witness in F_2 x Z/l")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("fuzz", help="randomized property suite")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-gens", type=int, default=4)
    p.add_argument("--max-len", type=int, default=6)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("hnn-embed", help="2-generator HNN embedding")
    p.add_argument("file")
    p.set_defaults(func=cmd_hnn_embed)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "fuzz" and args.count < 0:
        print("error: count must be nonnegative", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (
        SpecSyntaxError,
        UnificationError,
        AmbientTooLargeError,
        OSError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
