"""Command line front end.

Subcommands: am-chi (numerical Amitsur group of a variety spec), am-t
(toric Amitsur groups of a fan), bounds (period divisibility bounds),
oracle (poised-set versus box-scan cross check), table-dp6 (the ten
named subgroups of the degree-6 del Pezzo surface).

File formats, fixed here: a variety spec is a JSON object with fields
``pic_rank``, ``dim``, ``chi`` and ``action_generators``; ``chi`` holds
``degree`` plus either ``coeffs`` (binomial-basis entries ``{exponent,
value}``) or ``values`` (``{point, value}`` covering the degree
simplex).  A fan file is a JSON object with ``lattice_rank``, ``rays``
and ``max_cones`` (0-based ray indices).  Named inputs: ``p2``,
``dp6[:WORD]``, ``hirzebruch:E``, ``pproduct:N:M``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from itertools import combinations
from typing import Sequence

from numam.amitsur import (
    AmitsurComputation,
    GeneratorRecord,
    VarietySpec,
    am_chi,
    curve_gcds,
    oracle_report,
    surface_period_candidates,
    threefold_period_candidates,
    uniform_bound,
)
from numam.intlin import FiniteAbelianGroup, IntegerMatrix, Sublattice, span
from numam.latgroup import LatticeGroupAction, generate, subgroups
from numam.numpoly import from_values, polynomial_from_coeffs, simplex_points
from numam.toric import (
    Fan,
    ProjectiveProduct,
    am_t,
    dp6,
    fan_automorphisms,
    hirzebruch,
    p2,
    projective_product,
    surface_variety_spec,
    validate,
)

DP6_S = IntegerMatrix.from_rows([[0, 1], [1, 0]])
DP6_R = IntegerMatrix.from_rows([[0, 1], [-1, 1]])

DP6_TABLE_ROWS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("1", ()),
    ("<s>", ("s",)),
    ("<sr3>", ("sr3",)),
    ("<r3>", ("r3",)),
    ("<r2>", ("r2",)),
    ("<s,r3>", ("s", "r3")),
    ("<s,r2>", ("s", "r2")),
    ("<sr3,r2>", ("sr3", "r2")),
    ("<r>", ("r",)),
    ("<s,r>", ("s", "r")),
)

DP6_TABLE_EXPECTED = ("0", "0", "0", "(Z/2Z)^2", "Z/3Z", "Z/2Z", "0", "Z/3Z", "0", "0")


class CliError(Exception):
    """Bad input: unreadable file, malformed document, unknown name."""


def render_group(group: FiniteAbelianGroup) -> str:
    """Canonical rendering: '0', 'Z', 'Z/kZ', '(Z/aZ)^b x ...'."""
    parts = []
    if group.free_rank == 1:
        parts.append("Z")
    elif group.free_rank > 1:
        parts.append(f"Z^{group.free_rank}")
    factors = group.invariant_factors
    i = 0
    while i < len(factors):
        j = i
        while j < len(factors) and factors[j] == factors[i]:
            j += 1
        count = j - i
        cyc = f"Z/{factors[i]}Z"
        parts.append(cyc if count == 1 else f"({cyc})^{count}")
        i = j
    return " x ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# words over named symmetry generators


def parse_word(word: str, symbols: dict[str, IntegerMatrix], rank: int) -> IntegerMatrix:
    """Parse a product like 'sr3' or 'g2^3' over the named generators."""
    if word in ("1", "e"):
        return IntegerMatrix.identity(rank)
    result = IntegerMatrix.identity(rank)
    i = 0
    while i < len(word):
        match = None
        for name in symbols:
            if word.startswith(name, i) and (match is None or len(name) > len(match)):
                match = name
        if match is None:
            raise CliError(f"unknown generator at position {i} in word {word!r}")
        i += len(match)
        if i < len(word) and word[i] == "^":
            i += 1
        j = i
        while j < len(word) and word[j].isdigit():
            j += 1
        power = int(word[i:j]) if j > i else 1
        i = j
        for _ in range(power):
            result = result.mul(symbols[match])
    return result


def element_words(symbols: dict[str, IntegerMatrix], group: LatticeGroupAction) -> dict[tuple, str]:
    """Shortest word naming for every group element, deterministic."""
    ident = IntegerMatrix.identity(group.rank)
    names: dict[tuple, tuple[str, ...]] = {ident.entries: ()}
    frontier = [ident.entries]
    while frontier:
        nxt = []
        for key in frontier:
            for name in sorted(symbols):
                g = symbols[name]
                prod = IntegerMatrix(group.rank, group.rank, key).mul(g).entries
                if prod not in names:
                    names[prod] = names[key] + (name,)
                    nxt.append(prod)
        frontier = nxt

    def render(atoms: tuple[str, ...]) -> str:
        if not atoms:
            return "1"
        out = []
        i = 0
        while i < len(atoms):
            j = i
            while j < len(atoms) and atoms[j] == atoms[i]:
                j += 1
            out.append(atoms[i] if j - i == 1 else f"{atoms[i]}{j - i}")
            i = j
        return "".join(out)

    missing = [g for g in group.elements if g.entries not in names]
    if missing:
        raise CliError("symmetry words do not generate the whole group")
    return {g.entries: render(names[g.entries]) for g in group.elements}


def subgroup_label(sub: LatticeGroupAction, names: dict[tuple, str]) -> str:
    """Label by a smallest generating set, e.g. '<s,r3>'."""
    if sub.order == 1:
        return "1"
    keys = sub.element_keys()
    ident = IntegerMatrix.identity(sub.rank).entries
    candidates = sorted(
        (k for k in keys if k != ident),
        key=lambda k: (len(names[k]), names[k]),
    )
    for size in range(1, 4):
        for combo in combinations(candidates, size):
            gen = generate([IntegerMatrix(sub.rank, sub.rank, k) for k in combo], rank=sub.rank)
            if gen.element_keys() == keys:
                return "<" + ",".join(names[k] for k in combo) + ">"
    return "<" + ",".join(names[k] for k in candidates) + ">"


# ---------------------------------------------------------------------------
# symmetry context per target (which names generate which Picard subgroup)


class SymmetryContext:
    """Named generators of the Picard symmetry group of a target."""

    def __init__(self, pic_group: LatticeGroupAction, symbols: dict[str, IntegerMatrix]):
        self.pic_group = pic_group
        self.symbols = symbols
        self.names = element_words(symbols, pic_group)

    def subgroup_from_words(self, words: Sequence[str]) -> LatticeGroupAction:
        rank = self.pic_group.rank
        gens = [parse_word(w.strip(), self.symbols, rank) for w in words if w.strip() not in ("", "1", "e")]
        group = generate(gens, rank=rank)
        if not group.element_keys() <= self.pic_group.element_keys():
            raise CliError("word subgroup is not inside the Picard symmetry group")
        return group


def _fan_context(fan: Fan) -> SymmetryContext:
    syms = fan_automorphisms(fan)
    if fan == dp6():
        lookup = {g.entries: q for g, q in zip(syms.lattice_group.elements, syms.pic_images)}
        symbols = {
            "s": lookup[DP6_S.entries],
            "r": lookup[DP6_R.entries],
        }
    else:
        symbols = {
            f"p{i}": g for i, g in enumerate(syms.pic_action.elements) if i
        }
    return SymmetryContext(syms.pic_action, symbols)


def _product_context(prod: ProjectiveProduct) -> SymmetryContext:
    symbols: dict[str, IntegerMatrix] = {}
    for i, g in enumerate(prod.autp.elements):
        if i:
            symbols[f"p{i}"] = g
    if prod.m == 2:
        symbols["swap"] = prod.autp.elements[1]
    return SymmetryContext(prod.autp, symbols)


# ---------------------------------------------------------------------------
# named and file inputs


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _require(payload: dict, field: str, where: str):
    if field not in payload:
        raise CliError(f"{where}: missing field {field!r}")
    return payload[field]


def fan_from_payload(payload: dict, where: str = "fan") -> Fan:
    rank = _require(payload, "lattice_rank", where)
    rays = _require(payload, "rays", where)
    cones = _require(payload, "max_cones", where)
    try:
        return Fan.make(rays, cones, lattice_rank=int(rank))
    except (TypeError, ValueError) as exc:
        raise CliError(f"{where}: {exc}") from exc


def variety_spec_from_payload(payload: dict, where: str = "spec") -> VarietySpec:
    pic_rank = int(_require(payload, "pic_rank", where))
    dim = int(_require(payload, "dim", where))
    chi_doc = _require(payload, "chi", where)
    degree = int(_require(chi_doc, "degree", f"{where}.chi"))
    if "coeffs" in chi_doc:
        coeffs = {}
        for item in chi_doc["coeffs"]:
            exp = tuple(int(x) for x in _require(item, "exponent", f"{where}.chi.coeffs"))
            coeffs[exp] = int(_require(item, "value", f"{where}.chi.coeffs"))
        try:
            chi = polynomial_from_coeffs(pic_rank, degree, coeffs)
        except ValueError as exc:
            raise CliError(f"{where}.chi: {exc}") from exc
    elif "values" in chi_doc:
        table = {}
        for item in chi_doc["values"]:
            pt = tuple(int(x) for x in _require(item, "point", f"{where}.chi.values"))
            table[pt] = int(_require(item, "value", f"{where}.chi.values"))
        missing = [p for p in simplex_points(pic_rank, degree) if p not in table]
        if missing:
            raise CliError(f"{where}.chi.values: missing simplex point {missing[0]}")
        chi = from_values(pic_rank, degree, table.__getitem__)
    else:
        raise CliError(f"{where}.chi: needs either 'coeffs' or 'values'")
    gens = [
        IntegerMatrix.from_rows(g) for g in _require(payload, "action_generators", where)
    ]
    try:
        action = generate(gens, rank=pic_rank)
        return VarietySpec(pic_rank=pic_rank, dim=dim, action=action, chi=chi)
    except ValueError as exc:
        raise CliError(f"{where}: {exc}") from exc


def variety_spec_to_payload(spec: VarietySpec) -> dict:
    return {
        "pic_rank": spec.pic_rank,
        "dim": spec.dim,
        "chi": {
            "degree": spec.chi.degree,
            "coeffs": [
                {"exponent": list(e), "value": c} for e, c in spec.chi.terms
            ],
        },
        "action_generators": [
            [list(row) for row in g.entries] for g in spec.action.elements[1:]
        ],
    }


def resolve_fan_target(arg: str) -> Fan | ProjectiveProduct:
    if os.path.exists(arg):
        return fan_from_payload(_load_json(arg), where=arg)
    head, _, rest = arg.partition(":")
    if head == "p2" and not rest:
        return p2()
    if head == "dp6" and not rest:
        return dp6()
    if head == "hirzebruch":
        try:
            return hirzebruch(int(rest))
        except ValueError as exc:
            raise CliError(f"bad Hirzebruch degree {rest!r}") from exc
    if head == "pproduct":
        try:
            n, m = (int(x) for x in rest.split(":"))
            return projective_product(n, m)
        except ValueError as exc:
            raise CliError(f"bad pproduct spec {arg!r}") from exc
    raise CliError(f"unknown fan {arg!r} (not a file, not a named fan)")


def resolve_variety(arg: str) -> VarietySpec:
    if os.path.exists(arg):
        return variety_spec_from_payload(_load_json(arg), where=arg)
    head, _, rest = arg.partition(":")
    if head == "p2" and not rest:
        return surface_variety_spec(p2())
    if head == "hirzebruch":
        try:
            return surface_variety_spec(hirzebruch(int(rest)))
        except ValueError as exc:
            raise CliError(f"bad Hirzebruch degree {rest!r}") from exc
    if head == "dp6":
        fan = dp6()
        if not rest:
            return surface_variety_spec(fan)
        ctx = _fan_context(fan)
        action = ctx.subgroup_from_words(rest.split(","))
        return surface_variety_spec(fan, action)
    if head == "pproduct":
        try:
            n, m = (int(x) for x in rest.split(":"))
        except ValueError as exc:
            raise CliError(f"bad pproduct spec {arg!r}") from exc
        prod = projective_product(n, m)
        return VarietySpec(
            pic_rank=prod.pic_rank,
            dim=prod.dim,
            action=generate([], rank=prod.pic_rank),
            chi=prod.chi,
        )
    raise CliError(f"unknown spec {arg!r} (not a file, not a named variety)")


# ---------------------------------------------------------------------------
# machine output


def sublattice_to_payload(lat: Sublattice) -> dict:
    return {
        "ambient_rank": lat.ambient_rank,
        "basis_columns": [list(c) for c in lat.basis_columns()],
    }


def sublattice_from_payload(payload: dict) -> Sublattice:
    return span(payload["basis_columns"], payload["ambient_rank"])


def computation_to_payload(comp: AmitsurComputation) -> dict:
    return {
        "invariant_lattice": sublattice_to_payload(comp.invariant_lattice),
        "split_subgroup": sublattice_to_payload(comp.split_subgroup),
        "group": {
            "invariant_factors": list(comp.group.invariant_factors),
            "free_rank": comp.group.free_rank,
        },
        "generators_used": [
            {"subgroup": r.subgroup, "point": list(r.point), "vector": list(r.vector)}
            for r in comp.generators_used
        ],
    }


def computation_from_payload(payload: dict) -> AmitsurComputation:
    group = FiniteAbelianGroup(
        tuple(payload["group"]["invariant_factors"]),
        payload["group"]["free_rank"],
    )
    records = tuple(
        GeneratorRecord(r["subgroup"], tuple(r["point"]), tuple(r["vector"]))
        for r in payload["generators_used"]
    )
    return AmitsurComputation(
        invariant_lattice=sublattice_from_payload(payload["invariant_lattice"]),
        split_subgroup=sublattice_from_payload(payload["split_subgroup"]),
        group=group,
        generators_used=records,
    )


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


# ---------------------------------------------------------------------------
# commands


def cmd_am_chi(args) -> int:
    spec = resolve_variety(args.spec)
    comp = am_chi(spec)
    if args.machine:
        payload = computation_to_payload(comp)
        payload["pic_rank"] = spec.pic_rank
        payload["dim"] = spec.dim
        _emit_json(payload)
        return 0
    print(f"Pic^J rank: {comp.invariant_lattice.rank}")
    print(f"Pic^chi generators: {len(comp.generators_used)}")
    print(f"Am^chi: {render_group(comp.group)}")
    return 0


def cmd_am_t(args) -> int:
    target = resolve_fan_target(args.fan)
    if isinstance(target, ProjectiveProduct):
        ctx = _product_context(target)
    else:
        ctx = _fan_context(target)
    if args.subgroups == "all":
        requested = [
            (subgroup_label(sub, ctx.names), sub)
            for sub in subgroups(ctx.pic_group)
        ]
    else:
        word = args.subgroup if args.subgroup is not None else "1"
        label = word if word != "1" else "1"
        if label != "1":
            label = "<" + word + ">"
        requested = [(label, ctx.subgroup_from_words(word.split(",")))]
    print("J\torder\tAm^T")
    for label, sub in requested:
        comp = am_t(target, sub)
        print(f"{label}\t{sub.order}\t{render_group(comp.group)}")
    return 0


def cmd_bounds(args) -> int:
    if args.kind == "uniform":
        bound = uniform_bound(args.dim, args.pa)
        suffix = " (vacuous)" if bound == 0 else ""
        print(f"uniform bound (dim {args.dim}, p_a {args.pa}): {bound}{suffix}")
        return 0
    if args.kind == "curve":
        gcd_f, gcd_kf, ratio = curve_gcds(args.deg, args.pa)
        if ratio is None:
            print("chi is identically zero; every bound is vacuous")
            return 0
        print(f"gcd of chi(kD) values: {gcd_f}")
        print(f"gcd of k*chi(kD) values: {gcd_kf}")
        print(f"ratio: {ratio}")
        return 0
    if args.kind == "surface":
        cands = surface_period_candidates(args.d2, args.dk)
        two = 2 in cands
        three = 3 in cands
        print(f"2 allowed iff D^2, D.K both even and distinct mod 4: {'yes' if two else 'no'}")
        print(f"3 allowed iff D.K = 0 (mod 3) and D^2 = 1 (mod 3): {'yes' if three else 'no'}")
        print(f"candidates: {{{', '.join(str(m) for m in sorted(cands))}}}")
        return 0
    # threefold
    cands = threefold_period_candidates(args.d3, args.d2k)
    print("congruences: 2 D^3 = 6 (mod m) and D^2.K = 4 (mod 2m), m | 12")
    print(f"candidates: {{{', '.join(str(m) for m in sorted(cands))}}}")
    return 0


def cmd_oracle(args) -> int:
    if args.box < 1:
        raise CliError("--box must be >= 1")
    spec = resolve_variety(args.spec)
    report = oracle_report(spec, args.box)
    print(f"Am^chi (poised): {render_group(report.poised.group)}")
    print(f"Am^chi (box {args.box}): {render_group(report.brute.group)}")
    print(f"span equality: {'PASS' if report.spans_equal else 'FAIL'}")
    print(f"stabilization at box {args.box + 1}: {'PASS' if report.stabilized else 'FAIL'}")
    return 0 if report.passed else 1


def cmd_table_dp6(args) -> int:
    fan = dp6()
    ctx = _fan_context(fan)
    failures = 0
    print("J\torder\tAm^chi")
    for (label, words), expected in zip(DP6_TABLE_ROWS, DP6_TABLE_EXPECTED):
        action = ctx.subgroup_from_words(words)
        chi_comp = am_chi(surface_variety_spec(fan, action))
        toric_comp = am_t(fan, action)
        rendered = render_group(chi_comp.group)
        if toric_comp.group != chi_comp.group:
            print(f"{label}\t{action.order}\t{rendered}\tMISMATCH Am^T={render_group(toric_comp.group)}")
            failures += 1
            continue
        verdict = ""
        if rendered != expected:
            verdict = f"\tMISMATCH expected {expected}"
            failures += 1
        print(f"{label}\t{action.order}\t{rendered}{verdict}")
    if failures:
        print(f"table-dp6: {failures} row(s) disagree")
        return 1
    print("table-dp6: all 10 rows match")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="numam",
        description="Numerical and toric Amitsur groups over exact integer arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("am-chi", help="numerical Amitsur group of a variety spec")
    p.add_argument("spec", help="spec file or named variety (p2, dp6[:WORD], hirzebruch:E, pproduct:N:M)")
    p.add_argument("--machine", action="store_true", help="emit machine-readable JSON")
    p.set_defaults(func=cmd_am_chi)

    p = sub.add_parser("am-t", help="toric Amitsur groups of a fan")
    p.add_argument("fan", help="fan file or named fan (p2, dp6, hirzebruch:E, pproduct:N:M)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--subgroups", choices=["all"], help="compute every subgroup")
    group.add_argument("--subgroup", help="generator word(s), comma separated (e.g. 's,r3')")
    p.set_defaults(func=cmd_am_t)

    p = sub.add_parser("bounds", help="divisibility bounds on Amitsur periods")
    kinds = p.add_subparsers(dest="kind", required=True)
    q = kinds.add_parser("uniform")
    q.add_argument("--dim", type=int, required=True)
    q.add_argument("--pa", type=int, required=True)
    q.set_defaults(func=cmd_bounds)
    q = kinds.add_parser("curve")
    q.add_argument("--deg", type=int, required=True)
    q.add_argument("--pa", type=int, required=True)
    q.set_defaults(func=cmd_bounds)
    q = kinds.add_parser("surface")
    q.add_argument("--d2", type=int, required=True)
    q.add_argument("--dk", type=int, required=True)
    q.set_defaults(func=cmd_bounds)
    q = kinds.add_parser("threefold")
    q.add_argument("--d3", type=int, required=True)
    q.add_argument("--d2k", type=int, required=True)
    q.set_defaults(func=cmd_bounds)

    p = sub.add_parser("oracle", help="cross-check am-chi against the box oracle")
    p.add_argument("spec")
    p.add_argument("--box", type=int, required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("table-dp6", help="the ten named Amitsur groups of dP6")
    p.set_defaults(func=cmd_table_dp6)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
