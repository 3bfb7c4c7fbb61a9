"""Row-wise workflow diagrams: copy, discard, swap and operation slices.

A morphism is a flat sequence of single-generator slices, each applied at a
wire offset. Equality is decided by forward symbolic evaluation to a tuple of
terms, one per output column. Normalization rebuilds a diagram from its term
tuple as three layers: copies and discards, then a single permutation of
adjacent swaps, then operations. Intra-layer order is fixed left-to-right so
normal forms are unique; see `synthesize_from_terms`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

from .errors import DiagramError
from .signature import Signature
from .terms import App, Term, Var, term_type


@dataclass(frozen=True)
class OpGen:
    name: str


@dataclass(frozen=True)
class CopyGen:
    type: str


@dataclass(frozen=True)
class DiscardGen:
    type: str


@dataclass(frozen=True)
class SwapGen:
    type_a: str
    type_b: str


EGenerator = Union[OpGen, CopyGen, DiscardGen, SwapGen]


@dataclass(frozen=True)
class ESlice:
    offset: int
    gen: EGenerator


@dataclass(frozen=True)
class EMorphism:
    dom: tuple[str, ...]
    cod: tuple[str, ...]
    slices: tuple[ESlice, ...]


def e_identity(schema: Sequence[str]) -> EMorphism:
    schema = tuple(schema)
    return EMorphism(schema, schema, ())


def _walk(sig: Signature, m: EMorphism, terms: list[Term] | None) -> list[Term] | None:
    """Propagate wire types (and optionally terms) through every slice."""
    for t in m.dom + m.cod:
        sig.check_datatype(t)
    types = list(m.dom)
    for idx, sl in enumerate(m.slices):
        off, gen = sl.offset, sl.gen
        if off < 0:
            raise DiagramError(f"slice {idx}: negative offset")

        def need(width: int):
            if off + width > len(types):
                raise DiagramError(
                    f"slice {idx}: {type(gen).__name__} needs {width} wires at offset "
                    f"{off}, only {len(types)} available"
                )

        if isinstance(gen, CopyGen):
            need(1)
            if types[off] != gen.type:
                raise DiagramError(f"slice {idx}: copy of {gen.type} applied to {types[off]}")
            types.insert(off, gen.type)
            if terms is not None:
                terms.insert(off, terms[off])
        elif isinstance(gen, DiscardGen):
            need(1)
            if types[off] != gen.type:
                raise DiagramError(f"slice {idx}: discard of {gen.type} applied to {types[off]}")
            del types[off]
            if terms is not None:
                del terms[off]
        elif isinstance(gen, SwapGen):
            need(2)
            if (types[off], types[off + 1]) != (gen.type_a, gen.type_b):
                raise DiagramError(
                    f"slice {idx}: swap of ({gen.type_a},{gen.type_b}) applied to "
                    f"({types[off]},{types[off + 1]})"
                )
            types[off], types[off + 1] = types[off + 1], types[off]
            if terms is not None:
                terms[off], terms[off + 1] = terms[off + 1], terms[off]
        elif isinstance(gen, OpGen):
            decl = sig.operation(gen.name)
            need(len(decl.dom))
            got = tuple(types[off : off + len(decl.dom)])
            if got != decl.dom:
                raise DiagramError(
                    f"slice {idx}: operation {gen.name} expects {decl.dom}, got {got}"
                )
            types[off : off + len(decl.dom)] = list(decl.cod)
            if terms is not None:
                args = tuple(terms[off : off + len(decl.dom)])
                terms[off : off + len(decl.dom)] = [
                    App(gen.name, args, k + 1) for k in range(len(decl.cod))
                ]
        else:
            raise DiagramError(f"slice {idx}: unknown generator {gen!r}")
    if tuple(types) != m.cod:
        raise DiagramError(
            f"diagram produces {tuple(types)} but declares codomain {m.cod}"
        )
    return terms


def e_typecheck(sig: Signature, m: EMorphism) -> None:
    _walk(sig, m, None)


def e_compose(f: EMorphism, g: EMorphism) -> EMorphism:
    if f.cod != g.dom:
        raise DiagramError(f"cannot compose: {f.cod} then {g.dom}")
    return EMorphism(f.dom, g.cod, f.slices + g.slices)


def e_tensor(f: EMorphism, g: EMorphism) -> EMorphism:
    shift = len(f.cod)
    shifted = tuple(ESlice(s.offset + shift, s.gen) for s in g.slices)
    return EMorphism(f.dom + g.dom, f.cod + g.cod, f.slices + shifted)


def e_to_terms(sig: Signature, m: EMorphism) -> tuple[Term, ...]:
    """Symbolic run: start from (x1..xn), return one term per output column."""
    terms = _walk(sig, m, [Var(i + 1) for i in range(len(m.dom))])
    return tuple(terms)


def e_equal(sig: Signature, m1: EMorphism, m2: EMorphism) -> bool:
    if m1.dom != m2.dom or m1.cod != m2.cod:
        raise DiagramError("equality requires identical domain and codomain")
    return e_to_terms(sig, m1) == e_to_terms(sig, m2)


def permutation_slices(schema: Sequence[str], order: Sequence[int]) -> tuple[ESlice, ...]:
    """Adjacent swaps realizing output position k := input wire order[k]."""
    cur = list(range(len(schema)))
    types = list(schema)
    slices = []
    for k, want in enumerate(order):
        j = cur.index(want)
        while j > k:
            slices.append(ESlice(j - 1, SwapGen(types[j - 1], types[j])))
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            types[j - 1], types[j] = types[j], types[j - 1]
            j -= 1
    return tuple(slices)


def permutation_morphism(schema: Sequence[str], order: Sequence[int]) -> EMorphism:
    if sorted(order) != list(range(len(schema))):
        raise DiagramError(f"{order!r} is not a permutation of {len(schema)} wires")
    cod = tuple(schema[i] for i in order)
    return EMorphism(tuple(schema), cod, permutation_slices(schema, order))


def keep_columns_morphism(schema: Sequence[str], keep: Sequence[int]) -> EMorphism:
    """Discard every column not in `keep`; `keep` must be strictly ascending."""
    if list(keep) != sorted(set(keep)):
        raise DiagramError("keep set must be strictly ascending")
    slices = []
    dropped = [i for i in range(len(schema)) if i not in set(keep)]
    for i in reversed(dropped):
        slices.append(ESlice(i, DiscardGen(schema[i])))
    cod = tuple(schema[i] for i in keep)
    return EMorphism(tuple(schema), cod, tuple(slices))


def _plan_stream(stream: Sequence[Term], sig: Signature) -> list:
    """Group complete ascending projection runs so fully used operations stay whole."""
    prog = []
    i = 0
    while i < len(stream):
        t = stream[i]
        if isinstance(t, Var):
            prog.append(("var", t.index))
            i += 1
            continue
        p = len(sig.operation(t.op).cod)
        if (
            t.proj == 1
            and i + p <= len(stream)
            and all(stream[i + d] == App(t.op, t.args, d + 1) for d in range(p))
        ):
            prog.append(("op_full", t.op, _plan_stream(t.args, sig)))
            i += p
        else:
            prog.append(("op_proj", t.op, t.proj, _plan_stream(t.args, sig)))
            i += 1
    return prog


def _prog_leaves(prog: list) -> list[int]:
    out: list[int] = []
    for node in prog:
        if node[0] == "var":
            out.append(node[1])
        else:
            out.extend(_prog_leaves(node[2] if node[0] == "op_full" else node[3]))
    return out


def _emit_ops(prog: list, pos: int, types: list[str], slices: list[ESlice], sig) -> int:
    cur = pos
    for node in prog:
        if node[0] == "var":
            cur += 1
            continue
        op = node[1]
        args_prog = node[2] if node[0] == "op_full" else node[3]
        end = _emit_ops(args_prog, cur, types, slices, sig)
        decl = sig.operation(op)
        slices.append(ESlice(cur, OpGen(op)))
        types[cur:end] = list(decl.cod)
        if node[0] == "op_full":
            cur += len(decl.cod)
        else:
            # Drop the projections the term tuple does not mention. Such a diagram
            # is no longer strictly three-layered; see layer_profile.
            proj = node[2]
            for d in range(len(decl.cod) - 1, -1, -1):
                if d != proj - 1:
                    slices.append(ESlice(cur + d, DiscardGen(decl.cod[d])))
                    del types[cur + d]
            cur += 1
    return cur


def synthesize_from_terms(
    sig: Signature, dom: Sequence[str], terms: Sequence[Term]
) -> EMorphism:
    """Build the canonical diagram computing `terms` from inputs typed by `dom`.

    Layer 1 copies each input left-associatively to its use count (discarding
    unused inputs), layer 2 permutes the copies into left-to-right leaf order,
    layer 3 applies operations innermost-first. The result depends only on
    (dom, terms), which makes it a normal form for symbolic equality.
    """
    dom = tuple(dom)
    terms = tuple(terms)
    prog = _plan_stream(terms, sig)
    leaves = _prog_leaves(prog)
    if any(v < 1 or v > len(dom) for v in leaves):
        raise DiagramError("term tuple mentions a variable outside the domain")

    counts = [0] * len(dom)
    for v in leaves:
        counts[v - 1] += 1

    slices: list[ESlice] = []
    pos = 0
    for i, c in enumerate(counts):
        if c == 0:
            slices.append(ESlice(pos, DiscardGen(dom[i])))
        else:
            for _ in range(c - 1):
                slices.append(ESlice(pos, CopyGen(dom[i])))
            pos += c

    source_vars = [i + 1 for i, c in enumerate(counts) for _ in range(c)]
    starts: dict[int, int] = {}
    acc = 0
    for i, c in enumerate(counts):
        starts[i + 1] = acc
        acc += c
    seen: dict[int, int] = {}
    order = []
    for v in leaves:
        order.append(starts[v] + seen.get(v, 0))
        seen[v] = seen.get(v, 0) + 1
    mid_schema = [dom[v - 1] for v in source_vars]
    slices.extend(permutation_slices(mid_schema, order))

    types = [dom[v - 1] for v in leaves]
    _emit_ops(prog, 0, types, slices, sig)

    cod = tuple(term_type(t, sig, dom) for t in terms)
    return EMorphism(dom, cod, tuple(slices))


def e_normalize(sig: Signature, m: EMorphism) -> EMorphism:
    return synthesize_from_terms(sig, m.dom, e_to_terms(sig, m))


class LayerProfile(NamedTuple):
    copy_discard: tuple[int, int]
    swaps: tuple[int, int]
    ops: tuple[int, int]


def layer_profile(m: EMorphism) -> LayerProfile | None:
    """Slice ranges of the three layers, or None when the diagram is not layered."""
    rank_of = {CopyGen: 0, DiscardGen: 0, SwapGen: 1, OpGen: 2}
    ranks = [rank_of[type(s.gen)] for s in m.slices]
    if any(b < a for a, b in zip(ranks, ranks[1:])):
        return None
    n = len(ranks)
    first_swap = next((i for i, r in enumerate(ranks) if r >= 1), n)
    first_op = next((i for i, r in enumerate(ranks) if r == 2), n)
    return LayerProfile((0, first_swap), (first_swap, first_op), (first_op, n))
