"""The (typed) relational algebra over undirected wiring diagrams.

An element over a box is an explicit finite set of wire-indexed value
vectors.  The six generating structure maps are set operations: output
wires contribute the full alphabet, 2-cells concatenate, loops filter on
entry equality and delete, splits duplicate entries.

``rigidity_check`` runs the structure-map compatibility squares for a
function between alphabets; by the rigidity theorem the squares commute
exactly when the function is a bijection.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from wiring_operads.finset import FinSet, Value, coproduct
from wiring_operads.algebras.actions import GeneratorAction
from wiring_operads.algebras.vectors import Vec


@dataclass(frozen=True)
class Relation:
    wires: FinSet
    vectors: frozenset[Vec]

    def __post_init__(self):
        for vec in self.vectors:
            if sorted(vec) != sorted(self.wires.elements):
                raise ValueError(f"vector {vec!r} is not total on the wire set")

    @staticmethod
    def of(wires: FinSet, vectors) -> "Relation":
        return Relation(wires, frozenset(Vec(v) if not isinstance(v, Vec) else v for v in vectors))


def full_relation(wires: FinSet, alphabets: Mapping[Value, Sequence]) -> Relation:
    names = list(wires)
    vectors = [
        Vec(dict(zip(names, combo)))
        for combo in itertools.product(*(alphabets[wires.value(w)] for w in names))
    ]
    return Relation(wires, frozenset(vectors))


def typed_relational_action(alphabets: Mapping[Value, Sequence]) -> GeneratorAction:
    """The six generating structure maps, with per-value-tag alphabets."""

    def act_empty(gen) -> Relation:
        # The chosen element of the two-point entry over the empty box is
        # the one containing the empty vector.
        return Relation(FinSet(()), frozenset({Vec({})}))

    def act_output_wire(gen) -> Relation:
        wire, value = gen.params
        return Relation(
            FinSet(((wire, value),)),
            frozenset(Vec({wire: a}) for a in alphabets[value]),
        )

    def act_name_change(gen, rel: Relation) -> Relation:
        source, target, table = gen.params
        _require_wires(rel, source)
        table = dict(table)
        return Relation(target, frozenset(v.relabel(table) for v in rel.vectors))

    def act_two_cell(gen, rx: Relation, ry: Relation) -> Relation:
        left, right = gen.params
        _require_wires(rx, left)
        _require_wires(ry, right)
        merged, (inj_l, inj_r) = coproduct([left, right])
        vectors = frozenset(
            u.relabel(dict(inj_l.table)).merged(v.relabel(dict(inj_r.table)))
            for u in rx.vectors
            for v in ry.vectors
        )
        return Relation(merged, vectors)

    def act_loop(gen, rel: Relation) -> Relation:
        box, x_plus, x_minus = gen.params
        _require_wires(rel, box)
        smaller = box.remove([x_plus, x_minus])
        vectors = frozenset(
            v.without(x_plus, x_minus)
            for v in rel.vectors
            if v[x_plus] == v[x_minus]
        )
        return Relation(smaller, vectors)

    def act_split(gen, rel: Relation) -> Relation:
        box, x1, x2 = gen.params
        merged = box.quotient([x1, x2])
        _require_wires(rel, merged)
        vectors = frozenset(
            v.merged({x1: v[x1], x2: v[x1]}) for v in rel.vectors
        )
        return Relation(box, vectors)

    from wiring_operads.uwd_presentation import (
        EMPTY_CELL,
        OUTPUT_WIRE,
        U_LOOP,
        U_NAME_CHANGE,
        U_SPLIT,
        U_TWO_CELL,
    )

    return GeneratorAction(
        {
            EMPTY_CELL: act_empty,
            OUTPUT_WIRE: act_output_wire,
            U_NAME_CHANGE: act_name_change,
            U_TWO_CELL: act_two_cell,
            U_LOOP: act_loop,
            U_SPLIT: act_split,
        }
    )


def relational_action(alphabet: Sequence) -> GeneratorAction:
    """The untyped relational algebra: one alphabet for every value tag."""

    class Everywhere(dict):
        def __missing__(self, key):
            return alphabet

    return typed_relational_action(Everywhere())


def _require_wires(rel: Relation, wires: FinSet) -> None:
    if rel.wires != wires:
        raise ValueError(f"relation of color {rel.wires} supplied where {wires} expected")


def push_forward(f: Mapping, rel: Relation) -> Relation:
    """Rename values entrywise along a function between alphabets."""
    return Relation(
        rel.wires, frozenset(Vec({w: f[v[w]] for w in v}) for v in rel.vectors)
    )


def is_bijection(f: Mapping, target: Sequence) -> bool:
    return len(set(f.values())) == len(f) == len(set(target)) and set(f.values()) == set(target)


def rigidity_check(f: Mapping, source: Sequence, target: Sequence) -> bool:
    """Whether pushing forward along ``f`` commutes with the output-wire and
    loop structure maps; the rigidity theorem makes this bijectivity."""
    src_action = relational_action(tuple(source))
    tgt_action = relational_action(tuple(target))
    from wiring_operads.uwd_presentation import output_wire, u_loop

    omega = output_wire("w", "v")
    if push_forward(f, src_action.apply(omega, ())) != tgt_action.apply(omega, ()):
        return False
    # Loop squares on the identity relation over one wire per source value.
    wires = FinSet.of({f"e{k}": "v" for k in range(len(source))})
    names = list(wires)
    ident = Relation(
        wires, frozenset({Vec(dict(zip(names, source)))})
    )
    for w_plus, w_minus in itertools.permutations(names, 2):
        loop = u_loop(wires, w_plus, w_minus)
        lhs = push_forward(f, src_action.apply(loop, (ident,)))
        rhs = tgt_action.apply(loop, (push_forward(f, ident),))
        if lhs != rhs:
            return False
    return True


def random_relation(wires: FinSet, alphabets: Mapping[Value, Sequence], rng) -> Relation:
    full = full_relation(wires, alphabets)
    vectors = frozenset(v for v in full.vectors if rng.random() < 0.5)
    return Relation(wires, vectors)
