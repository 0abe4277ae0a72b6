"""The propagator algebra over the full operad of wiring diagrams.

A propagator of type X is a function from finite sequences of input-wire
assignments to sequences of output-wire assignments that is one entry
longer, with the earlier output entries depending only on the earlier
inputs (historicity).  Such a function is equivalently given by a step
function from input prefixes to single output entries, which is how
propagators are stored here.

The loop action feeds a propagator's own looped output back with a one-step
delay; it is computed by the mutual recursion of the looped propagator with
its feedback history, memoized per input prefix.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from wiring_operads.finset import Value, coproduct
from wiring_operads.algebras.actions import GeneratorAction
from wiring_operads.algebras.vectors import Vec
from wiring_operads.wd import Box, EMPTY_BOX

Profile = tuple[Vec, ...]


@dataclass(frozen=True)
class PointedSet:
    elements: tuple
    base: object

    def __post_init__(self):
        if self.base not in self.elements:
            raise ValueError("base point must belong to the set")


@dataclass(frozen=True)
class Propagator:
    """A length-incrementing, history-respecting profile function."""

    box: Box
    step: Callable[[Profile], Vec]

    def __call__(self, profile: Sequence[Vec]) -> Profile:
        profile = tuple(profile)
        return tuple(self.step(profile[:k]) for k in range(len(profile) + 1))

    def check_historicity(self, profiles: Sequence[Profile]) -> bool:
        """Length shift and prefix stability on the sampled profiles."""
        for profile in profiles:
            out = self(profile)
            if len(out) != len(profile) + 1:
                return False
            if profile and self(profile[:-1]) != out[:-1]:
                return False
        return True


def propagators_agree(p: Propagator, q: Propagator, profiles: Sequence[Profile]) -> bool:
    """Extensional equality over a finite battery of input profiles."""
    return p.box == q.box and all(p(t) == q(t) for t in profiles)


def feedback_history(g: Propagator, x_plus: str, x_minus: str) -> Callable[[Profile], tuple]:
    """The looped-output history: the sequence of values the loop wire
    carries when the loop is closed with a one-step delay."""
    if x_plus not in g.box.outputs or x_minus not in g.box.inputs:
        raise ValueError("loop wires must be an output and an input of the box")
    memo: dict[Profile, tuple] = {}

    def history(profile: Profile) -> tuple:
        if profile in memo:
            return memo[profile]
        if not profile:
            out = (g.step(())[x_plus],)
        else:
            prev = history(profile[:-1])
            paired = tuple(
                entry.merged({x_minus: prev[k]}) for k, entry in enumerate(profile)
            )
            out = tuple(g.step(paired[:k])[x_plus] for k in range(len(profile) + 1))
        memo[profile] = out
        return out

    return history


def loop_propagator(g: Propagator, x_plus: str, x_minus: str) -> Propagator:
    """Close the loop from output ``x_plus`` back into input ``x_minus``."""
    history = feedback_history(g, x_plus, x_minus)
    smaller = g.box.remove(inputs=[x_minus], outputs=[x_plus])

    def step(profile: Profile) -> Vec:
        if not profile:
            return g.step(()).without(x_plus)
        prev = history(profile[:-1])
        paired = tuple(
            entry.merged({x_minus: prev[k]}) for k, entry in enumerate(profile)
        )
        return g.step(paired).without(x_plus)

    return Propagator(smaller, step)


def double_feedback_history(
    g: Propagator, pair1: tuple[str, str], pair2: tuple[str, str]
) -> Callable[[Profile], tuple]:
    """The joint feedback history of a double loop, as assignments keyed by
    the two looped output wires."""
    (p1, m1), (p2, m2) = pair1, pair2
    memo: dict[Profile, tuple] = {}

    def history(profile: Profile) -> tuple:
        if profile in memo:
            return memo[profile]
        if not profile:
            first = g.step(())
            out = (Vec({p1: first[p1], p2: first[p2]}),)
        else:
            prev = history(profile[:-1])
            paired = tuple(
                entry.merged({m1: prev[k][p1], m2: prev[k][p2]})
                for k, entry in enumerate(profile)
            )
            out = tuple(
                Vec({p1: g.step(paired[:k])[p1], p2: g.step(paired[:k])[p2]})
                for k in range(len(profile) + 1)
            )
        memo[profile] = out
        return out

    return history


def double_loop_propagator(
    g: Propagator, pair1: tuple[str, str], pair2: tuple[str, str]
) -> Propagator:
    """Close two loops simultaneously (the two-at-once recursion, against
    which the iterated single loops are checked)."""
    (p1, m1), (p2, m2) = pair1, pair2
    history = double_feedback_history(g, pair1, pair2)
    smaller = g.box.remove(inputs=[m1, m2], outputs=[p1, p2])

    def step(profile: Profile) -> Vec:
        if not profile:
            return g.step(()).without(p1, p2)
        prev = history(profile[:-1])
        paired = tuple(
            entry.merged({m1: prev[k][p1], m2: prev[k][p2]})
            for k, entry in enumerate(profile)
        )
        return g.step(paired).without(p1, p2)

    return Propagator(smaller, step)


def propagator_action(alphabets: Mapping[Value, PointedSet]) -> GeneratorAction:
    """The eight generating structure maps of the propagator algebra.

    ``alphabets`` interprets each value tag as a pointed set; the base
    points feed the empty-diagram and delay-node actions.
    """

    def act_empty(gen) -> Propagator:
        return Propagator(EMPTY_BOX, lambda profile: Vec({}))

    def act_delay(gen) -> Propagator:
        (value,) = gen.params
        base = alphabets[value].base
        box = Box.of({value: value}, {value: value})

        def step(profile: Profile) -> Vec:
            if not profile:
                return Vec({value: base})
            return Vec({value: profile[-1][value]})

        return Propagator(box, step)

    def act_name_change(gen, g: Propagator) -> Propagator:
        source, target, f_in, f_out = gen.params
        _require_box(g, source)
        f_in, f_out = dict(f_in), dict(f_out)

        def step(profile: Profile) -> Vec:
            inner = tuple(Vec({x: entry[f_in[x]] for x in source.inputs}) for entry in profile)
            val = g.step(inner)
            return Vec({y: val[f_out[y]] for y in target.outputs})

        return Propagator(target, step)

    def act_two_cell(gen, gx: Propagator, gy: Propagator) -> Propagator:
        left, right = gen.params
        _require_box(gx, left)
        _require_box(gy, right)
        _, (in_l, in_r) = coproduct([left.inputs, right.inputs])
        _, (out_l, out_r) = coproduct([left.outputs, right.outputs])
        from wiring_operads.wd import box_coproduct

        def step(profile: Profile) -> Vec:
            px = tuple(Vec({x: entry[in_l(x)] for x in left.inputs}) for entry in profile)
            py = tuple(Vec({y: entry[in_r(y)] for y in right.inputs}) for entry in profile)
            vx, vy = gx.step(px), gy.step(py)
            out = {out_l(w): vx[w] for w in left.outputs}
            out.update({out_r(w): vy[w] for w in right.outputs})
            return Vec(out)

        return Propagator(box_coproduct([left, right]), step)

    def act_loop(gen, g: Propagator) -> Propagator:
        box, x_plus, x_minus = gen.params
        _require_box(g, box)
        return loop_propagator(g, x_plus, x_minus)

    def act_in_split(gen, g: Propagator) -> Propagator:
        box, x1, x2 = gen.params
        _require_box(g, box)
        merged = Box(box.inputs.quotient([x1, x2]), box.outputs)

        def step(profile: Profile) -> Vec:
            widened = tuple(entry.merged({x1: entry[x1], x2: entry[x1]}) for entry in profile)
            return g.step(widened)

        return Propagator(merged, step)

    def act_out_split(gen, g: Propagator) -> Propagator:
        box, y1, y2 = gen.params
        inner = Box(box.inputs, box.outputs.quotient([y1, y2]))
        _require_box(g, inner)

        def step(profile: Profile) -> Vec:
            val = g.step(profile)
            return val.merged({y1: val[y1], y2: val[y1]})

        return Propagator(box, step)

    def act_wasted(gen, g: Propagator) -> Propagator:
        box, y = gen.params
        inner = Box(box.inputs.remove([y]), box.outputs)
        _require_box(g, inner)

        def step(profile: Profile) -> Vec:
            return g.step(tuple(entry.without(y) for entry in profile))

        return Propagator(box, step)

    from wiring_operads.wd_presentation import (
        DELAY_NODE,
        EMPTY_WD,
        IN_SPLIT,
        NAME_CHANGE,
        ONE_LOOP,
        OUT_SPLIT,
        TWO_CELL,
        WASTED_WIRE,
    )

    return GeneratorAction(
        {
            EMPTY_WD: act_empty,
            DELAY_NODE: act_delay,
            NAME_CHANGE: act_name_change,
            TWO_CELL: act_two_cell,
            ONE_LOOP: act_loop,
            IN_SPLIT: act_in_split,
            OUT_SPLIT: act_out_split,
            WASTED_WIRE: act_wasted,
        }
    )


def _require_box(g: Propagator, box: Box) -> None:
    if g.box != box:
        raise ValueError(f"propagator of color {g.box} supplied where {box} expected")


def enumerate_profiles(
    box: Box, alphabets: Mapping[Value, PointedSet], horizon: int
) -> list[Profile]:
    """Every input profile of length <= horizon (for small alphabets)."""
    import itertools

    wires = list(box.inputs)
    entries = [
        Vec(dict(zip(wires, combo)))
        for combo in itertools.product(
            *(alphabets[box.inputs.value(w)].elements for w in wires)
        )
    ]
    out: list[Profile] = []
    for n in range(horizon + 1):
        out.extend(itertools.product(entries, repeat=n))
    return out


def sample_profiles(
    box: Box, alphabets: Mapping[Value, PointedSet], horizon: int, rng, count: int
) -> list[Profile]:
    """Random input profiles of lengths 0..horizon."""
    wires = list(box.inputs)
    out: list[Profile] = [()]
    for _ in range(count):
        n = rng.randrange(horizon + 1)
        out.append(
            tuple(
                Vec({w: rng.choice(alphabets[box.inputs.value(w)].elements) for w in wires})
                for _ in range(n)
            )
        )
    return out


def random_propagator(box: Box, alphabets: Mapping[Value, PointedSet], rng) -> Propagator:
    """A pseudo-random propagator: each output entry is drawn reproducibly
    from the hash of the input prefix."""
    import hashlib

    salt = rng.randrange(2**32)

    def step(profile: Profile) -> Vec:
        out = {}
        for w in box.outputs:
            alphabet = alphabets[box.outputs.value(w)].elements
            digest = hashlib.sha256(
                repr((salt, w, profile)).encode()
            ).digest()
            out[w] = alphabet[digest[0] % len(alphabet)]
        return Vec(out)

    return Propagator(box, step)
