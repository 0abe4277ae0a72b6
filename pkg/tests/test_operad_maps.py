import random
from collections import Counter

import pytest

from wiring_operads.finset import EMPTY, FinSet
from wiring_operads.maps import (
    NotInImageError,
    NotNormalError,
    change_of_values,
    chi,
    chi0,
    flatten_box,
    in_image_chi,
    in_image_chi0,
    lift_chi,
    lift_chi0,
    lift_rho,
    rho,
)
from wiring_operads.uwd import census, comp_i_u, equivalent_u, make_uwd, random_uwd
from wiring_operads.wd import Box, comp_i, make_wd, random_wd, unit
from wiring_operads.wd_presentation import (
    delay_node,
    empty_wd,
    generator,
    in_split,
    wasted_wire,
)
from wiring_operads.uwd_presentation import eval_simplex_u, generator_u, output_wire, u_two_cell
from wiring_operads.simplex import Leaf, Node
from tests.test_uwd_core import first_picture
from tests.test_wd_core import first_example


def test_chi_of_empty_is_empty_cell():
    image = chi(generator(empty_wd()))
    assert len(image.cables) == 0 and len(image.output_box) == 0


def test_chi_rejects_delay_nodes():
    with pytest.raises(NotNormalError):
        chi(generator(delay_node("s")))


def test_rho_of_delay_node_census():
    assert census(rho(generator(delay_node("s")))) == Counter({(0, 2): 1})


def test_rho_three_delay_nodes_example():
    # Self-supplying, input-supplied, and triple-output delay nodes yield a
    # wasted cable, a (0,2)-cable, and a (0,3)-cable.
    y = Box.of({"y": "v"}, {"o2": "v", "o3a": "v", "o3b": "v", "o3c": "v"})
    wd = make_wd(
        [],
        y,
        FinSet.of({"d1": "v", "d2": "v", "d3": "v"}),
        {
            ("dn", "d1"): ("dn", "d1"),
            ("dn", "d2"): ("gin", "y"),
            ("dn", "d3"): ("dn", "d3"),
            ("gout", "o2"): ("dn", "d2"),
            ("gout", "o3a"): ("dn", "d3"),
            ("gout", "o3b"): ("dn", "d3"),
            ("gout", "o3c"): ("dn", "d3"),
        },
    )
    assert census(rho(wd)) == Counter({(0, 0): 1, (0, 2): 1, (0, 3): 1})


def test_chi_of_wasted_wire_has_a_zero_one_cable():
    y = Box.of({"p": "a", "q": "b"}, {"r": "c"})
    image = chi(generator(wasted_wire(y, "p")))
    assert census(image)[(0, 1)] == 1


def test_chi_of_in_split_matches_loop_over_split():
    x = Box.of({"p": "a", "q": "a", "r": "b"}, {"s": "c"})
    image = chi(generator(in_split(x, "p", "q")))
    assert census(image) == Counter({(2, 1): 1, (1, 1): 2})


def test_chi_image_predicate_on_examples():
    assert not in_image_chi(first_picture())
    assert in_image_chi(chi(generator(empty_wd())))
    from wiring_operads.uwd import unit_u

    u = unit_u(FinSet.of({"a": "v"}))
    assert in_image_chi(u) and in_image_chi0(u)


def test_chi_homomorphism_on_random_pairs():
    rng = random.Random(30)
    done = 0
    while done < 60:
        phi = random_wd(rng, max_delay=0)
        if not phi.input_boxes:
            continue
        i = rng.randrange(1, len(phi.input_boxes) + 1)
        psi = random_wd(rng, output_box=phi.input_boxes[i - 1], max_delay=0)
        assert equivalent_u(chi(comp_i(phi, i, psi)), comp_i_u(chi(phi), i, chi(psi)))
        done += 1


def test_rho_homomorphism_on_random_pairs():
    rng = random.Random(31)
    done = 0
    while done < 60:
        phi = random_wd(rng)
        if not phi.input_boxes:
            continue
        i = rng.randrange(1, len(phi.input_boxes) + 1)
        psi = random_wd(rng, output_box=phi.input_boxes[i - 1])
        assert equivalent_u(rho(comp_i(phi, i, psi)), comp_i_u(rho(phi), i, rho(psi)))
        done += 1


def test_rho_preserves_units():
    rng = random.Random(32)
    for _ in range(10):
        box = random_wd(rng).output_box
        from wiring_operads.uwd import unit_u

        assert equivalent_u(rho(unit(box)), unit_u(flatten_box(box)))


def test_rho_equals_chi_on_normal():
    rng = random.Random(33)
    for _ in range(40):
        psi = random_wd(rng, max_delay=0)
        assert rho(psi) == chi(psi)


def test_chi_images_have_admissible_census():
    rng = random.Random(34)
    for _ in range(60):
        psi = random_wd(rng, max_delay=0)
        counts = census(chi(psi))
        assert all(not (m == 0 and n != 1) for (m, n) in counts)
        assert in_image_chi(chi(psi))
    for _ in range(60):
        psi = random_wd(rng, strict=True)
        assert set(census(chi0(psi))) <= {(1, 1), (2, 0)}
        assert in_image_chi0(chi0(psi))


def test_lift_chi_round_trip():
    rng = random.Random(35)
    for _ in range(60):
        target = random_uwd(rng, image_of_chi=True)
        lifted = lift_chi(target)
        assert lifted.is_normal()
        assert equivalent_u(chi(lifted), target)


def test_lift_chi0_round_trip():
    rng = random.Random(36)
    for _ in range(60):
        target = random_uwd(rng, image_of_chi0=True)
        lifted = lift_chi0(target)
        assert lifted.is_strict()
        assert equivalent_u(chi0(lifted), target)


def test_lift_rho_round_trip_any_target():
    rng = random.Random(37)
    for _ in range(60):
        target = random_uwd(rng)
        lifted = lift_rho(target)
        assert equivalent_u(rho(lifted), target)


def test_lift_rejects_inadmissible_targets():
    target = first_picture()
    with pytest.raises(NotInImageError):
        lift_chi(target)
    with pytest.raises(NotInImageError):
        lift_chi0(target)


def test_lift_chi_two_box_example():
    # Four shared cables over two boxes: the lift gives the first box two
    # inputs and four outputs, the second two inputs and no outputs.
    u1 = FinSet.of({f"u{k}": "v" for k in range(1, 7)})
    u2 = FinSet.of({"us1": "v", "us2": "v"})
    v = FinSet.of({"v1": "v", "v2": "v", "v3": "v"})
    cables = FinSet.of({"ca": "v", "cb": "v", "cc": "v", "cd": "v"})
    target = make_uwd(
        [u1, u2],
        v,
        cables,
        {
            (1, "u1"): "ca",
            (1, "u2"): "cb",
            (1, "u3"): "cb",
            (2, "us1"): "cb",
            (1, "u4"): "cc",
            (1, "u5"): "cc",
            (2, "us2"): "cc",
            (1, "u6"): "cd",
        },
        {"v1": "ca", "v2": "cb", "v3": "cb"},
    )
    lifted = lift_chi(target)
    assert len(lifted.input_boxes[0].inputs) == 2
    assert len(lifted.input_boxes[0].outputs) == 4
    assert len(lifted.input_boxes[1].inputs) == 2
    assert len(lifted.input_boxes[1].outputs) == 0
    assert equivalent_u(chi(lifted), target)


def test_lift_rho_worked_example():
    # The seven-cable target lifts with delay nodes for the wasted cable and
    # the (0,2)-cable, and the (0,1)-cable becomes an external wasted wire.
    target = first_picture()
    lifted = lift_rho(target)
    assert set(lifted.delay_nodes.elements) == {"c1", "c4"}
    assert set(lifted.output_box.inputs.elements) == {"y6"}
    assert lifted.supplier[("dn", "c1")] == ("dn", "c1")
    assert lifted.supplier[("dn", "c4")] == ("dn", "c4")
    assert lifted.supplier[("gout", "y1")] == ("dn", "c1")
    assert lifted.supplier[("gout", "y3")] == ("bout", 1, "x1")
    assert lifted.supplier[("gout", "y4")] == ("bout", 1, "x2")
    assert equivalent_u(rho(lifted), target)


def test_change_of_values_dispatch():
    psi = first_example()
    collapsed = change_of_values(lambda v: "z", psi)
    assert {v for _, v in collapsed.delay_nodes.pairs} == {"z"}
    u = first_picture()
    collapsed_u = change_of_values(lambda v: "z", u)
    assert {v for _, v in collapsed_u.cables.pairs} == {"z"}
