import random

import pytest

from mquandle.braids import ClosableBraid, ColoredBraid
from mquandle.diagrams import (
    MOVES,
    ColoredDiagram,
    add_bigon,
    add_kink,
    apply_reidemeister,
    build_r3_site,
    closure_diagram,
    diagram,
    from_pd_code,
    parse_diagram,
    parse_pd,
    parse_pd_input,
    r3_sites,
    remove_bigon,
    remove_kink,
    serialize_diagram,
    slide_r3,
)
from mquandle.core import alexander_multi_quandle
from mquandle.errors import DiagramError, MoveError, ParseError
from mquandle.fuzz import random_closable_braid

from oracles import MX, brute_diagram_count

L9N27 = (
    "X[6,1,7,2] X[12,7,13,8] X[4,13,1,14] X[9,18,10,15] X[8,4,9,3] "
    "X[5,17,6,16] X[17,5,18,14] X[15,10,16,11] X[2,12,3,11]"
)
L6A4 = "X[6,1,7,2] X[12,8,9,7] X[4,12,1,11] X[10,5,11,6] X[8,4,5,3] X[2,9,3,10]"


def oracle(d: ColoredDiagram, tables=MX):
    comps = [(c.color, c.arcs) for c in d.components]
    xs = [(c.sign, c.over, c.under_in, c.under_out) for c in d.crossings]
    return brute_diagram_count(comps, xs, tables)


def test_l9n27_pd_shape():
    d = from_pd_code(L9N27, [1, 2, 3])
    assert len(d.crossings) == 9 and len(d.components) == 3
    assert sorted(len(c.arcs) for c in d.components) == sorted(
        sum(1 for x in d.crossings if x.under_in in c.arcs) for c in d.components
    )


def test_pd_edge_used_three_times():
    with pytest.raises(DiagramError):
        from_pd_code("X[1,1,2,1]", [1])


def test_pd_color_count_mismatch():
    with pytest.raises(DiagramError):
        from_pd_code(L6A4, [1, 2])


def test_pd_text_errors():
    with pytest.raises(ParseError):
        parse_pd("X[1,2,3] X[1,2,3,4]")
    with pytest.raises(ParseError):
        parse_pd("nothing here")
    assert parse_pd("PD[X[1,2,3,4], X[3,4,1,2]]") == [(1, 2, 3, 4), (3, 4, 1, 2)]


def test_pd_input_line():
    code, colors = parse_pd_input(f'pd "{L6A4}" colors=1,2,3')
    assert code == L6A4 and colors == [1, 2, 3]
    with pytest.raises(ParseError):
        parse_pd_input("pd X[1,2,3,4] colors=1")


def test_pd_sign_convention_on_hopf_link():
    # over strand b -> d is negative; rotating each term to X[b,c,d,a] mirrors it
    d = from_pd_code("X[4,1,3,2] X[2,3,1,4]", [1, 2])
    assert {x.sign for x in d.crossings} == {-1}
    mirror = from_pd_code("X[1,3,2,4] X[3,1,4,2]", [1, 2])
    assert {x.sign for x in mirror.crossings} == {1}


def test_borromean_fixture_relations(fixtures):
    d = parse_diagram((fixtures / "borromean.diag").read_text())
    assert [c.color for c in d.components] == [1, 2, 3]
    assert oracle(d) == 71


def test_diag_round_trip_and_canonical(fixtures):
    d = parse_diagram((fixtures / "borromean.diag").read_text())
    assert parse_diagram(serialize_diagram(d)) == d
    c = d.canonical()
    assert c.arcs == tuple(str(i) for i in range(1, 7))
    assert oracle(c) == oracle(d)


@pytest.mark.parametrize(
    "text",
    [
        "diag v2\n",
        "diag v1\ncomponents 1\ncomponent 1 color 1 arcs a\ncrossings 1\nx + over=a in=a out=b\n",
        "diag v1\ncomponents 1\ncomponent 1 colour 1 arcs a\ncrossings 0\n",
        "diag v1\ncomponents 1\ncomponent 1 color 1 arcs a\ncrossings 0\nextra\n",
    ],
)
def test_diag_parse_errors(text):
    with pytest.raises((ParseError, DiagramError)):
        parse_diagram(text)


def test_incidence_invariants():
    with pytest.raises(DiagramError):
        diagram([("1", 1, ["a", "b"])], [(1, "a", "a", "b")])  # b never ends
    with pytest.raises(DiagramError):
        diagram([("1", 1, ["a", "b", "c"])], [(1, "a", "a", "c"), (1, "a", "b", "c"), (1, "a", "c", "a")])
    with pytest.raises(DiagramError):
        diagram([("1", 1, ["a"]), ("2", 1, ["a"])], [])


def test_closure_of_tricolored_braid():
    d = closure_diagram(ClosableBraid(ColoredBraid(3, (-1, -1, 2, 2), (1, 2, 3))))
    assert len(d.components) == 3 and len(d.crossings) == 4
    assert sorted(len(c.arcs) for c in d.components) == [1, 1, 2]
    assert oracle(d) == 23


# -- moves -------------------------------------------------------------------------


@pytest.fixture
def borromean(fixtures):
    return parse_diagram((fixtures / "borromean.diag").read_text())


@pytest.mark.parametrize("move", ["R1+", "R1-"])
def test_r1_on_every_borromean_arc(borromean, move):
    for arc in borromean.arcs:
        e = apply_reidemeister(borromean, move, arc)
        assert len(e.crossings) == 7 and len(e.arcs) == 7
        assert oracle(e) == 71
        assert remove_kink(e, 6) == borromean


def test_r1_on_crossing_free_loop():
    unknot = diagram([("1", 2, ["a"])], [])
    e = add_kink(unknot, "a", 1)
    assert len(e.crossings) == 1 and oracle(e) == 5
    assert remove_kink(e, 0) == unknot


def test_r2_then_inverse_restores(borromean):
    for over in borromean.arcs:
        for under in borromean.arcs:
            if over == under:
                continue
            for sign in (1, -1):
                e = apply_reidemeister(borromean, "R2", (over, under), sign)
                assert oracle(e) == 71
                n = len(e.crossings)
                assert apply_reidemeister(e, "R2^-1", (n - 2, n - 1)) == borromean


def test_r3_on_built_triangle(borromean):
    # 12 arcs: brute force over a 3-element 3-quandle (reflection, trivial, reflection)
    small = alexander_multi_quandle(3, (2, 1, 2)).tables
    want = oracle(borromean, small)
    rng = random.Random(5)
    for _ in range(10):
        top, mid, bot = rng.sample(borromean.arcs, 3)
        d, site = build_r3_site(borromean, top, mid, bot)
        assert site in r3_sites(d)
        e = apply_reidemeister(d, "R3", site)
        assert e != d
        assert oracle(e, small) == oracle(d, small) == want


def test_r3_invariance_on_random_closures():
    rng = random.Random(11)
    checked = 0
    while checked < 25:
        b = random_closable_braid(rng, 3, max_strands=3, max_len=4)
        d = closure_diagram(b)
        if len(d.arcs) < 3:
            continue
        d, site = build_r3_site(d, *rng.sample(d.arcs, 3))
        if len(d.arcs) > 9:
            continue
        assert oracle(slide_r3(d, site)) == oracle(d)
        checked += 1


def test_native_r3_site_in_braid_closure():
    # s1 s2 s1 contains a positive triangle.
    d = closure_diagram(ClosableBraid(ColoredBraid(3, (1, 2, 1, 2, 1, 2), (1, 1, 1))))
    sites = r3_sites(d)
    assert sites
    for site in sites:
        assert oracle(slide_r3(d, site)) == oracle(d)


def test_illegal_sites(borromean):
    with pytest.raises(MoveError):
        apply_reidemeister(borromean, "R1+", "zz")
    with pytest.raises(MoveError):
        add_bigon(borromean, "a", "a")
    with pytest.raises(MoveError):
        remove_kink(borromean, 0)
    with pytest.raises(MoveError):
        remove_bigon(borromean, 0, 1)
    with pytest.raises(MoveError):
        slide_r3(borromean, (0, 1, 2))
    with pytest.raises(MoveError):
        apply_reidemeister(borromean, "R4", None)
    assert "R3" in MOVES


def test_random_move_sequences_preserve_counts():
    rng = random.Random(7)
    for _ in range(30):
        d = closure_diagram(random_closable_braid(rng, 3, max_strands=3, max_len=3))
        want = oracle(d)
        for _ in range(2):
            arcs = d.arcs
            kind = rng.choice(["R1+", "R1-", "R2"] if len(arcs) > 1 else ["R1+", "R1-"])
            site = rng.choice(arcs) if kind != "R2" else tuple(rng.sample(arcs, 2))
            d = apply_reidemeister(d, kind, site, rng.choice((1, -1)))
        assert oracle(d) == want
