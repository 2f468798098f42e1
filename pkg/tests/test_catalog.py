from __future__ import annotations

import json

import pytest

from quotsing import catalog
from quotsing.group import closure
from quotsing.linalg import element_order, gl_order, is_transvection
from tests.conftest import cached_group


def sl2_order(q):
    return q * (q * q - 1)


@pytest.mark.parametrize("q", catalog.SL2_QS)
def test_sl2_orders(q):
    G = cached_group(f"sl2-{q}")
    assert G.order == sl2_order(q)
    assert all(g.det().code == 1 for g in G.elements)


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_sl2_prime_generators_are_the_two_elementary_transvections(q):
    t, s = catalog.sl2_generators(q)
    assert t.rows() == [[1, 1], [0, 1]]
    assert s.rows() == [[1, 0], [1, 1]]


def test_sl2_range_is_enforced():
    with pytest.raises(catalog.UnsupportedGroupError):
        catalog.sl2_generators(11)
    with pytest.raises(catalog.UnsupportedGroupError):
        catalog.sl2_generators(6)


def test_binary_icosahedral():
    G = cached_group("binary-icosahedral-char3")
    assert G.order == 120
    big = cached_group("sl2-9")
    assert G.field == big.field
    assert G.keys() < big.keys()
    order3 = [g for g in G.elements if element_order(g) == 3]
    assert order3 and all(is_transvection(g) for g in order3)
    (_, s) = G.generators
    lam = s[1, 0]
    assert lam * lam == -G.field.one


@pytest.mark.parametrize("name,order", [("imprimitive-char2-4", 6), ("imprimitive-char2-8", 14)])
def test_imprimitive_orders(name, order):
    G = cached_group(name)
    assert G.order == order
    assert G.order % 2 == 0 and G.field.p == 2


def test_imprimitive_rejects_prime_field():
    with pytest.raises(catalog.UnsupportedGroupError):
        catalog.imprimitive_char2(1)


def test_named_small_groups():
    assert cached_group("quadratic-cone").order == 6
    assert cached_group("unipotent-line").order == 3
    assert cached_group("ext-case3-sl2-3").order == 9 * 24
    assert cached_group("ext-case3-sl2-3-trivial-kernel").order == 24
    assert cached_group("ext-case2-dual-sl2-3").order == 9 * 24
    assert cached_group("cyclic-isolated-order5-f81").order == 5
    assert cached_group("cyclic-isolated-order5-f81").field.q == 81
    assert cached_group("trivial-f3-dim3").order == 1


def test_every_catalog_group_is_a_subgroup_of_gl():
    for name in catalog.names():
        G = cached_group(name)
        assert gl_order(G.dim, G.field.q) % G.order == 0, name


def test_nonmodular_catalog():
    groups = catalog.nonmodular_groups()
    assert len(groups) >= 10
    for name, (G, _) in groups.items():
        assert name.startswith("nm-")
        assert G.order % G.field.p != 0
        assert name in catalog.names()


@pytest.mark.parametrize("name", ["quadratic-cone", "sl2-4", "binary-icosahedral-char3",
                                  "cyclic-isolated-order5-f81", "ext-case2-dual-sl2-3"])
def test_json_round_trip(name):
    G = cached_group(name)
    data = json.loads(json.dumps(catalog.group_to_json(G, name)))
    assert data["name"] == name
    H = catalog.group_from_json(data)
    assert H.field == G.field and H.keys() == G.keys()


def test_json_errors():
    good = catalog.group_to_json(cached_group("quadratic-cone"))
    bad = dict(good, generators=[[[1, 1]]])
    with pytest.raises(catalog.GroupDefinitionError):
        catalog.group_from_json(bad)
    with pytest.raises(catalog.GroupDefinitionError):
        catalog.group_from_json({"dim": 2})
    f9 = catalog.group_to_json(cached_group("sl2-9"))
    f9["generators"][0][0][0] = [1, 0, 0]
    with pytest.raises(catalog.GroupDefinitionError):
        catalog.group_from_json(f9)
    with pytest.raises(catalog.UnsupportedGroupError):
        catalog.build("no-such-group")


def test_singular_generator_is_rejected():
    data = catalog.group_to_json(cached_group("quadratic-cone"))
    data["generators"].append([[0, 0], [0, 1]])
    with pytest.raises(ValueError):
        catalog.group_from_json(data)


def test_integer_entries_are_accepted_for_prime_fields():
    data = {"field": catalog.field_for(3).to_json(), "dim": 2,
            "generators": [[[1, 1], [0, 1]]]}
    assert catalog.group_from_json(data).order == 3


def test_fixtures_match_the_catalog(tmp_path):
    paths = catalog.write_fixtures(tmp_path)
    assert len(paths) == len(catalog.FIXTURES)
    for fx, path in zip(catalog.FIXTURES, paths):
        G = catalog.load_group(path)
        assert G.keys() == cached_group(fx.catalog_name).keys()
        shipped = json.loads((catalog.Path(__file__).parent.parent / "fixtures" / fx.filename)
                             .read_text())
        assert shipped == json.loads(path.read_text())


def test_with_trivial_line_adds_a_fixed_coordinate():
    G = catalog.with_trivial_line(cached_group("unipotent-line"))
    assert G.dim == 3 and G.order == 3
    for g in G.elements:
        assert g.rows()[2] == [0, 0, 1] and [r[2] for r in g.rows()] == [0, 0, 1]


def test_closure_of_catalog_generators_is_stable():
    G = cached_group("sl2-4")
    assert closure(list(G.generators)).keys() == G.keys()
