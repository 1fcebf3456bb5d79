import json

import pytest

from nilmonoid import (FiniteAbelian, GroupElement, GroupPresentation, PresentationError,
                       decode_int, dump_presentation, element_from_json, element_to_json,
                       encode_int, lemma_instance_from_json, lemma_instance_to_json,
                       load_presentation, parse_element, parse_elements, presentation_from_json,
                       presentation_to_json)

from .conftest import data_file


def test_big_integers():
    assert encode_int(5) == 5
    assert encode_int(2**63) == str(2**63)
    assert encode_int(-2**63) == -2**63
    assert decode_int(str(2**70)) == 2**70
    assert decode_int(-3) == -3
    for bad in (True, 1.5, "1e3", None):
        with pytest.raises(ValueError):
            decode_int(bad)


def test_load_presentations(h3, h3_mod_2, torsion_e2, h3xh3):
    assert load_presentation(data_file('h3.json')) == h3
    assert load_presentation(data_file('h3_mod_2.json')) == h3_mod_2
    assert load_presentation(data_file('torsion_e2.json')) == torsion_e2
    assert load_presentation(data_file('h3xh3.json')) == h3xh3


def test_presentation_document(cyclic_main):
    data = presentation_to_json(cyclic_main)
    assert data == {
        'main': [{'order': 3, 'power': [1]}, {'order': 'inf', 'power': [0]}],
        'central': [{'order': 3}],
        'comm': [{'i': 1, 'j': 2, 'value': [1]}],
    }
    assert presentation_from_json(json.loads(json.dumps(data))) == cyclic_main


def test_dump_and_load(torsion_e2, tmp_path):
    path = str(tmp_path / 'group.json')
    dump_presentation(torsion_e2, path)
    assert load_presentation(path) == torsion_e2


def test_class_three_is_rejected():
    with pytest.raises(PresentationError, match="class 3"):
        load_presentation(data_file('class3.json'))


@pytest.mark.parametrize('data', [
    {},
    {'main': [{'order': 'many'}]},
    {'main': [{'order': 'inf'}, {'order': 'inf'}], 'comm': [{'i': 1, 'value': []}]},
    {'main': [{'order': 'inf'}], 'central': [{'order': 0}]},
])
def test_malformed_documents(data):
    with pytest.raises(PresentationError):
        presentation_from_json(data)


def test_big_orders_survive():
    P = GroupPresentation([None], [2**80], {})
    data = presentation_to_json(P)
    assert data['central'] == [{'order': str(2**80)}]
    assert presentation_from_json(data) == P


def test_elements(h3, h3_mod_2):
    g = GroupElement((2, -1), (7,))
    assert element_to_json(g) == {'e': [2, -1], 'f': [7]}
    assert element_from_json({'e': [2, -1], 'f': [7]}, h3) == g
    assert element_from_json([[2, -1], [7]], h3) == g
    assert element_from_json({'e': [1, 0]}, h3) == h3.generator('x')
    assert element_from_json({'e': [0, 0], 'f': [5]}, h3_mod_2) == GroupElement((0, 0), (1,))
    with pytest.raises(ValueError):
        element_from_json({'e': [1]}, h3)
    with pytest.raises(ValueError):
        element_from_json(3, h3)


def test_parse_element(h3, h3xh3):
    assert parse_element('(2,2|-1)', h3) == GroupElement((2, 2), (-1,))
    assert parse_element('x*y*x*y', h3) == GroupElement((2, 2), (-1,))
    assert parse_element('y^-1 * x^2', h3) == h3.multiply(h3.inverse(h3.generator('y')),
                                                          h3.power(h3.generator('x'), 2))
    assert parse_element('z^3', h3) == GroupElement((0, 0), (3,))
    assert parse_element('{"e": [1, 1], "f": [0]}', h3) == GroupElement((1, 1), (0,))
    assert parse_element('a3*a4*z2^-1', h3xh3) == GroupElement((0, 0, 1, 1), (0, -1))
    for bad in ('', 'w', 'x^', 'x^y'):
        with pytest.raises(ValueError):
            parse_element(bad, h3)


def test_parse_elements(h3):
    x, y, _ = h3.generators()
    assert parse_elements('[x, y]', h3) == [x, y]
    assert parse_elements('[(1,0|0), (0,1|0)]', h3) == [x, y]
    assert parse_elements('[{"e": [1, 0], "f": [0]}, "y"]', h3) == [x, y]
    assert parse_elements('[]', h3) == []
    with pytest.raises(ValueError):
        parse_elements('x, y', h3)


def test_lemma_instances():
    with open(data_file('lemma_extremes.json')) as f:
        A, s, group = lemma_instance_from_json(json.load(f))
    assert (A, s, group) == ([0, 1, 2], [1, 1, 1, 1, 1], None)
    assert lemma_instance_to_json(A, s) == {'A': [0, 1, 2], 's': [1, 1, 1, 1, 1]}

    with open(data_file('lemma_torsion.json')) as f:
        data = json.load(f)
    A, s, group = lemma_instance_from_json(data)
    assert group == FiniteAbelian((2,))
    assert A == [(0, (0,)), (1, (1,)), (2, (0,))]
    assert s == [(1, (1,))] * 6
    assert lemma_instance_to_json(A, s, group) == data
