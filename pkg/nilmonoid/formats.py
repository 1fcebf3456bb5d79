from __future__ import annotations

import json
import logging
import re
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .errors import PresentationError
from .gaps import FiniteAbelian
from .group import GroupElement, GroupPresentation, Order

__all__ = [
    'encode_int',
    'decode_int',
    'presentation_to_json',
    'presentation_from_json',
    'load_presentation',
    'dump_presentation',
    'element_to_json',
    'element_from_json',
    'parse_element',
    'parse_elements',
    'lemma_instance_from_json',
    'lemma_instance_to_json'
]

logger = logging.getLogger(__name__)

_INT64 = 2**63

JsonInt = Union[int, str]


def encode_int(v:int) -> JsonInt:
    """Integers outside the signed 64 bit range are written as decimal strings."""
    v = int(v)
    return v if -_INT64 <= v < _INT64 else str(v)


def decode_int(v:Any) -> int:
    if isinstance(v, bool):
        raise ValueError(f"expected an integer, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str) and re.fullmatch(r"\s*[+-]?\d+\s*", v):
        return int(v)
    raise ValueError(f"expected an integer, got {v!r}")


def _order_to_json(o:Order) -> JsonInt:
    return "inf" if o is None else encode_int(o)


def _order_from_json(v:Any) -> Order:
    if v is None or v == "inf":
        return None
    return decode_int(v)


# Presentations

def presentation_to_json(P:GroupPresentation) -> Dict[str, Any]:
    """
    Encode a presentation. Commutator indices are 1-based in the file format.

    Example:
    ```python
    presentation_to_json(h3)
    # {'main': [{'order': 'inf', 'power': [0]}, {'order': 'inf', 'power': [0]}],
    #  'central': [{'order': 'inf'}],
    #  'comm': [{'i': 1, 'j': 2, 'value': [1]}]}
    ```
    """
    return {
        'main': [{'order': _order_to_json(m), 'power': [encode_int(v) for v in p]}
                 for m, p in zip(P.main_orders, P.main_powers)],
        'central': [{'order': _order_to_json(o)} for o in P.central_orders],
        'comm': [{'i': i + 1, 'j': j + 1, 'value': [encode_int(v) for v in c]}
                 for (i, j), c in P.comm if any(c)],
    }


def presentation_from_json(data:Dict[str, Any]) -> GroupPresentation:
    """
    Decode a presentation document.

    Raises:
        PresentationError: If a field is missing or malformed. A commutator value
            whose length differs from the number of central generators would need a
            commutator of class three and is rejected as well.
    """
    try:
        main = data['main']
        central = data.get('central', [])
        comm = data.get('comm', [])
        s = len(central)
        main_orders = [_order_from_json(m.get('order', 'inf')) for m in main]
        main_powers = [[decode_int(v) for v in m.get('power', [0] * s)] for m in main]
        central_orders = [_order_from_json(c.get('order', 'inf')) for c in central]
        table = {}
        for entry in comm:
            value = [decode_int(v) for v in entry['value']]
            if len(value) != s:
                raise PresentationError(
                    f"commutator [a{entry['i']}, a{entry['j']}] must be a central vector of length {s}, "
                    "class 3 presentations are not supported")
            table[(decode_int(entry['i']) - 1, decode_int(entry['j']) - 1)] = value
    except (KeyError, TypeError, AttributeError, ValueError) as err:
        if isinstance(err, PresentationError):
            raise
        raise PresentationError(f"malformed presentation: {err}") from None
    return GroupPresentation(main_orders, central_orders, table, main_powers)


def load_presentation(path:str) -> GroupPresentation:
    with open(path) as f:
        data = json.load(f)
    P = presentation_from_json(data)
    logger.debug("loaded presentation with r=%d, s=%d from %s", P.r, P.s, path)
    return P


def dump_presentation(P:GroupPresentation, path:str) -> None:
    with open(path, 'w') as f:
        json.dump(presentation_to_json(P), f, indent=2)
        f.write('\n')


# Elements

def element_to_json(g:GroupElement) -> Dict[str, List[JsonInt]]:
    return {'e': [encode_int(v) for v in g.e], 'f': [encode_int(v) for v in g.f]}


def element_from_json(data:Any, P:GroupPresentation) -> GroupElement:
    """Decode `{"e": [...], "f": [...]}`, a `[e, f]` pair or an inline string into a normal form."""
    if isinstance(data, str):
        return parse_element(data, P)
    if isinstance(data, dict):
        e, f = data.get('e', []), data.get('f', [])
    elif isinstance(data, (list, tuple)) and len(data) == 2:
        e, f = data
    else:
        raise ValueError(f"cannot read an element from {data!r}")
    if not isinstance(e, (list, tuple)) or not isinstance(f, (list, tuple)):
        raise ValueError(f"element coordinates must be lists, got e={e!r} and f={f!r}")
    e = [decode_int(v) for v in e]
    f = [decode_int(v) for v in f] if f else [0] * P.s
    if len(e) != P.r or len(f) != P.s:
        raise ValueError(f"element needs {P.r} main and {P.s} central coordinates, got {len(e)} and {len(f)}")
    return P.normalize(e, f)


_COORDS = re.compile(r"\(\s*([^|()]*)\|([^|()]*)\)")
_FACTOR = re.compile(r"([A-Za-z]\w*)(?:\^([+-]?\d+))?")


def _int_list(text:str) -> List[int]:
    return [int(t) for t in text.replace(' ', '').split(',') if t]


def parse_element(text:str, P:GroupPresentation) -> GroupElement:
    """
    Parse an element written inline.

    Accepted forms are coordinates `(e_1,...,e_r|f_1,...,f_s)`, a JSON object and
    products of generator powers such as `x*y^-1` or `a1^2*z2`.

    Example:
    ```python
    parse_element('(2,2|-1)', h3) == parse_element('x*y*x*y', h3)   # True
    ```
    """
    text = text.strip()
    if text.startswith('{'):
        return element_from_json(json.loads(text), P)
    match = _COORDS.fullmatch(text)
    if match:
        e, f = _int_list(match.group(1)), _int_list(match.group(2))
        return element_from_json({'e': e, 'f': f}, P)
    if not text:
        raise ValueError("empty element")
    value = P.identity()
    for token in filter(None, (t.strip() for t in text.split('*'))):
        factor = _FACTOR.fullmatch(token)
        if not factor:
            raise ValueError(f"cannot parse {token!r} as a generator power")
        g = P.generator(factor.group(1))
        value = P.multiply(value, P.power(g, int(factor.group(2) or 1)))
    return value


def _split_top_level(text:str) -> List[str]:
    parts, depth, current = [], 0, []
    for ch in text:
        if ch in '([{':
            depth += 1
        elif ch in ')]}':
            depth -= 1
        if ch == ',' and depth == 0:
            parts.append(''.join(current))
            current = []
        else:
            current.append(ch)
    parts.append(''.join(current))
    return [p.strip() for p in parts if p.strip()]


def parse_elements(text:str, P:GroupPresentation) -> List[GroupElement]:
    """
    Parse a list of elements, either JSON or `[item, item, ...]` with inline items.

    Example:
    ```python
    parse_elements('[(1,0|0),(0,1|0)]', h3) == parse_elements('[x,y]', h3)   # True
    ```
    """
    text = text.strip()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, list):
        return [element_from_json(item, P) for item in data]
    if not (text.startswith('[') and text.endswith(']')):
        raise ValueError(f"expected a list of elements, got {text!r}")
    return [parse_element(item, P) for item in _split_top_level(text[1:-1])]


# Concentration instances

def lemma_instance_from_json(data:Dict[str, Any]) -> Tuple[List, List, Optional[FiniteAbelian]]:
    """
    Read `{"A": [...], "s": [...]}` and an optional `"orders"` list of a finite abelian group.

    With `orders` every entry is `[int, [int, ...]]`, an integer and its torsion part.

    Raises:
        ValueError: If the document does not have this shape.
    """
    if not isinstance(data, dict):
        raise ValueError(f"a concentration instance must be a JSON object, got {data!r}")
    A, s = _json_list(data, 'A'), _json_list(data, 's')
    orders = data.get('orders')
    if orders is None:
        return [decode_int(a) for a in A], [decode_int(a) for a in s], None
    if not isinstance(orders, list):
        raise ValueError(f"'orders' must be a list of integers, got {orders!r}")
    group = FiniteAbelian(tuple(decode_int(o) for o in orders))

    def entry(v):
        if not (isinstance(v, list) and len(v) == 2 and isinstance(v[1], list)):
            raise ValueError(f"expected [int, [int, ...]] for an element of Z x G_0, got {v!r}")
        return decode_int(v[0]), tuple(decode_int(x) for x in v[1])
    return [entry(a) for a in A], [entry(a) for a in s], group


def _json_list(data:Dict[str, Any], key:str) -> List:
    if key not in data:
        raise ValueError(f"missing field {key!r}")
    value = data[key]
    if not isinstance(value, list):
        raise ValueError(f"field {key!r} must be a list, got {value!r}")
    return value


def lemma_instance_to_json(A:Sequence, s:Sequence, group:Optional[FiniteAbelian]=None) -> Dict[str, Any]:
    if group is None:
        return {'A': [encode_int(a) for a in A], 's': [encode_int(a) for a in s]}

    def entry(v):
        return [encode_int(v[0]), [encode_int(x) for x in v[1]]]
    return {'orders': list(group.orders), 'A': [entry(a) for a in A], 's': [entry(a) for a in s]}
