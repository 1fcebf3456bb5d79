from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .blocks import bounded_sequence, commutator_structure
from .config import DEFAULT_BOX, DEFAULT_DEPTH, Settings
from .diophantine import (KnapsackInstance, SolveOutcome, build_system,
                          member_product_of_monoids, solve_box)
from .errors import NilmonoidError, PresentationError
from .formats import (decode_int, dump_presentation, element_to_json, lemma_instance_from_json,
                      load_presentation, parse_element, parse_elements, presentation_to_json)
from .gaps import (GapSet, TorsionGapSet, concentrate_consecutive, concentrate_extremes,
                   concentrate_torsion, sumset_identity_check)
from .group import GroupElement, GroupPresentation
from .lattice import abelianization, torsion_free_subgroup
from .oracle import bfs_monoid_ball, coset_index, heis_eval, heis_to_coords, sumset_nA
from .smtlib import write_smtlib

__all__ = [
    'EXIT_YES',
    'EXIT_NO',
    'EXIT_UNKNOWN',
    'EXIT_ERROR',
    'build_parser',
    'run',
    'main'
]

logger = logging.getLogger(__name__)

EXIT_YES = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors become exit code 3 instead of argparse's 2, which means unknown here."""
    def error(self, message):
        raise ValueError(f"{self.prog}: {message}")


def _emit(payload:Dict[str, Any]) -> None:
    sys.stdout.write(json.dumps({'version': __version__, **payload}, indent=2))
    sys.stdout.write('\n')


def _sorted_elements(elements) -> List[Dict[str, Any]]:
    return [element_to_json(g) for g in sorted(elements, key=lambda g: (g.e, g.f))]


def _load_group(args) -> GroupPresentation:
    P = load_presentation(args.group)
    report = P.check_consistency()
    if not report:
        raise PresentationError(f"{args.group} is not a consistent presentation", report.violations)
    return P


def _outcome_payload(outcome:SolveOutcome, factors:Sequence[GroupElement]) -> Dict[str, Any]:
    payload: Dict[str, Any] = {'status': outcome.status.value, 'reason': outcome.reason}
    if outcome.witness is not None:
        payload['witness'] = list(outcome.witness)
        payload['word'] = [element_to_json(y) for y, a in zip(factors, outcome.witness) for _ in range(a)]
    return payload


# Commands

def cmd_check(args, settings:Settings) -> int:
    P = _load_group(args)
    cs = commutator_structure(P)
    ab = abelianization(P)
    _emit({'command': 'check', 'status': 'ok', 'r': P.r, 's': P.s,
           'h': cs.h, 'commutator_torsion': list(cs.torsion.orders),
           'abelianization': list(ab.invariants)})
    return EXIT_YES


def cmd_eval(args, settings:Settings) -> int:
    P = _load_group(args)
    word = parse_elements(args.word, P)
    payload = {'command': 'eval', 'value': element_to_json(P.eval_word(word))}
    if args.prefixes:
        payload['prefixes'] = [element_to_json(v) for v in P.prefix_values(word)]
    _emit(payload)
    return EXIT_YES


def cmd_mul(args, settings:Settings) -> int:
    P = _load_group(args)
    elements = [parse_element(text, P) for text in args.elements]
    product = P.eval_word(elements)
    payload = {'command': 'mul', 'product': element_to_json(product),
               'inverse': element_to_json(P.inverse(product))}
    if len(elements) == 2:
        payload['commutator'] = element_to_json(P.commutator(*elements))
    _emit(payload)
    return EXIT_YES


def cmd_knapsack(args, settings:Settings) -> int:
    P = _load_group(args)
    inst = KnapsackInstance(P, parse_element(args.target, P), tuple(parse_elements(args.factors, P)))
    if args.emit_smt:
        write_smtlib(build_system(inst), args.emit_smt)
    outcome = solve_box(inst, settings.box, weight=settings.weight, state_budget=settings.state_budget)
    _emit({'command': 'knapsack', 'box': settings.box, **_outcome_payload(outcome, inst.factors)})
    return outcome.status.exit_code


def cmd_member(args, settings:Settings) -> int:
    P = _load_group(args)
    target = parse_element(args.target, P)
    monoids = [parse_elements(text, P) for text in args.gens]
    cs = commutator_structure(P).require_h1()
    if args.emit_smt:
        factors = tuple(y for S in monoids if S for y in bounded_sequence(S, cs).sequence)
        write_smtlib(build_system(KnapsackInstance(P, target, factors)), args.emit_smt)
    outcome = member_product_of_monoids(P, target, monoids, cs=cs, box=settings.box,
                                        weight=settings.weight, state_budget=settings.state_budget)
    payload: Dict[str, Any] = {'command': 'member', 'box': settings.box,
                               'status': outcome.status.value, 'reason': outcome.reason,
                               'sequence_lengths': list(outcome.sequence_lengths)}
    if outcome.certificate is not None:
        payload['word'] = [element_to_json(y) for y in outcome.certificate]
    _emit(payload)
    return outcome.status.exit_code


def cmd_bgen(args, settings:Settings) -> int:
    P = _load_group(args)
    cs = commutator_structure(P).require_h1()
    seq = bounded_sequence(parse_elements(args.gens, P), cs)
    _emit({'command': 'bgen', 'K': seq.K, 'b': seq.b, 'e': seq.e,
           'sequence': [element_to_json(y) for y in seq.sequence]})
    return EXIT_YES


def cmd_tfree(args, settings:Settings) -> int:
    P = _load_group(args)
    H = torsion_free_subgroup(P)
    if args.out:
        dump_presentation(H.derived, args.out)
    payload = {'command': 'tfree', 'e': H.exp_e, 'r': len(H.generators), 'index': H.index,
               'generators': [element_to_json(g) for g in H.generators],
               'presentation': presentation_to_json(H.derived)}
    if args.verify:
        payload['coset_index'] = coset_index(P, H.contains, budget=settings.coset_budget)
    _emit(payload)
    return EXIT_YES


def cmd_lemma(args, settings:Settings) -> int:
    if args.instance:
        with open(args.instance) as f:
            data = json.load(f)
    else:
        if args.A is None or args.s is None:
            raise ValueError("lemma needs --instance or both --A and --s")
        data = {'A': json.loads(args.A), 's': json.loads(args.s)}
        if args.orders:
            data['orders'] = json.loads(args.orders)
    A, s, group = lemma_instance_from_json(data)
    kind = args.kind or ('torsion' if group is not None else 'extremes')
    payload: Dict[str, Any] = {'command': 'lemma', 'kind': kind}
    highlight = None
    if kind == 'torsion':
        if group is None:
            raise ValueError("the torsion lemma needs an 'orders' list")
        ambient = TorsionGapSet(A, group)
        after = concentrate_torsion(s, ambient)
        payload.update(b=ambient.b, e=ambient.e,
                       after=[[z, list(t)] for z, t in after])
    else:
        if group is not None:
            raise ValueError(f"the {kind} lemma works on integers, drop 'orders'")
        ambient = GapSet(A)
        if kind == 'extremes':
            after = concentrate_extremes(s, ambient)
        elif kind == 'consecutive':
            k, after = concentrate_consecutive(s, ambient)
            payload['k'] = k
            highlight = ambient.values[k:k + 2]
        else:
            raise ValueError(f"unknown lemma kind {kind!r}")
        payload.update(b=ambient.b, after=after)
    if args.identity is not None:
        payload['identity'] = sumset_identity_check(ambient, args.identity, kind)
    if args.plot:
        from .plot import ConcentrationPlot
        plot = ConcentrationPlot()
        plot.title = f"{kind} concentration"
        plot.draw(ambient, s, after, highlight)
        plot.save(args.plot)
    _emit(payload)
    return EXIT_YES


_HEIS_FACTOR = re.compile(r"([xyz])(?:\^([+-]?\d+))?")


def _heis_word(text:str) -> List:
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, list):
        return [item if isinstance(item, str) else (item[0], decode_int(item[1])) for item in data]
    word = []
    for token in filter(None, (t.strip() for t in text.split('*'))):
        match = _HEIS_FACTOR.fullmatch(token)
        if not match:
            raise ValueError(f"cannot parse {token!r} as a power of x, y or z")
        word.append((match.group(1), int(match.group(2) or 1)))
    return word


def cmd_oracle(args, settings:Settings) -> int:
    if args.oracle == 'ball':
        P = _load_group(args)
        ball = bfs_monoid_ball(P, parse_elements(args.gens, P), settings.depth, budget=settings.bfs_budget)
        _emit({'command': 'oracle ball', 'depth': ball.depth, 'size': len(ball),
               'layers': [len(layer) for layer in ball.layers],
               'elements': _sorted_elements(ball.elements)})
    elif args.oracle == 'sumset':
        A = [decode_int(a) for a in json.loads(args.A)]
        _emit({'command': 'oracle sumset', 'n': args.n, 'sumset': sorted(sumset_nA(A, args.n))})
    else:
        m = heis_eval(_heis_word(args.word))
        _emit({'command': 'oracle heis',
               'matrix': [[int(v) for v in row] for row in m.to_matrix()],
               'coords': element_to_json(heis_to_coords(m))})
    return EXIT_YES


# Parser

def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog='nilmonoid',
                             description="Knapsack and submonoid membership in class 2 nilpotent groups")
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="log INFO (-v) or DEBUG (-vv) messages to stderr")

    group = _ArgumentParser(add_help=False)
    group.add_argument('--group', required=True, help="presentation JSON file")

    search = _ArgumentParser(add_help=False)
    search.add_argument('--box', type=int, default=DEFAULT_BOX, help="bound for every exponent")
    search.add_argument('--weight', type=int, help="bound for the sum of all exponents")
    search.add_argument('--state-budget', type=int, help="maximal number of stored partial products")
    search.add_argument('--emit-smt', metavar='PATH', help="also write the equation system as SMT-LIB 2")

    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('check', parents=[group], help="validate a presentation")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser('eval', parents=[group], help="evaluate a word")
    p.add_argument('--word', required=True, help="list of elements, e.g. '[x,y,x]'")
    p.add_argument('--prefixes', action='store_true', help="also print all prefix values")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser('mul', parents=[group], help="multiply elements")
    p.add_argument('elements', nargs='+', help="elements such as '(1,0|0)' or 'x*y^-1'")
    p.set_defaults(handler=cmd_mul)

    p = sub.add_parser('knapsack', parents=[group, search], help="decide g in x_1^* ... x_n^*")
    p.add_argument('--target', required=True)
    p.add_argument('--factors', required=True, help="list of elements x_1..x_n")
    p.set_defaults(handler=cmd_knapsack)

    p = sub.add_parser('member', parents=[group, search], help="decide g in S_1^* ... S_m^*")
    p.add_argument('--target', required=True)
    p.add_argument('--gens', required=True, action='append',
                   help="generators of one monoid S_j, repeat for a product of monoids")
    p.set_defaults(handler=cmd_member)

    p = sub.add_parser('bgen', parents=[group], help="bounded generation sequence of a monoid")
    p.add_argument('--gens', required=True)
    p.set_defaults(handler=cmd_bgen)

    p = sub.add_parser('tfree', parents=[group], help="torsion-free subgroup of finite index")
    p.add_argument('--out', metavar='PATH', help="write the subgroup presentation here")
    p.add_argument('--verify', action='store_true', help="confirm the index by coset enumeration")
    p.add_argument('--coset-budget', type=int)
    p.set_defaults(handler=cmd_tfree)

    p = sub.add_parser('lemma', help="concentrate a sequence over a gap-bounded set")
    p.add_argument('--instance', metavar='PATH', help='JSON file {"A": [...], "s": [...]}')
    p.add_argument('--A', help="JSON list of the set A")
    p.add_argument('--s', help="JSON list of the sequence")
    p.add_argument('--orders', help="JSON list of the torsion orders")
    p.add_argument('--kind', choices=['extremes', 'consecutive', 'torsion'])
    p.add_argument('--identity', type=int, metavar='N', help="also check the sumset identity for N summands")
    p.add_argument('--plot', metavar='PATH', help="save before/after histograms")
    p.set_defaults(handler=cmd_lemma)

    p = sub.add_parser('oracle', help="brute force oracles")
    oracles = p.add_subparsers(dest='oracle', required=True)
    q = oracles.add_parser('ball', parents=[group], help="monoid ball by breadth first search")
    q.add_argument('--gens', required=True)
    q.add_argument('--depth', type=int, default=DEFAULT_DEPTH)
    q.add_argument('--bfs-budget', type=int)
    q.set_defaults(handler=cmd_oracle)
    q = oracles.add_parser('sumset', help="iterated sumset nA")
    q.add_argument('--A', required=True)
    q.add_argument('--n', type=int, required=True)
    q.set_defaults(handler=cmd_oracle)
    q = oracles.add_parser('heis', help="multiply 3x3 unitriangular matrices")
    q.add_argument('--word', required=True, help="e.g. 'x*y^2*z^-1'")
    q.set_defaults(handler=cmd_oracle)
    return parser


def run(argv:Optional[Sequence[str]]=None) -> int:
    """
    Run the command line and return the exit code.

    Results go to stdout as JSON. Exit codes are 0 for yes/ok, 1 for no,
    2 for unknown and 3 for usage or data errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level={0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG),
                            stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
        settings = Settings.from_args(args)
        return args.handler(args, settings)
    except (NilmonoidError, ValueError, TypeError, OSError, KeyError) as err:
        logger.error("%s", err)
        payload: Dict[str, Any] = {'error': str(err)}
        violations = getattr(err, 'violations', None)
        if violations:
            payload['violations'] = violations
        _emit(payload)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())
