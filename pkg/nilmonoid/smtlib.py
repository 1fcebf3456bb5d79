from __future__ import annotations

import logging
from io import StringIO
from typing import Dict, List, Optional

from pysmt.logics import QF_NIA
from pysmt.shortcuts import And, Equals, GE, Int, Plus, Symbol, Times, TRUE
from pysmt.smtlib import commands as smtcmd
from pysmt.smtlib.script import SmtLibScript
from pysmt.typing import INT

from .diophantine import DiophantineSystem, Equation

__all__ = [
    'system_formula',
    'smtlib_script',
    'export_smtlib',
    'write_smtlib',
    'model_to_alpha'
]

logger = logging.getLogger(__name__)


def _polynomial(eq:Equation, symbols:List):
    summands = []
    for monomial, c in eq.terms:
        factors = [Int(c)] + [symbols[v] for v in monomial]
        summands.append(factors[0] if len(factors) == 1 else Times(factors))
    if not summands:
        return Int(0)
    return summands[0] if len(summands) == 1 else Plus(summands)


def system_formula(sys:DiophantineSystem, prefix:str=''):
    """
    The conjunction of nonnegativity of the alpha variables and all equations.

    A congruence `p = rhs (mod m)` becomes `p = rhs + m * k_i` with a fresh free
    integer `k_i`. Auxiliary quotient variables stay unconstrained in sign.

    Args:
        sys (DiophantineSystem): The system.
        prefix (str): Prepended to every symbol name.

    Returns:
        The pysmt formula and the list of alpha symbols.
    """
    symbols = [Symbol(prefix + name, INT) for name in sys.names]
    clauses = [GE(symbols[i], Int(0)) for i in range(sys.n)]
    for idx, eq in enumerate(sys.equations):
        lhs = _polynomial(eq, symbols)
        rhs = Int(eq.rhs)
        if eq.modulus is not None:
            k = Symbol(f"{prefix}k_{idx+1}", INT)
            rhs = Plus(rhs, Times(Int(eq.modulus), k))
        clauses.append(Equals(lhs, rhs))
    if not clauses:
        return TRUE(), symbols[:sys.n]
    return And(clauses), symbols[:sys.n]


def smtlib_script(sys:DiophantineSystem, prefix:str='') -> SmtLibScript:
    formula, alphas = system_formula(sys, prefix)
    script = SmtLibScript()
    script.add(name=smtcmd.SET_OPTION, args=[':produce-models', 'true'])
    script.add(name=smtcmd.SET_LOGIC, args=[QF_NIA])
    declared = {s.symbol_name(): s for s in formula.get_free_variables()}
    for s in alphas:
        declared.setdefault(s.symbol_name(), s)
    for name in sorted(declared):
        script.add(name=smtcmd.DECLARE_FUN, args=[declared[name]])
    script.add(name=smtcmd.ASSERT, args=[formula])
    script.add(name=smtcmd.CHECK_SAT, args=[])
    script.add(name=smtcmd.GET_MODEL, args=[])
    script.add(name=smtcmd.EXIT, args=[])
    return script


def export_smtlib(sys:DiophantineSystem, prefix:str='') -> str:
    """
    Serialize a system as an SMT-LIB 2 script in the logic `QF_NIA`.

    A model of the script restricted to `alpha_1..alpha_n` is a knapsack witness.

    Example:
    ```python
    text = export_smtlib(build_system(inst))
    "(check-sat)" in text   # True
    ```
    """
    buf = StringIO()
    smtlib_script(sys, prefix).serialize(buf, daggify=False)
    logger.debug("exported %d equations over %d variables", len(sys.equations), len(sys.names))
    return buf.getvalue()


def write_smtlib(sys:DiophantineSystem, path:str, prefix:str='') -> None:
    with open(path, 'w') as f:
        f.write(export_smtlib(sys, prefix))
    logger.info("wrote SMT-LIB script to %s", path)


def model_to_alpha(sys:DiophantineSystem, model:Dict[str, int]) -> Optional[List[int]]:
    """Read `alpha_1..alpha_n` out of a model given as name to value, None if one is missing."""
    try:
        return [int(model[f"alpha_{i+1}"]) for i in range(sys.n)]
    except KeyError:
        return None
