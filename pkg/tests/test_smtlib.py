from io import StringIO

from pysmt.shortcuts import Int
from pysmt.smtlib import commands as smtcmd
from pysmt.smtlib.parser import SmtLibParser

from nilmonoid import (DiophantineSystem, KnapsackInstance, build_system, export_smtlib,
                       model_to_alpha, system_formula, write_smtlib)


def commutator_system(P):
    x, y, z = P.generators()
    return build_system(KnapsackInstance(P, z, (x, y, P.inverse(x), P.inverse(y))))


def parse(text):
    return SmtLibParser().get_script(StringIO(text))


def declared_names(script):
    return {s.symbol_name() for s in script.get_declared_symbols()}


def test_export_parses_back(h3):
    text = export_smtlib(commutator_system(h3))
    assert "(check-sat)" in text
    assert "QF_NIA" in text
    script = parse(text)
    assert declared_names(script) == {'alpha_1', 'alpha_2', 'alpha_3', 'alpha_4'}
    assert script.contains_command(smtcmd.CHECK_SAT)
    assert script.contains_command(smtcmd.GET_MODEL)


def test_formula_holds_at_the_witness(h3):
    formula, alphas = system_formula(commutator_system(h3))
    assert [s.symbol_name() for s in alphas] == ['alpha_1', 'alpha_2', 'alpha_3', 'alpha_4']
    good = formula.substitute({s: Int(1) for s in alphas}).simplify()
    assert good.is_true()
    bad = formula.substitute({s: Int(v) for s, v in zip(alphas, (1, 1, 1, 0))}).simplify()
    assert bad.is_false()


def test_congruences_get_quotient_symbols(h3_mod_2):
    script = parse(export_smtlib(commutator_system(h3_mod_2)))
    assert 'k_3' in declared_names(script)


def test_prefix(h3):
    names = declared_names(parse(export_smtlib(commutator_system(h3), prefix='run1_')))
    assert names == {'run1_alpha_1', 'run1_alpha_2', 'run1_alpha_3', 'run1_alpha_4'}


def test_empty_system():
    text = export_smtlib(DiophantineSystem(0, ()))
    assert "(check-sat)" in text
    assert declared_names(parse(text)) == set()


def test_write(h3, tmp_path):
    path = tmp_path / 'commutator.smt2'
    write_smtlib(commutator_system(h3), str(path))
    assert path.read_text() == export_smtlib(commutator_system(h3))


def test_model_to_alpha(h3):
    system = commutator_system(h3)
    model = {'alpha_1': 1, 'alpha_2': 1, 'alpha_3': 1, 'alpha_4': 1, 'k_9': 0}
    assert model_to_alpha(system, model) == [1, 1, 1, 1]
    assert model_to_alpha(system, {'alpha_1': 1}) is None
