from math import factorial, prod

import pytest

from algebra.catalog import identities
from algebra.core import Polynomial, Sign, TermOrder, enumerate_monomials, multidegree, multilinear
from algebra.derived import (
    derived_kernel, distinct_leading_words, expand_bracket, expand_polynomial, generates_all,
    good_words, is_derived_identity, is_good, is_nap_basis, leading_word, leading_word_check,
    linearize, nap_basis, render_bracket, render_bracket_polynomial, tilde,
)
from algebra.errors import InputError
from algebra.parser import parse_identity
from algebra.variety import Variety, VarietyEngine


def test_expand_commutator_word():
    p = expand_bracket((1, (2, 3)), Sign.MINUS)
    assert p == Polynomial({(1, (2, 3)): 1, (1, (3, 2)): -1, ((2, 3), 1): -1, ((3, 2), 1): 1})


def test_expand_anticommutator():
    assert expand_bracket((1, 2), 'plus') == Polynomial({(1, 2): 1, (2, 1): 1})
    assert expand_bracket(3, Sign.PLUS) == Polynomial.monomial(3)


def test_expand_square_of_commutators_signs():
    p = expand_bracket(((1, 2), (3, 4)), Sign.MINUS)
    assert len(p) == 8
    assert [c for _, c in p.items()] == [1, -1, -1, 1, -1, 1, 1, -1]


def test_expand_polynomial_is_linear():
    p = Polynomial({(1, 2): 1, (2, 1): 1})
    assert not expand_polynomial(p, Sign.MINUS)
    assert expand_polynomial(p, Sign.PLUS) == expand_bracket((1, 2), Sign.PLUS).scale(2)


def test_tilde_and_rendering():
    w = ((1, 2), (3, 4))
    assert tilde(w) == w
    assert tilde(1) == 1
    assert render_bracket(w, Sign.MINUS) == '[[x1,x2],[x3,x4]]'
    assert render_bracket((1, 2), Sign.PLUS, ('a', 'b')) == '{a,b}'
    p = Polynomial({(1, 2): 1, (2, 1): '-1/2'})
    assert render_bracket_polynomial(p, Sign.MINUS) == '[x1,x2] - 1/2*[x2,x1]'


@pytest.mark.parametrize('n,count', [(2, 1), (3, 3), (4, 15), (5, 105)])
def test_good_word_counts(n, count):
    for order in TermOrder:
        words = good_words(n, multilinear(n), order)
        assert len(words) == count
        assert all(is_good(w, order) for w in words)


def test_good_words_need_enough_letters():
    with pytest.raises(InputError):
        good_words(2, (1, 1, 1))


def test_repeated_letter_has_no_good_square():
    assert good_words(1, (2,)) == []


def test_leading_words_of_examples():
    assert leading_word((1, (2, 3))) == (1, (2, 3))
    assert leading_word_check((1, (2, 3)))
    assert leading_word(((1, 2), (3, 4))) == ((1, 2), (3, 4))
    assert leading_word_check(((1, 2), (3, 4)))


def test_deg_lex_good_word_with_other_leading_word():
    w = ((1, 4), (2, 3))
    assert is_good(w, TermOrder.DEG_LEX)
    assert leading_word(w) == ((2, 3), (1, 4))
    assert not leading_word_check(w)


@pytest.mark.parametrize('d', [(1, 1), (1, 1, 1), (2, 1), (1, 1, 1, 1), (2, 1, 1), (1, 2, 1)])
def test_right_deg_lex_good_words_lead_with_themselves(d):
    words = good_words(len(d), d, TermOrder.RIGHT_DEG_LEX)
    assert all(leading_word_check(w) for w in words)
    assert distinct_leading_words(words)


def test_nap_basis_trees():
    assert len(nap_basis((1, 1, 1))) == 9
    assert len(nap_basis((1, 1, 1, 1))) == 64
    assert is_nap_basis(((1, 2), 3))
    assert not is_nap_basis(((1, 3), 2))
    assert is_nap_basis((1, (3, 2)))


def test_nap_basis_verifies(engines):
    engine = engines('nap')
    assert engine.dimension((1, 1, 1)).dimension == 9
    assert engine.verify_basis((1, 1, 1), nap_basis((1, 1, 1))).ok
    assert engine.dimension((1, 1, 1, 1)).dimension == 64


def test_linearize_multilinear_identity_is_unchanged():
    f = parse_identity('[a,b] = -[b,a]', mode='minus')
    (g,) = linearize(f)
    assert g.poly == f.poly
    assert g.variables == f.variables


def test_linearize_jordan():
    (f,) = identities('jordan')
    (g,) = linearize(f)
    assert g.variables == ('a1', 'a2', 'a3', 'b')
    assert g.multilinear
    assert g.degree == 4
    assert len(g.poly) == 12


def test_linearize_malcev():
    (f,) = identities('malcev')
    pieces = linearize(f)
    assert len(pieces) == 1
    assert pieces[0].variables == ('a1', 'a2', 'b', 'c')
    assert pieces[0].multilinear


def test_linearize_splits_inhomogeneous_identity():
    f = parse_identity('a*a = a*(a*a)')
    pieces = linearize(f)
    assert [p.degree for p in pieces] == [3, 2]


def test_nap_commutator_kernel_degree_three(engines):
    kernel = derived_kernel(engines('nap'), Sign.MINUS, (1, 1, 1))
    assert kernel.evaluation_rank == 3
    assert kernel.dimension == 9
    assert kernel.contains(Polynomial({((1, 2), 3): 1, ((2, 1), 3): 1}))
    assert not kernel.contains(Polynomial.monomial(((1, 2), 3)))
    assert len(kernel.basis_polynomials()) == 9


def test_anticommutativity_generates_nap_identities(engines):
    report = generates_all(identities('anticom'), engines('nap'), Sign.MINUS, multilinear(4))
    assert report.generates
    assert report.gap == 0


def test_binary_perm_commutator_has_degree_four_identities(engines):
    report = generates_all(identities('anticom'), engines('binary-perm'), Sign.MINUS, multilinear(4))
    assert report.contained
    assert not report.generates
    assert report.gap > 0


def test_commutativity_generates_nap_plus_identities(engines):
    report = generates_all(identities('comm'), engines('nap'), Sign.PLUS, multilinear(3))
    assert report.generates


def test_perm_commutator_algebras_are_metabelian(engines):
    perm = engines('perm')
    for f in identities('metabelian'):
        assert is_derived_identity(perm, Sign.MINUS, f)
    report = generates_all(identities('anticom') + identities('metabelian'), perm, Sign.MINUS,
                           multilinear(4))
    assert report.generates


def test_derived_identities_of_binary_perm(engines):
    engine = engines('binary-perm')
    for name in ('c1', 'c2', 'malcev'):
        for f in identities(name):
            assert is_derived_identity(engine, Sign.MINUS, f), name
    assert not is_derived_identity(engines('magma'), Sign.MINUS, identities('jacobi')[0])


@pytest.mark.slow
def test_c1_and_c2_generate_degree_five(engines):
    candidates = identities('anticom') + identities('c1') + identities('c2')
    report = generates_all(candidates, engines('binary-perm'), Sign.MINUS, multilinear(5))
    assert report.generates


@pytest.mark.parametrize('d', [(1, 1), (1, 1, 1), (2, 1), (1, 1, 1, 1)])
def test_swapping_factors_flips_commutators_only(d):
    for w in enumerate_monomials(d):
        swapped = (w[1], w[0])
        assert expand_bracket(swapped, Sign.MINUS) == -expand_bracket(w, Sign.MINUS)
        assert expand_bracket(swapped, Sign.PLUS) == expand_bracket(w, Sign.PLUS)


def _copy_of(name, variables):
    return name if name in variables else name.rstrip('_').rstrip('0123456789')


@pytest.mark.parametrize('f', [identities('jordan')[0], identities('malcev')[0],
                               parse_identity('a*a = a*(a*a)'),
                               parse_identity('(a*b)*a = a*(b*a) + (b*b)*a')])
def test_depolarizing_a_linearization_scales_the_original(f):
    for piece in linearize(f):
        mapping = {i: Polynomial.monomial(f.variables.index(_copy_of(name, f.variables)) + 1)
                   for i, name in enumerate(piece.variables, start=1)}
        back = piece.poly.substitute(mapping)
        d = back.homogeneous_multidegree()
        component = Polynomial({m: c for m, c in f.poly.terms.items() if multidegree(m) == d})
        assert back == component.scale(prod(factorial(c) for c in d))


def test_anticom_c1_c2_fall_three_short_in_degree_four(engines):
    engine = engines('binary-perm')
    kernel = derived_kernel(engine, Sign.MINUS, multilinear(4))
    assert kernel.dimension == 116
    anticom = generates_all(identities('anticom'), engine, Sign.MINUS, multilinear(4), kernel=kernel)
    assert (anticom.consequence_dimension, anticom.gap) == (105, 11)
    candidates = identities('anticom') + identities('c1') + identities('c2')
    report = generates_all(candidates, engine, Sign.MINUS, multilinear(4), kernel=kernel)
    assert report.contained
    assert (report.kernel_dimension, report.consequence_dimension, report.gap) == (116, 113, 3)
    assert len(report.extra) == 3
    assert all(kernel.contains(p) for p in report.extra)
    closure = VarietyEngine(Variety.from_identities('c', candidates))
    assert not any(closure.is_consequence(p).holds for p in report.extra)


def test_generating_sets_have_no_extra_identities(engines):
    report = generates_all(identities('anticom'), engines('nap'), Sign.MINUS, multilinear(3))
    assert report.generates
    assert report.extra == []
