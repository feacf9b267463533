"""
Reproducible checks grouped into suites.

A check is a function taking a CheckContext and returning a CheckOutcome. Details hold only
deterministic values (counts, verdicts, rendered monomials) so machine reports are
identical whatever the thread count; timings live in the text report.
"""

import logging
import threading
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .catalog import identities
from .core import (
    Polynomial, Sign, TermOrder, enumerate_monomials, format_multidegree, left_normed,
    multidegree, multidegrees_of_degree, multilinear, render, sort_key,
)
from .derived import (
    derived_kernel, distinct_leading_words, generates_all, good_words, is_derived_identity,
    is_good, leading_word, leading_word_check, nap_basis, render_bracket_polynomial,
)
from .errors import InputError
from .linalg import FIELD
from .messages import fails, render as message
from .rewrite import rewrite_nf
from .variety import Variety, VarietyEngine, get_variety, load_registry, published_basis

logger = logging.getLogger('nas.checks')

DEFAULT_MAX_DEGREE = 6
DEFAULT_SEED = 20240601


@dataclass
class CheckOutcome:
    passed: bool
    details: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def report(self, key, **context):
        self.notes.append(message(key, **context))
        if fails(key):
            self.passed = False


@dataclass(frozen=True)
class CheckSpec:
    suite: str
    name: str
    kind: str
    description: str
    run: Callable
    expected: str = 'pass'


SUITES = {}


def check(suite, name, kind, description):
    """Register a check function under suite/name."""
    def decorator(fn):
        specs = SUITES.setdefault(suite, [])
        if any(s.name == name for s in specs):
            raise ValueError(f"duplicate check {suite}/{name}")
        specs.append(CheckSpec(suite, name, kind, description, fn))
        return fn
    return decorator


def get_suite(name):
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
    return list(SUITES[name])


def find_check(suite, name):
    for spec in get_suite(suite):
        if spec.name == name:
            return spec
    raise InputError(f"suite {suite!r} has no check {name!r}")


class CheckContext:
    """Engines shared by the checks of one run."""

    def __init__(self, registry=None, threads=1, max_degree=DEFAULT_MAX_DEGREE,
                 seed=DEFAULT_SEED, cache=None, method=FIELD):
        self.registry = registry if registry is not None else load_registry()
        self.threads = threads
        self.max_degree = max_degree
        self.seed = seed
        self.cache = cache
        self.method = method
        self._engines = {}
        self._lock = threading.Lock()

    def engine(self, name):
        with self._lock:
            if name not in self._engines:
                self._engines[name] = VarietyEngine(get_variety(name, self.registry),
                                                    self.threads, self.method)
            return self._engines[name]

    def custom_engine(self, names):
        """Engine for the variety defined by catalogue identities."""
        key = '+'.join(names)
        with self._lock:
            if key not in self._engines:
                pieces = [f for name in names for f in identities(name)]
                self._engines[key] = VarietyEngine(Variety.from_identities(key, pieces),
                                                   self.threads, self.method)
            return self._engines[key]

    def dimension(self, name, d):
        engine = self.engine(name)
        if self.cache is not None:
            cached = self.cache.get(engine.variety, d)
            if cached is not None:
                return cached.dimension
        report = engine.dimension(d)
        if self.cache is not None:
            self.cache.put(engine.variety, report)
        return report.dimension

    def statistics(self):
        """Components built per engine."""
        return {name: engine.components_built for name, engine in self._engines.items()}

    def degrees(self, *wanted):
        return [n for n in wanted if n <= self.max_degree]


def _md(d):
    return format_multidegree(d)


def _catalog(names):
    return [f for name in names for f in identities(name)]


# ---------------------------------------------------------------------------
# Binary perm algebras
# ---------------------------------------------------------------------------

@check('paper-sec2', 'b3-dimensions', 'dimension',
       "binary-perm dimensions 5, 2, 1 in degree 3 and 6 at multilinear degree 4")
def b3_dimensions(ctx):
    expected = {(1, 1, 1): 5, (2, 1): 2, (3,): 1, (1, 1, 1, 1): 6}
    out = CheckOutcome(True)
    for d, want in expected.items():
        got = ctx.dimension('binary-perm', d)
        out.details[_md(d)] = got
        if got != want:
            out.report('dimension_mismatch', variety='binary-perm',
                       multidegree=_md(d), dimension=got, expected=want)
    return out


@check('paper-sec2', 'b4-sweep', 'dimension',
       "every degree-4 multidegree over 4 letters has the size of the listed degree-4 basis")
def b4_sweep(ctx):
    out = CheckOutcome(True)
    for d in multidegrees_of_degree(4, 4):
        want = len(published_basis('binary-perm', d))
        got = ctx.dimension('binary-perm', d)
        out.details[_md(d)] = got
        if got != want:
            out.report('dimension_mismatch', variety='binary-perm',
                       multidegree=_md(d), dimension=got, expected=want)
    return out


@check('paper-sec2', 'bn-multilinear', 'dimension',
       "multilinear binary-perm dimension n from degree 5 on (sorted-tail words)")
def bn_multilinear(ctx):
    out = CheckOutcome(True)
    for n in ctx.degrees(5, 6):
        got = ctx.dimension('binary-perm', multilinear(n))
        out.details[str(n)] = got
        if got != n:
            out.report('dimension_mismatch', variety='binary-perm',
                       multidegree=_md(multilinear(n)), dimension=got, expected=n)
    return out


def _compare_dimensions(ctx, left, right, multidegrees):
    out = CheckOutcome(True)
    for d in multidegrees:
        a, b = ctx.dimension(left, d), ctx.dimension(right, d)
        out.details[_md(d)] = [a, b]
        if a != b:
            out.report('sandwich_mismatch', left=left, right=right,
                       multidegree=_md(d), a=a, b=b)
    return out


@check('paper-sec2', 'sandwich', 'dimension',
       "perm and binary-perm dimensions agree in degrees 5 and 6 over 3 letters")
def sandwich(ctx):
    degrees = [d for n in ctx.degrees(5, 6) for d in multidegrees_of_degree(n, 3)]
    return _compare_dimensions(ctx, 'perm', 'binary-perm', degrees)


@check('paper-sec2', 'two-letter-proxy', 'dimension',
       "two-generated components of binary-perm look perm up to the degree guard")
def two_letter_proxy(ctx):
    degrees = [d for n in range(1, min(6, ctx.max_degree) + 1)
               for d in multidegrees_of_degree(n, 2)]
    return _compare_dimensions(ctx, 'perm', 'binary-perm', degrees)


@check('paper-sec2', 'lemma-identities', 'consequence',
       "identities v1 to v5 follow from the defining identities of binary-perm")
def lemma_identities(ctx):
    engine = ctx.engine('binary-perm')
    out = CheckOutcome(True)
    for name in ('v1', 'v2', 'v3', 'v4', 'v5'):
        verdicts = [engine.is_consequence(f) for f in identities(name)]
        out.details[name] = all(v.holds for v in verdicts)
        for f, v in zip(identities(name), verdicts):
            if not v.holds:
                out.report('not_consequence', name=name, variety='binary-perm',
                           residue=v.residue.render(f.variables))
    return out


def _verify(ctx, variety, d, out):
    basis = published_basis(variety, d)
    verdict = ctx.engine(variety).verify_basis(d, basis)
    out.details[f"{variety}:{_md(d)}"] = verdict.reason
    if not verdict.ok:
        key = 'basis_wrong_count' if verdict.reason == 'wrong_count' else 'basis_dependent'
        out.report(key, multidegree=_md(d), given=verdict.given,
                   expected=verdict.expected, independent=verdict.independent)


@check('paper-sec2', 'basis-verification', 'basis',
       "listed bases B3, B4 over 4 letters and multilinear Bn, plus the perm basis")
def basis_verification(ctx):
    out = CheckOutcome(True)
    for n in (3, 4):
        for d in multidegrees_of_degree(n, 4):
            _verify(ctx, 'binary-perm', d, out)
    for n in ctx.degrees(5, 6):
        _verify(ctx, 'binary-perm', multilinear(n), out)
    for n in ctx.degrees(3, 4, 5):
        for d in multidegrees_of_degree(n, 3):
            _verify(ctx, 'perm', d, out)
    return out


def _agree(ctx, variety, m):
    engine = ctx.engine(variety)
    d = multidegree(m)
    basis = published_basis(variety, d)
    coords = engine.normal_form(Polynomial.monomial(m), basis)
    rewritten = rewrite_nf(variety, m, engine)
    if any(mono not in basis for mono in rewritten.terms):
        return False
    return [rewritten.coefficient(b) for b in basis] == coords


def _sample(rng, degree, letters, size):
    seen = []
    for _ in range(size):
        labels = rng.integers(1, letters + 1, size=degree)
        counts = [int((labels == k).sum()) for k in range(1, letters + 1)]
        monomials = enumerate_monomials(counts)
        seen.append(monomials[int(rng.integers(len(monomials)))])
    return seen


@check('paper-sec2', 'rewriter-oracle', 'basis',
       "rule rewriting agrees with linear-algebra normal forms (degree 5 exhaustive, degree 6 sampled)")
def rewriter_oracle(ctx):
    out = CheckOutcome(True)
    checked = {}
    groups = [('perm', [m for d in multidegrees_of_degree(4, 3) for m in enumerate_monomials(d)])]
    if ctx.max_degree >= 5:
        groups.append(('binary-perm', [m for d in multidegrees_of_degree(5, 3)
                                       for m in enumerate_monomials(d)]))
    if ctx.max_degree >= 6:
        rng = np.random.default_rng(ctx.seed)
        groups.append(('binary-perm', _sample(rng, 6, 3, 500)))
    for variety, monomials in groups:
        for m in monomials:
            checked[variety] = checked.get(variety, 0) + 1
            if not _agree(ctx, variety, m):
                out.report('rewrite_disagrees', monomial=render(m))
    out.details.update(checked)
    return out


# ---------------------------------------------------------------------------
# Commutator and anti-commutator algebras of binary perm algebras
# ---------------------------------------------------------------------------

def _identities_hold(ctx, host, sign, names):
    engine = ctx.engine(host)
    out = CheckOutcome(True)
    for name in names:
        holds = all(is_derived_identity(engine, sign, f) for f in identities(name))
        out.details[f"{host}({sign}):{name}"] = holds
        if not holds:
            out.report('not_identity', name=name, variety=host, sign=sign)
    return out


@check('paper-sec3', 'c-identities', 'kernel',
       "c1, c2, c3, c4 are identities of binary-perm commutator algebras")
def c_identities(ctx):
    names = ['c1', 'c2'] + (['c3', 'c4'] if ctx.max_degree >= 5 else [])
    return _identities_hold(ctx, 'binary-perm', 'minus', names)


@check('paper-sec3', 'malcev-kernel', 'kernel',
       "the linearized Malcev identity holds in binary-perm commutator algebras")
def malcev_kernel(ctx):
    return _identities_hold(ctx, 'binary-perm', 'minus', ['malcev'])


@check('paper-sec3', 'plus-kernel', 'kernel',
       "Jordan identity and eq9 hold in binary-perm anti-commutator algebras; eq9 in perm")
def plus_kernel(ctx):
    out = _identities_hold(ctx, 'binary-perm', 'plus', ['jordan', 'eq9'])
    extra = _identities_hold(ctx, 'perm', 'plus', ['eq9'])
    out.passed = out.passed and extra.passed
    out.details.update(extra.details)
    out.notes.extend(extra.notes)
    return out


def _generation(ctx, host, sign, names, degrees, gaps=None):
    """Candidates against the kernel of host(sign); gaps maps a degree to the expected shortfall."""
    gaps = gaps or {}
    engine = ctx.engine(host)
    out = CheckOutcome(True)
    candidates = _catalog(names)
    label = ','.join(names)
    for n in degrees:
        d = multilinear(n)
        report = generates_all(candidates, engine, sign, d)
        row = {'generates': report.generates, 'kernel': report.kernel_dimension,
               'consequences': report.consequence_dimension}
        if report.extra:
            row['extra'] = [render_bracket_polynomial(p, sign) for p in report.extra]
        out.details[str(n)] = row
        want = gaps.get(n, 0)
        if not report.contained:
            out.report('not_contained', candidates=label, variety=host, sign=sign,
                       multidegree=_md(d))
        elif report.gap != want:
            out.report('generation_gap', candidates=label, gap=report.gap, multidegree=_md(d),
                       kernel=report.kernel_dimension, consequences=report.consequence_dimension,
                       expected=want)
        elif want:
            out.report('known_gap', candidates=label, gap=want, multidegree=_md(d))
            for text in row['extra']:
                out.report('extra_identity', identity=text)
    return out


@check('paper-sec3', 'no-degree-3', 'generates',
       "binary-perm commutator algebras have no identities of degree 3 besides anti-commutativity")
def no_degree_3(ctx):
    return _generation(ctx, 'binary-perm', 'minus', ['anticom'], [3])


@check('paper-sec3', 'anticom-gap-4', 'generates',
       "anti-commutativity alone leaves 11 of the 116 degree-4 identities")
def anticom_gap_4(ctx):
    return _generation(ctx, 'binary-perm', 'minus', ['anticom'], [4], gaps={4: 11})


# The degree-4 kernel of binary-perm(minus) is 116-dimensional; anticom, c1 and c2 span 113
# of it. The three remaining identities are listed in the check details.
@check('paper-sec3', 'generation', 'generates',
       "anti-commutativity, c1 and c2 give all identities in degree 5 and all but three in degree 4")
def generation(ctx):
    return _generation(ctx, 'binary-perm', 'minus', ['anticom', 'c1', 'c2'], ctx.degrees(4, 5),
                       gaps={4: 3})


@check('paper-sec3', 'independence', 'consequence',
       "c1 and c2 do not follow from anti-commutativity and each other")
def independence(ctx):
    out = CheckOutcome(True)
    for name, others in (('c1', ['anticom', 'c2']), ('c2', ['anticom', 'c1'])):
        engine = ctx.custom_engine(others)
        follows = all(engine.is_consequence(f).holds for f in identities(name))
        out.details[name] = not follows
        if follows:
            out.report('unexpected_consequence', name=name, others=','.join(others))
    return out


CN_CONDITIONS = {
    'i1<i2<=...<=in': lambda i1, i2: i1 < i2,
    'i1>i2<=...<=in': lambda i1, i2: i1 > i2,
}


def cn_words(d, condition):
    """Left-normed words x_i1 x_i2 ... x_in with sorted tail from i2 and the head condition."""
    test = CN_CONDITIONS[condition]
    letters = sorted(k + 1 for k, c in enumerate(d) for _ in range(c))
    words = set()
    for i1 in set(letters):
        rest = list(letters)
        rest.remove(i1)
        for i2 in set(rest):
            tail = list(rest)
            tail.remove(i2)
            if tail and i2 > tail[0]:
                continue
            if test(i1, i2):
                words.add(left_normed([i1, i2] + tail))
    return sorted(words, key=sort_key(TermOrder.DEG_LEX))


@check('paper-sec3', 'cn-resolution', 'basis',
       "which head condition on left-normed commutator words gives a basis in degree 5")
def cn_resolution(ctx):
    out = CheckOutcome(True)
    if ctx.max_degree < 5:
        out.details['skipped'] = 'degree guard below 5'
        return out
    engine = ctx.custom_engine(['anticom', 'c1', 'c2', 'c3', 'c4'])
    degrees = multidegrees_of_degree(5, 2) + [multilinear(5)]
    matching = []
    for condition in CN_CONDITIONS:
        verdicts = {}
        for d in degrees:
            verdicts[_md(d)] = engine.verify_basis(d, cn_words(d, condition)).reason
        out.details[condition] = verdicts
        if all(v == 'ok' for v in verdicts.values()):
            matching.append(condition)
    out.details['dimensions'] = {_md(d): engine.component(d).dimension for d in degrees}
    out.details['matching'] = matching
    logger.info('Head conditions matching in degree 5: %s', ', '.join(matching) or 'none')
    if len(matching) == 1:
        out.report('cn_resolution', condition=matching[0])
    else:
        out.report('cn_unresolved', matches=len(matching))
    return out


@check('paper-sec3', 'metabelian', 'generates',
       "perm commutator algebras are metabelian Lie in degrees 4 and 5")
def metabelian(ctx):
    out = _generation(ctx, 'perm', 'minus', ['anticom', 'metabelian'], ctx.degrees(4, 5))
    kernel = derived_kernel(ctx.engine('perm'), Sign.MINUS, multilinear(4))
    law = identities('metabelian')[-1]
    out.details['kernel-contains-metabelian'] = kernel.contains(law.poly)
    out.passed = out.passed and kernel.contains(law.poly)
    return out


# ---------------------------------------------------------------------------
# Nonassociative permutative algebras
# ---------------------------------------------------------------------------

@check('paper-sec4', 'good-word-counts', 'leading-words',
       "multilinear good-word counts 1, 3, 15, 105 match the goodness filter")
def good_word_counts(ctx):
    out = CheckOutcome(True)
    expected = {2: 1, 3: 3, 4: 15, 5: 105, 6: 945}
    for n in ctx.degrees(2, 3, 4, 5, 6):
        d = multilinear(n)
        built = len(good_words(n, d))
        filtered = sum(1 for m in enumerate_monomials(d) if is_good(m))
        out.details[str(n)] = built
        if not built == filtered == expected[n]:
            out.report('count_mismatch', what='good words', multidegree=_md(d),
                       got=f"{built}/{filtered}", expected=expected[n])
    return out


def _all_good_words(max_degree, letters, order):
    for n in range(1, max_degree + 1):
        for d in multidegrees_of_degree(n, letters):
            yield d, good_words(letters, d, order)


@check('paper-sec4', 'leading-words', 'leading-words',
       "leading monomials of commutator expansions of good words are the words themselves")
def leading_words(ctx):
    out = CheckOutcome(True)
    top = min(5, ctx.max_degree)
    for order in (TermOrder.RIGHT_DEG_LEX, TermOrder.DEG_LEX):
        holds, first_failure, collision = True, None, None
        for d, words in _all_good_words(top, 5, order):
            for w in words:
                if not leading_word_check(w):
                    holds = False
                    first_failure = first_failure or w
            if collision is None and not distinct_leading_words(words):
                collision = d
        distinct = collision is None
        out.details[order.value] = {'leading': holds, 'distinct': distinct}
        out.report('leading_word_order', order=order.value, holds=holds)
        if first_failure is not None:
            out.report('leading_word_failed', word=render(first_failure),
                       lead=render(leading_word(first_failure)))
        if collision is not None:
            out.report('leading_words_collide', order=order.value, multidegree=_md(collision))
        if order is TermOrder.RIGHT_DEG_LEX and not (holds and distinct):
            out.passed = False
    return out


@check('paper-sec4', 'nap-dimensions', 'dimension',
       "multilinear NAP dimensions n^(n-1) and the NAP basis trees")
def nap_dimensions(ctx):
    out = CheckOutcome(True)
    for n in ctx.degrees(2, 3, 4, 5):
        d = multilinear(n)
        got = ctx.dimension('nap', d)
        trees = len(nap_basis(d))
        out.details[str(n)] = [got, trees]
        if not got == trees == n ** (n - 1):
            out.report('count_mismatch', what='NAP dimension', multidegree=_md(d),
                       got=f"{got}/{trees}", expected=n ** (n - 1))
    verdict = ctx.engine('nap').verify_basis(multilinear(4), nap_basis(multilinear(4)))
    out.details['basis-4'] = verdict.reason
    out.passed = out.passed and verdict.ok
    return out


@check('paper-sec4', 'nap-minus', 'generates',
       "NAP commutator algebras satisfy only anti-commutativity in degrees 3 to 5")
def nap_minus(ctx):
    return _generation(ctx, 'nap', 'minus', ['anticom'], ctx.degrees(3, 4, 5))


@check('paper-sec4', 'nap-plus', 'generates',
       "NAP anti-commutator algebras satisfy only commutativity in degrees 3 to 5")
def nap_plus(ctx):
    return _generation(ctx, 'nap', 'plus', ['comm'], ctx.degrees(3, 4, 5))
