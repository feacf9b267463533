"""
Wording of check notes and report summaries.

A check reports through CheckOutcome.report(key, **context): the template is filled in and
appended to the check's notes, and a 'fail' entry also fails the check. 'note' entries
record findings that do not change the verdict (which head condition matched, the
identities a candidate set leaves out).
"""

MESSAGES = {
    'dimension_mismatch': {
        'template': "dim {variety}[{multidegree}] = {dimension}, expected {expected}",
        'severity': 'fail',
        'example_context': {'variety': 'binary-perm', 'multidegree': '1,1,1', 'dimension': 4, 'expected': 5}
    },
    'sandwich_mismatch': {
        'template': "{left}[{multidegree}] = {a} but {right}[{multidegree}] = {b}",
        'severity': 'fail',
        'example_context': {'left': 'perm', 'right': 'binary-perm', 'multidegree': '3,2', 'a': 2, 'b': 3}
    },
    'not_consequence': {
        'template': "{name} does not follow in {variety}; residue {residue}",
        'severity': 'fail',
        'example_context': {'name': 'v1', 'variety': 'binary-perm', 'residue': '((x1*x2)*x3)'}
    },
    'basis_wrong_count': {
        'template': "basis at {multidegree} has {given} monomials, component dimension is {expected}",
        'severity': 'fail',
        'example_context': {'multidegree': '1,1,1', 'given': 2, 'expected': 5}
    },
    'basis_dependent': {
        'template': "basis at {multidegree} is dependent modulo consequences ({independent} of {given} independent)",
        'severity': 'fail',
        'example_context': {'multidegree': '1,1,1', 'independent': 4, 'given': 5}
    },
    'rewrite_disagrees': {
        'template': "rewriter and normal form disagree on {monomial}",
        'severity': 'fail',
        'example_context': {'monomial': '((x1*x2)*(x3*x1))*x2'}
    },
    'not_identity': {
        'template': "{name} is not an identity of {variety}({sign})",
        'severity': 'fail',
        'example_context': {'name': 'c1', 'variety': 'binary-perm', 'sign': 'minus'}
    },
    'generation_gap': {
        'template': "{candidates} leave a gap of {gap} at {multidegree} (kernel {kernel}, consequences {consequences}), expected {expected}",
        'severity': 'fail',
        'example_context': {'candidates': 'anticom', 'gap': 2, 'multidegree': '1,1,1,1', 'kernel': 17,
                            'consequences': 15, 'expected': 0}
    },
    'known_gap': {
        'template': "{candidates} leave {gap} kernel identities at {multidegree}, as recorded",
        'severity': 'note',
        'example_context': {'candidates': 'anticom,c1,c2', 'gap': 3, 'multidegree': '1,1,1,1'}
    },
    'extra_identity': {
        'template': "  {identity} = 0",
        'severity': 'note',
        'example_context': {'identity': '[[x1,x2],[x3,x4]]'}
    },
    'not_contained': {
        'template': "{candidates} are not identities of {variety}({sign}) at {multidegree}",
        'severity': 'fail',
        'example_context': {'candidates': 'anticom,c1', 'variety': 'perm', 'sign': 'minus', 'multidegree': '1,1,1,1'}
    },
    'unexpected_consequence': {
        'template': "{name} already follows from {others}",
        'severity': 'fail',
        'example_context': {'name': 'c1', 'others': 'anticom,c2'}
    },
    'leading_word_order': {
        'template': "leading-word property holds for {order} good words: {holds}",
        'severity': 'note',
        'example_context': {'order': 'deg-lex', 'holds': False}
    },
    'leading_word_failed': {
        'template': "leading word of {word} is {lead}",
        'severity': 'note',
        'example_context': {'word': '[x1,[x2,x3]]', 'lead': '((x2*x3)*x1)'}
    },
    'leading_words_collide': {
        'template': "{order} good words at {multidegree} share a leading word",
        'severity': 'note',
        'example_context': {'order': 'deg-lex', 'multidegree': '1,1,1,1'}
    },
    'count_mismatch': {
        'template': "{what} at {multidegree}: {got}, expected {expected}",
        'severity': 'fail',
        'example_context': {'what': 'good words', 'multidegree': '1,1,1', 'got': 2, 'expected': 3}
    },
    'cn_resolution': {
        'template': "matching condition: {condition}",
        'severity': 'note',
        'example_context': {'condition': 'i1>i2<=...<=in'}
    },
    'cn_unresolved': {
        'template': "{matches} candidate conditions match the computed dimensions",
        'severity': 'fail',
        'example_context': {'matches': 0}
    },
    'check_error': {
        'template': "check raised {error}",
        'severity': 'fail',
        'example_context': {'error': 'InputError'}
    },
    'all_passed': {
        'template': "all {count} checks passed",
        'severity': 'note',
        'example_context': {'count': 12}
    },
    'some_failed': {
        'template': "{failed} of {count} checks failed",
        'severity': 'fail',
        'example_context': {'failed': 1, 'count': 12}
    },
}


def render(key, **context):
    """Filled-in template; with context missing, the raw template and what was given."""
    entry = MESSAGES.get(key)
    if entry is None:
        return f'Unknown message: {key}'
    try:
        return entry['template'].format(**context)
    except (KeyError, IndexError, ValueError):
        given = ', '.join(f"{k}={v!r}" for k, v in sorted(context.items()))
        return f"{entry['template']} ({given})"


def fails(key):
    return MESSAGES.get(key, {}).get('severity') == 'fail'
