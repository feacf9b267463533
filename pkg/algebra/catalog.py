"""
Named identities used by the checks and by --candidates.

Each entry records the parse mode it is written in: None for the magma product, 'minus'
when [a,b] is the algebra product, 'plus' when {a,b} is.
"""

import os

from .errors import InputError
from .parser import parse_identities

CATALOG = {
    'anticom': {
        'text': "[a,b] = -[b,a]",
        'mode': 'minus',
        'description': "anti-commutativity",
    },
    'comm': {
        'text': "{a,b} = {b,a}",
        'mode': 'plus',
        'description': "commutativity",
    },
    'metabelian': {
        'text': ("J(a,b,c) = 0", "[[a,b],[c,d]] = 0"),
        'mode': 'minus',
        'description': "metabelian Lie: Jacobi identity and the metabelian law",
    },
    'jacobi': {
        'text': "J(a,b,c) = 0",
        'mode': 'minus',
        'description': "Jacobi identity",
    },
    'c1': {
        'text': "[[a,b],[c,d]] = [a,[[d,b],c]] + [d,[[b,c],a]] + [b,[[c,a],d]] + [c,[[a,d],b]]",
        'mode': 'minus',
        'description': "first degree-4 identity of binary perm commutator algebras",
    },
    'c2': {
        'text': "[[[a,d],c],b] = [[[a,d],b],c] + [[[a,b],d],c] - [[[a,b],c],d]",
        'mode': 'minus',
        'description': "second degree-4 identity of binary perm commutator algebras",
    },
    'c3': {
        'text': "[[[[a,b],c],d],e] = [[[[a,b],d],c],e] = [[[[a,b],c],e],d]",
        'mode': 'minus',
        'description': "tail symmetry in degree 5",
    },
    'c4': {
        'text': "[[J(a,b,c),d],e] = 0",
        'mode': 'minus',
        'description': "Jacobian times two letters",
    },
    'malcev': {
        'text': "J(a,b,[a,c]) = [J(a,b,c),a]",
        'mode': 'minus',
        'description': "Malcev identity",
    },
    'jordan': {
        'text': "((a*a)*b)*a = (a*a)*(b*a)",
        'mode': 'plus',
        'description': "Jordan identity",
    },
    'eq9': {
        'text': "{{a,b},{c,d}} = {{a,d},{b,c}}",
        'mode': 'plus',
        'description': "degree-4 identity of perm anti-commutator algebras",
    },
    'right-alt': {
        'text': "(a,b,c) + (a,c,b) = 0",
        'mode': None,
        'description': "linearized right alternativity",
    },
    'left-alt': {
        'text': "(a,b,c) + (b,a,c) = 0",
        'mode': None,
        'description': "linearized left alternativity",
    },
    'binary-perm-3': {
        'text': "(a*b)*c + (c*b)*a = (a*c)*b + (c*a)*b",
        'mode': None,
        'description': "third defining identity of binary perm algebras",
    },
    'v1': {
        'text': "(a*b)*(c*d) = -(((c*a)*d)*b) + (a*(c*d))*b + ((c*d)*a)*b",
        'mode': None,
        'description': "product of two squares",
    },
    'v2': {
        'text': "((a*b)*c)*d = ((a*c)*d)*b = ((a*d)*b)*c",
        'mode': None,
        'description': "cyclic tail in degree 4",
    },
    'v3': {
        'text': "a*((b*c)*d) = ((a*c)*b)*d",
        'mode': None,
        'description': "right factor of degree 3",
    },
    'v4': {
        'text': "(((a*b)*c)*d)*e = (((a*b)*c)*e)*d",
        'mode': None,
        'description': "last two letters commute",
    },
    'v5': {
        'text': "((a*(b*c))*d)*e = (((a*b)*c)*d)*e",
        'mode': None,
        'description': "inner square flattens in degree 5",
    },
}


def identities(name):
    """Parsed identities of a catalogue entry; chains give more than one."""
    entry = CATALOG.get(name)
    if entry is None:
        raise InputError(f"unknown identity {name!r}; known: {', '.join(sorted(CATALOG))}")
    texts = entry['text'] if isinstance(entry['text'], tuple) else (entry['text'],)
    return [f for text in texts for f in parse_identities(text, entry['mode'])]


def mode(name):
    return CATALOG[name]['mode']


def resolve_candidates(value, mode=None):
    """Comma-separated catalogue names, or a file with one identity per line."""
    if os.path.isfile(value):
        out = []
        with open(value) as fh:
            for line in fh:
                line = line.split('#', 1)[0].strip()
                if line:
                    out.extend(parse_identities(line, mode))
        return out
    out = []
    for name in (part.strip() for part in value.split(',')):
        if name:
            out.extend(identities(name))
    return out
