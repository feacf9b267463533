import json

import pytest

from algebra import ENGINE_VERSION
from algebra.catalog import CATALOG, identities, resolve_candidates
from algebra.checks import SUITES, CheckContext, CheckOutcome, cn_words, find_check, get_suite
from algebra.errors import InputError
from algebra.messages import MESSAGES, fails, render
from algebra.report import RunReport, component_record
from algebra.variety import get_variety, load_registry
from algebra.worker import CheckResult, execute, run_check, run_suite
from models import ComponentCache
from utils import cache_url_for_dir, normalize_database_url, variety_hash


def test_every_message_renders_its_example():
    for key, entry in MESSAGES.items():
        text = render(key, **entry['example_context'])
        assert '{' not in text, key
        assert entry['severity'] in ('fail', 'note'), key


def test_message_fallbacks():
    assert render('nosuch') == 'Unknown message: nosuch'
    text = render('dimension_mismatch', variety='perm')
    assert text.startswith('dim {variety}')
    assert "variety='perm'" in text


def test_catalog_entries_parse():
    for name in CATALOG:
        assert identities(name), name
    assert len(identities('v2')) == 2
    assert len(identities('metabelian')) == 2
    with pytest.raises(InputError):
        identities('nosuch')


def test_resolve_candidate_names():
    assert len(resolve_candidates('anticom, c1,c2', 'minus')) == 3


def test_suites_are_registered():
    assert list(SUITES) == ['paper-sec2', 'paper-sec3', 'paper-sec4']
    assert find_check('paper-sec4', 'nap-minus').kind == 'generates'
    with pytest.raises(InputError):
        get_suite('nosuch')
    with pytest.raises(InputError):
        find_check('paper-sec2', 'nosuch')


def test_cn_words():
    assert cn_words((1, 1, 1), 'i1<i2<=...<=in') == [((1, 2), 3)]
    assert set(cn_words((1, 1, 1), 'i1>i2<=...<=in')) == {((2, 1), 3), ((3, 1), 2)}
    assert cn_words((2, 1), 'i1<i2<=...<=in') == []
    assert cn_words((2, 1), 'i1>i2<=...<=in') == [((2, 1), 1)]


def _result(name, status, details=None, seconds=0.0):
    return CheckResult('paper-sec4', name, 'dimension', 'a check', status, details or {}, [], seconds)


def test_run_report_records_skip_timings():
    fast = RunReport([_result('a', 'pass', {'3': 9}, 0.1), _result('b', 'fail', {}, 0.2)])
    slow = RunReport([_result('a', 'pass', {'3': 9}, 5.0), _result('b', 'fail', {}, 7.0)])
    assert fast.to_jsonl() == slow.to_jsonl()
    first = json.loads(fast.to_jsonl().splitlines()[0])
    assert first == {'engine_version': ENGINE_VERSION, 'suite': 'paper-sec4', 'check': 'a',
                     'kind': 'dimension', 'status': 'pass', 'details': {'3': 9}}
    assert fast.exit_code == 1
    assert '1 of 2 checks failed' in fast.to_text()


def test_run_report_all_passed():
    report = RunReport([_result('a', 'pass')], statistics={'nap': 3})
    assert report.exit_code == 0
    text = report.to_text()
    assert text.startswith('== paper-sec4\n')
    assert 'all 1 checks passed' in text
    assert 'components built: nap 3' in text


def test_execute_turns_exceptions_into_errors():
    def broken(ctx):
        raise ValueError('boom')

    spec = find_check('paper-sec4', 'nap-minus')
    spec = type(spec)(spec.suite, 'broken', spec.kind, spec.description, broken)
    result = execute(spec, CheckContext())
    assert result.status == 'error'
    assert result.details == {'error': 'ValueError'}
    assert 'boom' in result.notes[0]


def test_light_checks_pass():
    ctx = CheckContext(max_degree=4)
    specs = [find_check('paper-sec4', 'good-word-counts'), find_check('paper-sec3', 'no-degree-3'),
             find_check('paper-sec2', 'b3-dimensions')]
    results = run_suite(specs, ctx, threads=2)
    assert [r.name for r in results] == ['good-word-counts', 'no-degree-3', 'b3-dimensions']
    assert all(r.passed for r in results), [r.notes for r in results]
    assert ctx.statistics()['binary-perm'] >= 1


def test_check_outcome_defaults_are_fresh():
    a, b = CheckOutcome(True), CheckOutcome(True)
    a.notes.append('x')
    assert b.notes == []


def test_component_cache_round_trip(tmp_path, engines):
    cache = ComponentCache(cache_url_for_dir(str(tmp_path)))
    engine = engines('binary-perm')
    report = engine.dimension((1, 1, 1), with_basis=True)
    assert cache.get(engine.variety, (1, 1, 1)) is None
    cache.put(engine.variety, report)
    cache.put(engine.variety, report)
    cached = cache.get(engine.variety, (1, 1, 1))
    assert component_record(cached) == component_record(report)
    assert cache.get(engines('perm').variety, (1, 1, 1)) is None
    assert cache.purge_stale() == 0


def test_variety_hash_ignores_identity_order(registry):
    perm = get_variety('perm', registry)
    reordered = type(perm).from_identities('other', tuple(reversed(perm.source)))
    assert variety_hash(perm) == variety_hash(reordered)
    assert variety_hash(perm) != variety_hash(get_variety('nap', registry))


def test_normalize_database_url():
    assert normalize_database_url('postgres://u@h/db') == 'postgresql://u@h/db'
    assert normalize_database_url('sqlite:///x.db') == 'sqlite:///x.db'


def test_report_fails_only_on_failing_messages():
    out = CheckOutcome(True)
    out.report('cn_resolution', condition='i1>i2<=...<=in')
    assert out.passed
    out.report('cn_unresolved', matches=2)
    assert not out.passed
    assert out.notes == ['matching condition: i1>i2<=...<=in',
                         '2 candidate conditions match the computed dimensions']
    assert fails('some_failed') and not fails('known_gap') and not fails('nosuch')


def test_generation_records_the_degree_four_shortfall():
    ctx = CheckContext(max_degree=4)
    result = execute(find_check('paper-sec3', 'generation'), ctx)
    assert result.passed, result.notes
    row = result.details['4']
    assert (row['kernel'], row['consequences'], row['generates']) == (116, 113, False)
    assert row['kernel'] - row['consequences'] == 3
    assert len(row['extra']) == 3
    assert result.notes[0] == 'anticom,c1,c2 leave 3 kernel identities at 1,1,1,1, as recorded'
    assert result.notes[1:] == [f"  {text} = 0" for text in row['extra']]
    gap = execute(find_check('paper-sec3', 'anticom-gap-4'), ctx)
    assert gap.passed, gap.notes
    assert gap.details['4']['kernel'] - gap.details['4']['consequences'] == 11


def test_leading_word_collisions_are_reported():
    result = execute(find_check('paper-sec4', 'leading-words'), CheckContext(max_degree=4))
    assert result.details['right-deg-lex'] == {'leading': True, 'distinct': True}
    for order, row in result.details.items():
        collide = [n for n in result.notes if n.startswith(f"{order} good words at ")]
        assert len(collide) == (0 if row['distinct'] else 1)
        if collide:
            assert collide[0].endswith('share a leading word')


def test_queued_job_rebuilds_registry_and_cache(tmp_path):
    extra = tmp_path / 'assoc.var'
    extra.write_text('variety binary-perm {\n    (a,b,c) = 0;\n}\n')
    url = cache_url_for_dir(str(tmp_path / 'cache'))
    options = {'registry': [str(extra)], 'cache_url': url, 'max_degree': 4, 'method': 'fraction-free'}
    result = run_check('paper-sec2', 'b3-dimensions', options)
    assert result.status == 'fail'
    assert result.details['1,1,1'] == 6
    replaced = get_variety('binary-perm', load_registry([str(extra)]))
    assert ComponentCache(url).get(replaced, (1, 1, 1)).dimension == 6
    default = run_check('paper-sec2', 'b3-dimensions', {'max_degree': 4})
    assert default.passed
    assert default.details['1,1,1'] == 5
