import importlib
import json

import pytest
from click.testing import CliRunner

from algebra.checks import SUITES
from algebra.variety import get_variety, load_registry
from cli import cli
from models import ComponentCache
from utils import cache_url_for_dir


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.mark.parametrize('variety,multidegree,dimension', [
    ('binary-perm', '1,1,1', 5),
    ('magma', '1,1,1', 12),
    ('perm', '1,1,1,1', 4),
])
def test_dim(runner, variety, multidegree, dimension):
    result = runner.invoke(cli, ['dim', variety, multidegree])
    assert result.exit_code == 0, result.stderr
    assert f"dimension {dimension} " in result.stdout


def test_dim_multilinear_and_alphabet(runner):
    result = runner.invoke(cli, ['dim', 'perm', '4', '--multilinear'])
    assert result.exit_code == 0
    assert 'dimension 4 ' in result.stdout
    result = runner.invoke(cli, ['dim', 'perm', '2', '--alphabet', '2'])
    assert result.exit_code == 0
    assert len([line for line in result.stdout.splitlines() if line.startswith('perm [')]) == 3


def test_dim_json_with_basis(runner, tmp_path):
    out = tmp_path / 'dim.jsonl'
    result = runner.invoke(cli, ['dim', 'binary-perm', '1,1,1', '--basis', '--json', str(out)])
    assert result.exit_code == 0
    (record,) = [json.loads(line) for line in out.read_text().splitlines()]
    assert record['dimension'] == 5
    assert record['rank'] == 7
    assert len(record['basis']) == 5


def test_dim_dump_writes_matrix(runner, tmp_path):
    result = runner.invoke(cli, ['dim', 'associative', '1,1,1', '--dump', str(tmp_path)])
    assert result.exit_code == 0
    (path,) = list(tmp_path.iterdir())
    assert path.read_text().startswith('%%exact-rational\n6 12 ')


def test_check_pass_and_fail(runner):
    result = runner.invoke(cli, ['check', 'binary-perm', '((a*b)*c)*d = ((a*d)*b)*c'])
    assert result.exit_code == 0
    assert result.stdout.startswith('pass')
    result = runner.invoke(cli, ['check', 'binary-perm',
                                 '(a*b)*(c*d) = -(((c*a)*d)*b) + (a*(c*d))*b + ((c*d)*a)*b'])
    assert result.exit_code == 0
    result = runner.invoke(cli, ['check', 'magma', 'a*b = b*a'])
    assert result.exit_code == 1
    assert 'residue' in result.stdout


def test_check_linearizes_repeated_variables(runner):
    result = runner.invoke(cli, ['check', 'alternative', '(a,b,b) = 0'])
    assert result.exit_code == 0
    result = runner.invoke(cli, ['check', 'alternative', '(a,b,a) = 0'])
    assert result.exit_code == 0


@pytest.mark.parametrize('args', [
    ['check', 'binary-perm', 'a*b*c = 0'],
    ['dim', 'nosuch', '1,1'],
    ['dim', 'magma', '1,x'],
    ['--max-degree', '3', 'dim', 'magma', '4', '--multilinear'],
    ['repro', 'nosuch'],
    ['repro'],
])
def test_usage_errors_exit_2(runner, args):
    result = runner.invoke(cli, args)
    assert result.exit_code == 2
    assert result.stderr.startswith('error:')


def test_repro_lists_suites(runner):
    result = runner.invoke(cli, ['repro', 'nosuch'])
    assert 'paper-sec2' in result.stderr


def test_derived_kernel_report(runner, tmp_path):
    out = tmp_path / 'kernel.jsonl'
    result = runner.invoke(cli, ['derived', 'binary-perm', 'minus', '3', '--json', str(out)])
    assert result.exit_code == 0
    assert 'kernel dimension 9 of 12' in result.stdout
    record = json.loads(out.read_text())
    assert record['kernel_dimension'] == 9
    assert len(record['kernel']) == 9


def test_derived_generation(runner):
    result = runner.invoke(cli, ['derived', 'nap', 'minus', '4', '--candidates', 'anticom'])
    assert result.exit_code == 0
    assert 'generates: true' in result.stdout
    result = runner.invoke(cli, ['derived', 'binary-perm', 'minus', '4', '--candidates', 'anticom'])
    assert result.exit_code == 1
    assert 'generates: false' in result.stdout


def test_derived_candidates_file(runner, tmp_path):
    path = tmp_path / 'candidates.txt'
    path.write_text('# anti-commutativity\n[a,b] = -[b,a]\n')
    result = runner.invoke(cli, ['derived', 'nap', 'minus', '3', '--candidates', str(path)])
    assert result.exit_code == 0


def test_extra_registry(runner, tmp_path):
    path = tmp_path / 'extra.var'
    path.write_text('variety comm-assoc {\n    a*b = b*a;\n    (a,b,c) = 0;\n}\n')
    result = runner.invoke(cli, ['--registry', str(path), 'dim', 'comm-assoc', '1,1,1'])
    assert result.exit_code == 0
    assert 'dimension 1 ' in result.stdout


def test_cache_is_transparent(runner, tmp_path):
    args = ['--cache', str(tmp_path / 'cache'), 'dim', 'binary-perm', '1,1,1', '--basis']
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == second.exit_code == 0
    assert first.stdout == second.stdout
    assert (tmp_path / 'cache' / 'components.db').exists()


def test_thread_count_does_not_change_reports(runner, tmp_path):
    outputs = []
    for threads in ('1', '4'):
        out = tmp_path / f"threads{threads}.jsonl"
        result = runner.invoke(cli, ['--threads', threads, '--max-degree', '4',
                                     'repro', 'paper-sec4', '--json', str(out)])
        assert result.exit_code == 0, result.stdout
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_methods_give_the_same_component(runner):
    field = runner.invoke(cli, ['dim', 'binary-perm', '2,1,1', '--basis'])
    fraction_free = runner.invoke(cli, ['--method', 'fraction-free', 'dim', 'binary-perm', '2,1,1', '--basis'])
    assert field.exit_code == fraction_free.exit_code == 0
    assert field.stdout == fraction_free.stdout
    assert runner.invoke(cli, ['--method', 'gauss', 'dim', 'magma', '1,1']).exit_code == 2


def test_derived_lists_identities_left_out(runner, tmp_path):
    out = tmp_path / 'gap.jsonl'
    result = runner.invoke(cli, ['derived', 'binary-perm', 'minus', '4',
                                 '--candidates', 'anticom,c1,c2', '--json', str(out)])
    assert result.exit_code == 1
    assert 'gap 3' in result.stdout
    assert result.stdout.count('not generated: ') == 3
    record = json.loads(out.read_text())
    assert record['contained'] and record['gap'] == 3
    assert len(record['extra']) == 3


class _FinishedJob:
    is_finished = True
    is_failed = False

    def __init__(self, value):
        self.value = value

    def refresh(self):
        pass

    def return_value(self):
        return self.value


class _InlineQueue:
    """Runs each job as soon as it is enqueued."""

    def __init__(self):
        self.calls = []

    def enqueue(self, path, *args, **kwargs):
        self.calls.append((path, args))
        module, _, name = path.rpartition('.')
        return _FinishedJob(getattr(importlib.import_module(module), name)(*args))


def test_queued_repro_carries_registry_and_cache(runner, tmp_path, monkeypatch):
    extra = tmp_path / 'extra.var'
    extra.write_text('variety comm-assoc {\n    a*b = b*a;\n    (a,b,c) = 0;\n}\n')
    queue = _InlineQueue()
    monkeypatch.setenv('REDIS_URL', 'redis://localhost:6379')
    monkeypatch.setattr('cli.checks_queue', lambda url: queue)
    cache = tmp_path / 'cache'
    result = runner.invoke(cli, ['--registry', str(extra), '--cache', str(cache), '--max-degree', '3',
                                 'repro', 'paper-sec4', '--queue'])
    assert result.exit_code == 0, result.stdout
    assert len(queue.calls) == len(SUITES['paper-sec4'])
    path, (suite, _, options) = queue.calls[0]
    assert (path, suite) == ('algebra.worker.run_check', 'paper-sec4')
    assert options['registry'] == [str(extra)]
    assert options['cache_url'] == cache_url_for_dir(str(cache))
    assert options['method'] == 'field'
    nap = get_variety('nap', load_registry())
    assert ComponentCache(options['cache_url']).get(nap, (1, 1, 1)).dimension == 9
