import functools
import logging
import os
import sys

import click
from dotenv import load_dotenv

from algebra.catalog import resolve_candidates
from algebra.checks import DEFAULT_MAX_DEGREE, DEFAULT_SEED, SUITES, CheckContext, get_suite
from algebra.core import Sign, format_multidegree, multidegrees_of_degree, multilinear, parse_multidegree
from algebra.derived import derived_kernel, generates_all, linearize, render_bracket_polynomial
from algebra.errors import BasisError, DegreeGuardError, InputError, ParseError, RegistryError
from algebra.linalg import FIELD, METHODS, dump_matrix, echelon_matrix
from algebra.parser import parse_identities
from algebra.report import RunReport, component_record, component_text
from algebra.variety import VarietyEngine, get_variety, load_registry
from algebra.worker import checks_queue, enqueue_suite, run_suite

load_dotenv()

logging.basicConfig(
    level=os.environ.get('NAS_LOG_LEVEL', 'INFO').upper(),
    format='%(asctime)s [%(levelname)s] %(name)s: %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)
logger = logging.getLogger('nas.cli')

USAGE_ERRORS = (ParseError, RegistryError, InputError, DegreeGuardError, BasisError)


def guarded(fn):
    """Map library errors to exit code 2."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except USAGE_ERRORS as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
    return wrapper


class Settings:
    """Options shared by all commands; flags override the environment."""

    def __init__(self, registry, threads, max_degree, cache, method=FIELD):
        self.registry_paths = [os.path.abspath(path) for path in registry]
        self.threads = threads
        self.method = method
        self.max_degree = max_degree if max_degree is not None else int(
            os.environ.get('NAS_MAX_DEGREE', DEFAULT_MAX_DEGREE))
        if self.max_degree > DEFAULT_MAX_DEGREE:
            logger.warning('Degree guard raised to %d; degree 7 components have 665,280 monomials',
                           self.max_degree)
        self.cache_url = None
        if cache:
            from utils import cache_url_for_dir
            self.cache_url = cache_url_for_dir(cache)
        elif os.environ.get('NAS_CACHE_URL'):
            self.cache_url = os.environ['NAS_CACHE_URL']
        self._cache = None

    def registry(self):
        return load_registry(self.registry_paths)

    def cache(self):
        if self.cache_url and self._cache is None:
            from models import ComponentCache
            self._cache = ComponentCache(self.cache_url)
        return self._cache

    def engine(self, name):
        return VarietyEngine(get_variety(name, self.registry()), self.threads, self.method)

    def job_options(self, seed):
        """Plain values a queued check needs to rebuild this context."""
        return {'threads': self.threads, 'max_degree': self.max_degree, 'seed': seed,
                'method': self.method, 'registry': list(self.registry_paths),
                'cache_url': self.cache_url}

    def guard(self, degree):
        if degree > self.max_degree:
            raise DegreeGuardError(f"degree {degree} exceeds --max-degree {self.max_degree}")


def _emit(records, json_path):
    if not json_path:
        return
    import json
    with open(json_path, 'w') as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + '\n')


@click.group()
@click.option('--registry', multiple=True, type=click.Path(exists=True, dir_okay=False),
              help='Extra variety file; later files override earlier definitions.')
@click.option('--threads', default=1, show_default=True, type=click.IntRange(min=1))
@click.option('--max-degree', type=int, default=None, help='Degree guard (default 6 or NAS_MAX_DEGREE).')
@click.option('--cache', type=click.Path(file_okay=False), default=None,
              help='Directory for the component cache.')
@click.option('--method', type=click.Choice(METHODS), default=FIELD, show_default=True,
              envvar='NAS_METHOD', help='Elimination over QQ, or fraction-free over ZZ.')
@click.pass_context
def cli(ctx, registry, threads, max_degree, cache, method):
    """Free algebras of nonassociative varieties, in exact arithmetic."""
    ctx.obj = Settings(registry, threads, max_degree, cache, method)


@cli.command()
@click.argument('variety')
@click.argument('multidegree')
@click.option('--multilinear', 'is_multilinear', is_flag=True, help='MULTIDEGREE is a degree n, meaning 1,...,1.')
@click.option('--alphabet', type=click.IntRange(min=1), default=None,
              help='MULTIDEGREE is a degree n; report every multidegree over N letters.')
@click.option('--basis', is_flag=True, help='Include the canonical quotient basis.')
@click.option('--json', 'json_path', type=click.Path(dir_okay=False), default=None)
@click.option('--dump', type=click.Path(file_okay=False), default=None,
              help='Write the consequence echelon of each component to DIR.')
@click.pass_obj
@guarded
def dim(settings, variety, multidegree, is_multilinear, alphabet, basis, json_path, dump):
    """Dimension of a component of VARIETY's free algebra."""
    if is_multilinear or alphabet:
        try:
            n = int(multidegree)
        except ValueError:
            raise InputError(f"expected a degree, got {multidegree!r}")
        degrees = [multilinear(n)] if is_multilinear else multidegrees_of_degree(n, alphabet)
    else:
        degrees = [parse_multidegree(multidegree)]

    engine = settings.engine(variety)
    cache = settings.cache()
    reports = []
    for d in degrees:
        settings.guard(sum(d))
        report = cache.get(engine.variety, d) if cache else None
        if report is None or (basis and report.basis is None):
            report = engine.dimension(d, with_basis=basis)
            if cache:
                cache.put(engine.variety, report)
        elif not basis:
            report.basis = None
        if dump:
            os.makedirs(dump, exist_ok=True)
            path = os.path.join(dump, f"{variety}_{format_multidegree(d).replace(',', '-')}.mtx")
            with open(path, 'w') as fh:
                dump_matrix(echelon_matrix(engine.component(d).echelon), fh)
            logger.info('Wrote %s', path)
        reports.append(report)
        click.echo(component_text(report), nl=False)
    _emit([component_record(r) for r in reports], json_path)


@cli.command()
@click.argument('variety')
@click.argument('identity')
@click.option('--json', 'json_path', type=click.Path(dir_okay=False), default=None)
@click.pass_obj
@guarded
def check(settings, variety, identity, json_path):
    """Does IDENTITY follow from the identities of VARIETY?"""
    engine = settings.engine(variety)
    records = []
    holds = True
    for f in parse_identities(identity):
        pieces = [f] if f.multilinear else linearize(f)
        for piece in pieces:
            if not piece.poly:
                continue
            settings.guard(piece.degree)
            result = engine.is_consequence(piece)
            holds = holds and result.holds
            residue = result.residue.render(piece.variables)
            click.echo(f"{'pass' if result.holds else 'fail'}: {piece.render()}")
            if not result.holds:
                click.echo(f"  residue: {residue}")
            records.append({'variety': variety, 'identity': piece.render(),
                            'multidegree': format_multidegree(result.multidegree),
                            'holds': result.holds, 'residue': residue})
    _emit(records, json_path)
    sys.exit(0 if holds else 1)


@cli.command()
@click.argument('host')
@click.argument('sign', type=click.Choice([s.value for s in Sign]))
@click.argument('degree', type=click.IntRange(min=1))
@click.option('--candidates', default=None,
              help='Catalogue names separated by commas, or a file with one identity per line.')
@click.option('--json', 'json_path', type=click.Path(dir_okay=False), default=None)
@click.pass_obj
@guarded
def derived(settings, host, sign, degree, candidates, json_path):
    """Multilinear identities of HOST's commutator (minus) or anti-commutator (plus) algebra."""
    settings.guard(degree)
    engine = settings.engine(host)
    d = multilinear(degree)
    kernel = derived_kernel(engine, sign, d)
    record = {'host': host, 'sign': sign, 'degree': degree,
              'kernel_dimension': kernel.dimension, 'evaluation_rank': kernel.evaluation_rank}
    click.echo(f"{host}({sign}) degree {degree}: kernel dimension {kernel.dimension} "
               f"of {len(kernel.monomials)} bracket words")
    if not candidates:
        rendered = [render_bracket_polynomial(p, sign) for p in kernel.basis_polynomials()]
        for line in rendered:
            click.echo(f"  {line} = 0")
        record['kernel'] = rendered
        _emit([record], json_path)
        return

    report = generates_all(resolve_candidates(candidates, sign), engine, sign, d, kernel=kernel)
    click.echo(f"generates: {'true' if report.generates else 'false'} "
               f"(consequences {report.consequence_dimension}, gap {report.gap})")
    extra = [render_bracket_polynomial(p, sign) for p in report.extra]
    for line in extra:
        click.echo(f"  not generated: {line} = 0")
    record.update({'candidates': candidates, 'generates': report.generates,
                   'contained': report.contained, 'gap': report.gap, 'extra': extra})
    _emit([record], json_path)
    sys.exit(0 if report.generates else 1)


@cli.command()
@click.argument('suites', nargs=-1)
@click.option('--all', 'run_all', is_flag=True, help='Run every suite.')
@click.option('--json', 'json_path', type=click.Path(dir_okay=False), default=None)
@click.option('--queue', is_flag=True, help='Dispatch checks to the RQ queue at REDIS_URL.')
@click.option('--seed', type=int, default=None, help='Seed for sampled checks.')
@click.pass_obj
@guarded
def repro(settings, suites, run_all, json_path, queue, seed):
    """Run the named check suites and report every verdict."""
    names = list(SUITES) if run_all else list(suites)
    if not names:
        raise InputError(f"name a suite or pass --all; available: {', '.join(SUITES)}")
    specs = [spec for name in names for spec in get_suite(name)]
    seed = seed if seed is not None else int(os.environ.get('NAS_SAMPLE_SEED', DEFAULT_SEED))

    redis_url = os.environ.get('REDIS_URL')
    if queue and redis_url:
        results = enqueue_suite(specs, checks_queue(redis_url), settings.job_options(seed))
        statistics = {}
    else:
        if queue:
            logger.warning('--queue given but REDIS_URL is not set; running in-process')
        ctx = CheckContext(settings.registry(), settings.threads, settings.max_degree,
                           seed, settings.cache(), settings.method)
        results = run_suite(specs, ctx, settings.threads)
        statistics = ctx.statistics()

    report = RunReport(results, statistics=statistics)
    click.echo(report.to_text(), nl=False)
    if json_path:
        with open(json_path, 'w') as fh:
            fh.write(report.to_jsonl())
    sys.exit(report.exit_code)


if __name__ == '__main__':
    cli()
