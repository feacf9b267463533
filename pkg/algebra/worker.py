import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

# Make root-level modules (models, utils) importable when run as a worker
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from .checks import DEFAULT_MAX_DEGREE, DEFAULT_SEED, CheckContext, find_check  # noqa: E402
from .linalg import FIELD  # noqa: E402
from .messages import render  # noqa: E402
from .variety import load_registry  # noqa: E402

logger = logging.getLogger('nas.worker')

QUEUE_NAME = 'checks'


@dataclass
class CheckResult:
    suite: str
    name: str
    kind: str
    description: str
    status: str  # pass | fail | error
    details: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self):
        return self.status == 'pass'


def execute(spec, ctx):
    """Run one check; exceptions become an 'error' result."""
    logger.info('Running %s/%s', spec.suite, spec.name)
    started = time.perf_counter()
    try:
        outcome = spec.run(ctx)
    except Exception as exc:
        logger.error('Check %s/%s raised', spec.suite, spec.name, exc_info=True)
        return CheckResult(spec.suite, spec.name, spec.kind, spec.description, 'error',
                           {'error': type(exc).__name__},
                           [render('check_error', error=f"{type(exc).__name__}: {exc}")],
                           time.perf_counter() - started)
    status = 'pass' if outcome.passed else 'fail'
    elapsed = time.perf_counter() - started
    logger.info('Check %s/%s: %s (%.2fs)', spec.suite, spec.name, status, elapsed)
    return CheckResult(spec.suite, spec.name, spec.kind, spec.description, status,
                       outcome.details, outcome.notes, elapsed)


def context_from_options(options):
    """CheckContext for a job: registry files, cache URL and engine settings travel as plain values."""
    cache = None
    if options.get('cache_url'):
        from models import ComponentCache
        cache = ComponentCache(options['cache_url'])
    return CheckContext(load_registry(options.get('registry', ())),
                        threads=options.get('threads', 1),
                        max_degree=options.get('max_degree', DEFAULT_MAX_DEGREE),
                        seed=options.get('seed', DEFAULT_SEED),
                        cache=cache,
                        method=options.get('method', FIELD))


def run_check(suite, name, options=None):
    """
    Background job for one check.
    Called by RQ with plain arguments; builds its own engines.
    """
    ctx = context_from_options(options or {})
    return execute(find_check(suite, name), ctx)


def run_suite(specs, ctx, threads=1):
    """Run checks, in parallel when threads > 1; results keep suite order."""
    if threads > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda spec: execute(spec, ctx), specs))
    return [execute(spec, ctx) for spec in specs]


def checks_queue(redis_url):
    import redis
    from rq import Queue

    return Queue(QUEUE_NAME, connection=redis.from_url(redis_url))


def enqueue_suite(specs, queue, options, timeout=3600, poll=1.0):
    """Dispatch checks to the queue and wait for them in suite order."""
    jobs = [queue.enqueue('algebra.worker.run_check', spec.suite, spec.name, options,
                          job_timeout=timeout) for spec in specs]
    logger.info('Enqueued %d checks on %s', len(jobs), QUEUE_NAME)
    results = []
    for spec, job in zip(specs, jobs):
        while not (job.is_finished or job.is_failed):
            time.sleep(poll)
            job.refresh()
        if job.is_failed:
            logger.error('Job for %s/%s failed', spec.suite, spec.name)
            results.append(CheckResult(spec.suite, spec.name, spec.kind, spec.description,
                                       'error', {'error': 'job failed'},
                                       [render('check_error', error='job failed')]))
        else:
            results.append(job.return_value())
    return results
