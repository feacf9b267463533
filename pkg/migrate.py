"""
Component cache maintenance.
Creates the component_reports table and deletes records written by other engine versions.
Run after upgrading the engine.
"""
import logging
import os
import sys

from dotenv import load_dotenv

from models import ComponentCache

logging.basicConfig(level=logging.INFO, format='%(asctime)s [%(levelname)s] %(message)s')
logger = logging.getLogger('nas.migrate')

load_dotenv()


def main():
    url = os.environ.get('NAS_CACHE_URL')
    if not url:
        logger.error('NAS_CACHE_URL not set')
        logger.info('Usage: NAS_CACHE_URL=sqlite:///cache/components.db python migrate.py')
        return 1
    logger.info('Preparing component cache')
    cache = ComponentCache(url)
    removed = cache.purge_stale()
    logger.info('Cache ready (%d stale records removed)', removed)
    return 0


if __name__ == '__main__':
    sys.exit(main())
