import json
import logging
from datetime import datetime

from sqlalchemy import Column, DateTime, Integer, String, Text, UniqueConstraint, create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from algebra import ENGINE_VERSION
from algebra.core import format_multidegree, render
from algebra.variety import ComponentReport
from utils import normalize_database_url, variety_hash

logger = logging.getLogger('nas.cache')

Base = declarative_base()


class ComponentRecord(Base):
    """Dimension report of one component of one variety"""
    __tablename__ = 'component_reports'

    id = Column(Integer, primary_key=True)
    engine_version = Column(String(20), nullable=False)
    variety_name = Column(String(100), nullable=False)
    variety_hash = Column(String(64), nullable=False)
    multidegree = Column(String(100), nullable=False)  # "1,1,1"
    total = Column(Integer, nullable=False)
    rank = Column(Integer, nullable=False)
    dimension = Column(Integer, nullable=False)
    basis = Column(Text)  # JSON array of rendered monomials, or null
    created_at = Column(DateTime, default=datetime.utcnow)

    __table_args__ = (UniqueConstraint('engine_version', 'variety_hash', 'multidegree',
                                       name='_engine_variety_multidegree_uc'),)


def init_cache(url):
    """Create the schema and return a session factory."""
    engine = create_engine(normalize_database_url(url))
    Base.metadata.create_all(engine)
    return sessionmaker(bind=engine)


class ComponentCache:
    """Component reports keyed by (engine version, variety hash, multidegree)."""

    def __init__(self, url):
        self.url = url
        self.Session = init_cache(url)

    def get(self, variety, d):
        with self.Session() as session:
            record = session.query(ComponentRecord).filter_by(
                engine_version=ENGINE_VERSION,
                variety_hash=variety_hash(variety),
                multidegree=format_multidegree(d),
            ).first()
            if record is None:
                return None
            try:
                basis = json.loads(record.basis) if record.basis else None
            except ValueError:
                logger.warning('Corrupt basis in cached record %s; recomputing', record.id)
                return None
            return ComponentReport(variety.name, tuple(d), record.total, record.rank,
                                   record.dimension, basis)

    def put(self, variety, report):
        basis = None
        if report.basis is not None:
            basis = json.dumps([m if isinstance(m, str) else render(m) for m in report.basis])
        with self.Session() as session:
            exists = session.query(ComponentRecord).filter_by(
                engine_version=ENGINE_VERSION,
                variety_hash=variety_hash(variety),
                multidegree=format_multidegree(report.multidegree),
            ).first()
            if exists:
                if exists.basis is None and basis is not None:
                    exists.basis = basis
                    session.commit()
                return
            session.add(ComponentRecord(
                engine_version=ENGINE_VERSION,
                variety_name=variety.name,
                variety_hash=variety_hash(variety),
                multidegree=format_multidegree(report.multidegree),
                total=report.total,
                rank=report.rank,
                dimension=report.dimension,
                basis=basis,
            ))
            session.commit()

    def purge_stale(self):
        """Delete records written by other engine versions; returns the count."""
        with self.Session() as session:
            count = session.query(ComponentRecord).filter(
                ComponentRecord.engine_version != ENGINE_VERSION).delete()
            session.commit()
        logger.info('Purged %d stale component records', count)
        return count
