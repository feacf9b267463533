import hashlib
import os


def variety_hash(variety):
    """Hex SHA256 of the canonical rendering of a variety's identity set."""
    return hashlib.sha256(variety.canonical_text().encode('utf-8')).hexdigest()


def normalize_database_url(url):
    """Fix postgres:// to postgresql:// for SQLAlchemy."""
    if url and url.startswith('postgres://'):
        return url.replace('postgres://', 'postgresql://', 1)
    return url


def cache_url_for_dir(directory):
    """SQLite cache file inside directory, created if missing."""
    os.makedirs(directory, exist_ok=True)
    return f"sqlite:///{os.path.join(os.path.abspath(directory), 'components.db')}"
