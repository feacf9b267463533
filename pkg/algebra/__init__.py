"""Exact computations in free algebras of nonassociative varieties."""

ENGINE_VERSION = '1.0.0'
