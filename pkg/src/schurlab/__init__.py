"""Association schemes over small abelian groups: S-rings, their enumeration and structure."""

__version__ = "0.1.0"
