"""Exact verification tools for exponential transcendence and power Schanuel
inequalities: linear dimension over subfields, the descent chain,
multiplicative independence, truncated exponential series and the
relation-search based checks built on them."""

__version__ = "0.1.0"
