"""Numerical laboratory for floor-log identities and prime counting estimators."""
