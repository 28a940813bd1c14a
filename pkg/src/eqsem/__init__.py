"""Typed first-order equation systems over algebraic data, evaluated by
parallel one-step reduction under a choice of core type."""
