"""Toolkit for HOL Light S-expression corpora: masked-prediction training
data (skip-tree and skip-sequence), logical-reasoning evaluation tasks, and
scoring of model predictions (exact match, parse, typecheck, novelty)."""

__version__ = "0.1.0"
