"""Proof kernel, program extractor and state-monad evaluator for Hoare-style
logics with abstract state."""

__version__ = "0.1.0"
