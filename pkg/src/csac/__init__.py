"""Slice-aware cell-free mMIMO downlink control with a distributed
stochastic actor-critic learner under percentile latency SLAs."""

__version__ = "0.1.0"
