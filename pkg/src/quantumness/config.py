"""Numerical knobs shared across modules."""
import os

HERMITICITY_TOL = 1e-10
PSD_TOL = 1e-9
DENSE_CROSSOVER = 1024
DEFAULT_DIM_CAP = 2**14

DIM_CAP_ENV = "QUANTUMNESS_DIM_CAP"


def dim_cap():
    """Maximum Hilbert-space dimension, overridable through ``QUANTUMNESS_DIM_CAP``."""
    raw = os.environ.get(DIM_CAP_ENV)
    if raw:
        return int(raw)
    return DEFAULT_DIM_CAP


REGISTER_CAP_ENV = "QUANTUMNESS_REGISTER_CAP"
# permutation traces allocate vectors (not matrices) of length d**l
DEFAULT_REGISTER_CAP = 2**24


def register_cap():
    raw = os.environ.get(REGISTER_CAP_ENV)
    if raw:
        return int(raw)
    return DEFAULT_REGISTER_CAP
