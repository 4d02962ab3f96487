import cmath

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import settings

from ncgflow import Mat2Element, VectorField, ZnElement

# Numeric examples are cheap but machine load varies; keep hypothesis
# from flagging slow examples as failures.
settings.register_profile("ncgflow", deadline=None)
settings.load_profile("ncgflow")

# Entries stay bounded so absolute tolerances of 1e-12 are meaningful
# after a handful of products.
_coord = st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False)

complexes = st.builds(complex, _coord, _coord)


def zn_elements(n=3):
    return st.builds(ZnElement, st.lists(complexes, min_size=n, max_size=n))


def mat2_elements():
    row = st.lists(complexes, min_size=2, max_size=2)
    return st.builds(Mat2Element, st.lists(row, min_size=2, max_size=2))


def zn_vector_fields(n=3):
    return st.builds(VectorField, zn_elements(n), zn_elements(n))


def m2_vector_fields():
    return st.builds(VectorField, mat2_elements(), mat2_elements())


def zn_real_vector_fields(n=3):
    """Fields satisfying the reality condition: K_- = -R_1(K_+^*)."""
    return zn_elements(n).map(lambda kp: VectorField(kp, -(kp.star().shift(1))))


def m2_real_vector_fields():
    return mat2_elements().map(lambda k1: VectorField(k1, -k1.star()))


@pytest.fixture(scope="session")
def fig1_data():
    """The bundled Z_3 preset initial data."""
    return {
        "k_plus": [-cmath.exp(-2j), -cmath.exp(-3j), -1.0],
        "k_minus": [cmath.exp(3j), 1.0, cmath.exp(2j)],
        "m": [2.0 ** -0.5, 0.0, 2.0 ** -0.5],
    }


@pytest.fixture(scope="session")
def fig2_data():
    """The bundled M_2 preset initial data."""
    r = 6.0 ** -0.5
    return {
        "k1": np.array([[1.0, 0.0], [0.0, 2.0]], dtype=complex),
        "k2": np.array([[-1.0, 0.0], [0.0, -2.0]], dtype=complex),
        "m": np.array([[r, r], [2.0 * r, 0.0]], dtype=complex),
    }
