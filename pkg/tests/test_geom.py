import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from flatfront.errors import (
    ContactSpanDegenerate,
    DegenerateConfiguration,
    NotCollinear,
    SignatureMismatch,
)
from flatfront.geom import (
    ETA42,
    AmbientSplit,
    ContactElement,
    Signature,
    SigVec,
    SkewEndo,
    basis,
    check_contact,
    cross_ratio,
    dot,
    embed,
    inner,
    is_skew,
    wedge_apply,
    wedge_matrix,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
vec6 = arrays(np.float64, 6, elements=finite)
scalar = st.floats(-5, 5, allow_nan=False)
nonzero = st.floats(0.1, 5) | st.floats(-5, -0.1)


@given(vec6, vec6, vec6, scalar)
def test_inner_symmetric_bilinear(x, y, z, a):
    assert np.isclose(dot(x, y), dot(y, x))
    assert np.isclose(dot(a * x + z, y), a * dot(x, y) + dot(z, y), atol=1e-9)


@given(vec6, vec6, vec6)
def test_wedge_is_skew(a, b, z):
    m = wedge_matrix(a, b)
    assert is_skew(m, atol=1e-9)
    # (a^b) z = <a, z> b - <b, z> a
    assert np.allclose(m @ z, dot(a, z) * b - dot(b, z) * a, atol=1e-9)
    assert np.isclose(dot(m @ z, z), 0.0, atol=1e-8 * (1 + np.abs(z).max()) ** 2
                      * (1 + np.abs(a).max() * np.abs(b).max()))


def test_signatures_and_basis():
    assert np.allclose(ETA42, np.diag([-1, 1, -1, 1, 1, 1]))
    b = basis()
    assert inner(b["p"], b["p"]) == -1 and inner(b["q"], b["q"]) == 1
    assert inner(b["y0"], b["y0"]) == -1
    f = SigVec([1.0, 0, 0, 0], Signature.R31)
    assert inner(f, f) == -1
    assert np.allclose(f.embed().coords, [0, 0, 1, 0, 0, 0])
    assert np.allclose(embed(np.array([1.0, 2.0]), Signature.R11), [1, 2, 0, 0, 0, 0])
    with pytest.raises(SignatureMismatch):
        inner(f, b["p"])
    with pytest.raises(ValueError):
        SigVec([1.0, 2.0])


def test_split_and_contact():
    split = AmbientSplit.standard()
    assert np.isclose(inner(split.qplus, split.qminus), -2.0)
    assert inner(split.qplus, split.qplus) == 0.0
    again = AmbientSplit.from_null_pair(split.qplus, split.qminus)
    assert again.p.allclose(split.p) and again.q.allclose(split.q)
    with pytest.raises(ContactSpanDegenerate):
        AmbientSplit.from_null_pair(split.qplus, 2.0 * split.qplus)
    ce = ContactElement(SigVec([0, 1, 1, 0, 0, 0.0]), SigVec([1, 0, 0, 0, 0, 1.0]))
    assert ce.nullity_defect() == 0.0
    assert check_contact(split.qplus, SigVec([1, 1, 1, 1, 0, 0.0])) == 0.0


def test_skew_endo_matches_matrix():
    a, b = SigVec([1, 2, 0, 1, 0, 3.0]), SigVec([0, 1, 1, 0, 2, 0.0])
    e = SkewEndo(a, b)
    z = SigVec([1, 1, 1, 1, 1, 1.0])
    assert np.allclose(wedge_apply(e, z).coords, e.matrix() @ z.coords)


def _line_point(a, b, x, y):
    return SigVec(x * a.coords + y * b.coords)


@settings(max_examples=60)
@given(vec6, vec6, nonzero, nonzero, nonzero, nonzero, nonzero, nonzero, nonzero, nonzero)
def test_cross_ratio_projective_invariance(a, b, al, be, ga, de, k1, k2, k3, k4):
    # keep a and b well separated so the line is well defined
    if np.linalg.svd(np.column_stack([a, b]), compute_uv=False)[-1] < 0.5:
        return
    A, B = SigVec(a), SigVec(b)
    C, D = _line_point(A, B, al, be), _line_point(A, B, ga, de)
    x = cross_ratio(A, B, C, D)
    assert np.isclose(x, (be / al) * (ga / de), rtol=1e-7)
    y = cross_ratio(A * k1, B * k2, C * k3, D * k4)
    assert np.isclose(x, y, rtol=1e-7)
    # swapping the last two points inverts it
    assert np.isclose(cross_ratio(A, B, D, C), 1.0 / x, rtol=1e-7)


def test_cross_ratio_harmonic_and_errors():
    a, b = SigVec([1, 0, 2, 0, 0, 1.0]), SigVec([0, 1, 0, 1, 3, 0.0])
    assert np.isclose(cross_ratio(a, b, a + b, a - b), -1.0)
    with pytest.raises(NotCollinear):
        cross_ratio(a, b, a + b, SigVec([0, 0, 0, 0, 0, 1.0]))
    with pytest.raises(DegenerateConfiguration):
        cross_ratio(a, 2.0 * a, a + b, a - b)
    with pytest.raises(DegenerateConfiguration):
        cross_ratio(a, b, b, a - b)
