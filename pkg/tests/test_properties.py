import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from inclusion_forge import ConformalMap, InterfaceFunction, MaterialParams
from inclusion_forge.faber import faber_table
from inclusion_forge.interface import build_interface_matrices
from inclusion_forge.tensors import (
    assemble_system,
    compute_tensors,
    disk_gpt_closed_form,
    flux_residual,
    interface_residual,
    solve_coefficients,
)
from test_faber import grunsky_fft

SETTINGS = settings(max_examples=int(__import__("os").environ.get("PROP_EXAMPLES", 25)), deadline=None)
real = st.floats(-1.0, 1.0)
cplx = st.builds(complex, real, real)
gammas = st.floats(0.5, 2.0)


@st.composite
def maps(draw):
    # |a_k| <= 0.15 / k keeps Psi injective on |w| > gamma
    g = draw(gammas)
    k = draw(st.integers(1, 4))
    a = [draw(cplx) * 0.15 / j * g ** (j + 1) for j in range(1, k + 1)]
    return ConformalMap(g, [draw(cplx) * 0.2] + a)


@st.composite
def interfaces(draw, gamma=1.0):
    p0 = draw(st.floats(0.5, 3.0))
    rest = draw(st.lists(cplx, min_size=0, max_size=4))
    return InterfaceFunction(gamma, [p0] + [0.2 * c for c in rest])


@SETTINGS
@given(gammas, st.floats(-3, 3), st.lists(cplx, max_size=5))
def test_reconstruction_real(g, p0, rest):
    ifn = InterfaceFunction(g, [p0] + rest)
    w = g * np.exp(2j * np.pi * np.arange(512) / 512)
    v = ifn.weighted_values(w)
    assert np.abs(v.imag).max() <= 1e-12 * max(np.abs(v).max(), 1.0)


@SETTINGS
@given(gammas, st.floats(-3, 3), st.lists(cplx, max_size=6), st.integers(2, 12))
def test_interface_matrix_structure(g, p0, rest, N):
    mats = build_interface_matrices(InterfaceFunction(g, [p0] + rest), N)
    Pp, Pm = mats.P_plus, mats.P_minus
    assert np.allclose(Pp[:-1, 1:], Pp[1:, :-1])
    assert np.allclose(Pm[1:, 1:], Pm[:-1, :-1])
    assert np.allclose(Pm, Pm.conj().T)


@SETTINGS
@given(maps())
def test_grunsky_properties(m):
    tab = faber_table(m, 12)
    Q = tab.Q1
    assert np.allclose(np.triu(Q, 1), 0) and np.allclose(np.diag(Q), 1)
    C = tab.C
    k = np.arange(1, 13)
    scale = m.gamma ** (k[:, None] + k[None, :]).astype(float)
    assert np.allclose((C * k[None, :]) / scale, (C * k[None, :]).T / scale, atol=1e-12)
    assert np.all(np.abs(C) <= 2 * k[:, None] * scale)
    assert np.abs(C / scale - grunsky_fft(m, 12, n_fft=1024) / scale).max() <= 1e-10


@SETTINGS
@given(st.floats(0.1, 100), gammas, st.floats(-3, 3))
def test_disk_pipeline_matches_closed_form(sc, g, p0):
    assume(abs(sc - 1) > 1e-2)
    mat = MaterialParams(sc, 1.0)
    # every order of the truncated system must stay away from a pole
    n = np.arange(1, 101)
    den = (sc + 1) * p0 + sc * n
    assume(np.abs(den).min() > 1e-2 * (abs(p0) + sc))
    ts = compute_tensors(ConformalMap.disk(g), InterfaceFunction(g, [p0]), mat, 100, 10)
    N1, N2 = disk_gpt_closed_form(mat, g, p0, 10)
    scale = np.abs(N2).max()
    assert np.abs(ts.N1).max() <= 1e-10 * scale
    assert np.abs(ts.N2 - N2).max() <= 1e-10 * scale


@SETTINGS
@given(maps(), interfaces(), st.floats(2.0, 50.0), cplx, cplx, st.floats(-3, 3),
       st.sampled_from(["reduced", "full"]))
def test_solution_real_linear_in_alpha(m, ifn0, sc, a, b, t, model):
    assume(abs(a) > 1e-3 and abs(b) > 1e-3)
    ifn = InterfaceFunction(m.gamma, ifn0.p_coeffs)
    mat = MaterialParams(sc, 1.0)
    fab = faber_table(m, 40)
    sys = assemble_system(m, fab, build_interface_matrices(ifn, 40), mat, model=model)
    sa = solve_coefficients(sys, fab, mat, [a])
    sb = solve_coefficients(sys, fab, mat, [b])
    sab = solve_coefficients(sys, fab, mat, [t * a + b])
    scale = max(np.abs(sa.s).max(), np.abs(sb.s).max(), 1.0)
    assert np.abs(sab.s - (t * sa.s + sb.s)).max() <= 1e-8 * scale * (1 + abs(t))
    assert np.abs(sab.const - (t * sa.const + sb.const)).max() <= 1e-8 * scale * (1 + abs(t))
    # both matrix relations hold for every solve
    tol = 1e-9 * abs(a) * max(np.abs(M).max() for M in (sys.A1, sys.A2, sys.B1, sys.B2))
    assert interface_residual(sys, sa) <= tol
    assert flux_residual(sa, mat) <= tol
