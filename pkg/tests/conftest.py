"""Shared helpers: independent oracles and random-state generators.

The oracle implementations here deliberately avoid the library's code paths
(explicit index loops instead of einsum, isometry construction instead of
Choi plumbing) so that test expectations stay independent of what they check.
"""

import numpy as np
import pytest

from lrdistill import DensityMatrix


def loop_partial_trace(mat, dims, keep):
    """Partial trace by explicit index summation."""
    n = len(dims)
    keep = sorted(keep)
    t = np.asarray(mat, dtype=complex).reshape(*dims, *dims)
    kd = [dims[i] for i in keep]
    d_keep = int(np.prod(kd))
    out = np.zeros((d_keep, d_keep), dtype=complex)
    for row in np.ndindex(*dims):
        for col in np.ndindex(*dims):
            if any(row[i] != col[i] for i in range(n) if i not in keep):
                continue
            r = 0
            c = 0
            for i in keep:
                r = r * dims[i] + row[i]
                c = c * dims[i] + col[i]
            out[r, c] += t[row + col]
    return out


def loop_partial_transpose(mat, dims, subsystem):
    """Partial transpose by explicit index bookkeeping (bipartite only)."""
    d0, d1 = dims
    out = np.zeros_like(np.asarray(mat, dtype=complex))
    for a in range(d0):
        for b in range(d1):
            for c in range(d0):
                for d in range(d1):
                    if subsystem == 0:
                        out[a * d1 + b, c * d1 + d] = mat[c * d1 + b, a * d1 + d]
                    else:
                        out[a * d1 + b, c * d1 + d] = mat[a * d1 + d, c * d1 + b]
    return out


def gaussian_unit_vector(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_density(d_a, d_b, d_e, seed):
    """Random induced-measure state built directly with numpy."""
    rng = np.random.default_rng(seed)
    v = gaussian_unit_vector(rng, d_a * d_b * d_e)
    full = np.outer(v, v.conj())
    mat = loop_partial_trace(full, (d_a, d_b, d_e), (0, 1))
    return DensityMatrix((d_a, d_b), mat)


def random_isometry(rng, d_in, d_out):
    """Isometry from a QR decomposition of a Gaussian matrix (d_out >= d_in)."""
    g = rng.standard_normal((d_out, d_in)) + 1j * rng.standard_normal((d_out, d_in))
    q, r = np.linalg.qr(g)
    # fix the QR phase ambiguity for determinism
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_choi(d_in, d_out, d_env, seed):
    """Choi state of a random channel, built from a Stinespring isometry."""
    rng = np.random.default_rng(seed)
    v = random_isometry(rng, d_in, d_out * d_env)
    # |psi> = (1/sqrt(d_in)) sum_i |i> (x) V|i>, then trace out the environment
    psi = (v.T / np.sqrt(d_in)).reshape(-1)
    full = np.outer(psi, psi.conj())
    mat = loop_partial_trace(full, (d_in, d_out, d_env), (0, 1))
    return DensityMatrix((d_in, d_out), mat)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
