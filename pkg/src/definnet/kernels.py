"""Batched forward/backward kernels for the definition composition network.

These are the hot loops of training.  Each kernel is written in a
numba-compilable subset of numpy; when numba is importable the kernels are
JIT-compiled, otherwise (or when DEFINNET_BACKEND=numpy is set) the same
functions run as plain numpy.  Both paths compute the same floating-point
expressions, so results agree to rounding.

    DEFINNET_BACKEND=numba   require numba (error if unavailable)
    DEFINNET_BACKEND=numpy   force the pure-numpy path
    unset / auto             numba if importable, else numpy

All kernels are pure functions of their arguments; dropout masks and RNG
live in the caller so that a fixed seed gives bitwise-identical runs.
"""

from __future__ import annotations

import os

import numpy as np


def _pick_backend() -> str:
    choice = os.environ.get("DEFINNET_BACKEND", "auto").lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"DEFINNET_BACKEND must be auto|numba|numpy, got {choice!r}")
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


BACKEND = _pick_backend()


def _forward_batch(
    W_h, b_h, W_m, b_m,
    eps,
    W_ph, b_ph, W_pm, b_pm, W_pc, b_pc,
    W_1, b_1, W_2, b_2, W_3, b_3,
    X_h, X_m, ih, im, ic,
    slope, use_dropout, mask_s, mask_1, mask_2,
):
    B = X_h.shape[0]
    dim = W_h.shape[0]
    pd = eps.shape[1]

    z_s = np.dot(X_h, W_h) + b_h + np.dot(X_m, W_m) + b_m
    s = np.where(z_s > 0, z_s, slope * z_s)
    if use_dropout:
        s = s * mask_s

    e_h = np.empty((B, pd), dtype=eps.dtype)
    e_m = np.empty((B, pd), dtype=eps.dtype)
    e_c = np.empty((B, pd), dtype=eps.dtype)
    for i in range(B):
        e_h[i] = eps[ih[i]]
        e_m[i] = eps[im[i]]
        e_c[i] = eps[ic[i]]
    p_h = np.dot(e_h, W_ph) + b_ph
    p_m = np.dot(e_m, W_pm) + b_pm
    p_c = np.dot(e_c, W_pc) + b_pc

    h = np.empty((B, dim + 3 * pd), dtype=z_s.dtype)
    h[:, :dim] = s
    h[:, dim : dim + pd] = p_h
    h[:, dim + pd : dim + 2 * pd] = p_m
    h[:, dim + 2 * pd :] = p_c

    z_1 = np.dot(h, W_1) + b_1
    a_1 = np.where(z_1 > 0, z_1, slope * z_1)
    if use_dropout:
        a_1 = a_1 * mask_1
    z_2 = np.dot(a_1, W_2) + b_2
    a_2 = np.where(z_2 > 0, z_2, slope * z_2)
    if use_dropout:
        a_2 = a_2 * mask_2
    out = np.dot(a_2, W_3) + b_3
    return out, z_s, e_h, e_m, e_c, h, z_1, a_1, z_2, a_2


def _backward_batch(
    W_h, W_m,
    eps,
    W_ph, W_pm, W_pc,
    W_1, W_2, W_3,
    X_h, X_m, ih, im, ic,
    z_s, e_h, e_m, e_c, h, z_1, a_1, z_2, a_2,
    d_out,
    slope, use_dropout, mask_s, mask_1, mask_2,
):
    B = X_h.shape[0]
    dim = W_h.shape[0]
    pd = eps.shape[1]

    dW_3 = np.dot(np.ascontiguousarray(a_2.T), d_out)
    db_3 = d_out.sum(axis=0)
    d_a2 = np.dot(d_out, np.ascontiguousarray(W_3.T))
    if use_dropout:
        d_a2 = d_a2 * mask_2
    d_z2 = d_a2 * np.where(z_2 > 0, 1.0, slope).astype(z_2.dtype)

    dW_2 = np.dot(np.ascontiguousarray(a_1.T), d_z2)
    db_2 = d_z2.sum(axis=0)
    d_a1 = np.dot(d_z2, np.ascontiguousarray(W_2.T))
    if use_dropout:
        d_a1 = d_a1 * mask_1
    d_z1 = d_a1 * np.where(z_1 > 0, 1.0, slope).astype(z_1.dtype)

    dW_1 = np.dot(np.ascontiguousarray(h.T), d_z1)
    db_1 = d_z1.sum(axis=0)
    d_h = np.dot(d_z1, np.ascontiguousarray(W_1.T))

    d_s = np.ascontiguousarray(d_h[:, :dim])
    d_ph = np.ascontiguousarray(d_h[:, dim : dim + pd])
    d_pm = np.ascontiguousarray(d_h[:, dim + pd : dim + 2 * pd])
    d_pc = np.ascontiguousarray(d_h[:, dim + 2 * pd :])

    if use_dropout:
        d_s = d_s * mask_s
    d_zs = d_s * np.where(z_s > 0, 1.0, slope).astype(z_s.dtype)
    dW_h = np.dot(np.ascontiguousarray(X_h.T), d_zs)
    db_h = d_zs.sum(axis=0)
    dW_m = np.dot(np.ascontiguousarray(X_m.T), d_zs)
    db_m = d_zs.sum(axis=0)

    dW_ph = np.dot(np.ascontiguousarray(e_h.T), d_ph)
    db_ph = d_ph.sum(axis=0)
    dW_pm = np.dot(np.ascontiguousarray(e_m.T), d_pm)
    db_pm = d_pm.sum(axis=0)
    dW_pc = np.dot(np.ascontiguousarray(e_c.T), d_pc)
    db_pc = d_pc.sum(axis=0)

    d_eh = np.dot(d_ph, np.ascontiguousarray(W_ph.T))
    d_em = np.dot(d_pm, np.ascontiguousarray(W_pm.T))
    d_ec = np.dot(d_pc, np.ascontiguousarray(W_pc.T))
    d_eps = np.zeros_like(eps)
    for i in range(B):
        d_eps[ih[i]] += d_eh[i]
        d_eps[im[i]] += d_em[i]
        d_eps[ic[i]] += d_ec[i]

    return (
        dW_h, db_h, dW_m, db_m,
        d_eps,
        dW_ph, db_ph, dW_pm, db_pm, dW_pc, db_pc,
        dW_1, db_1, dW_2, db_2, dW_3, db_3,
    )


def _cosine_loss_batch(out, tgt):
    """Per-sample loss 1 - cos(out, tgt) and its gradient w.r.t. out.

    A zero-norm output row gets the worst-case-plus-margin loss 2.0 with a
    zero gradient; the count of such rows is returned for warning counters.
    """
    B = out.shape[0]
    losses = np.empty(B, dtype=out.dtype)
    d_out = np.zeros_like(out)
    zero_rows = 0
    for i in range(B):
        o = out[i]
        t = tgt[i]
        no = np.sqrt(np.dot(o, o))
        nt = np.sqrt(np.dot(t, t))
        if no == 0.0:
            losses[i] = 2.0
            zero_rows += 1
            continue
        c = np.dot(o, t) / (no * nt)
        losses[i] = 1.0 - c
        d_out[i] = -(t / (no * nt) - (c / (no * no)) * o)
    return losses, d_out, zero_rows


if BACKEND == "numba":
    from numba import njit

    forward_batch = njit(cache=True)(_forward_batch)
    backward_batch = njit(cache=True)(_backward_batch)
    cosine_loss_batch = njit(cache=True)(_cosine_loss_batch)
else:
    forward_batch = _forward_batch
    backward_batch = _backward_batch
    cosine_loss_batch = _cosine_loss_batch
