"""Vectorized exhaustive scan of PGL_3(F_p) for small primes p.

Canonical matrices (first nonzero entry of the flattened matrix equal to 1)
are enumerated in chunks: a chunk fixes the position of the leading 1 and a
range of base-p indices for the entries after it.  Everything is int64
arithmetic mod p.
"""

from __future__ import annotations

import numpy as np

CHUNK = 7 ** 6


def chunks(p: int, chunk: int = CHUNK):
    """(lead, start, stop) work units covering all canonical matrices."""
    out = []
    for lead in range(9):
        total = p ** (8 - lead)
        for start in range(0, total, chunk):
            out.append((lead, start, min(total, start + chunk)))
    return out


def _matrices(p, lead, start, stop):
    idx = np.arange(start, stop, dtype=np.int64)
    flat = np.zeros((len(idx), 9), dtype=np.int64)
    flat[:, lead] = 1
    for pos in range(8, lead, -1):
        flat[:, pos] = idx % p
        idx //= p
    return flat.reshape(-1, 3, 3)


def _det(m, p):
    return (m[:, 0, 0] * (m[:, 1, 1] * m[:, 2, 2] - m[:, 1, 2] * m[:, 2, 1])
            - m[:, 0, 1] * (m[:, 1, 0] * m[:, 2, 2] - m[:, 1, 2] * m[:, 2, 0])
            + m[:, 0, 2] * (m[:, 1, 0] * m[:, 2, 1] - m[:, 1, 1] * m[:, 2, 0])) % p


def _adjugate(m, p):
    c0, c1, c2 = m[:, :, 0], m[:, :, 1], m[:, :, 2]
    return np.stack([np.cross(c1, c2), np.cross(c2, c0), np.cross(c0, c1)], axis=1) % p


def _inverse_table(p):
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def vector_keys(v, p, inv):
    """Canonical integer keys of projective vectors along the last axis."""
    lead_pos = np.argmax(v != 0, axis=-1)
    lead = np.take_along_axis(v, lead_pos[..., None], axis=-1)
    w = v * inv[lead] % p
    weights = p ** np.arange(v.shape[-1] - 1, -1, -1, dtype=np.int64)
    return w @ weights


def scan_chunk(args):
    """Returns (number of invertible matrices, stabilizer keys, normalizer keys)."""
    p, lead, start, stop, points, cfg_keys, xt, yt, s_keys = args
    inv = _inverse_table(p)
    m = _matrices(p, lead, start, stop)
    m = m[_det(m, p) != 0]
    n_inv = len(m)
    flat_keys = vector_keys(m.reshape(-1, 9), p, inv)
    # images of the nine points, one column per point
    imgs = np.einsum("nij,jk->nki", m, points) % p
    ok = np.isin(vector_keys(imgs, p, inv), cfg_keys).all(axis=1)
    stab = flat_keys[ok]
    adj = _adjugate(m, p)
    norm_ok = np.ones(len(m), dtype=bool)
    for gen in (xt, yt):
        conj = np.einsum("nij,jk,nkl->nil", m, gen, adj) % p
        norm_ok &= np.isin(vector_keys(conj.reshape(-1, 9), p, inv), s_keys)
    return n_inv, stab, flat_keys[norm_ok]


def scan(p, points, xt, yt, s_flat, workers: int = 1, progress=None):
    """Exhaustive scan; points is a 3x9 integer array of configuration points,
    xt, yt integer lifts of the generators of S, s_flat a 9x9 array of the
    flattened canonical elements of S."""
    inv = _inverse_table(p)
    points = np.asarray(points, dtype=np.int64)
    cfg_keys = vector_keys(points.T, p, inv)
    s_keys = vector_keys(np.asarray(s_flat, dtype=np.int64), p, inv)
    xt = np.asarray(xt, dtype=np.int64)
    yt = np.asarray(yt, dtype=np.int64)
    work = [(p, lead, a, b, points, cfg_keys, xt, yt, s_keys) for lead, a, b in chunks(p)]
    total = sum(b - a for _, _, a, b, *_ in work)
    if workers > 1:
        import multiprocessing as mp
        with mp.get_context("fork").Pool(workers) as pool:
            results = []
            for i, r in enumerate(pool.imap(scan_chunk, work)):
                results.append(r)
                if progress:
                    progress(i + 1, len(work))
    else:
        results = []
        for i, w in enumerate(work):
            results.append(scan_chunk(w))
            if progress:
                progress(i + 1, len(work))
    n_inv = sum(r[0] for r in results)
    stab = np.sort(np.concatenate([r[1] for r in results]))
    norm = np.sort(np.concatenate([r[2] for r in results]))
    return {"canonical": total, "invertible": n_inv, "stabilizer": stab, "normalizer": norm}


def key_to_matrix(key: int, p: int):
    digits = []
    for _ in range(9):
        digits.append(key % p)
        key //= p
    flat = digits[::-1]
    return [flat[0:3], flat[3:6], flat[6:9]]
