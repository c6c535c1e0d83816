#!/usr/bin/env python3
"""Regenerate the shipped codebook files under codebooks/.

Grassmannian codebooks are produced by a seeded line/subspace packing search
(projected gradient descent on a soft max-coherence potential with random
restarts). The LTE file is the rank-1 / rank-2 4Tx Householder codebook
W_n = I - 2 u_n u_n^H / (u_n^H u_n) with the u_n generator table.
"""
import argparse
import os

import numpy as np


def orthonormalize(F):
    q, _ = np.linalg.qr(F)
    return q


def coherence(cb):
    # max squared overlap ||Fi^H Fj||_F^2 over pairs
    n = len(cb)
    best = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            best = max(best, np.linalg.norm(cb[i].conj().T @ cb[j]) ** 2)
    return best


def pack(nt, ns, n, seed, restarts=40, iters=4000):
    rng = np.random.default_rng(seed)
    best_cb, best_val = None, np.inf
    for _ in range(restarts):
        cb = [orthonormalize(rng.normal(size=(nt, ns)) + 1j * rng.normal(size=(nt, ns))) for _ in range(n)]
        step = 0.05
        for it in range(iters):
            p = 4 + it * 60 // iters
            grads = [np.zeros((nt, ns), dtype=complex) for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    G = cb[i].conj().T @ cb[j]
                    s = np.linalg.norm(G) ** 2
                    w = p * s ** (p - 1)
                    grads[i] += w * (cb[j] @ G.conj().T)
                    grads[j] += w * (cb[i] @ G)
            scale = max(np.linalg.norm(g) for g in grads) + 1e-300
            cb = [orthonormalize(F - step * g / scale) for F, g in zip(cb, grads)]
            step *= 0.999
        val = coherence(cb)
        if val < best_val:
            best_val, best_cb = val, cb
    return best_cb, best_val


LTE_U = [
    [1, -1, -1, -1],
    [1, -1j, 1, 1j],
    [1, 1, -1, 1],
    [1, 1j, 1, -1j],
    [1, (-1 - 1j) / np.sqrt(2), -1j, (1 - 1j) / np.sqrt(2)],
    [1, (1 - 1j) / np.sqrt(2), 1j, (-1 - 1j) / np.sqrt(2)],
    [1, (1 + 1j) / np.sqrt(2), -1j, (-1 + 1j) / np.sqrt(2)],
    [1, (-1 + 1j) / np.sqrt(2), 1j, (1 + 1j) / np.sqrt(2)],
    [1, -1, 1, 1],
    [1, -1j, -1, -1j],
    [1, 1, 1, -1],
    [1, 1j, -1, 1j],
    [1, -1, -1, 1],
    [1, -1, 1, -1],
    [1, 1, -1, -1],
    [1, 1, 1, 1],
]
# rank-2 column selections (1-based) per codeword index
LTE_RANK2 = [(1, 4), (1, 2), (1, 2), (1, 2), (1, 4), (1, 4), (1, 3), (1, 3),
             (1, 2), (1, 4), (1, 3), (1, 3), (1, 2), (1, 3), (1, 3), (1, 2)]


def lte(rank):
    out = []
    for idx, u in enumerate(LTE_U):
        u = np.array(u, dtype=complex).reshape(4, 1)
        W = np.eye(4) - 2 * (u @ u.conj().T) / (u.conj().T @ u)
        cols = [0] if rank == 1 else [c - 1 for c in LTE_RANK2[idx]]
        out.append(W[:, cols])
    return out


def write(path, cb, header):
    n = len(cb)
    nt, ns = cb[0].shape
    with open(path, "w") as f:
        for line in header:
            f.write("# " + line + "\n")
        f.write(f"{n} {nt} {ns}\n")
        for F in cb:
            for r in range(nt):
                f.write(" ".join(f"{F[r, c].real:.17g} {F[r, c].imag:.17g}" for c in range(ns)) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "codebooks"))
    ap.add_argument("--restarts", type=int, default=40)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for nt, ns, n, seed in [(2, 1, 4, 11), (2, 1, 8, 12), (2, 1, 16, 13), (4, 1, 16, 14), (4, 2, 16, 15)]:
        cb, val = pack(nt, ns, n, seed, restarts=args.restarts)
        name = f"grass_{nt}x{ns}_n{n}.cb"
        write(os.path.join(args.out, name), cb,
              [f"Grassmannian packing Nt={nt} Ns={ns} N={n}", f"generated by scripts/gen_codebooks.py seed={seed}",
               f"max squared overlap {val:.6f}"])
        print(name, val)
    write(os.path.join(args.out, "lte_4x1_n16.cb"), lte(1),
          ["LTE 4Tx Householder codebook, rank 1", "generated by scripts/gen_codebooks.py"])
    write(os.path.join(args.out, "lte_4x2_n16.cb"), lte(2),
          ["LTE 4Tx Householder codebook, rank 2 (orthonormal columns, 1/sqrt(Ns) applied at use)",
           "generated by scripts/gen_codebooks.py"])


if __name__ == "__main__":
    main()
