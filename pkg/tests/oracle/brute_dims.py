"""Brute-force dimension oracle, independent of ringext.

Rebuilds E1, E2, E5 from raw structure constants and computes every
dimension as a plain rank over sympy Rationals, working in A (x)_Q A and
Hom_Q(A, A) directly.  Run as a script to regenerate dims.json.
"""
import json
import os
import sys

from sympy import Matrix, zeros


def mult_table(n, entries):
    # entries: (i, j, k) meaning x_i x_j = x_k
    L = [zeros(n, n) for _ in range(n)]   # left mult by x_i
    Rm = [zeros(n, n) for _ in range(n)]  # right mult by x_j
    for i, j, k in entries:
        L[i][k, j] += 1
        Rm[j][k, i] += 1
    return L, Rm


def algebras():
    out = {}
    # E1: Q x Q over Q
    out["E1"] = (2, [(0, 0, 0), (1, 1, 1)], [[1], [1]])
    # E2: M2 over Q, e_ij at 2i+j
    m2 = [(2 * i + j, 2 * j + l, 2 * i + l) for i in range(2) for j in range(2) for l in range(2)]
    out["E2"] = (4, m2, [[1], [0], [0], [1]])
    # E5: upper triangular (e11, e12, e22) over its diagonal
    ut = [(0, 0, 0), (0, 1, 1), (1, 2, 1), (2, 2, 2)]
    out["E5"] = (3, ut, [[1, 0], [0, 0], [0, 1]])
    return out


def rank(rows, width):
    if not rows:
        return 0
    return Matrix(rows).rank()


def dims(n, entries, iota):
    L, Rm = mult_table(n, entries)
    iota = Matrix(iota)
    bcols = [iota[:, c] for c in range(iota.shape[1])]
    # left/right multiplication by b = sum c_k x_k
    Lb = [sum((b[k] * L[k] for k in range(n)), zeros(n, n)) for b in bcols]
    Rb = [sum((b[k] * Rm[k] for k in range(n)), zeros(n, n)) for b in bcols]
    I = Matrix.eye(n)
    kron = lambda X, Y: Matrix(n * n, n * n, lambda r, c: X[r // n, c // n] * Y[r % n, c % n])
    # relations in A (x) A: a b (x) a' - a (x) b a'
    rel_cols = []
    for k in range(len(bcols)):
        M = kron(Rb[k], I) - kron(I, Lb[k])
        rel_cols.extend(M[:, c].T.tolist()[0] for c in range(n * n))
    Rel = Matrix(rel_cols).T if rel_cols else zeros(n * n, 0)
    rrel = Rel.rank()
    d_tensor = n * n - rrel
    # T: classes v with b v - v b in Rel for every basis b of B
    blocks = [kron(Lb[k], I) - kron(I, Rb[k]) for k in range(len(bcols))]
    # solve for (v, w_k): D_k v = Rel w_k, stacked
    m = Rel.shape[1]
    big = zeros(len(bcols) * n * n, n * n + len(bcols) * m)
    for k, D in enumerate(blocks):
        big[k * n * n:(k + 1) * n * n, :n * n] = D
        big[k * n * n:(k + 1) * n * n, n * n + k * m:n * n + (k + 1) * m] = -Rel
    ns = big.nullspace()
    vs = Matrix.hstack(*[v[:n * n, :] for v in ns]) if ns else zeros(n * n, 0)
    d_T = Matrix.hstack(vs, Rel).rank() - rrel
    # Hom spaces via vec(f), f an n x n matrix acting on coordinates
    def commutant_dim(pairs):
        eqs = []
        for X, Y in pairs:
            # f X - Y f = 0, vec row-major
            E = kron(I, X.T) - kron(Y, I)
            eqs.append(E)
        return n * n - Matrix.vstack(*eqs).rank()
    d_S = commutant_dim([(Lb[k], Lb[k]) for k in range(len(bcols))] +
                        [(Rb[k], Rb[k]) for k in range(len(bcols))])
    d_E = commutant_dim([(Rb[k], Rb[k]) for k in range(len(bcols))])
    return {"dim_A_tensor_B_A": d_tensor, "dim_T": d_T, "dim_S": d_S, "dim_E": d_E}


def main():
    res = {name: dims(*spec) for name, spec in sorted(algebras().items())}
    text = json.dumps(res, sort_keys=True, indent=1) + "\n"
    if "--write" in sys.argv:
        with open(os.path.join(os.path.dirname(__file__), "dims.json"), "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


if __name__ == "__main__":
    main()
