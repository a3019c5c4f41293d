"""Brute-force cyclic-sum oracle for the so(3) algebra with C^3_{12} = 1.001.

C[a][b][c] is the coefficient of e_c in [e_a, e_b] (stored unsymmetrized).
Jacobi residual J[A][B][C][m] = sum over cyclic (A,B,C) of C[B][C][n] * C[A][n][m]
(the anchor term vanishes: the algebra lives over a point).
"""
from fractions import Fraction
from itertools import product


def levi_civita(i, j, k):
    return (i - j) * (j - k) * (k - i) // 2


def main():
    n = 3
    C = [[[Fraction(levi_civita(a, b, c)) for c in range(n)] for b in range(n)] for a in range(n)]
    C[0][1][2] = Fraction(1001, 1000)
    worst = Fraction(0)
    for A, B, Cc, m in product(range(n), repeat=4):
        total = Fraction(0)
        for (p, q, s) in ((A, B, Cc), (B, Cc, A), (Cc, A, B)):
            for nu in range(n):
                total += C[q][s][nu] * C[p][nu][m]
        worst = max(worst, abs(total))
    anti = max(abs(C[a][b][c] + C[b][a][c]) for a, b, c in product(range(n), repeat=3))
    print("max |jacobi| =", worst, float(worst))
    print("max |antisym| =", anti, float(anti))


if __name__ == "__main__":
    main()
