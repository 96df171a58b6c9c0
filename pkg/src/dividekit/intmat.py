"""Small exact matrix helpers over the integers and rationals.

Matrices are lists of row lists.  Everything stays exact (int or Fraction);
sizes here are at most a few dozen, so plain Python is fast enough.
"""

from fractions import Fraction


def zeros(n, m=None):
    return [[0] * (n if m is None else m) for _ in range(n)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(r) for r in zip(*A)] if A else []


def matmul(A, B):
    if not A:
        return []
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def vecmat(x, A):
    n = len(A[0]) if A else 0
    return [sum(x[i] * A[i][j] for i in range(len(x))) for j in range(n)]


def add(A, B):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def sub(A, B):
    return [[a - b for a, b in zip(r, s)] for r, s in zip(A, B)]


def neg(A):
    return [[-a for a in r] for r in A]


def scale(c, A):
    return [[c * a for a in r] for r in A]


def matpow(A, k):
    out = identity(len(A))
    for _ in range(k):
        out = matmul(out, A)
    return out


def trace(A):
    return sum(A[i][i] for i in range(len(A)))


def det(A):
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def inverse(A):
    """Exact inverse with Fraction entries; raises ZeroDivisionError if singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [x / p for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def as_int(A):
    """Convert a Fraction matrix with integral entries to ints, else ValueError."""
    out = []
    for row in A:
        r = []
        for x in row:
            if Fraction(x).denominator != 1:
                raise ValueError("non-integral entry %s" % x)
            r.append(int(x))
        out.append(r)
    return out


def int_inverse(A):
    """Inverse of a unimodular integer matrix, as an integer matrix."""
    return as_int(inverse(A))


def solve_lower_unitriangular(L, b):
    """Solve L x = b for lower triangular L with unit diagonal (exact, integers stay integers)."""
    n = len(L)
    x = [0] * n
    for i in range(n):
        if abs(L[i][i]) != 1:
            raise ValueError("diagonal entry %s is not a unit" % L[i][i])
        s = b[i] - sum(L[i][j] * x[j] for j in range(i))
        x[i] = s * L[i][i]
    return x


def solve_upper_unitriangular(U, b):
    """Solve U x = b for upper triangular U with unit diagonal."""
    n = len(U)
    x = [0] * n
    for i in range(n - 1, -1, -1):
        if abs(U[i][i]) != 1:
            raise ValueError("diagonal entry %s is not a unit" % U[i][i])
        s = b[i] - sum(U[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s * U[i][i]
    return x


def charpoly(A):
    """Characteristic polynomial det(tI - A), coefficients from t^n down to t^0.

    Uses the Faddeev-LeVerrier recursion with exact fractions.
    """
    n = len(A)
    coeffs = [Fraction(1)]
    M = zeros(n)
    Af = [[Fraction(x) for x in r] for r in A]
    for k in range(1, n + 1):
        M = add(matmul(Af, M), scale(coeffs[-1], identity(n)))
        c = -trace(matmul(Af, M)) / k
        coeffs.append(Fraction(c))
    return [int(c) if c.denominator == 1 else c for c in coeffs]


def is_lower_triangular(A):
    return all(A[i][j] == 0 for i in range(len(A)) for j in range(i + 1, len(A)))
