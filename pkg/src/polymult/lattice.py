"""Small exact linear algebra over Z and Q.

Everything here works on nested lists of Python ints / Fractions; matrix
sizes are bounded by the ambient dimension and number of half-spaces.
"""

from __future__ import annotations

from fractions import Fraction


def _egcd(a: int, b: int):
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def transpose(M):
    return [list(col) for col in zip(*M)]


def rref(M):
    """Reduced row echelon form over Q. Returns ``(R, pivot_columns)``."""
    R = [[Fraction(v) for v in row] for row in M]
    if not R:
        return R, []
    ncols = len(R[0])
    pivots = []
    r = 0
    for j in range(ncols):
        p = next((i for i in range(r, len(R)) if R[i][j] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        piv = R[r][j]
        R[r] = [v / piv for v in R[r]]
        for i in range(len(R)):
            if i != r and R[i][j] != 0:
                f = R[i][j]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(j)
        r += 1
        if r == len(R):
            break
    return R[:r], pivots


def rational_nullspace(M, n: int):
    """Basis of ``{x in Q^n : M x = 0}`` as a list of column vectors."""
    if not M:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    R, pivots = rref(M)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def hermite_normal_form(rows):
    """Row-style Hermite normal form of an integer matrix.

    Returns the nonzero rows, echelon form with positive pivots and
    entries above each pivot reduced into ``[0, pivot)``.  The row lattice
    is unchanged, and the result is unique for that lattice.
    """
    H = [list(map(int, row)) for row in rows]
    if not H:
        return []
    ncols = len(H[0])
    r = 0
    for j in range(ncols):
        if r == len(H):
            break
        # fold the column's entries below r into row r with gcd steps
        for i in range(r + 1, len(H)):
            a, b = H[r][j], H[i][j]
            if b == 0:
                continue
            g, x, y = _egcd(a, b)
            ag, bg = a // g, b // g
            Rr, Ri = H[r], H[i]
            H[r] = [x * u + y * v for u, v in zip(Rr, Ri)]
            H[i] = [-bg * u + ag * v for u, v in zip(Rr, Ri)]
        if H[r][j] == 0:
            continue
        if H[r][j] < 0:
            H[r] = [-v for v in H[r]]
        p = H[r][j]
        for i in range(r):
            q = H[i][j] // p
            if q:
                H[i] = [u - q * v for u, v in zip(H[i], H[r])]
        r += 1
    return [row for row in H[:r] if any(row)]


def integer_kernel(M, n: int):
    """Basis of the lattice ``{x in Z^n : M x = 0}``.

    Column operations on ``M`` stacked over the identity bring ``M`` to
    column echelon form; the identity part of the trailing zero columns is
    a basis of the integer kernel.  The basis is then put into Hermite
    normal form, so it is canonical.  Returned as a list of vectors.
    """
    m = len(M)
    # C holds columns: each column is M-part (m entries) + U-part (n entries)
    cols = [[int(M[i][j]) for i in range(m)] + [int(i == j) for i in range(n)] for j in range(n)]
    pc = 0
    for i in range(m):
        if pc == n:
            break
        for j in range(pc + 1, n):
            a, b = cols[pc][i], cols[j][i]
            if b == 0:
                continue
            g, x, y = _egcd(a, b)
            ag, bg = a // g, b // g
            Cp, Cj = cols[pc], cols[j]
            cols[pc] = [x * u + y * v for u, v in zip(Cp, Cj)]
            cols[j] = [-bg * u + ag * v for u, v in zip(Cp, Cj)]
        if cols[pc][i] != 0:
            pc += 1
    kernel = [col[m:] for col in cols[pc:]]
    return hermite_normal_form(kernel)


def bareiss_det(M) -> int:
    """Exact determinant of a square integer matrix (fraction-free)."""
    A = [list(map(int, row)) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def fraction_inverse(M):
    """Inverse of a nonsingular square rational matrix."""
    n = len(M)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def matmul(A, B):
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), 0) for col in Bt] for row in A]
