"""Integer and Z/m linear algebra: Smith normal form, solving and kernels mod m,
and Howell forms as canonical representatives of submodules of (Z/m)^d."""

from math import gcd

from .errors import DomainError
from .groups import int_det


def identity(n: int):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B, m: int = None):
    cols = list(zip(*B))
    out = [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in A]
    if m is not None:
        out = [[x % m for x in row] for row in out]
    return out


def matvec(A, v, m: int = None):
    out = [sum(x * y for x, y in zip(row, v)) for row in A]
    return [x % m for x in out] if m is not None else out


def matpow(A, k: int, m: int):
    out = identity(len(A))
    base = [[x % m for x in row] for row in A]
    while k:
        if k & 1:
            out = matmul(out, base, m)
        base = matmul(base, base, m)
        k >>= 1
    return out


def smith_normal_form(A):
    """Return (diagonal, U, V) with U A V = D, U and V unimodular over Z.

    ``diagonal`` has min(rows, cols) entries d_1 | d_2 | ..., all >= 0."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    D = [list(r) for r in A]
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, f):  # row dst += f * row src
        D[dst] = [a + f * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for r in D:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    for t in range(min(rows, cols)):
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if D[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            done = True
            for i in range(t + 1, rows):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    done = done and D[i][t] == 0
            for j in range(t + 1, cols):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    done = done and D[t][j] == 0
            if not done:
                continue
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(bad, t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return [D[i][i] for i in range(min(rows, cols))], U, V


def solve_mod(A, b, m: int):
    """Some x with A x = b over Z/m, or None."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if cols == 0:
        return [] if all(x % m == 0 for x in b) else None
    diag, U, V = smith_normal_form(A)
    c = matvec(U, b, m)
    y = [0] * cols
    for i in range(rows):
        di = diag[i] if i < len(diag) else 0
        g = gcd(di, m)
        if c[i] % g:
            return None
        if i < cols and di:
            mg = m // g
            y[i] = (c[i] // g) * pow(di // g, -1, mg) % mg if mg > 1 else 0
    return matvec(V, y, m)


def kernel_mod(A, m: int):
    """Generators of {x : A x = 0 over Z/m}."""
    cols = len(A[0])
    diag, _, V = smith_normal_form(A)
    gens = []
    for i in range(cols):
        di = diag[i] if i < len(diag) else 0
        f = m // gcd(di, m)
        if f % m:
            gens.append([V[r][i] * f % m for r in range(cols)])
    return gens


def det_mod(A, m: int) -> int:
    return int_det(A) % m if A else 1 % m


def inverse_mod(A, m: int):
    d = len(A)
    if gcd(det_mod(A, m), m) != 1:
        raise DomainError("matrix is not invertible mod %d" % m)
    cols = [solve_mod(A, [int(i == j) for i in range(d)], m) for j in range(d)]
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _unit_for(a: int, m: int):
    """A unit u of Z/m with u a = gcd(a, m) mod m."""
    g = gcd(a, m)
    mg = m // g
    u0 = pow(a // g, -1, mg) if mg > 1 else 1
    for k in range(g):
        u = u0 + k * mg
        if gcd(u, m) == 1:
            return u % m
    raise AssertionError("no unit found")  # pragma: no cover


def howell_form(vectors, m: int, dim: int):
    """Canonical generating rows of the Z/m-span of the given vectors."""
    A = [[x % m for x in v] for v in vectors]
    A += [[0] * dim for _ in range(max(0, dim - len(A)))]
    r = 0
    for c in range(dim):
        for i in range(r + 1, len(A)):
            b = A[i][c]
            if not b:
                continue
            a = A[r][c]
            if a == 0:
                A[r], A[i] = A[i], A[r]
                continue
            g, s, t = _xgcd(a, b)
            ra, rb = A[r], A[i]
            A[r] = [(s * x + t * y) % m for x, y in zip(ra, rb)]
            A[i] = [(-(b // g) * x + (a // g) * y) % m for x, y in zip(ra, rb)]
        if r >= len(A) or A[r][c] == 0:
            continue
        u = _unit_for(A[r][c], m)
        A[r] = [x * u % m for x in A[r]]
        g = A[r][c]
        for i in range(r):
            q = A[i][c] // g
            if q:
                A[i] = [(x - q * y) % m for x, y in zip(A[i], A[r])]
        ann = [x * (m // g) % m for x in A[r]]
        if any(ann):
            A.append(ann)
        r += 1
    return tuple(tuple(row) for row in A[:r] if any(row))


def _xgcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class Submodule:
    """A submodule of (Z/m)^dim, held in Howell form (so equality is row equality)."""

    __slots__ = ("modulus", "dim", "rows")

    def __init__(self, vectors, modulus: int, dim: int):
        self.modulus = modulus
        self.dim = dim
        self.rows = howell_form(vectors, modulus, dim)

    @classmethod
    def zero(cls, modulus, dim):
        return cls([], modulus, dim)

    @classmethod
    def full(cls, modulus, dim):
        return cls(identity(dim), modulus, dim)

    def __eq__(self, other):
        return (isinstance(other, Submodule) and self.modulus == other.modulus
                and self.dim == other.dim and self.rows == other.rows)

    def __hash__(self):
        return hash((self.modulus, self.dim, self.rows))

    def is_zero(self) -> bool:
        return not self.rows

    def size(self) -> int:
        """Number of elements; with Howell form this is the product of pivot orders."""
        out = 1
        for row in self.rows:
            piv = next(x for x in row if x)
            out *= self.modulus // gcd(piv, self.modulus)
        return out

    def rank(self) -> int:
        """Number of generators in Howell form (the dimension over a field)."""
        return len(self.rows)

    def contains(self, v) -> bool:
        m = self.modulus
        v = [x % m for x in v]
        for row in self.rows:
            c = next(i for i, x in enumerate(row) if x)
            q, rem = divmod(v[c], row[c])
            if rem:
                return False
            v = [(x - q * y) % m for x, y in zip(v, row)]
        return not any(v)

    def image(self, A) -> "Submodule":
        return Submodule([matvec(A, list(r), self.modulus) for r in self.rows], self.modulus, self.dim)

    def __le__(self, other: "Submodule") -> bool:
        return all(other.contains(r) for r in self.rows)

    def __repr__(self):
        return f"Submodule(mod {self.modulus}, dim {self.dim}, rows={list(self.rows)})"


def kernel_submodule(A, m: int) -> Submodule:
    d = len(A[0]) if A else 0
    return Submodule(kernel_mod(A, m), m, d)


def eventual_kernel(A, m: int):
    """(n, ker A^n) for the least n >= 1 with ker A^n = ker A^{n+1}."""
    d = len(A)
    if d == 0:
        return 1, Submodule.zero(m, 0)
    k_prev = kernel_submodule(A, m)
    P = [[x % m for x in row] for row in A]
    n = 1
    bound = d * max(1, m.bit_length()) + 1
    while n <= bound:
        P = matmul(P, A, m)
        k_next = kernel_submodule(P, m)
        if k_next == k_prev:
            return n, k_prev
        k_prev = k_next
        n += 1
    raise AssertionError("kernel chain did not stabilize")  # pragma: no cover
