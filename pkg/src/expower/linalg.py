"""Exact linear algebra over Q and Q(p1..pk), and integer normal forms.

Field matrices hold Fractions (over Q) or RatFuncs (over Q(p)). Rank is
computed by fraction-free Bareiss elimination on rows cleared of
denominators; reduced echelon forms and kernels use Gauss-Jordan with field
division. Over Q the Gauss-Jordan kernel runs on gmpy2 rationals when
available.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .arith import QQ, Field, MultiPoly, as_ratfunc, canon, poly_lcm
from .arith.poly import ONE

try:
    from gmpy2 import mpq as _mpq, mpz as _mpz
except ImportError:  # pragma: no cover
    _mpq = None
    _mpz = int

try:
    import flint as _flint
except ImportError:  # pragma: no cover
    _flint = None


@dataclass(frozen=True)
class ExactMatrix:
    rows: tuple
    ncols: int
    field: Field = QQ

    @classmethod
    def from_rows(cls, rows, field=QQ, ncols=None):
        rows = tuple(tuple(canon(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("matrix rows have different lengths")
        return cls(rows, ncols, field)

    @classmethod
    def identity(cls, n, field=QQ):
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], field, n)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self):
        return ExactMatrix(tuple(zip(*self.rows)) if self.rows else (),
                           self.nrows, self.field) if self.ncols else \
            ExactMatrix((), self.nrows, self.field)

    def matvec(self, v):
        return tuple(canon(_dot(row, v)) for row in self.rows)

    def tolist(self):
        return [list(r) for r in self.rows]


def _dot(row, v):
    total = 0
    for a, b in zip(row, v):
        if a and b:
            total = total + a * b
    return total


# -- Gauss-Jordan ------------------------------------------------------------


def _gauss_jordan(rows, ncols):
    """Reduced row echelon form; pivot = leftmost column, first nonzero row."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        prow = [x * inv if x else x for x in rows[r]]
        rows[r] = prow
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j in nz:
                        row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _to_fast(rows, field):
    if field.is_rational and _mpq is not None:
        return [[_mpq(x.numerator, x.denominator) if x else 0 for x in r] for r in rows]
    return [list(r) for r in rows]


def _from_fast(x):
    if _mpq is not None and type(x) is type(_mpq(0)):
        return Fraction(int(x.numerator), int(x.denominator))
    return canon(x)


def rref_pivots(M):
    """Return (nonzero rref rows, pivot columns) of an ExactMatrix."""
    rows, pivots = _gauss_jordan(_to_fast(M.rows, M.field), M.ncols)
    return [tuple(_from_fast(x) for x in r) for r in rows], pivots


def rref(M):
    """Reduced row-echelon form, same shape as ``M`` (zero rows at the bottom)."""
    rows, _ = rref_pivots(M)
    zero = tuple(Fraction(0) for _ in range(M.ncols))
    rows = rows + [zero] * (M.nrows - len(rows))
    return ExactMatrix(tuple(rows), M.ncols, M.field)


def kernel_from_rref(rows, pivots, ncols):
    """Kernel basis in reduced echelon shape, one vector per free column."""
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            if rows[r][f]:
                v[p] = canon(-rows[r][f])
        basis.append(tuple(v))
    return basis


def rank_kernel(M):
    """Return ``(rank, kernel_basis)``; every kernel vector v satisfies M v = 0."""
    rows, pivots = rref_pivots(M)
    return len(pivots), kernel_from_rref(rows, pivots, M.ncols)


# -- fraction-free elimination ----------------------------------------------


def _size(x):
    if isinstance(x, MultiPoly):
        return len(x.terms)
    return abs(x).bit_length()


def _clear_rows(M):
    """Scale each row to have integer (Q) or polynomial (Q(p)) entries."""
    out = []
    if M.field.is_rational:
        for row in M.rows:
            den = 1
            for x in row:
                if x:
                    d = Fraction(x).denominator
                    den = den * d // gcd(den, d)
            out.append([int(Fraction(x) * den) for x in row])
        return out
    for row in M.rows:
        rats = [as_ratfunc(x) for x in row]
        den = ONE
        for r in rats:
            if r and r.den.variables:
                den = poly_lcm(den, r.den)
        out.append([r.num * den.exact_div(r.den) if r else MultiPoly.constant(0) for r in rats])
    return out


def bareiss_rank(M):
    """Rank by fraction-free (Bareiss) elimination after clearing denominators."""
    a = _clear_rows(M)
    integral = M.field.is_rational
    m, n = len(a), M.ncols
    prev = 1 if integral else MultiPoly.constant(1)
    r = 0
    for c in range(n):
        cands = [i for i in range(r, m) if a[i][c]]
        if not cands:
            continue
        piv = min(cands, key=lambda i: (_size(a[i][c]), i))
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        for i in range(r + 1, m):
            lead = a[i][c]
            row = a[i]
            for j in range(c + 1, n):
                val = pv * row[j] - lead * a[r][j]
                if integral:
                    row[j] = val // prev
                else:
                    row[j] = val.exact_div(prev) if val else val
            row[c] = 0 if integral else MultiPoly.constant(0)
        prev = pv
        r += 1
        if r == m:
            break
    return r


def gauss_rank(M):
    """Rank by plain elimination with field division (independent route)."""
    rows = [list(r) for r in M.rows]
    r = 0
    for c in range(M.ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] / pv
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def _flint_matrix(rows, ncols):
    q = _flint.fmpq
    flat = [q(x.numerator, x.denominator) if x else q(0) for r in rows for x in r]
    return _flint.fmpq_mat(len(rows), ncols, flat)


def fast_matrix(rows, ncols):
    """A FLINT rational matrix (requires python-flint)."""
    return _flint_matrix(rows, ncols)


def _flint_rref(M):
    R, r = M.rref()
    out, pivots = [], []
    for row in R.table()[:r]:
        row = [Fraction(int(x.p), int(x.q)) if x else Fraction(0) for x in row]
        pivots.append(next(j for j, x in enumerate(row) if x))
        out.append(row)
    return out, pivots


def fast_kernel(rows, ncols):
    """Reduced-echelon kernel of a rational matrix via FLINT when available."""
    if _flint is None or not rows:
        return ff_rref_kernel(rows, ncols)[1]
    reduced, pivots = _flint_rref(_flint_matrix(rows, ncols))
    return kernel_from_rref(reduced, pivots, ncols)


def fast_pivot_rows(rows, ncols):
    """Like ``pivot_rows``: the pivot columns of the transpose are the rows."""
    if _flint is None or not rows:
        return pivot_rows(rows, ncols)
    M = _flint_matrix(rows, ncols).transpose()
    _, pivots = _flint_rref(M)
    return len(pivots), pivots


def pivot_rows(rows, ncols):
    """Rank and a maximal independent set of rows of a rational matrix.

    Rows are scaled to integers and reduced by fraction-free elimination; a
    row is only ever combined with rows chosen earlier as pivots, so the
    chosen original rows are independent and span the row space.
    """
    work = []
    for i, row in enumerate(rows):
        den = 1
        for x in row:
            if x:
                d = Fraction(x).denominator
                den = den * d // gcd(den, d)
        ints = [_mpz(int(Fraction(x) * den)) if x else _mpz(0) for x in row]
        if any(ints):
            work.append((i, ints))
    chosen = []
    prev = _mpz(1)
    for c in range(ncols):
        piv = None
        for j, (_, row) in enumerate(work):
            if row[c] and (piv is None or abs(row[c]) < abs(work[piv][1][c])):
                piv = j
        if piv is None:
            continue
        idx, prow = work.pop(piv)
        chosen.append(idx)
        pv = prow[c]
        for _, row in work:
            lead = row[c]
            for j in range(c + 1, ncols):
                x = pv * row[j]
                if lead and prow[j]:
                    x -= lead * prow[j]
                row[j] = x // prev if x else x
            row[c] = _mpz(0)
        prev = pv
        if not work:
            break
    return len(chosen), sorted(chosen)


def _integer_rows(rows):
    out = []
    for row in rows:
        den = 1
        for x in row:
            if x:
                d = x.denominator
                den = den * d // gcd(den, d)
        out.append([_mpz(x.numerator * (den // x.denominator)) if x else _mpz(0) for x in row])
    return out


def ff_rref_kernel(rows, ncols):
    """Kernel of a rational matrix by fraction-free Gauss-Jordan elimination.

    Every division is exact and all pivots end equal, so the reduced form is
    ``H / d`` without any rational arithmetic during elimination. Returns
    ``(pivots, kernel)`` with the kernel in reduced echelon shape.
    """
    a = _integer_rows(rows)
    pivots = []
    prev = _mpz(1)
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        prow = a[r]
        pv = prow[c]
        for i in range(len(a)):
            if i == r:
                continue
            row = a[i]
            lead = row[c]
            for j in range(ncols):
                if j == c:
                    continue
                x = pv * row[j]
                if lead and prow[j]:
                    x -= lead * prow[j]
                row[j] = x // prev if x else x
            row[c] = _mpz(0)
        pivots.append(c)
        prev = pv
        r += 1
        if r == len(a):
            break
    # pivots above the last one were scaled along the way; divide per row
    reduced = []
    for i, c in enumerate(pivots):
        d = a[i][c]
        reduced.append([Fraction(int(x), int(d)) if x else Fraction(0) for x in a[i][:ncols]])
    return pivots, kernel_from_rref(reduced, pivots, ncols)


SMALL = 3


def rank(M):
    """Rank over the matrix field; small matrices use field division."""
    if not M.rows or not M.ncols:
        return 0
    if M.field.is_rational:
        return len(rref_pivots(M)[1])
    if min(M.shape) <= SMALL:
        return gauss_rank(M)
    return bareiss_rank(M)


def independent_rows(M):
    """Indices of a maximal set of linearly independent rows (greedy, in order)."""
    rows, pivots = rref_pivots(M.transpose())
    return pivots


# -- integer normal forms ----------------------------------------------------


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def int_matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def int_det(a):
    """Integer determinant by Bareiss elimination."""
    a = [list(r) for r in a]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass
class NormalForm:
    form: str
    normal_form: list
    left: list
    right: list

    def check(self, M):
        return int_matmul(int_matmul(self.left, M), self.right) == self.normal_form


def hermite(M):
    """Row-style Hermite form: ``U M = H``, H upper echelon, positive pivots,
    entries above each pivot reduced into ``[0, pivot)``."""
    a = [list(r) for r in M]
    m = len(a)
    n = len(a[0]) if a else 0
    u = _identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if a[i][c]:
                p, q = a[r][c], a[i][c]
                g, x, y = _xgcd(p, q)
                s, t = -q // g, p // g
                for mat in (a, u):
                    ri, rj = mat[r], mat[i]
                    mat[r] = [x * e + y * f for e, f in zip(ri, rj)]
                    mat[i] = [s * e + t * f for e, f in zip(ri, rj)]
        if not a[r][c]:
            continue
        if a[r][c] < 0:
            a[r] = [-e for e in a[r]]
            u[r] = [-e for e in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [e - q * f for e, f in zip(a[i], a[r])]
                u[i] = [e - q * f for e, f in zip(u[i], u[r])]
        r += 1
    return a, u


def smith(M):
    """Smith form with transforms: ``U M V = D``, ``d1 | d2 | ...``, ``d_i >= 0``."""
    a = [list(r) for r in M]
    m = len(a)
    n = len(a[0]) if a else 0
    u, v = _identity(m), _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for mat in (a, v):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        a[dst] = [e + k * f for e, f in zip(a[dst], a[src])]
        u[dst] = [e + k * f for e, f in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for mat in (a, v):
            for row in mat:
                row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            cands = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
            if not cands:
                return NormalForm("smith", a, u, v)
            _, i, j = min(cands)
            swap_rows(t, i)
            swap_cols(t, j)
            clean = True
            for i in range(t + 1, m):
                q = a[i][t] // a[t][t]
                if q:
                    add_row(i, t, -q)
                clean = clean and not a[i][t]
            for j in range(t + 1, n):
                q = a[t][j] // a[t][t]
                if q:
                    add_col(j, t, -q)
                clean = clean and not a[t][j]
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-e for e in a[t]]
            u[t] = [-e for e in u[t]]
    return NormalForm("smith", a, u, v)


def smith_hermite(M, form="smith"):
    """Integer normal form with unimodular transforms, ``left @ M @ right == normal_form``."""
    M = [list(map(int, r)) for r in M]
    if form == "smith":
        return smith(M)
    if form == "hermite":
        h, u = hermite(M)
        return NormalForm("hermite", h, u, _identity(len(M[0]) if M else 0))
    raise ValueError(f"unknown normal form {form!r}")


def integer_left_kernel(M):
    """Basis of ``{m in Z^rows : m M = 0}`` from the Hermite transform."""
    if not M:
        return []
    h, u = hermite(M)
    return [u[i] for i in range(len(h)) if not any(h[i])]
