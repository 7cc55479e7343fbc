"""Supersingular polynomials, Hecke operators, and eigenbases mod l.

The supersingular polynomial s_l comes out of the weight factorization of
E_{l-1} (divide by Delta^m E4^d E6^e, rewrite as a polynomial in j); a
brute-force point-counting enumeration over F_l provides the independent
oracle.  Level-1 Hecke operators act on q-expansions, and for the weight
l+1 cusp space we diagonalize T_2 over F_l to get the normalized
eigenforms the exponent congruences are expressed in.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernel
from .arith import Mod, is_prime
from .errors import InputError, InternalConsistencyError, TruncationError
from .qseries import (GF, Poly, QSeries, as_j_polynomial, eisenstein,
                      monomial_basis, monomial_form)


@dataclass(frozen=True)
class WeightDecomposition:
    """k = 12m + 4*delta + 6*epsilon with delta in {0,1,2}, epsilon in {0,1}."""

    k: int
    m: int
    delta: int
    epsilon: int


def weight_decomposition(k: int) -> WeightDecomposition:
    if k < 0 or k % 2:
        raise InputError(f"weight must be even and nonnegative, got {k}")
    for de, ep in ((0, 0), (2, 1), (1, 0), (0, 1), (2, 0), (1, 1)):
        r = k - 4 * de - 6 * ep
        if r % 12 == 0:
            if r < 0:
                raise InputError(f"weight {k} has no such decomposition")
            return WeightDecomposition(k, r // 12, de, ep)
    raise InputError(f"weight {k} has no such decomposition")


def supersingular_poly(ell: int) -> Poly:
    """Monic s_l(x) over F_l whose roots are the supersingular j-invariants.

    Built from E_{l-1} mod l: divide off Delta^m E4^d E6^e, rewrite the
    weight-0 quotient as a polynomial in j, and reattach x^d (x-1728)^e.
    """
    if ell < 5 or not is_prime(ell):
        raise InputError(f"need a prime l >= 5, got {ell}")
    wd = weight_decomposition(ell - 1)
    ring = GF(ell)
    n = wd.m + 8
    f = eisenstein(ell - 1, n, ring) / monomial_form(wd.m, wd.delta, wd.epsilon, n, ring)
    try:
        etilde = as_j_polynomial(f)
    except InputError as exc:
        raise InternalConsistencyError(
            f"E_(l-1) factorization failed for l={ell}: {exc}") from exc
    x = Poly(ring, [ring.zero, ring.one])
    s = (x ** wd.delta) * ((x - Poly(ring, [ring.coerce(1728)])) ** wd.epsilon) * etilde
    return s.monic()


def _nonresidue(ell: int) -> int:
    from .arith import kronecker
    n = 2
    while kronecker(n, ell) != -1:
        n += 1
    return n


def _ss_encoded(ell: int) -> tuple[int, list[int]]:
    if ell < 5 or ell > 200 or not is_prime(ell):
        raise InputError("brute-force enumeration expects a prime 5 <= l <= 200")
    ns = _nonresidue(ell)
    return ns, kernel.supersingular_js_fq2(ell, ns)


def supersingular_j_invariants(ell: int) -> list[int]:
    """The supersingular j-invariants lying in F_l, by point counting."""
    _, js = _ss_encoded(ell)
    return sorted(j // ell for j in js if j % ell == 0)


def supersingular_poly_bruteforce(ell: int) -> Poly:
    """Product of (x - j) over all supersingular j in F_(l^2), by point counting.

    The independent oracle for supersingular_poly: j-invariants are found
    by naive curve enumeration (trace divisible by l over F_(l^2));
    conjugate pairs u +- v sqrt(ns) assemble into quadratic factors.
    """
    ring = GF(ell)
    ns, js = _ss_encoded(ell)
    out = Poly(ring, [ring.one])
    for j in js:
        u, v = divmod(j, ell)
        if v == 0:
            out = out * Poly.x_minus(ring, u)
        else:
            norm = (u * u - ns * v * v) % ell
            out = out * Poly.from_ints(ring, [norm, -2 * u, 1])
    return out


# ---------------------------------------------------------------------------
# Hecke operators and eigenbases


def hecke_Tp(f: QSeries, p: int, k: int, out_order: int | None = None) -> QSeries:
    """Level-1 T_p on weight k: a(n) -> a(pn) + p^(k-1) a(n/p).

    The input must be supplied to order p*out_order.
    """
    if not is_prime(p):
        raise InputError(f"T_p needs p prime, got {p}")
    if f.lead < 0:
        raise InputError("T_p here acts on holomorphic expansions (lead >= 0)")
    n_out = f.trunc // p if out_order is None else out_order
    if f.trunc < p * n_out:
        raise TruncationError(
            f"T_{p} to order {n_out} needs input order {p * n_out}, have {f.trunc}")
    ring = f.ring
    pk = ring.coerce(p) ** (k - 1)
    out = []
    for n in range(n_out + 1):
        c = f.coeff(p * n)
        if n % p == 0:
            c = c + pk * f.coeff(n // p)
        out.append(c)
    return QSeries(ring, 0, out)


@dataclass(frozen=True)
class EigenformBasis:
    """Normalized Hecke eigenforms spanning the weight l+1 cusp space mod l."""

    ell: int
    order: int
    forms: tuple[QSeries, ...]
    t2_eigenvalues: tuple[Mod, ...]
    monomial_combos: tuple[tuple[tuple[int, tuple[int, int, int]], ...], ...]

    @property
    def dim(self) -> int:
        return len(self.forms)

    def coefficient(self, i: int, n: int) -> Mod:
        return self.forms[i].coeff(n)

    def describe(self, i: int) -> str:
        parts = []
        for (a, b, c), coef in self.monomial_combos[i]:
            factors = [f"{name}^{e}" if e > 1 else name
                       for name, e in (("Delta", a), ("E4", b), ("E6", c)) if e]
            mono = "*".join(factors) if factors else "1"
            parts.append(mono if coef == 1 else f"{coef}*{mono}")
        return " + ".join(parts)


def _solve_linear_mod(rows: list[list[Mod]], rhs: list[Mod], ell: int) -> list[Mod]:
    """Gaussian elimination over F_l; raises on a singular system."""
    n = len(rows)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise InputError("singular linear system over F_l")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def eigenbasis(ell: int, order: int = 60) -> EigenformBasis:
    """Simultaneous normalized T_p eigenforms of S_{l+1} over F_l.

    Requires T_2 to act with distinct eigenvalues in F_l; eigenforms are
    ordered by decreasing T_2 eigenvalue representative.
    """
    if ell < 5 or not is_prime(ell):
        raise InputError(f"need a prime l >= 5, got {ell}")
    k = ell + 1
    ring = GF(ell)
    monos = monomial_basis(k, cusp_only=True)
    r = len(monos)
    if r == 0:
        return EigenformBasis(ell, order, (), (), ())
    n = max(order, 2 * r + 2)
    gens = [monomial_form(a, b, c, n, ring) for (a, b, c) in monos]
    # matrix of T_2 in the monomial basis, solved from coefficients q^1..q^r
    basis_rows = [[gens[i].coeff(m) for i in range(r)] for m in range(1, r + 1)]
    t_cols = []
    for g in gens:
        tg = hecke_Tp(g, 2, k, out_order=r)
        t_cols.append(_solve_linear_mod([row[:] for row in basis_rows],
                                        [tg.coeff(m) for m in range(1, r + 1)], ell))
    # t_cols[i][j]: coefficient of gens[j] in T_2 gens[i]
    eigs = _distinct_eigenvalues([[t_cols[i][j] for i in range(r)] for j in range(r)], ell)
    forms, combos = [], []
    for lam in eigs:
        vec = _eigenvector([[t_cols[i][j] for i in range(r)] for j in range(r)], lam, ell)
        f = QSeries.zero(ring, n)
        for coef, g in zip(vec, gens):
            if coef:
                f = f + g.scale(coef)
        a1 = f.coeff(1)
        if not a1:
            raise InputError("eigenform cannot be normalized: a(1) = 0")
        inv = a1.inverse()
        f = f.scale(inv)
        vec = [v * inv for v in vec]
        forms.append(f)
        combos.append(tuple((monos[i], v.value) for i, v in enumerate(vec) if v))
    return EigenformBasis(ell, n, tuple(forms), tuple(eigs), tuple(combos))


def _distinct_eigenvalues(mat: list[list[Mod]], ell: int) -> list[Mod]:
    """Eigenvalues of a small matrix over F_l, largest representative first.

    Scans all of F_l against the characteristic polynomial; repeated or
    missing roots are rejected (the eigenbasis is then not defined over F_l).
    """
    r = len(mat)
    ring = GF(ell)
    # char poly by Faddeev-LeVerrier is overkill at r <= 3; expand directly
    charpoly = _charpoly(mat, ring)
    roots = [Mod(t, ell) for t in range(ell) if not charpoly.evaluate(Mod(t, ell))]
    if len(roots) != r:
        raise InputError(
            f"eigenbasis not defined over F_{ell}: T_2 eigenvalues are not "
            f"distinct elements of F_{ell}")
    return sorted(roots, key=lambda v: -v.value)


def _charpoly(mat: list[list[Mod]], ring) -> Poly:
    """det(x I - M) by cofactor expansion over Poly(F_l); fine for small r."""
    r = len(mat)
    x = Poly(ring, [ring.zero, ring.one])
    entries = [[x - Poly(ring, [mat[i][j]]) if i == j
                else Poly(ring, [-mat[i][j]]) for j in range(r)] for i in range(r)]
    return _det_poly(entries, ring)


def _det_poly(m: list[list[Poly]], ring) -> Poly:
    if len(m) == 1:
        return m[0][0]
    out = Poly(ring, [ring.zero])
    for col in range(len(m)):
        minor = [row[:col] + row[col + 1:] for row in m[1:]]
        term = m[0][col] * _det_poly(minor, ring)
        out = out + (term if col % 2 == 0 else -term)
    return out


def _eigenvector(mat: list[list[Mod]], lam: Mod, ell: int) -> list[Mod]:
    """A nonzero kernel vector of (M - lam I) over F_l."""
    r = len(mat)
    ring = GF(ell)
    a = [[mat[i][j] - (lam if i == j else ring.zero) for j in range(r)]
         for i in range(r)]
    # row reduce
    pivots = []
    row = 0
    for col in range(r):
        piv = next((i for i in range(row, r) if a[i][col]), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = a[row][col].inverse()
        a[row] = [v * inv for v in a[row]]
        for i in range(r):
            if i != row and a[i][col]:
                f = a[i][col]
                a[i] = [u - f * v for u, v in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
    free = next((c for c in range(r) if c not in pivots), None)
    if free is None:
        raise InputError(f"{lam!r} is not an eigenvalue")
    vec = [ring.zero] * r
    vec[free] = ring.one
    for i, col in enumerate(pivots):
        vec[col] = -a[i][free]
    return vec


def eisenstein_cusp_split(f: QSeries, ell: int) -> tuple[Mod, QSeries]:
    """Split a weight l+1 form mod l as c0 * E_{l+1} plus a cusp expansion."""
    ring = GF(ell)
    if f.ring.name != ring.name:
        raise InputError(f"series must live over GF({ell})")
    c0 = f.coeff(0)
    cusp = f - eisenstein(ell + 1, f.trunc, ring).scale(c0)
    return c0, cusp
