"""Exact product exponents of class polynomials and their congruences mod l.

The generating identity: writing the weighted class polynomial evaluated
at j as q^(-h(d)) prod (1-q^n)^A(n^2,d), the negated logarithmic
q-derivative L(q) has constant term h(d) and [q^n] L = sum over m|n of
m A(m^2,d).  Everything exact runs over Q (integrality of the recovered
exponents is asserted, not assumed); reductions mod l happen at the end.

Fitting: over F_l the series L is a combination of E_{l+1} and the
weight l+1 cusp eigenforms; the constant term gives c0 and an r x r
linear solve on coefficients q^1..q^r gives c_1..c_r, after which the
whole series identity is re-verified to the requested order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import (Mod, QuadExt, dirichlet_inverse, divisors, kronecker,
                    moebius, sigma)
from .classpoly import eligibility, hilbert_class_poly
from .errors import (IneligiblePairError, InputError,
                     InternalConsistencyError, TruncationError)
from .qseries import QQ, ZZ, QSeries, f2, jfunction
from .ssforms import (EigenformBasis, _solve_linear_mod, eigenbasis,
                      eisenstein_cusp_split)


@dataclass(frozen=True)
class ExponentTable:
    """Exact exponents A(n^2, d) for 1 <= n <= n_max."""

    d: int
    n_max: int
    values: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise InputError(f"index {n} outside 1..{self.n_max}")
        return self.values[n - 1]

    def to_document(self) -> dict:
        return {"d": self.d, "n_max": self.n_max, "values": list(self.values)}


_LOGDER_CACHE: dict[int, QSeries] = {}


def log_derivative_exact(d: int, n: int, cache_dir: str | None = None) -> QSeries:
    """-q d/dq log of the weighted class polynomial at j, over Q, to order n.

    Computed per component as w * (-q dS/dq) / S with S = P(j(z)), which
    stays in Z because S has unit leading coefficient; the weighted sum
    has constant term h(d) (checked).
    """
    cached = _LOGDER_CACHE.get(d)
    if cached is not None and cached.trunc >= n:
        return cached.truncate(n)
    wcp = hilbert_class_poly(d, cache_dir=cache_dir)
    j = jfunction(n, ZZ)
    total = QSeries.zero(QQ, n)
    for poly, w in wcp.components:
        s = poly.evaluate_series(j)
        li = (-s.q_derivative()) / s
        total = total + li.truncate(n).map_coefficients(lambda c: w * c, QQ)
    if total.coeff(0) != wcp.h:
        raise InternalConsistencyError(
            f"constant term {total.coeff(0)} != h({d}) = {wcp.h}")
    _LOGDER_CACHE[d] = total
    return total


def exact_exponents(d: int, n_max: int, cache_dir: str | None = None) -> ExponentTable:
    """A(n^2, d) for n = 1..n_max by Moebius inversion of the log derivative."""
    L = log_derivative_exact(d, n_max, cache_dir=cache_dir)
    out = []
    for n in range(1, n_max + 1):
        s = sum(moebius(n // m) * L.coeff(m) for m in divisors(n))
        a = s / n
        if a.denominator != 1:
            raise InternalConsistencyError(
                f"exponent A({n}^2,{d}) = {a} is not an integer")
        out.append(a.numerator)
    return ExponentTable(d, n_max, tuple(out))


def log_derivative_mod(d: int, ell: int, n: int,
                       cache_dir: str | None = None) -> QSeries:
    """Reduction mod l of the exact log derivative, for eligible (d, l)."""
    report = eligibility(d, ell, cache_dir=cache_dir)
    if not report.divides:
        raise IneligiblePairError(
            f"H_{d} mod {ell} does not divide s_{ell}: the weight l+1 "
            f"membership hypothesis fails for (d={d}, l={ell})")
    return log_derivative_exact(d, n, cache_dir=cache_dir).reduce_mod(ell)


@dataclass(frozen=True)
class CongruenceFormula:
    """Fitted data: A(n^2,d) = (1/n) sum_{m|n} mu(n/m)(-24 c0 sigma_1(m) + sum c_i a_i(m)) mod l."""

    d: int
    ell: int
    c0: Mod
    c: tuple[Mod, ...]
    basis: EigenformBasis
    verified_to: int

    @property
    def rank(self) -> int:
        return len(self.c)

    def to_document(self) -> dict:
        return {
            "d": self.d,
            "ell": self.ell,
            "c0": self.c0.value,
            "c": [v.value for v in self.c],
            "basis": [self.basis.describe(i) for i in range(self.basis.dim)],
            "t2_eigenvalues": [v.value for v in self.basis.t2_eigenvalues],
            "verified_to": self.verified_to,
        }


def fit_congruence(d: int, ell: int, verify_to: int | None = None,
                   cache_dir: str | None = None) -> CongruenceFormula:
    """Fit c0, c_1..c_r and verify the full series identity to the stated order."""
    basis = eigenbasis(ell)
    r = basis.dim
    n = verify_to if verify_to is not None else max(200, 3 * r)
    if basis.order < n:
        basis = eigenbasis(ell, order=n)
    lbar = log_derivative_mod(d, ell, n, cache_dir=cache_dir)
    c0, cusp = eisenstein_cusp_split(lbar, ell)
    if r == 0:
        cvec: list[Mod] = []
        residual = cusp
    else:
        rows = [[basis.coefficient(i, m) for i in range(r)] for m in range(1, r + 1)]
        rhs = [cusp.coeff(m) for m in range(1, r + 1)]
        try:
            cvec = _solve_linear_mod(rows, rhs, ell)
        except InputError as exc:
            raise InternalConsistencyError(
                f"eigenform coefficient matrix is singular for l={ell}: "
                f"{exc}") from exc
        combo = QSeries.zero(cusp.ring, n)
        for ci, form in zip(cvec, basis.forms):
            if ci:
                combo = combo + form.truncate(n).scale(ci)
        residual = cusp - combo
    for m in range(n + 1):
        if residual.coeff(m):
            raise InternalConsistencyError(
                f"congruence verification failed at q^{m} for (d={d}, l={ell})")
    return CongruenceFormula(d, ell, c0, tuple(cvec), basis, n)


def formula_eval(F: CongruenceFormula, n: int) -> Mod:
    """Evaluate the fitted congruence at n coprime to l (D = 1, nu = mu)."""
    ell = F.ell
    if n % ell == 0:
        raise InputError(f"theorem hypothesis l does not divide n violated: {n}")
    if F.basis.dim and F.basis.order < n:
        raise TruncationError(
            f"eigenform expansions only reach order {F.basis.order} < {n}")
    m24c0 = Mod(-24, ell) * F.c0
    total = Mod(0, ell)
    for m in divisors(n):
        mu = moebius(n // m)
        if mu == 0:
            continue
        term = m24c0 * sigma(1, m)
        for ci, form in zip(F.c, F.basis.forms):
            term = term + ci * form.coeff(m)
        total = total + (term if mu == 1 else -term)
    # division by n via the Fermat inverse n^(l-2)
    return total * pow(n % ell, ell - 2, ell)


def formula_eval_prime(F: CongruenceFormula, p: int, a_values) -> Mod:
    """Prime closed form -24 c0 + p^(-1) sum c_i (a_i(p) - 1), given the a_i(p)."""
    ell = F.ell
    if p % ell == 0:
        raise InputError(f"theorem hypothesis l does not divide n violated: {p}")
    acc = Mod(0, ell)
    for ci, ap in zip(F.c, a_values):
        acc = acc + ci * (Mod(ap if isinstance(ap, int) else ap.value, ell) - 1)
    return Mod(-24, ell) * F.c0 + acc * pow(p % ell, ell - 2, ell)


def verify_congruence(d: int, ell: int, n_max: int,
                      cache_dir: str | None = None) -> tuple[int, int]:
    """Exact exponents vs formula for all n <= n_max with l not dividing n.

    Returns (verified, skipped); raises InternalConsistencyError with the
    first mismatching index otherwise.
    """
    F = fit_congruence(d, ell, verify_to=max(n_max, 200), cache_dir=cache_dir)
    table = exact_exponents(d, n_max, cache_dir=cache_dir)
    verified = skipped = 0
    for n in range(1, n_max + 1):
        if n % ell == 0:
            skipped += 1
            continue
        if Mod(table[n], ell) != formula_eval(F, n):
            raise InternalConsistencyError(
                f"exact A({n}^2,{d}) = {table[n]} != formula value mod {ell}")
        verified += 1
    return verified, skipped


# ---------------------------------------------------------------------------
# the twisted (D > 1) machinery


_NU_CACHE: dict[int, list[QuadExt]] = {}


def nu(D: int, m: int) -> QuadExt:
    """Dirichlet inverse at m of the Gauss-sum sequence r -> f2(D, r).

    Computed by the inversion recurrence; the closed form
    mu(m) (D/m) / sqrt(D) is checked against it in the test suite.
    """
    if m < 1:
        raise InputError(f"index must be >= 1, got {m}")
    cached = _NU_CACHE.get(D)
    if cached is None or len(cached) < m:
        size = max(m, 2 * len(cached) if cached else 16)
        _NU_CACHE[D] = cached = dirichlet_inverse(
            [f2(D, r) for r in range(1, size + 1)])
    return cached[m - 1]


def nu_closed_form(D: int, m: int) -> QuadExt:
    """mu(m) (D/m) / sqrt(D) as an element of Q(sqrt(D))."""
    return QuadExt(Fraction(0), Fraction(moebius(m) * kronecker(D, m), D), D)


def twisted_forward(D: int, a_seq) -> list[QuadExt]:
    """g(n) = sum_{m|n} m A(m) f2(D, n/m): the twisted log-derivative coefficients."""
    n_max = len(a_seq)
    out = []
    for n in range(1, n_max + 1):
        acc = None
        for m in divisors(n):
            term = f2(D, n // m) * (m * a_seq[m - 1])
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def twisted_roundtrip(D: int, a_seq, n_max: int | None = None) -> list[int]:
    """Push a synthetic exponent sequence through g and invert with nu.

    The inversion A(n) = (1/n) sum_{m|n} nu(m) g(n/m) must reproduce the
    input exactly (rational with zero sqrt(D) part, integral).
    """
    if n_max is None:
        n_max = len(a_seq)
    a_seq = list(a_seq)[:n_max]
    g = twisted_forward(D, a_seq)
    out = []
    for n in range(1, n_max + 1):
        acc = None
        for m in divisors(n):
            term = nu(D, m) * g[n // m - 1]
            acc = term if acc is None else acc + term
        if acc.b:
            raise InternalConsistencyError(
                f"twisted inversion at n={n} has a sqrt({D}) part: {acc!r}")
        val = acc.a / n
        if val.denominator != 1:
            raise InternalConsistencyError(
                f"twisted inversion at n={n} is not integral: {val}")
        out.append(val.numerator)
    return out
