# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: prime sieve and elliptic-curve traces.

C translation of bpx._eckernel_py (same API, same algorithms); the trace
loop releases the GIL so prime blocks can run on real threads.  Primes are
limited to p < 2^31 so products fit in 64-bit words.
"""

from libc.stdint cimport uint8_t, uint32_t, int64_t, uint64_t
from libc.stdlib cimport calloc, free, malloc



cdef uint64_t HASH_MULT = (<uint64_t> 0x9E3779B9u << 32) | <uint64_t> 0x7F4A7C15u
cdef uint64_t SEED_ADD = (<uint64_t> 0x243F6A88u << 32) | <uint64_t> 0x85A308D3u

cdef inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) noexcept nogil:
    return (a * b) % p


cdef uint64_t powmod(uint64_t b, uint64_t e, uint64_t p) noexcept nogil:
    cdef uint64_t r = 1
    b %= p
    while e:
        if e & 1:
            r = mulmod(r, b, p)
        b = mulmod(b, b, p)
        e >>= 1
    return r


cdef uint64_t invmod(uint64_t a, uint64_t p) noexcept nogil:
    cdef int64_t t = 0, newt = 1, r = <int64_t> p, newr = <int64_t> a, q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += <int64_t> p
    return <uint64_t> t


cdef uint64_t sqrtmod(uint64_t n, uint64_t p, int* ok) noexcept nogil:
    """Square root mod p via Tonelli-Shanks; *ok = 0 for a nonresidue."""
    cdef uint64_t q, z, m, c, t, r, b, t2
    cdef uint64_t s, i
    n %= p
    ok[0] = 1
    if n == 0:
        return 0
    if powmod(n, (p - 1) >> 1, p) != 1:
        ok[0] = 0
        return 0
    if p & 3 == 3:
        return powmod(n, (p + 1) >> 2, p)
    q = p - 1
    s = 0
    while q % 2 == 0:
        q >>= 1
        s += 1
    z = 2
    while powmod(z, (p - 1) >> 1, p) != p - 1:
        z += 1
    m = s
    c = powmod(z, q, p)
    t = powmod(n, q, p)
    r = powmod(n, (q + 1) >> 1, p)
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = mulmod(t2, t2, p)
            i += 1
        b = powmod(c, 1 << (m - i - 1), p)
        m = i
        c = mulmod(b, b, p)
        t = mulmod(t, c, p)
        r = mulmod(r, b, p)
    return r


# point (x, y) with inf flag
cdef struct Pt:
    uint64_t x
    uint64_t y
    int inf


cdef Pt pt_add(Pt P, Pt Q, uint64_t a, uint64_t p) noexcept nogil:
    cdef Pt R
    cdef uint64_t lam, x3
    if P.inf:
        return Q
    if Q.inf:
        return P
    if P.x == Q.x:
        if (P.y + Q.y) % p == 0:
            R.inf = 1
            R.x = 0
            R.y = 0
            return R
        lam = mulmod((mulmod(mulmod(P.x, P.x, p), 3, p) + a) % p,
                     invmod((2 * P.y) % p, p), p)
    else:
        lam = mulmod((Q.y + p - P.y) % p, invmod((Q.x + p - P.x) % p, p), p)
    x3 = (mulmod(lam, lam, p) + 2 * p - P.x - Q.x) % p
    R.x = x3
    R.y = (mulmod(lam, (P.x + p - x3) % p, p) + p - P.y) % p
    R.inf = 0
    return R


cdef Pt pt_mul(uint64_t k, Pt P, uint64_t a, uint64_t p) noexcept nogil:
    cdef Pt R
    R.inf = 1
    R.x = 0
    R.y = 0
    while k:
        if k & 1:
            R = pt_add(R, P, a, p)
        k >>= 1
        if k:
            P = pt_add(P, P, a, p)
    return R


cdef uint64_t isqrt_u64(uint64_t n) noexcept nogil:
    cdef uint64_t r = <uint64_t> 0, bit, t
    if n < 2:
        return n
    bit = 1
    while bit * bit <= n // 4 + 1 and bit < (<uint64_t> 1 << 31):
        bit <<= 1
    # Newton iteration seeded above the root
    r = bit * 2
    t = (r + n / r) >> 1
    while t < r:
        r = t
        t = (r + n / r) >> 1
    return r


cdef int64_t trace_naive(uint64_t a, uint64_t b, uint64_t p) noexcept nogil:
    cdef uint32_t* counts = <uint32_t*> calloc(p, sizeof(uint32_t))
    cdef uint64_t x, y, npts = 1
    if counts == NULL:
        return 1 << 40  # signal allocation failure; caught by caller
    for y in range(p):
        counts[(y * y) % p] += 1
    for x in range(p):
        npts += counts[(mulmod(mulmod(x, x, p), x, p) + a * x + b) % p]
    free(counts)
    return <int64_t> (p + 1) - <int64_t> npts


cdef uint64_t xorshift(uint64_t s) noexcept nogil:
    s ^= s << 13
    s ^= s >> 7
    s ^= s << 17
    return s


cdef Pt next_point(uint64_t* state, uint64_t a, uint64_t b, uint64_t p) noexcept nogil:
    cdef Pt P
    cdef uint64_t x, rhs, y
    cdef int ok
    while True:
        state[0] = xorshift(state[0])
        x = state[0] % p
        rhs = (mulmod(mulmod(x, x, p), x, p) + a * x + b) % p
        y = sqrtmod(rhs, p, &ok)
        if ok:
            P.x = x
            P.y = y
            P.inf = 0
            return P


cdef int64_t annihilator(Pt P, uint64_t a, uint64_t p, uint64_t w) noexcept nogil:
    """Some positive k with k*P = O, searched around p+1; -1 on failure."""
    cdef Pt Q, R, G, U
    cdef uint64_t m, j, i, imax, mask, h, tsize
    cdef uint64_t* tab_x
    cdef uint64_t* tab_y
    cdef uint32_t* tab_j
    cdef uint8_t* tab_used
    cdef int64_t result = -1
    Q = pt_mul(p + 1, P, a, p)
    if Q.inf:
        return <int64_t> (p + 1)
    m = isqrt_u64(2 * w) + 1
    tsize = 4
    while tsize < 4 * m:
        tsize <<= 1
    mask = tsize - 1
    tab_x = <uint64_t*> malloc(tsize * sizeof(uint64_t))
    tab_y = <uint64_t*> malloc(tsize * sizeof(uint64_t))
    tab_j = <uint32_t*> malloc(tsize * sizeof(uint32_t))
    tab_used = <uint8_t*> calloc(tsize, sizeof(uint8_t))
    if tab_x == NULL or tab_y == NULL or tab_j == NULL or tab_used == NULL:
        result = -2
    else:
        # baby steps: R = Q + jP
        R = Q
        for j in range(m):
            if R.inf:
                result = <int64_t> (p + 1 + j)
                break
            h = (R.x * HASH_MULT + R.y) & mask
            while tab_used[h]:
                if tab_x[h] == R.x and tab_y[h] == R.y:
                    break  # duplicate point; keep the first j
                h = (h + 1) & mask
            if not tab_used[h]:
                tab_used[h] = 1
                tab_x[h] = R.x
                tab_y[h] = R.y
                tab_j[h] = <uint32_t> j
            R = pt_add(R, P, a, p)
        if result == -1:
            G = pt_mul(m, P, a, p)
            U = G
            imax = w / m + 3
            for i in range(1, imax):
                if U.inf:
                    result = <int64_t> (i * m)
                    break
                # Q + jP = -(im)P  ->  k = p+1 + im + j
                h = (U.x * HASH_MULT + (p - U.y) % p) & mask
                while tab_used[h]:
                    if tab_x[h] == U.x and tab_y[h] == (p - U.y) % p:
                        result = <int64_t> (p + 1 + i * m + tab_j[h])
                        break
                    h = (h + 1) & mask
                if result != -1:
                    break
                # Q + jP = +(im)P  ->  k = p+1 - im + j
                h = (U.x * HASH_MULT + U.y) & mask
                while tab_used[h]:
                    if tab_x[h] == U.x and tab_y[h] == U.y:
                        result = <int64_t> (p + 1 - i * m + tab_j[h])
                        break
                    h = (h + 1) & mask
                if result != -1:
                    break
                U = pt_add(U, G, a, p)
    free(tab_x)
    free(tab_y)
    free(tab_j)
    free(tab_used)
    return result


cdef uint64_t exact_order(Pt P, uint64_t k, uint64_t a, uint64_t p) noexcept nogil:
    cdef uint64_t rem = k, q, f
    cdef uint64_t facs[16]
    cdef int nfac = 0, idx
    for q in range(2, 4):
        if rem % q == 0:
            facs[nfac] = q
            nfac += 1
            while rem % q == 0:
                rem /= q
    f = 5
    while f * f <= rem:
        if rem % f == 0:
            facs[nfac] = f
            nfac += 1
            while rem % f == 0:
                rem /= f
        f += 2 if f % 3 == 2 else 4
    if rem > 1:
        facs[nfac] = rem
        nfac += 1
    for idx in range(nfac):
        q = facs[idx]
        while k % q == 0 and pt_mul(k / q, P, a, p).inf:
            k /= q
    return k


cdef uint64_t gcd_u64(uint64_t a, uint64_t b) noexcept nogil:
    cdef uint64_t t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef int64_t trace_bsgs(uint64_t a, uint64_t b, uint64_t p) noexcept nogil:
    cdef uint64_t w = isqrt_u64(4 * p)
    cdef uint64_t lo = p + 1 - w, hi = p + 1 + w
    cdef uint64_t state, L = 1, order, first
    cdef int64_t k
    cdef Pt P
    cdef int trial
    state = p * HASH_MULT + SEED_ADD
    if state == 0:
        state = 1
    for trial in range(20):
        P = next_point(&state, a, b, p)
        k = annihilator(P, a, p, w)
        if k < 0:
            return 1 << 40
        order = exact_order(P, <uint64_t> k, a, p)
        L = L // gcd_u64(L, order) * order
        first = ((lo + L - 1) / L) * L
        if first > hi:
            return 1 << 40
        if first + L > hi:
            return <int64_t> (p + 1) - <int64_t> first
    return trace_naive(a, b, p)


cdef int64_t trace_one(uint64_t a, uint64_t b, uint64_t p, uint64_t naive_limit) noexcept nogil:
    if p < naive_limit:
        return trace_naive(a, b, p)
    return trace_bsgs(a, b, p)


def primes_below(limit):
    """Ascending list of all primes p < limit."""
    cdef uint64_t n = 0, i, j, lim
    if limit <= 2:
        return []
    lim = <uint64_t> limit
    cdef uint8_t* flags = <uint8_t*> malloc(lim)
    if flags == NULL:
        raise MemoryError(f"sieve of size {limit}")
    out = []
    try:
        with nogil:
            for i in range(lim):
                flags[i] = 1
            flags[0] = 0
            flags[1] = 0
            i = 2
            while i * i < lim:
                if flags[i]:
                    j = i * i
                    while j < lim:
                        flags[j] = 0
                        j += i
                i += 1
        for i in range(lim):
            if flags[i]:
                out.append(i)
    finally:
        free(flags)
    return out


def ec_trace(a, b, p, naive_limit=10000):
    """Trace of Frobenius of y^2 = x^3 + a*x + b over F_p (p >= 5 prime)."""
    cdef uint64_t pp = <uint64_t> p
    if p >= (1 << 31):
        raise OverflowError("compiled kernel supports p < 2**31")
    cdef uint64_t aa = <uint64_t> (a % p), bb = <uint64_t> (b % p)
    if (4 * aa % pp * aa % pp * aa + 27 * bb * bb) % pp == 0:
        raise ValueError(f"singular curve mod {p}")
    cdef int64_t t
    cdef uint64_t nl = <uint64_t> naive_limit
    with nogil:
        t = trace_one(aa, bb, pp, nl)
    if t >= (1 << 39):
        raise MemoryError("trace kernel allocation failed")
    return t


cdef inline uint64_t fq2_mul(uint64_t x, uint64_t y, uint64_t l, uint64_t ns) noexcept nogil:
    cdef uint64_t xu = x / l, xv = x % l, yu = y / l, yv = y % l
    return ((xu * yu + xv * yv % l * ns) % l) * l + (xu * yv + xv * yu) % l


cdef inline uint64_t fq2_sub(uint64_t x, uint64_t y, uint64_t l) noexcept nogil:
    return ((x / l + l - y / l) % l) * l + (x % l + l - y % l) % l


cdef uint64_t fq2_inv(uint64_t x, uint64_t l, uint64_t ns) noexcept nogil:
    cdef uint64_t xu = x / l, xv = x % l
    cdef uint64_t n = (xu * xu + (l - 1) * (xv * xv % l) % l * ns) % l
    cdef uint64_t ni = invmod(n, l)
    return (xu * ni % l) * l + (l - xv) % l * ni % l


def supersingular_js_fq2(ell, nonres):
    """Supersingular j-invariants in F_(l^2) by point counting; see the
    pure-Python twin for the encoding (u + v*w as u*l + v, v <= (l-1)/2)."""
    cdef uint64_t l = <uint64_t> ell, ns = <uint64_t> nonres
    cdef uint64_t n2 = l * l, enc1728 = (1728 % l) * l, one = l
    cdef uint64_t ju, jv, j, a, b, x, fx, k, u, v
    cdef int64_t t
    cdef uint8_t* chi = <uint8_t*> calloc(n2, 1)
    cdef uint64_t* cube = <uint64_t*> malloc(n2 * sizeof(uint64_t))
    cdef uint64_t* found = <uint64_t*> malloc(n2 * sizeof(uint64_t))
    cdef uint64_t nfound = 0
    if chi == NULL or cube == NULL or found == NULL:
        free(chi)
        free(cube)
        free(found)
        raise MemoryError
    out = []
    try:
        with nogil:
            for u in range(l):
                for v in range(l):
                    chi[((u * u + v * v % l * ns) % l) * l + 2 * u * v % l] = 1
            chi[0] = 0
            for x in range(n2):
                cube[x] = fq2_mul(fq2_mul(x, x, l, ns), x, l, ns)
            for ju in range(l):
                for jv in range((l + 1) / 2):
                    j = ju * l + jv
                    if j == 0:
                        a = 0
                        b = one
                    elif j == enc1728:
                        a = one
                        b = 0
                    else:
                        k = fq2_mul(j, fq2_inv(fq2_sub(enc1728, j, l), l, ns), l, ns)
                        a = fq2_mul(3 * l, k, l, ns)
                        b = fq2_mul(2 * l, k, l, ns)
                    t = 0
                    for x in range(n2):
                        fx = fq2_mul(a, x, l, ns)
                        fx = ((cube[x] / l + fx / l + b / l) % l) * l \
                            + (cube[x] % l + fx % l + b % l) % l
                        if fx:
                            t += 1 if chi[fx] else -1
                    if t % <int64_t> l == 0:
                        found[nfound] = j
                        nfound += 1
        for x in range(nfound):
            out.append(found[x])
        return out
    finally:
        free(chi)
        free(cube)
        free(found)


def ec_traces(a, b, primes, naive_limit=10000):
    """Traces of the global curve y^2 = x^3 + a*x + b at each given prime."""
    cdef Py_ssize_t n = len(primes), idx
    cdef uint64_t* ps = <uint64_t*> malloc(n * sizeof(uint64_t))
    cdef uint64_t* aas = <uint64_t*> malloc(n * sizeof(uint64_t))
    cdef uint64_t* bbs = <uint64_t*> malloc(n * sizeof(uint64_t))
    cdef int64_t* ts = <int64_t*> malloc(n * sizeof(int64_t))
    cdef uint64_t nl = <uint64_t> naive_limit
    cdef uint64_t aa, bb, pp
    if ps == NULL or aas == NULL or bbs == NULL or ts == NULL:
        free(ps)
        free(aas)
        free(bbs)
        free(ts)
        raise MemoryError
    try:
        # per-prime reductions need Python-int arithmetic: do them up front
        for idx in range(n):
            p = primes[idx]
            if p >= (1 << 31):
                raise OverflowError("compiled kernel supports p < 2**31")
            pp = <uint64_t> p
            aa = <uint64_t> (a % p)
            bb = <uint64_t> (b % p)
            if (4 * aa % pp * aa % pp * aa + 27 * bb * bb) % pp == 0:
                raise ValueError(f"singular curve mod {p}")
            ps[idx] = pp
            aas[idx] = aa
            bbs[idx] = bb
        with nogil:
            for idx in range(n):
                ts[idx] = trace_one(aas[idx], bbs[idx], ps[idx], nl)
        out = [0] * n
        for idx in range(n):
            if ts[idx] >= (1 << 39):
                raise MemoryError("trace kernel allocation failed")
            out[idx] = ts[idx]
        return out
    finally:
        free(ps)
        free(aas)
        free(bbs)
        free(ts)
