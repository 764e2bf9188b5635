"""Smith normal form over the integers, with unimodular transforms.

Matrices are plain lists of lists of Python ints so that entries never
overflow.  ``smith_normal_form(A)`` returns ``(D, U, V)`` with ``U A V == D``.
"""


def zeros(rows, cols):
    return [[0] * cols for _ in range(rows)]


def identity(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def matmul(A, B):
    if not A:
        return []
    n = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        if len(row) != n:
            raise ValueError("shape mismatch")
        acc = [0] * cols
        for k, a in enumerate(row):
            if a:
                bk = B[k]
                for j in range(cols):
                    if bk[j]:
                        acc[j] += a * bk[j]
        out.append(acc)
    return out


def transpose(A, cols=None):
    if not A:
        return [[] for _ in range(cols or 0)]
    return [list(r) for r in zip(*A)]


def shape(A, cols=None):
    return len(A), (len(A[0]) if A else (cols or 0))


def smith_normal_form(A, cols=None):
    """Return ``(D, U, V)`` with ``U @ A @ V == D`` and a divisibility chain.

    ``cols`` is only needed when ``A`` has zero rows.
    """
    m, n = shape(A, cols)
    D = [list(r) for r in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        # row dst += k * row src
        if k:
            rs, rd = D[src], D[dst]
            for c in range(n):
                if rs[c]:
                    rd[c] += k * rs[c]
            us, ud = U[src], U[dst]
            for c in range(m):
                if us[c]:
                    ud[c] += k * us[c]

    def add_col(src, dst, k):
        if k:
            for row in D:
                if row[src]:
                    row[dst] += k * row[src]
            for row in V:
                if row[src]:
                    row[dst] += k * row[src]

    def neg_row(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // p
                    add_row(t, i, -q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // p
                    add_col(t, j, -q)
                    if D[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # move the smallest remainder to the pivot
            best = None
            for i in range(t, m):
                v = D[i][t]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, "r")
            for j in range(t, n):
                v = D[t][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), j, "c")
            if best[2] == "r":
                swap_rows(t, best[1])
            else:
                swap_cols(t, best[1])
        if D[t][t] < 0:
            neg_row(t)
        t += 1
    return D, U, V


def diagonal(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def rank(A, cols=None):
    D, _, _ = smith_normal_form(A, cols)
    return sum(1 for d in diagonal(D) if d)


def inverse_unimodular(U):
    """Inverse of a unimodular integer matrix via SNF of ``U`` (which is I)."""
    D, P, Q = smith_normal_form(U)
    # P U Q = D = diag(+-1)  =>  U^-1 = Q D^-1 P, and D^-1 = D
    n = len(U)
    for i in range(n):
        if abs(D[i][i]) != 1:
            raise ValueError("matrix is not unimodular")
    DP = [[D[i][i] * x for x in P[i]] for i in range(n)]
    return matmul(Q, DP)


def determinant(A):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def homology_from_boundaries(boundaries, dims):
    """Integer homology of a chain complex given its boundary matrices.

    ``dims[k]`` is the rank of C_k and ``boundaries[k]`` the matrix of
    C_k -> C_{k-1} (``dims[k-1]`` rows, ``dims[k]`` columns); ``boundaries[0]``
    is ignored.  Returns ``{k: (betti, torsion_list)}``.
    """
    ranks = {}
    elem = {}
    top = len(dims) - 1
    for k in range(1, top + 1):
        B = boundaries[k]
        D, _, _ = smith_normal_form(B, dims[k]) if dims[k - 1] else ([], None, None)
        diag = [d for d in diagonal(D) if d] if dims[k - 1] and dims[k] else []
        ranks[k] = len(diag)
        elem[k] = diag
    out = {}
    for k in range(top + 1):
        r_out = ranks.get(k, 0)
        r_in = ranks.get(k + 1, 0)
        betti = dims[k] - r_out - r_in
        torsion = [d for d in elem.get(k + 1, []) if d > 1]
        out[k] = (betti, torsion)
    return out
