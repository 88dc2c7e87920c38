"""Combinatorial Picard lattice of the blowup and the Coxeter action.

The lattice is represented by an explicit ordered basis {H, E_{i,j}} (plus V
for the biprojective variant), a Gram matrix for the invariant pairing, and a
root basis whose reflections generate a T-shaped Weyl group.  The pullback
action of the map is assembled two independent ways, as the reflection
decomposition s0 * sigma-hat * pi_0 ... pi_k and directly from hyperplane
degrees and exceptional multiplicities, so the two can be cross-checked.

Characteristic polynomials come from the Berkowitz algorithm (division-free,
stays in integers), and spectral radii reuse the certified Sturm isolation
from the spectra module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .arith import DEFAULT_PRECISION_BITS, BigFloat
from .polynomials import IntegerPolynomial
from .spectra import leading_salem_root, strip_cyclotomic


class LatticeError(Exception):
    pass


@dataclass(frozen=True)
class OrbitData:
    lengths: tuple
    sigma: tuple  # permutation of {0..k}: orbit i feeds indeterminacy sigma(i)

    def __post_init__(self):
        k1 = len(self.lengths)
        if any(n < 1 for n in self.lengths):
            raise LatticeError("orbit lengths must be positive")
        if sorted(self.sigma) != list(range(k1)):
            raise LatticeError("sigma must be a permutation of the orbit indices")

    @classmethod
    def coxeter(cls, k: int, n: int) -> "OrbitData":
        """(1, ..., 1, n) with the cyclic permutation i -> i+1."""
        return cls(
            lengths=tuple([1] * k + [n]),
            sigma=tuple((i + 1) % (k + 1) for i in range(k + 1)),
        )

    @property
    def total(self) -> int:
        return sum(self.lengths)

    def sigma_inverse(self, i: int) -> int:
        return self.sigma.index(i)


class PicardLattice:
    """Basis-indexed lattice for a blowup of P^k at N curve points.

    Basis order: H, then E_{0,1}..E_{k,1}, then the tail of the longest
    orbit, then remaining tails in (orbit, step) order.
    """

    def __init__(self, k: int, orbit: OrbitData):
        if k < 2:
            raise LatticeError("k must be >= 2")
        if len(orbit.lengths) != k + 1:
            raise LatticeError("need k+1 orbit lengths")
        self.k = k
        self.orbit = orbit
        labels = [("H",)] + [("E", i, 1) for i in range(k + 1)]
        longest = max(range(k + 1), key=lambda i: (orbit.lengths[i], i))
        labels += [("E", longest, j) for j in range(2, orbit.lengths[longest] + 1)]
        for i in range(k + 1):
            if i != longest:
                labels += [("E", i, j) for j in range(2, orbit.lengths[i] + 1)]
        self.labels = labels
        self.index = {lab: pos for pos, lab in enumerate(labels)}
        self.rank = len(labels)

    def gram(self):
        """<H,H> = k-1, <E,E> = -1, everything else orthogonal."""
        g = [[0] * self.rank for _ in range(self.rank)]
        g[0][0] = self.k - 1
        for i in range(1, self.rank):
            g[i][i] = -1
        return g

    def basis_vector(self, label):
        v = [0] * self.rank
        v[self.index[label]] = 1
        return v

    def e_index(self, i: int, j: int) -> int:
        return self.index[("E", i, j)]

    def roots(self):
        """alpha_0 = H - sum E_{i,1}; alpha_i = E_{i-1} - E_i in basis order."""
        out = []
        a0 = [0] * self.rank
        a0[0] = 1
        for i in range(self.k + 1):
            a0[self.e_index(i, 1)] = -1
        out.append(a0)
        for i in range(2, self.rank):
            a = [0] * self.rank
            a[i - 1] = 1
            a[i] = -1
            out.append(a)
        return out

    def anticanonical(self):
        """-K_X = (k+1)H - (k-1) sum E_{i,j}."""
        v = [0] * self.rank
        v[0] = self.k + 1
        for pos in range(1, self.rank):
            v[pos] = -(self.k - 1)
        return v

    def curve_degrees(self):
        """Intersection numbers with the curve: H.C = k+1, E.C = 1."""
        return [self.k + 1] + [1] * (self.rank - 1)


def pair(gram, a, b) -> int:
    return sum(a[i] * gram[i][j] * b[j] for i in range(len(a)) for j in range(len(a)))


def reflection(alpha: Sequence[int], gram):
    """Matrix of D -> D + <D, alpha> alpha; alpha must have norm -2."""
    if pair(gram, alpha, alpha) != -2:
        raise LatticeError("reflection requires a root of square -2")
    n = len(alpha)
    # <e_j, alpha> as a row functional
    func = [sum(gram[j][i] * alpha[i] for i in range(n)) for j in range(n)]
    return [
        [(1 if r == c else 0) + alpha[r] * func[c] for c in range(n)]
        for r in range(n)
    ]


def mat_mul(a, b):
    n = len(a)
    return [
        [sum(a[i][l] * b[l][j] for l in range(n)) for j in range(n)]
        for i in range(n)
    ]


def mat_vec(a, v):
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def preserves_form(m, gram) -> bool:
    n = len(m)
    mt_g_m = [
        [
            sum(m[a][i] * gram[a][b] * m[b][j] for a in range(n) for b in range(n))
            for j in range(n)
        ]
        for i in range(n)
    ]
    return mt_g_m == gram


def build_lattice(k: int, orbit: OrbitData):
    """(lattice, Gram, roots) for a pk blowup with the given orbit data."""
    lat = PicardLattice(k, orbit)
    return lat, lat.gram(), lat.roots()


def coxeter_action(k: int, orbit: OrbitData):
    """Integer matrix of the pullback on Pic, as s0 * sigma-hat * pi_0..pi_k.

    pi_i cycles the exceptional classes along orbit i; sigma-hat permutes the
    first-step classes E_{i,1} -> E_{sigma(i),1}; s0 reflects in
    H - sum E_{i,1}.
    """
    lat = PicardLattice(k, orbit)
    gram = lat.gram()
    s0 = reflection(lat.roots()[0], gram)
    n = lat.rank
    sigma_hat = [[0] * n for _ in range(n)]
    sigma_hat[0][0] = 1
    for lab in lat.labels[1:]:
        _, i, j = lab
        target = ("E", orbit.sigma[i], 1) if j == 1 else lab
        sigma_hat[lat.index[target]][lat.index[lab]] = 1
    prod = identity_matrix(n)
    for i in range(k + 1):
        pi = [[0] * n for _ in range(n)]
        pi[0][0] = 1
        for lab in lat.labels[1:]:
            _, m, j = lab
            if m == i:
                nxt = ("E", i, j + 1 if j < orbit.lengths[i] else 1)
                pi[lat.index[nxt]][lat.index[lab]] = 1
            else:
                pi[lat.index[lab]][lat.index[lab]] = 1
        prod = mat_mul(prod, pi)
    return mat_mul(s0, mat_mul(sigma_hat, prod)), lat


def geometric_pullback(k: int, orbit: OrbitData):
    """The same action assembled from degrees and multiplicities:
    the hyperplane class maps to kH - (k-1) sum E_{m,1}; E_{i,j} moves
    forward to E_{i,j+1} for j < n_i; the last class of orbit i becomes
    H - sum_{m != sigma(i)} E_{m,1} (the exceptional divisor over the
    indeterminacy point blows up to a hyperplane through the other
    first-step centers)."""
    lat = PicardLattice(k, orbit)
    n = lat.rank
    cols = {}
    h_col = [0] * n
    h_col[0] = k
    for m in range(k + 1):
        h_col[lat.e_index(m, 1)] = -(k - 1)
    cols[("H",)] = h_col
    for lab in lat.labels[1:]:
        _, i, j = lab
        if j < orbit.lengths[i]:
            cols[lab] = lat.basis_vector(("E", i, j + 1))
        else:
            v = [0] * n
            v[0] = 1
            for m in range(k + 1):
                if m != orbit.sigma[i]:
                    v[lat.e_index(m, 1)] = -1
            cols[lab] = v
    return [
        [cols[lab][r] for lab in lat.labels] for r in range(n)
    ], lat


def berkowitz_charpoly(matrix) -> IntegerPolynomial:
    """Characteristic polynomial det(xI - A), division-free."""
    n = len(matrix)
    # coefficients highest degree first; char poly of the empty matrix is 1
    coeffs = [1]
    for r in range(1, n + 1):
        sub = [row[: r - 1] for row in matrix[: r - 1]]
        row_r = matrix[r - 1][: r - 1]
        col_r = [matrix[i][r - 1] for i in range(r - 1)]
        a = matrix[r - 1][r - 1]
        v = [1, -a]
        w = col_r[:]
        for _ in range(r - 1):
            v.append(-sum(row_r[i] * w[i] for i in range(r - 1)))
            w = [
                sum(sub[i][j] * w[j] for j in range(r - 1)) for i in range(r - 1)
            ]
        coeffs = [
            sum(v[i - j] * coeffs[j] for j in range(len(coeffs)) if 0 <= i - j < len(v))
            for i in range(r + 1)
        ]
    return IntegerPolynomial(list(reversed(coeffs)))


def spectral_radius(
    matrix, precision_bits: int = DEFAULT_PRECISION_BITS
):
    """(radius, char poly, salem core or None); radius 1 when the polynomial
    is purely cyclotomic."""
    cp = berkowitz_charpoly(matrix)
    _, core = strip_cyclotomic(cp)
    if core.degree == 0:
        return BigFloat(1, precision_bits), cp, None
    salem = core if core.leading() > 0 else -core
    root = leading_salem_root(salem, precision_bits)
    if root is None:
        return BigFloat(1, precision_bits), cp, salem
    return root.value, cp, salem


# ---------------------------------------------------------------------------
# abstract T(p,q,r) diagrams


def tpqr_gram(p: int, q: int, r: int):
    """Gram matrix (-2 on the diagonal, 1 across edges) of the T-shaped tree
    with arms of p-1, q-1, r-1 nodes joined at a branch node (listed last)."""
    if min(p, q, r) < 1:
        raise LatticeError("arm parameters must be >= 1")
    arms = [p - 1, q - 1, r - 1]
    n = sum(arms) + 1
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = -2
    branch = n - 1
    pos = 0
    for arm in arms:
        for step in range(arm):
            node = pos + step
            neighbor = node + 1 if step < arm - 1 else branch
            g[node][neighbor] = g[neighbor][node] = 1
        pos += arm
    return g


def coxeter_element_tpqr(
    p: int, q: int, r: int, precision_bits: int = DEFAULT_PRECISION_BITS
):
    """(matrix, char poly, spectral radius) for the product of all simple
    reflections of T(p,q,r), branch node last."""
    gram = tpqr_gram(p, q, r)
    n = len(gram)
    m = identity_matrix(n)
    for i in range(n):  # arms first, branch node last by construction
        alpha = [1 if j == i else 0 for j in range(n)]
        m = mat_mul(m, reflection(alpha, gram))
    radius, cp, _ = spectral_radius(m, precision_bits)
    return m, cp, radius


# ---------------------------------------------------------------------------
# canonical pairings and curve traces


def canonical_pairings(k: int, orbit: OrbitData):
    """(<K,K>, K.C), each computed from the closed form and recomputed from
    the basis; a mismatch raises."""
    lat = PicardLattice(k, orbit)
    bign = orbit.total
    kk_closed = (k + 1) ** 2 * (k - 1) - (k - 1) ** 2 * bign
    kc_closed = bign * (k - 1) - (k + 1) ** 2
    minus_k = lat.anticanonical()
    kk_gram = pair(lat.gram(), minus_k, minus_k)
    degs = lat.curve_degrees()
    kc_basis = -sum(c * d for c, d in zip(minus_k, degs))
    if kk_gram != kk_closed or kc_basis != kc_closed:
        raise LatticeError(
            f"pairing mismatch: closed ({kk_closed},{kc_closed}) vs "
            f"recomputed ({kk_gram},{kc_basis})"
        )
    return kk_closed, kc_closed


@dataclass
class TraceReport:
    k: int
    n: int
    checked: list  # (description, passed)
    salem_divides: bool

    @property
    def all_passed(self) -> bool:
        return self.salem_divides and all(ok for _, ok in self.checked)


def class_traces(construction):
    """u-parameter traces of the basis classes, u = t - 1.

    A hyperplane meets the curve at parameters summing to 0, so tr(H) =
    -(k+1) in u coordinates; E_{i,j} carries the parameter of its center,
    the (j-1)-st forward image of the i-th exceptional point.
    """
    k = construction.k
    delta = construction.delta
    fld = construction.field
    orbit = OrbitData.coxeter(k, construction.n)
    lat = PicardLattice(k, orbit)
    traces = [fld.element([-(k + 1)])]
    for lab in lat.labels[1:]:
        _, i, j = lab
        traces.append(delta ** (j - 1) * (construction.s_params[i] - 1))
    return lat, traces


def trace_compatibility(construction, sample_classes=None) -> TraceReport:
    """Check tr(F* D) = delta tr(D) for degree-zero classes D.

    The trace functional is linear over the basis traces; degree zero means
    D.C = 0, which makes the trace independent of translation normalization.
    """
    k, n = construction.k, construction.n
    delta = construction.delta
    orbit = OrbitData.coxeter(k, n)
    m, lat = coxeter_action(k, orbit)
    lat_t, traces = class_traces(construction)
    assert lat.labels == lat_t.labels
    degs = lat.curve_degrees()
    if sample_classes is None:
        sample_classes = default_trace_classes(lat)
    checked = []
    for desc, vec in sample_classes:
        if sum(c * d for c, d in zip(vec, degs)) != 0:
            checked.append((desc + " (not degree zero)", False))
            continue
        tr_d = sum((traces[i] * c for i, c in enumerate(vec)), construction.field.zero())
        image = mat_vec(m, vec)
        tr_fd = sum(
            (traces[i] * c for i, c in enumerate(image)), construction.field.zero()
        )
        checked.append((desc, tr_fd == delta * tr_d))
    cp = berkowitz_charpoly(m)
    quot = cp.try_divide(construction.modulus)
    salem_divides = quot is not None
    if not salem_divides:
        quot = (-cp).try_divide(construction.modulus)
        salem_divides = quot is not None
    return TraceReport(k=k, n=n, checked=checked, salem_divides=salem_divides)


def default_trace_classes(lat: PicardLattice):
    """Three degree-zero sample classes in the span of H and the E's."""
    k = lat.k
    out = []
    v = [0] * lat.rank
    v[0] = -1
    v[lat.e_index(0, 1)] = k + 1
    out.append(("(k+1)E_{0,1} - H", v))
    w = [0] * lat.rank
    w[lat.e_index(0, 1)] = 1
    w[lat.e_index(1, 1)] = -1
    out.append(("E_{0,1} - E_{1,1}", w))
    u = [0] * lat.rank
    u[0] = -1
    u[lat.e_index(k, 1)] = k
    if lat.orbit.lengths[k] > 1:
        u[lat.e_index(k, 2)] = 1
        out.append(("kE_{k,1} + E_{k,2} - H", u))
    else:
        u[lat.e_index(0, 1)] = 1
        out.append(("kE_{k,1} + E_{0,1} - H", u))
    return out


# ---------------------------------------------------------------------------
# biprojective action


class BiprojLattice:
    """Basis {H, V, E_{i,j}} for a blowup of P^k x P^k, N = k + n points."""

    def __init__(self, k: int, n: int):
        self.k = k
        self.n = n
        self.orbit = OrbitData.coxeter(k, n)
        labels = [("H",), ("V",)] + [("E", i, 1) for i in range(k + 1)]
        labels += [("E", k, j) for j in range(2, n + 1)]
        self.labels = labels
        self.index = {lab: pos for pos, lab in enumerate(labels)}
        self.rank = len(labels)

    def e_index(self, i, j):
        return self.index[("E", i, j)]

    def basis_vector(self, label):
        v = [0] * self.rank
        v[self.index[label]] = 1
        return v

    def gram(self):
        """Invariant pairing: <H,H> = <V,V> = k-1, <H,V> = k, <E,E> = -1."""
        g = [[0] * self.rank for _ in range(self.rank)]
        g[0][0] = g[1][1] = self.k - 1
        g[0][1] = g[1][0] = self.k
        for i in range(2, self.rank):
            g[i][i] = -1
        return g

    def anticanonical(self):
        """-K = (k+1)(H + V) - (2k-1) sum E_{i,j}."""
        v = [0] * self.rank
        v[0] = v[1] = self.k + 1
        for pos in range(2, self.rank):
            v[pos] = -(2 * self.k - 1)
        return v


def biproj_pic_action(k: int, n: int):
    """Induced action on the biprojective Picard lattice: the horizontal
    class maps to kV - (k-1) sum E_{m,1}, the vertical class to
    H + kV - k sum E_{m,1}, E_{i,j} moves forward to E_{i,j+1} for j < n_i,
    and the last class of orbit i becomes V - sum_{m != sigma(i)} E_{m,1}."""
    lat = BiprojLattice(k, n)
    orbit = lat.orbit
    cols = {}
    h_col = [0] * lat.rank
    h_col[1] = k
    for m in range(k + 1):
        h_col[lat.e_index(m, 1)] = -(k - 1)
    cols[("H",)] = h_col
    v_col = [0] * lat.rank
    v_col[0] = 1
    v_col[1] = k
    for m in range(k + 1):
        v_col[lat.e_index(m, 1)] = -k
    cols[("V",)] = v_col
    for lab in lat.labels[2:]:
        _, i, j = lab
        if j < orbit.lengths[i]:
            cols[lab] = lat.basis_vector(("E", i, j + 1))
        else:
            v = [0] * lat.rank
            v[1] = 1
            for m in range(k + 1):
                if m != orbit.sigma[i]:
                    v[lat.e_index(m, 1)] = -1
            cols[lab] = v
    return [[cols[lab][r] for lab in lat.labels] for r in range(lat.rank)], lat
