"""Mixed complexes and their derived cochain complexes.

A mixed complex is a nonnegatively graded space with a degree +1 operator
delta and a degree -1 operator beta that square to zero and anticommute.
From it we build the derived complexes: the total +complex (always a
finite product per degree), the band slices of the +, - and 2-periodic
complexes at a fixed effective weight, mapping cones, and the long exact
sequences of short exact sequences with explicit zig-zag connecting maps.

Effective weight: a basis element of weight p sitting in the degree-m slot
of a degree-r slice has effective weight w = p + (m - r)/2.  Both delta
(weight-preserving, slot degree +1) and beta (weight +1, slot degree -1)
preserve w, so each derived complex splits into finite per-w bands.
"""

from fractions import Fraction

from cdgacyc import linalg
from cdgacyc.linalg import SparseMatrix


class ComplexError(Exception):
    pass


class UnsupportedConfiguration(ComplexError):
    """The requested computation needs data the complex does not carry."""


class ConsistencyError(ComplexError):
    """Internal structure violated; carries a witness description."""


class CochainComplex:
    """Finitely supported cochain complex: labels and d^n: C^n -> C^{n+1}."""

    def __init__(self, labels, diff, check=True):
        self.labels = {n: list(v) for n, v in labels.items() if v}
        self.diff = {}
        for n, m in diff.items():
            if m.rows != self.dim(n + 1) or m.cols != self.dim(n):
                raise ComplexError(f"differential at {n} has wrong shape")
            self.diff[n] = m
        self._cohomology = {}
        if check:
            for n in sorted(self.diff):
                if (n + 1) in self.diff:
                    comp = self.diff[n + 1] @ self.diff[n]
                    if not comp.is_zero():
                        raise ConsistencyError(f"d.d != 0 at degree {n}")

    @property
    def degrees(self):
        return sorted(self.labels)

    def dim(self, n):
        return len(self.labels.get(n, ()))

    def d(self, n):
        return self.diff.get(n, SparseMatrix.zero(self.dim(n + 1), self.dim(n)))

    def cohomology(self, n):
        if n not in self._cohomology:
            self._cohomology[n] = linalg.cohomology_at(self.d(n - 1), self.d(n))
        return self._cohomology[n]

    def betti(self, n):
        return self.cohomology(n).dim

    def index_of(self, n, label):
        return self.labels.get(n, []).index(label)


class ChainComplex:
    """Finitely supported chain complex: d_n: C_n -> C_{n-1}."""

    def __init__(self, labels, diff, check=True):
        self.labels = {n: list(v) for n, v in labels.items() if v}
        self.diff = {}
        for n, m in diff.items():
            if m.rows != self.dim(n - 1) or m.cols != self.dim(n):
                raise ComplexError(f"differential at {n} has wrong shape")
            self.diff[n] = m
        self._homology = {}
        if check:
            for n in sorted(self.diff):
                if (n + 1) in self.diff:
                    comp = self.diff[n] @ self.diff[n + 1]
                    if not comp.is_zero():
                        raise ConsistencyError(f"d.d != 0 at degree {n + 1}")

    def dim(self, n):
        return len(self.labels.get(n, ()))

    def d(self, n):
        return self.diff.get(n, SparseMatrix.zero(self.dim(n - 1), self.dim(n)))

    def homology(self, n):
        if n not in self._homology:
            self._homology[n] = linalg.cohomology_at(self.d(n + 1), self.d(n))
        return self._homology[n]


class ChainMap:
    """Degree-preserving map of cochain complexes commuting with d."""

    def __init__(self, source, target, mats, check=True, check_degrees=None):
        self.source = source
        self.target = target
        self.mats = {}
        degrees = set(source.labels) | set(mats)
        for n in degrees:
            m = mats.get(n, SparseMatrix.zero(target.dim(n), source.dim(n)))
            if m.rows != target.dim(n) or m.cols != source.dim(n):
                raise ComplexError(f"chain map has wrong shape at degree {n}")
            self.mats[n] = m
        if check:
            to_check = (
                check_degrees
                if check_degrees is not None
                else sorted(set(source.labels) | set(target.labels))
            )
            for n in to_check:
                lhs = self.matrix(n + 1) @ source.d(n)
                rhs = target.d(n) @ self.matrix(n)
                if lhs != rhs:
                    raise ConsistencyError(f"map does not commute with d at {n}")

    def matrix(self, n):
        return self.mats.get(
            n, SparseMatrix.zero(self.target.dim(n), self.source.dim(n))
        )

    def induced(self, n):
        return linalg.induced_map(
            self.matrix(n), self.source.cohomology(n), self.target.cohomology(n)
        )


def shift_complex(c, s):
    """Complex whose degree-n piece is c^{n-s} (even shifts only, so the
    differential needs no sign change)."""
    if s % 2:
        raise ComplexError("only even shifts preserve the differential sign")
    return CochainComplex(
        {n + s: v for n, v in c.labels.items()},
        {n + s: m for n, m in c.diff.items()},
        check=False,
    )


def label_inclusion(sub, amb, check=True):
    """ChainMap including a complex whose labels are a subset of another's."""
    mats = {}
    for n in sub.degrees:
        amb_index = {lab: i for i, lab in enumerate(amb.labels.get(n, []))}
        entries = {}
        for j, lab in enumerate(sub.labels[n]):
            if lab not in amb_index:
                raise ComplexError(f"label {lab!r} missing in ambient at {n}")
            entries[(amb_index[lab], j)] = Fraction(1)
        mats[n] = SparseMatrix(amb.dim(n), sub.dim(n), entries)
    return ChainMap(sub, amb, mats, check=check)


def label_projection(amb, quot, check=True):
    """ChainMap projecting onto the labels retained by the quotient."""
    mats = {}
    for n in set(amb.degrees) | set(quot.degrees):
        quot_index = {lab: i for i, lab in enumerate(quot.labels.get(n, []))}
        entries = {}
        for j, lab in enumerate(amb.labels.get(n, [])):
            if lab in quot_index:
                entries[(quot_index[lab], j)] = Fraction(1)
        mats[n] = SparseMatrix(quot.dim(n), amb.dim(n), entries)
    return ChainMap(amb, quot, mats, check=check)


class MixedComplex:
    """(C, delta, beta) on degrees 0..top with optional weights and power maps.

    labels: dict degree -> list of labels.
    delta: dict degree n -> matrix C^n -> C^{n+1} (n in 0..top-1).
    beta: dict degree n -> matrix C^n -> C^{n-1} (n in 1..top).
    weights: optional dict degree -> list of nonnegative ints per label.
    """

    def __init__(self, labels, delta, beta, weights=None, check=True):
        self.labels = {n: list(v) for n, v in labels.items()}
        self.top = max(self.labels, default=0)
        self.delta = dict(delta)
        self.beta = dict(beta)
        self.weights = (
            {n: list(v) for n, v in weights.items()} if weights is not None else None
        )
        for n, m in self.delta.items():
            if m.rows != self.dim(n + 1) or m.cols != self.dim(n):
                raise ComplexError(f"delta at {n} has wrong shape")
        for n, m in self.beta.items():
            if m.rows != self.dim(n - 1) or m.cols != self.dim(n):
                raise ComplexError(f"beta at {n} has wrong shape")
        if self.weights is not None:
            for n, v in self.labels.items():
                if len(self.weights.get(n, [])) != len(v):
                    raise ComplexError(f"weight list at {n} has wrong length")
        if check:
            failures = self.validate()
            if failures:
                raise ConsistencyError("; ".join(failures))

    def dim(self, n):
        return len(self.labels.get(n, ()))

    def delta_m(self, n):
        return self.delta.get(n, SparseMatrix.zero(self.dim(n + 1), self.dim(n)))

    def beta_m(self, n):
        return self.beta.get(n, SparseMatrix.zero(self.dim(n - 1), self.dim(n)))

    def validate(self, ks=()):
        """Axiom failures (empty list = all pass): delta^2 = 0, beta^2 = 0,
        delta beta + beta delta = 0, and the power-map relations for each
        k in ks, all as exact matrix identities inside the data window."""
        bad = []
        for n in range(0, self.top - 1):
            if not (self.delta_m(n + 1) @ self.delta_m(n)).is_zero():
                bad.append(f"delta.delta != 0 at degree {n}")
        for n in range(2, self.top + 1):
            if not (self.beta_m(n - 1) @ self.beta_m(n)).is_zero():
                bad.append(f"beta.beta != 0 at degree {n}")
        for n in range(1, self.top):
            anti = self.delta_m(n - 1) @ self.beta_m(n) + self.beta_m(
                n + 1
            ) @ self.delta_m(n)
            if not anti.is_zero():
                bad.append(f"delta.beta + beta.delta != 0 at degree {n}")
        for k in ks:
            for n in range(0, self.top):
                lhs = self.power_matrix(k, n + 1) @ self.delta_m(n)
                rhs = self.delta_m(n) @ self.power_matrix(k, n)
                if lhs != rhs:
                    bad.append(f"Psi_{k}.delta != delta.Psi_{k} at degree {n}")
            for n in range(1, self.top + 1):
                lhs = self.power_matrix(k, n - 1) @ self.beta_m(n)
                rhs = self.beta_m(n).scale(k) @ self.power_matrix(k, n)
                if lhs != rhs:
                    bad.append(f"Psi_{k}.beta != k.beta.Psi_{k} at degree {n}")
        return bad

    def weight_of(self, n, i):
        if self.weights is None:
            raise UnsupportedConfiguration("mixed complex carries no weights")
        return self.weights[n][i]

    def weight_indices(self, n, p):
        if self.weights is None:
            raise UnsupportedConfiguration("mixed complex carries no weights")
        return [i for i, q in enumerate(self.weights.get(n, [])) if q == p]

    def power_matrix(self, k, n):
        """Psi_k on C^n: diagonal k^weight (weights required)."""
        if k == 0:
            raise ComplexError("Psi_0 is not defined")
        return SparseMatrix(
            self.dim(n),
            self.dim(n),
            {
                (i, i): Fraction(k) ** self.weight_of(n, i)
                for i in range(self.dim(n))
            },
        )

    def cochain(self):
        """(C, delta) as a plain cochain complex."""
        return CochainComplex(
            self.labels, {n: self.delta_m(n) for n in range(self.top)}, check=False
        )

    def chain(self):
        """(C, beta) as a plain chain complex."""
        return ChainComplex(
            self.labels,
            {n: self.beta_m(n) for n in range(1, self.top + 1)},
            check=False,
        )

    def coordinate_subcomplex(self, keep):
        """Mixed subcomplex spanned by the kept label indices.

        keep: dict degree -> sorted list of indices.  Raises if delta or
        beta carries a kept element outside the kept span.
        """
        labels = {n: [self.labels[n][i] for i in idx] for n, idx in keep.items()}
        weights = (
            {n: [self.weights[n][i] for i in idx] for n, idx in keep.items()}
            if self.weights is not None
            else None
        )

        def restrict(mat, n, n_out):
            kept_in = keep.get(n, [])
            kept_out = {i: r for r, i in enumerate(keep.get(n_out, []))}
            entries = {}
            for c, i in enumerate(kept_in):
                col = mat.column(i)
                for row, v in enumerate(col):
                    if not v:
                        continue
                    if row not in kept_out:
                        raise ConsistencyError(
                            f"subcomplex not closed: degree {n} index {i} "
                            f"maps onto dropped index {row} at degree {n_out}"
                        )
                    entries[(kept_out[row], c)] = v
            return SparseMatrix(len(keep.get(n_out, [])), len(kept_in), entries)

        delta = {
            n: restrict(self.delta_m(n), n, n + 1)
            for n in range(self.top)
            if keep.get(n)
        }
        beta = {
            n: restrict(self.beta_m(n), n, n - 1)
            for n in range(1, self.top + 1)
            if keep.get(n)
        }
        return MixedComplex(labels, delta, beta, weights=weights, check=False)


def _slot_basis(M, r, kind, w):
    """Slots (m, weight p, indices) of the degree-r slice of a band.

    kind: "plus" (m <= r), "minus" (m >= r) or "periodic" (all m); w is
    the effective weight, so slot m carries weight p = w + (r - m)/2.
    Slots run over 0 <= m <= M.top with m = r mod 2 and p >= 0.
    """
    slots = []
    for m in range(max(r, 0) if kind == "minus" else 0, M.top + 1):
        if (r - m) % 2:
            continue
        if kind == "plus" and m > r:
            break
        p = w + (r - m) // 2
        if p < 0:
            continue
        idx = M.weight_indices(m, p)
        if idx:
            slots.append((m, p, idx))
    return slots


def band_complex(M, w, kind, r_min, r_max):
    """Effective-weight-w band of the +, - or 2-periodic complex.

    Returns a CochainComplex over degrees r_min..r_max whose degree-r
    labels are (m, original label): the slot of underlying degree m.  The
    differential is delta + beta restricted to the band; a beta image
    falling below the band (possible only for "minus" at its bottom slot)
    is dropped, exactly as in the defining formulas.
    """
    if kind not in ("plus", "minus", "periodic"):
        raise ComplexError(f"unknown band kind {kind!r}")
    slot_table = {r: _slot_basis(M, r, kind, w) for r in range(r_min, r_max + 1)}
    labels = {
        r: [(m, M.labels[m][i]) for m, _, idx in slots for i in idx]
        for r, slots in slot_table.items()
    }
    diff = {}
    for r in range(r_min, r_max):
        src = slot_table[r]
        tgt = slot_table[r + 1]
        tgt_pos = {}
        pos = 0
        tgt_slots = set()
        for m, _, idx in tgt:
            tgt_slots.add(m)
            for i in idx:
                tgt_pos[(m, i)] = pos
                pos += 1
        entries = {}
        col = 0
        src_dim = sum(len(idx) for _, _, idx in src)
        for m, _, idx in src:
            delta_cols = {i: M.delta_m(m).column(i) for i in idx}
            beta_cols = {i: M.beta_m(m).column(i) for i in idx}
            for i in idx:
                for row, v in enumerate(delta_cols[i]):
                    if not v:
                        continue
                    key = (m + 1, row)
                    if key in tgt_pos:
                        entries[(tgt_pos[key], col)] = v
                    elif (m + 1) in tgt_slots:
                        raise ConsistencyError(
                            f"delta breaks the weight grading at degree {m}"
                        )
                for row, v in enumerate(beta_cols[i]):
                    if not v:
                        continue
                    key = (m - 1, row)
                    if key in tgt_pos:
                        entries[(tgt_pos[key], col)] = v
                    elif (m - 1) in tgt_slots:
                        raise ConsistencyError(
                            f"beta breaks the weight grading at degree {m}"
                        )
                col += 1
        diff[r] = SparseMatrix(pos, src_dim, entries)
    return CochainComplex(labels, diff, check=True)


def band_certified(M, w, kind, r):
    """Whether cohomology of the band at degree r only involves slot
    degrees the mixed complex actually covers (data through M.top)."""
    if kind == "plus":
        return r + 1 <= M.top
    # top slot degree appearing in levels r-1..r+1 is r+1+2w (p >= 0)
    return max(r + 1, r + 1 + 2 * w) <= M.top


def plus_complex(M, r_min=0, r_max=None):
    """Total +complex: degree r is the finite product of C^{r-2k}, k >= 0,
    with differential (delta w_{r-2j} + beta w_{r-2j+2}) in slot j."""
    if r_max is None:
        r_max = M.top
    slot_table = {
        r: [
            (m, list(range(M.dim(m))))
            for m in range(r % 2, r + 1, 2)
            if M.dim(m)
        ]
        for r in range(r_min, r_max + 1)
    }
    labels = {
        r: [(m, M.labels[m][i]) for m, idx in slots for i in idx]
        for r, slots in slot_table.items()
    }
    diff = {}
    for r in range(r_min, r_max):
        tgt_pos = {}
        pos = 0
        for m, idx in slot_table[r + 1]:
            for i in idx:
                tgt_pos[(m, i)] = pos
                pos += 1
        entries = {}
        col = 0
        for m, idx in slot_table[r]:
            for i in idx:
                for row, v in enumerate(M.delta_m(m).column(i)):
                    if v and (m + 1, row) in tgt_pos:
                        entries[(tgt_pos[(m + 1, row)], col)] = v
                for row, v in enumerate(M.beta_m(m).column(i)):
                    if v and (m - 1, row) in tgt_pos:
                        entries[(tgt_pos[(m - 1, row)], col)] = v
                col += 1
        diff[r] = SparseMatrix(
            pos, sum(len(idx) for _, idx in slot_table[r]), entries
        )
    return CochainComplex(labels, diff, check=True)


def plus_power_matrix(M, plus, k, r):
    """The +Psi_k matrix on degree r of the total +complex: slot of
    underlying degree m is scaled by k^((m-r)/2) times Psi_k."""
    if k == 0:
        raise ComplexError("Psi_0 is not defined")
    entries = {}
    for j, (m, lab) in enumerate(plus.labels.get(r, [])):
        i = M.labels[m].index(lab)
        scale = Fraction(k) ** ((m - r) // 2) * Fraction(k) ** M.weight_of(m, i)
        entries[(j, j)] = scale
    return SparseMatrix(plus.dim(r), plus.dim(r), entries)


def mapping_cone(f):
    """Cone of a chain map f: C1 -> C2, with the canonical maps.

    Cone^n = C2^n + C1^{n+1}, d = [[d2, f], [0, -d1]].  Returns
    (cone, include: C2 -> cone, project: cone -> C1 shifted by +1),
    where the shifted complex carries C1's labels at degree n+... the
    degree-n piece of the shift is C1^{n+1} with differential -d1.
    Labels are tagged (0, label2) and (1, label1).
    """
    c1, c2 = f.source, f.target
    degrees = sorted(set(c1.degrees) | set(c2.degrees) | {n - 1 for n in c1.degrees})
    labels = {}
    for n in degrees:
        labs = [(0, lab) for lab in c2.labels.get(n, [])] + [
            (1, lab) for lab in c1.labels.get(n + 1, [])
        ]
        if labs:
            labels[n] = labs
    diff = {}
    for n in degrees:
        d2 = c2.d(n)
        d1 = c1.d(n + 1)
        fm = f.matrix(n + 1)
        rows = c2.dim(n + 1) + c1.dim(n + 2)
        cols = c2.dim(n) + c1.dim(n + 1)
        entries = {}
        for (i, j), v in d2.entries.items():
            entries[(i, j)] = v
        for (i, j), v in fm.entries.items():
            entries[(i, c2.dim(n) + j)] = v
        for (i, j), v in d1.entries.items():
            entries[(c2.dim(n + 1) + i, c2.dim(n) + j)] = -v
        diff[n] = SparseMatrix(rows, cols, entries)
    cone = CochainComplex(labels, diff, check=True)
    shifted = CochainComplex(
        {n - 1: [(1, lab) for lab in c1.labels[n]] for n in c1.degrees},
        {n - 1: c1.d(n).scale(-1) for n in c1.degrees},
        check=False,
    )
    inc_mats = {}
    for n in c2.degrees:
        entries = {(i, i): Fraction(1) for i in range(c2.dim(n))}
        inc_mats[n] = SparseMatrix(cone.dim(n), c2.dim(n), entries)
    include = ChainMap(c2, cone, inc_mats, check=False)
    proj_mats = {}
    for n in degrees:
        entries = {
            (i, c2.dim(n) + i): Fraction(1) for i in range(c1.dim(n + 1))
        }
        proj_mats[n] = SparseMatrix(c1.dim(n + 1), cone.dim(n), entries)
    project = ChainMap(cone, shifted, proj_mats, check=False)
    return cone, include, project


class ShortExactSequence:
    """0 -> A -> B -> C -> 0 of cochain complexes, verified degreewise."""

    def __init__(self, incl, proj, degrees=None, check=True):
        if incl.target is not proj.source:
            raise ComplexError("inclusion target differs from projection source")
        self.incl = incl
        self.proj = proj
        a, b, c = incl.source, incl.target, proj.target
        self.a, self.b, self.c = a, b, c
        if degrees is None:
            degrees = sorted(set(a.degrees) | set(b.degrees) | set(c.degrees))
        self.degrees = list(degrees)
        if check:
            for n in self.degrees:
                comp = proj.matrix(n) @ incl.matrix(n)
                if not comp.is_zero():
                    raise ConsistencyError(f"proj.incl != 0 at degree {n}")
                ri = linalg.rank(incl.matrix(n))
                rp = linalg.rank(proj.matrix(n))
                if ri != a.dim(n):
                    raise ConsistencyError(f"inclusion not injective at {n}")
                if rp != c.dim(n):
                    raise ConsistencyError(f"projection not surjective at {n}")
                if a.dim(n) + c.dim(n) != b.dim(n):
                    raise ConsistencyError(f"dimensions do not add up at {n}")

    def connecting(self, r):
        """H^r(C) -> H^{r+1}(A) by the zig-zag lift: lift a C-cocycle to B,
        apply d, pull back along the inclusion."""
        hc = self.c.cohomology(r)
        ha = self.a.cohomology(r + 1)
        cols = []
        for v in hc.representatives:
            b = linalg.solve(self.proj.matrix(r), v)
            if b is None:
                raise ConsistencyError(f"cocycle fails to lift at degree {r}")
            db = self.b.d(r).apply(b)
            a = linalg.solve(self.incl.matrix(r + 1), db)
            if a is None:
                raise ConsistencyError(f"d(lift) not in the subcomplex at {r}")
            coords = ha.coordinates(a)
            if coords is None:
                raise ConsistencyError(f"connecting image not a cocycle at {r}")
            cols.append(coords)
        return SparseMatrix(
            ha.dim,
            hc.dim,
            {
                (i, j): cols[j][i]
                for j in range(hc.dim)
                for i in range(ha.dim)
                if cols[j][i]
            },
        )

    def les(self, r_min, r_max):
        """The long exact sequence as (node names, dims, maps).

        Nodes run ... H^r(A) -> H^r(B) -> H^r(C) -> H^{r+1}(A) ... for
        r in r_min..r_max; maps[i] goes from node i to node i+1.
        """
        names = []
        dims = []
        maps = []
        for r in range(r_min, r_max + 1):
            names += [("A", r), ("B", r), ("C", r)]
            dims += [
                self.a.betti(r),
                self.b.betti(r),
                self.c.betti(r),
            ]
            maps.append(self.incl.induced(r))
            maps.append(self.proj.induced(r))
            if r < r_max:
                maps.append(self.connecting(r))
        return names, dims, maps


def les_audit(names, dims, maps):
    """Exactness report for a finite stretch of a long sequence.

    Checks, at each interior node, that consecutive composites vanish and
    rank(incoming) + rank(outgoing) equals the node dimension.  Endpoint
    nodes are reported as skipped (their exactness is not determined by
    the data).  Returns a dict with pass/fail and per-node findings.
    """
    findings = []
    ok = True
    for i in range(1, len(dims) - 1):
        f_in, f_out = maps[i - 1], maps[i]
        comp_zero = (f_out @ f_in).is_zero()
        exact = comp_zero and (
            linalg.rank(f_in) + linalg.rank(f_out) == dims[i]
        )
        findings.append(
            {
                "node": names[i],
                "dim": dims[i],
                "rank_in": linalg.rank(f_in),
                "rank_out": linalg.rank(f_out),
                "composite_zero": comp_zero,
                "exact": exact,
            }
        )
        ok = ok and exact
    return {"pass": ok, "nodes": findings}


def homology_side(M, r_max=None):
    """The beta-side chain complexes and their homology dimensions.

    Returns dict with:
      "H": dims of H_*(C, beta) for degrees 0..top-1 (exact there);
      "plusHdelta": dims of the +complex under the delta-perturbed beta
        differential, degrees 0..top-1;
      "minusHdelta": present only when C is bounded strictly below top
        (then the -complex is finite); otherwise omitted.
    """
    if r_max is None:
        r_max = M.top - 1
    chain = M.chain()
    h = {n: chain.homology(n).dim for n in range(0, r_max + 1)}

    # +H^delta: same slots as the +complex, differential beta + delta with
    # beta acting within a slot column (m -> m-1 stays in the slice below).
    slot_table = {
        r: [(m, list(range(M.dim(m)))) for m in range(r % 2, r + 1, 2) if M.dim(m)]
        for r in range(0, r_max + 2)
    }

    def build(r):
        tgt_pos = {}
        pos = 0
        for m, idx in slot_table[r - 1]:
            for i in idx:
                tgt_pos[(m, i)] = pos
                pos += 1
        entries = {}
        col = 0
        for m, idx in slot_table[r]:
            for i in idx:
                for row, v in enumerate(M.beta_m(m).column(i)):
                    if v and (m - 1, row) in tgt_pos:
                        entries[(tgt_pos[(m - 1, row)], col)] = v
                for row, v in enumerate(M.delta_m(m).column(i)):
                    if v and (m + 1, row) in tgt_pos:
                        entries[(tgt_pos[(m + 1, row)], col)] = v
                col += 1
        cols = sum(len(idx) for _, idx in slot_table[r])
        return SparseMatrix(pos, cols, entries)

    labels = {
        r: [(m, M.labels[m][i]) for m, idx in slots for i in idx]
        for r, slots in slot_table.items()
    }
    plus_chain = ChainComplex(
        labels, {r: build(r) for r in range(1, r_max + 2)}, check=True
    )
    plus_h = {n: plus_chain.homology(n).dim for n in range(0, r_max + 1)}
    out = {"H": h, "plusHdelta": plus_h}

    top_nonzero = max((n for n in M.labels if M.dim(n)), default=-1)
    if top_nonzero < M.top:
        # bounded data: the -complex per degree is a finite product
        minus = {}
        mlabels = {}
        mdiff = {}
        for r in range(0, r_max + 2):
            mlabels[r] = [
                (m, lab)
                for m in range(r, top_nonzero + 1, 2)
                for lab in M.labels.get(m, [])
            ]
        for r in range(1, r_max + 2):
            tgt_pos = {lab: i for i, lab in enumerate(mlabels[r - 1])}
            entries = {}
            for col, (m, lab) in enumerate(mlabels[r]):
                i = M.labels[m].index(lab)
                for row, v in enumerate(M.beta_m(m).column(i)):
                    key = (m - 1, M.labels[m - 1][row])
                    if v and key in tgt_pos:
                        entries[(tgt_pos[key], col)] = v
                for row, v in enumerate(M.delta_m(m).column(i)):
                    key = (m + 1, M.labels[m + 1][row])
                    if v and key in tgt_pos:
                        entries[(tgt_pos[key], col)] = v
            mdiff[r] = SparseMatrix(len(mlabels[r - 1]), len(mlabels[r]), entries)
        minus_chain = ChainComplex(mlabels, mdiff, check=True)
        minus = {n: minus_chain.homology(n).dim for n in range(0, r_max + 1)}
        out["minusHdelta"] = minus
    return out


def beta_acyclic_check(M, r_max=None):
    """Check beta-acyclicity and the resulting +cohomology identification.

    A mixed complex is beta-acyclic when beta: C^1 -> C^0 is surjective
    and ker(beta) = im(beta) in every positive degree.  In that case
    (Im beta, delta) computes the +cohomology; the report compares both
    sides dimensionwise in the window where each is exact.
    """
    if r_max is None:
        r_max = M.top - 2
    report = {"beta_acyclic": True, "degrees": {}, "dims_match": None}
    if all(M.beta_m(n).is_zero() for n in range(1, M.top + 1)) and any(
        M.dim(n) for n in M.labels
    ):
        report["beta_acyclic"] = False
        report["skipped"] = "beta is identically zero on a nonzero complex"
        return report
    for n in range(0, M.top):
        if n == 0:
            ok = linalg.rank(M.beta_m(1)) == M.dim(0)
        else:
            ok = (
                linalg.nullity(M.beta_m(n)) == linalg.rank(M.beta_m(n + 1))
            )
        report["degrees"][n] = ok
        report["beta_acyclic"] = report["beta_acyclic"] and ok

    # (Im beta, delta) as a cochain complex
    im_bases = {}
    for n in range(0, M.top):
        im_bases[n] = linalg.image_basis(M.beta_m(n + 1))
    im_labels = {n: [("im", n, j) for j in range(len(b))] for n, b in im_bases.items()}
    im_diff = {}
    for n in range(0, M.top - 1):
        if not im_bases[n]:
            im_diff[n] = SparseMatrix.zero(len(im_bases[n + 1]), 0)
            continue
        tgt = SparseMatrix.from_columns(M.dim(n + 1), im_bases[n + 1])
        cols = []
        for v in im_bases[n]:
            dv = M.delta_m(n).apply(v)
            x = linalg.solve(tgt, dv)
            if x is None:
                raise ConsistencyError(
                    f"delta leaves Im(beta) at degree {n}"
                )
            cols.append(x)
        im_diff[n] = SparseMatrix.from_columns(len(im_bases[n + 1]), cols)
    im_complex = CochainComplex(im_labels, im_diff, check=True)

    plus = plus_complex(M)
    window = range(0, max(0, r_max + 1))
    pairs = {
        r: (im_complex.betti(r), plus.betti(r)) for r in window
    }
    report["dims"] = pairs
    report["dims_match"] = all(a == b for a, b in pairs.values())
    return report
