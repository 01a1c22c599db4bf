"""Cohomology functors of a free connected CDGA via its free-loop complex.

HH is the cohomology of the loop complex itself; CH of its +complex; PH
the colimit of CH under the degree +2 inclusion S; SH the cohomology of
the cone over the zero-weight comparison map into the periodic complex of
the base.  All computations are organized by effective weight, where each
derived complex is an honest finite complex, and come with certification
flags recording when a reported number is provably unaffected by the
degree cutoff.
"""

from fractions import Fraction

from cdgacyc import complexes as cx
from cdgacyc import linalg
from cdgacyc.complexes import (
    ChainMap,
    CochainComplex,
    band_complex,
    label_inclusion,
    label_projection,
    les_audit,
    mapping_cone,
    plus_complex,
    plus_power_matrix,
    shift_complex,
    ShortExactSequence,
)
from cdgacyc.free_loop import LoopAlgebra, base_cochain, free_loop
from cdgacyc.gralg import FreeCDGA
from cdgacyc.linalg import SparseMatrix


class FunctorError(Exception):
    pass


class CohomologyTable:
    """Per-degree totals with optional per-weight breakdown."""

    def __init__(self, name=""):
        self.name = name
        self.rows = {}

    def set_row(self, n, total, weights=None, certified=True):
        if weights is not None:
            weights = {w: d for w, d in weights.items() if d}
            if sum(weights.values()) != total:
                raise FunctorError(
                    f"{self.name} degree {n}: total {total} != weight sum"
                )
        self.rows[n] = {"total": total, "weights": weights, "certified": certified}

    @property
    def degrees(self):
        return sorted(self.rows)

    def total(self, n):
        return self.rows[n]["total"]

    def weights(self, n):
        return self.rows[n]["weights"] or {}

    def weight(self, n, w):
        return self.weights(n).get(w, 0)

    def certified(self, n):
        return self.rows[n]["certified"]

    def to_json(self):
        return {
            "degrees": [
                {
                    "n": n,
                    "total": self.rows[n]["total"],
                    "weights": {
                        str(w): d
                        for w, d in (self.rows[n]["weights"] or {}).items()
                    },
                    "certified": self.rows[n]["certified"],
                }
                for n in self.degrees
            ]
        }


class LoopContext:
    """Shared caches for one algebra: loop construction, mixed complexes
    (grown on demand), base complex, plus complexes and bands."""

    def __init__(self, algebra, cutoff, weight_cutoff=None):
        if not isinstance(algebra, FreeCDGA):
            raise FunctorError("expected a free CDGA")
        self.algebra = algebra
        self.cutoff = cutoff
        self.loop = free_loop(algebra, weight_cutoff=weight_cutoff)
        self._mixed = None
        self._base = None
        self._plus = None
        self._bands = {}

    def mixed(self, top):
        if self._mixed is None or self._mixed.top < top:
            self._mixed = self.loop.mixed_complex(top)
            self._plus = None
            self._bands = {}
        return self._mixed

    def base(self, top):
        if self._base is None or max(self._base.labels, default=-1) < top:
            self._base = base_cochain(self.algebra, top)
        return self._base

    def plus(self, top):
        M = self.mixed(top)
        if self._plus is None:
            self._plus = plus_complex(M, 0, M.top)
        return self._plus

    def band(self, w, kind, top):
        M = self.mixed(top)
        key = (w, kind)
        if key not in self._bands:
            self._bands[key] = band_complex(M, w, kind, 0, M.top)
        return self._bands[key]

    def base_bound(self):
        """(largest degree with nonzero base cohomology within the window,
        vanishing-window certificate).  The certificate holds when the base
        cohomology vanishes on a top window of width max generator degree
        plus one, which is the boundedness evidence all tail arguments use.
        """
        top = self.cutoff + 1
        base = self.base(top)
        betti = {n: base.betti(n) for n in range(top)}
        g = self.algebra.max_generator_degree()
        window = range(max(0, top - 1 - g), top)
        certified = all(betti[m] == 0 for m in window) and top - 1 - g > 0
        bound = max((n for n, d in betti.items() if d), default=-1)
        return bound, certified


def _context(a, cutoff, weight_cutoff=None):
    if isinstance(a, LoopContext):
        return a
    return LoopContext(a, cutoff, weight_cutoff=weight_cutoff)


def hh_weight_range(n):
    """Weights that can occur in loop degree n (weight <= degree)."""
    return range(0, n + 1)


def ch_weight_range(n):
    """Effective weights that can occur in CH^n: a slot of underlying
    degree m <= n and weight p <= m gives w = p - (n-m)/2 in [-n/2, n]."""
    return range(-(n // 2), n + 1)


def HH(a, cutoff, weight_cutoff=None):
    """Loop-complex cohomology with its weight decomposition.

    Totals come from the full complex, per-weight dimensions from the
    weight slices; their agreement is asserted (the slices partition the
    complex and the differential preserves weight).
    """
    ctx = _context(a, cutoff, weight_cutoff)
    M = ctx.mixed(cutoff + 1)
    C = M.cochain()
    table = CohomologyTable("HH")
    slices = {}
    for n in range(cutoff + 1):
        weights = {}
        ws = hh_weight_range(n)
        if ctx.loop.weight_cutoff is not None:
            # degree-1 generators break the weight <= degree bound
            ws = range(0, max(n, ctx.loop.weight_cutoff) + 1)
        for w in ws:
            if w not in slices:
                slices[w] = _weight_slice(ctx, w, cutoff + 1)
            weights[w] = slices[w].betti(n)
        total = C.betti(n)
        table.set_row(n, total, weights, certified=True)
    return table


def _weight_slice(ctx, w, top):
    """The weight-w part of (loop complex, delta) as a cochain complex,
    realized as the plus band in which it appears as the top slot."""
    M = ctx.mixed(top)
    labels = {}
    diff = {}
    index = {}
    for n in range(M.top + 1):
        idx = M.weight_indices(n, w)
        labels[n] = [M.labels[n][i] for i in idx]
        index[n] = {i: j for j, i in enumerate(idx)}
    for n in range(M.top):
        entries = {}
        for j, i in enumerate(sorted(index[n], key=index[n].get)):
            for row, v in enumerate(M.delta_m(n).column(i)):
                if v:
                    entries[(index[n + 1][row], j)] = v
        diff[n] = SparseMatrix(len(labels[n + 1]), len(labels[n]), entries)
    return CochainComplex(labels, diff, check=True)


def CH(a, cutoff, weight_cutoff=None):
    """+complex cohomology, decomposed by effective weight (an integer:
    the unit tower contributes negative weights)."""
    ctx = _context(a, cutoff, weight_cutoff)
    top = cutoff + 1
    table = CohomologyTable("CH")
    for n in range(cutoff + 1):
        weights = {}
        for w in ch_weight_range(n):
            band = ctx.band(w, "plus", top)
            d = band.betti(n)
            if d:
                weights[w] = d
        table.set_row(n, sum(weights.values()), weights, certified=True)
    return table


def reduced_CH(a, cutoff, table=None, weight_cutoff=None):
    """CH modulo the image of the one-point algebra: the unit tower class
    at effective weight -n/2 is removed wherever it survives."""
    ctx = _context(a, cutoff, weight_cutoff)
    if table is None:
        table = CH(ctx, cutoff)
    out = CohomologyTable("CH~")
    for n in table.degrees:
        weights = dict(table.weights(n))
        total = table.total(n)
        if n % 2 == 0:
            w0 = -(n // 2)
            band = ctx.band(w0, "plus", cutoff + 1)
            labs = band.labels.get(n, [])
            if (0, ()) in labs:
                e = [Fraction(0)] * len(labs)
                e[labs.index((0, ()))] = Fraction(1)
                coords = band.cohomology(n).coordinates(tuple(e))
                if coords is not None and any(coords):
                    weights[w0] = weights.get(w0, 0) - 1
                    total -= 1
        out.set_row(n, total, weights, certified=table.certified(n))
    return out


def K_groups(a, cutoff, weight_cutoff=None):
    """The even/odd products of base cohomology, with per-slot breakdown.

    K^r sums dim H^m(base) over m of the parity of r; finiteness rests on
    the vanishing-window certificate of the base cohomology.
    """
    ctx = _context(a, cutoff, weight_cutoff)
    base = ctx.base(cutoff + 1)
    betti = {n: base.betti(n) for n in range(cutoff + 1)}
    bound, certified = ctx.base_bound()
    even = sum(d for n, d in betti.items() if n % 2 == 0)
    odd = sum(d for n, d in betti.items() if n % 2 == 1)
    return {
        "even": even,
        "odd": odd,
        "reduced_even": even - 1,
        "reduced_odd": odd,
        "base_betti": betti,
        "bound": bound,
        "certified": certified,
    }


def _s_map(ctx, top):
    """S: +C^{*-2} -> +C^* as a chain map (slotwise inclusion)."""
    plus = ctx.plus(top)
    full = shift_complex(plus, 2)
    hi = max(plus.degrees)
    labels = {n: v for n, v in full.labels.items() if n <= hi}
    diff = {n: full.d(n) for n in labels if n + 1 in labels}
    shifted = CochainComplex(labels, diff, check=False)
    return label_inclusion(shifted, plus, check=False), plus, shifted


def PH(a, cutoff, weight_cutoff=None, extra_levels=5):
    """Colimit of CH^{r+2k} along S, detected by composite-image ranks.

    For each degree r the S-maps are computed up to r + 2*extra_levels;
    the reported value is the rank of a deep composite, certified when
    that rank is unchanged under moving both endpoints one step.
    """
    ctx = _context(a, cutoff, weight_cutoff)
    top = cutoff + 2 * extra_levels + 3
    s, plus, shifted = _s_map(ctx, top)
    table = CohomologyTable("PH")
    details = {}
    for r in range(cutoff + 1):
        levels = [r + 2 * k for k in range(extra_levels + 2) if r + 2 * k <= top - 3]
        maps = []
        for lv in levels[:-1]:
            f = linalg.induced_map(
                s.matrix(lv + 2),
                plus.cohomology(lv),
                plus.cohomology(lv + 2),
            )
            maps.append(f)

        def comp(j, k):
            m = SparseMatrix.identity(maps[j].cols) if maps else None
            if m is None:
                return None
            for t in range(j, k):
                m = maps[t] @ m
            return m

        kmax = len(maps)
        if kmax >= 3:
            r_deep = linalg.rank(comp(kmax - 2, kmax))
            r_a = linalg.rank(comp(kmax - 3, kmax - 1))
            r_b = linalg.rank(comp(kmax - 3, kmax))
            certified = r_deep == r_a == r_b
            value = r_deep
        else:
            value = plus.betti(r)
            certified = False
        table.set_row(r, value, None, certified=certified)
        details[r] = {
            "levels": levels,
            "dims": [plus.betti(lv) for lv in levels],
            "map_ranks": [linalg.rank(m) for m in maps],
        }
    table.details = details
    return table


def PH_periodic(a, cutoff, weight_cutoff=None, pad=2, w_cap=None):
    """PH via the direct-sum periodic complex, weight by weight.

    PC splits as the direct sum of the finite effective-weight bands of
    the 2-periodic complex, so its cohomology is the sum over w of the
    band cohomologies.  The sum is cut off after `pad` consecutive zero
    weights past the structural markers; certification additionally needs
    the base vanishing-window certificate.
    """
    ctx = _context(a, cutoff, weight_cutoff)
    bound, base_cert = ctx.base_bound()
    if w_cap is None:
        w_cap = cutoff + 4
    table = CohomologyTable("PHper")
    for r in range(cutoff + 1):
        weights = {}
        w = -(r // 2) - 1
        zeros = 0
        ran_out = False
        while True:
            w += 1
            if w > w_cap:
                ran_out = True
                break
            top = max(r + 1, r + 1 + 2 * w)
            M = ctx.mixed(top)
            band = band_complex(M, w, "periodic", r - 1, r + 1)
            d = band.cohomology(r).dim
            if d:
                weights[w] = d
                zeros = 0
            else:
                zeros += 1
            if w >= 0 and r + 2 * w > bound and zeros >= pad:
                break
        table.set_row(
            r,
            sum(weights.values()),
            weights,
            certified=base_cert and not ran_out,
        )
    return table


def _base_block(ctx, w, top):
    """The periodic complex of (base, d, 0) at effective weight w: the
    single block base^{r+2w} in degree r, labels tagged ("b", monomial)."""
    base = ctx.base(max(0, top + 2 * w) + 1)
    labels = {}
    diff = {}
    for r in range(top + 1):
        m = r + 2 * w
        if 0 <= m:
            labels[r] = [("b", mono) for mono in base.labels.get(m, [])]
    for r in range(top):
        m = r + 2 * w
        if m >= 0:
            diff[r] = base.d(m)
        elif m == -1:
            diff[r] = SparseMatrix.zero(len(labels.get(r + 1, [])), 0)
    return CochainComplex(labels, diff, check=False)


def _ibar_map(ctx, w, top, project_weight_zero=True):
    """The comparison map into the periodic base complex at weight w.

    Source: degree r piece is the +band of effective weight w+1 at level
    r-2.  Target: the base block (weight-0 projection of the top slot).
    With project_weight_zero=False the projection is skipped and the full
    periodic band of the loop complex is the target (negative control).
    """
    M = ctx.mixed(max(top + 2, max(0, top + 2 + 2 * w)))
    band = band_complex(M, w + 1, "plus", 0, top - 1)
    source = shift_complex(band, 2)
    if not project_weight_zero:
        target = band_complex(M, w, "periodic", 0, top + 1)
        return label_inclusion(source, target, check=False), source, target
    target = _base_block(ctx, w, top + 1)
    loop = ctx.loop
    mats = {}
    for r in source.degrees:
        tgt_index = {lab: i for i, lab in enumerate(target.labels.get(r, []))}
        entries = {}
        for j, (m, mono) in enumerate(source.labels[r]):
            if m == r + 2 * w and loop.weight(mono) == 0:
                key = ("b", loop.lower(mono))
                entries[(tgt_index[key], j)] = Fraction(1)
        mats[r] = SparseMatrix(target.dim(r), source.dim(r), entries)
    f = ChainMap(source, target, mats, check=True,
                 check_degrees=range(0, top))
    return f, source, target


def _sh_band(ctx, r, w, project_weight_zero=True):
    """dim SH^r at effective weight w, with the cone built honestly."""
    top = max(r + 1, r + 1 + 2 * w, r + 1)
    f, _, _ = _ibar_map(ctx, w, top + 1,
                        project_weight_zero=project_weight_zero)
    cone, _, _ = mapping_cone(f)
    return cone.cohomology(r).dim


def SH(a, cutoff, weight_cutoff=None, project_weight_zero=True):
    """Cohomology of the cone over the zero-weight comparison map.

    Per weight w the cone pairs the base block in degree r+2w with the
    +band of weight w+1 one level down.  Weights whose surrounding exact
    sequence terms both vanish (base cohomology at r+2w and CH^{r-1} at
    w+1) are skipped as zero; others are computed from the cone.
    """
    ctx = _context(a, cutoff, weight_cutoff)
    bound, base_cert = ctx.base_bound()
    table = CohomologyTable("SH")
    for r in range(cutoff + 1):
        weights = {}
        certified = base_cert
        w_lo = -((r + 1) // 2) - 1
        w_hi = max(r - 2, (bound - r) // 2 + 1, w_lo)
        for w in range(w_lo, w_hi + 1):
            ch_next = ctx.band(w + 1, "plus", cutoff + 1).betti(r - 1) if r >= 1 else 0
            mb = r + 2 * w
            base = ctx.base(max(cutoff + 1, mb + 1))
            h_base = base.betti(mb) if mb >= 0 else 0
            if ch_next == 0 and h_base == 0:
                continue
            d = _sh_band(ctx, r, w, project_weight_zero=project_weight_zero)
            if d:
                weights[w] = d
        table.set_row(r, sum(weights.values()), weights, certified=certified)
    return table


def theorem2_check(a, cutoff, weight_cutoff=None):
    """dim SH^r = dim K~^r + dim CH~^{r-1} in every certified degree,
    where ~ marks reduction by the one-point algebra."""
    ctx = _context(a, cutoff, weight_cutoff)
    sh = SH(ctx, cutoff)
    k = K_groups(ctx, cutoff)
    chr_ = reduced_CH(ctx, cutoff)
    report = {"pass": True, "degrees": {}}
    for r in range(1, cutoff + 1):
        if not (sh.certified(r) and k["certified"] and chr_.certified(r - 1)):
            report["degrees"][r] = {"status": "skipped"}
            continue
        kbar = k["reduced_even"] if r % 2 == 0 else k["reduced_odd"]
        lhs = sh.total(r)
        rhs = kbar + chr_.total(r - 1)
        ok = lhs == rhs
        report["degrees"][r] = {
            "status": "pass" if ok else "fail",
            "SH": lhs,
            "K_reduced": kbar,
            "CH_reduced_prev": chr_.total(r - 1),
        }
        report["pass"] = report["pass"] and ok
    return report


def fig2_audit(a, cutoff, weight_cutoff=None, weight_range=None):
    """Exactness and commutativity audit of the two standard long exact
    sequences of the loop mixed complex, per effective weight.

    Row 1: 0 -> +C^{*-2}(w+1) -> +C^*(w) -> C^*(w) -> 0.
    Row 2: 0 -> +C^{*-2}(w+1) -> PC^*(w) -> -C^*(w) -> 0.
    Also checks the vertical comparison maps between the rows, and the
    intertwining of S with the power maps on the total +complex.
    """
    ctx = _context(a, cutoff, weight_cutoff)
    top = cutoff + 1
    M = ctx.mixed(top)
    if weight_range is None:
        weight_range = range(-(cutoff // 2) - 1, cutoff // 2 + 2)
    report = {"pass": True, "weights": {}}
    for w in weight_range:
        # certified stretch for the minus/periodic bands
        r_hi = min(cutoff - 1, top - 2 * w - 2)
        if r_hi < 1:
            continue
        plus_w = band_complex(M, w, "plus", 0, r_hi + 2)
        plus_w1 = shift_complex(band_complex(M, w + 1, "plus", 0, r_hi), 2)
        slice_w = _top_slot_quotient(M, w, r_hi + 2)
        per_w = band_complex(M, w, "periodic", 0, r_hi + 2)
        minus_w = band_complex(M, w, "minus", 0, r_hi + 2)

        row1 = ShortExactSequence(
            label_inclusion(plus_w1, plus_w, check=False),
            label_projection(plus_w, slice_w, check=False),
            degrees=range(0, r_hi + 2),
        )
        row2 = ShortExactSequence(
            label_inclusion(plus_w1, per_w, check=False),
            label_projection(per_w, minus_w, check=False),
            degrees=range(0, r_hi + 2),
        )
        a1 = les_audit(*row1.les(1, r_hi))
        a2 = les_audit(*row2.les(1, r_hi))

        # verticals: id on A, inclusion +C -> PC on B, top-slot on C
        vb = label_inclusion(plus_w, per_w, check=False)
        vc = label_inclusion(slice_w, minus_w, check=False)
        squares = True
        for r in range(1, r_hi + 1):
            lhs = vb.induced(r) @ row1.incl.induced(r)
            rhs = row2.incl.induced(r)
            squares = squares and lhs == rhs
            lhs = vc.induced(r) @ row1.proj.induced(r)
            rhs = row2.proj.induced(r) @ vb.induced(r)
            squares = squares and lhs == rhs
            if r < r_hi:
                lhs = row2.connecting(r) @ vc.induced(r)
                rhs = row1.connecting(r)
                squares = squares and lhs == rhs
        entry = {
            "row1": a1,
            "row2": a2,
            "squares": squares,
        }
        entry["pass"] = a1["pass"] and a2["pass"] and squares
        report["weights"][w] = entry
        report["pass"] = report["pass"] and entry["pass"]

    # intertwining on the total +complex: S . +Psi_k = k . +Psi_k . S
    s, plus, shifted = _s_map(ctx, top)
    inter = True
    for k in (2, 3):
        for r in range(2, cutoff + 1):
            psi_lo = plus_power_matrix(M, plus, k, r - 2)
            psi_hi = plus_power_matrix(M, plus, k, r)
            lhs = s.matrix(r) @ psi_lo
            rhs = (psi_hi @ s.matrix(r)).scale(k)
            if lhs != rhs:
                inter = False
    report["intertwining"] = inter
    report["pass"] = report["pass"] and inter
    return report


def _top_slot_quotient(M, w, r_max):
    """The weight-w slice of (C, delta) with labels (r, monomial), i.e.
    the top-slot quotient of the weight-w +band."""
    labels = {}
    diff = {}
    index = {}
    for r in range(r_max + 1):
        idx = M.weight_indices(r, w)
        labels[r] = [(r, M.labels[r][i]) for i in idx]
        index[r] = {i: j for j, i in enumerate(idx)}
    for r in range(r_max):
        entries = {}
        for j, i in enumerate(sorted(index[r], key=index[r].get)):
            for row, v in enumerate(M.delta_m(r).column(i)):
                if v:
                    entries[(index[r + 1][row], j)] = v
        diff[r] = SparseMatrix(len(labels[r + 1]), len(labels[r]), entries)
    return CochainComplex(labels, diff, check=True)


def fig7_audit(a, cutoff, weight_cutoff=None, weight_range=None):
    """Audit of the comparison diagram between the CH/HH sequence and the
    CH/K/SH sequence, per effective weight.

    Row 1 is the long exact sequence of the cone over the inclusion
    +C^{*-2}(w+1) -> +C^*(w); its cone node is identified with the loop
    cohomology slice by an explicit quasi-isomorphism (top-slot
    projection), whose induced matrices are checked invertible.  Row 2 is
    the long exact sequence of the cone over the zero-weight comparison
    map; its middle node is the periodic base complex, i.e. the K-groups
    per weight.  The verticals and all squares are checked as matrix
    identities, and the triangle identity T^r . S^{r-2} = H(Ibar) ties the
    rows to the colimit defining PH.
    """
    ctx = _context(a, cutoff, weight_cutoff)
    bound, _ = ctx.base_bound()
    report = {"pass": True, "weights": {}}
    if weight_range is None:
        w_hi = max(2, (bound - 0) // 2 + 1)
        weight_range = range(-(cutoff // 2) - 1, w_hi + 1)
    for w in weight_range:
        entry = _fig7_weight(ctx, w, cutoff)
        report["weights"][w] = entry
        report["pass"] = report["pass"] and entry["pass"]
    return report


def _fig7_weight(ctx, w, cutoff):
    r_hi = cutoff - 1
    top = max(r_hi + 3, r_hi + 3 + 2 * w)
    M = ctx.mixed(top)
    band_w = band_complex(M, w, "plus", 0, r_hi + 2)
    band_w1 = shift_complex(band_complex(M, w + 1, "plus", 0, r_hi), 2)
    slice_w = _top_slot_quotient(M, w, r_hi + 2)

    # row 1: cone over the inclusion, plus the quasi-isomorphism onto the
    # loop-cohomology slice
    incl = label_inclusion(band_w1, band_w, check=False)
    cone1, inc1, proj1 = mapping_cone(incl)
    ses1 = ShortExactSequence(inc1, proj1, degrees=range(0, r_hi + 2))
    q_mats = {}
    for r in range(0, r_hi + 3):
        tgt_index = {lab: i for i, lab in enumerate(slice_w.labels.get(r, []))}
        entries = {}
        for j, lab in enumerate(cone1.labels.get(r, [])):
            if lab[0] == 0 and lab[1][0] == r:  # top slot of the +band part
                entries[(tgt_index[(r, lab[1][1])], j)] = Fraction(1)
        q_mats[r] = SparseMatrix(slice_w.dim(r), cone1.dim(r), entries)
    q = ChainMap(cone1, slice_w, q_mats, check=True,
                 check_degrees=range(0, r_hi + 2))
    quasi_iso = True
    q_ind = {}
    for r in range(1, r_hi + 1):
        m = q.induced(r)
        q_ind[r] = m
        if m.rows != m.cols or linalg.rank(m) != m.rows:
            quasi_iso = False

    # row 2: cone over the zero-weight comparison map
    f2, src2, tgt2 = _ibar_map(ctx, w, r_hi + 2)
    cone2, inc2, proj2 = mapping_cone(f2)
    ses2 = ShortExactSequence(inc2, proj2, degrees=range(0, r_hi + 2))

    a1 = les_audit(*ses1.les(1, r_hi))
    a2 = les_audit(*ses2.les(1, r_hi))

    # verticals: T (top-slot weight-zero projection) on the CH node, the
    # functorial cone map on the middle node, id on the shifted CH node
    loop = ctx.loop
    t_mats = {}
    for r in range(0, r_hi + 2):
        tgt_index = {lab: i for i, lab in enumerate(tgt2.labels.get(r, []))}
        entries = {}
        for j, (m, mono) in enumerate(band_w.labels.get(r, [])):
            if m == r + 2 * w and loop.weight(mono) == 0:
                entries[(tgt_index[("b", loop.lower(mono))], j)] = Fraction(1)
        t_mats[r] = SparseMatrix(tgt2.dim(r), band_w.dim(r), entries)
    t = ChainMap(band_w, tgt2, t_mats, check=True,
                 check_degrees=range(0, r_hi + 1))
    cone_mats = {}
    for r in range(0, r_hi + 2):
        entries = {}
        tgt_index = {lab: i for i, lab in enumerate(cone2.labels.get(r, []))}
        for j, lab in enumerate(cone1.labels.get(r, [])):
            if lab[0] == 0:
                col = t.matrix(r).column(band_w.index_of(r, lab[1]))
                for row, v in enumerate(col):
                    if v:
                        entries[(tgt_index[(0, tgt2.labels[r][row])], j)] = v
            else:
                entries[(tgt_index[lab], j)] = Fraction(1)
        cone_mats[r] = SparseMatrix(cone2.dim(r), cone1.dim(r), entries)
    vcone = ChainMap(cone1, cone2, cone_mats, check=True,
                     check_degrees=range(0, r_hi + 1))

    squares = True
    for r in range(1, r_hi + 1):
        lhs = vcone.induced(r) @ inc1.induced(r)
        rhs = inc2.induced(r) @ t.induced(r)
        squares = squares and lhs == rhs
        lhs = proj2.induced(r) @ vcone.induced(r)
        rhs = proj1.induced(r)
        squares = squares and lhs == rhs
        if r < r_hi:
            # the quotient rows agree, so the connecting square reads
            # conn2 = T . conn1 directly
            lhs = ses2.connecting(r)
            rhs = t.induced(r + 1) @ ses1.connecting(r)
            squares = squares and lhs == rhs

    # triangle: T^r . S^{r-2} equals the chain-level comparison H(Ibar)
    triangle = True
    s_incl = label_inclusion(band_w1, band_w, check=False)
    for r in range(1, r_hi + 1):
        lhs_mat = t.matrix(r) @ s_incl.matrix(r)
        rhs_mat = f2.matrix(r)
        if lhs_mat != rhs_mat:
            triangle = False

    entry = {
        "row1": a1,
        "row2": a2,
        "quasi_iso": quasi_iso,
        "squares": squares,
        "triangle": triangle,
    }
    entry["pass"] = (
        a1["pass"] and a2["pass"] and quasi_iso and squares and triangle
    )
    return entry


def t4_audit(a, cutoff, ks=(2, 3), weight_cutoff=None):
    """Eigenstructure audit of the induced power maps.

    (a) the induced matrices on HH^n and CH^n are annihilated by the
    product of (Psi - k^w) over the occurring weights and are
    diagonalizable with eigenspace dimensions equal to the weight-slice
    dimensions, identically for every k; (b) the weight-0 row of HH is
    the base cohomology; (c) slices with weight above the degree vanish;
    (d) the per-weight totals obey the (dim V)^w bound.
    """
    ctx = _context(a, cutoff, weight_cutoff)
    M = ctx.mixed(cutoff + 1)
    C = M.cochain()
    plus = ctx.plus(cutoff + 1)
    hh = HH(ctx, cutoff)
    ch = CH(ctx, cutoff)
    base = ctx.base(cutoff + 1)
    report = {"pass": True, "findings": []}

    def check(name, ok):
        report["findings"].append({"check": name, "pass": bool(ok)})
        report["pass"] = report["pass"] and bool(ok)

    for k in ks:
        for n in range(cutoff + 1):
            psi = linalg.induced_map(
                M.power_matrix(k, n), C.cohomology(n), C.cohomology(n)
            )
            ws = sorted(hh.weights(n))
            check(
                f"HH^{n} Psi_{k} annihilated by weight spectrum",
                _annihilated(psi, [Fraction(k) ** w for w in ws]),
            )
            eig_ok = True
            total_eig = 0
            for w in ws:
                dim_w = _eigenspace_dim(psi, Fraction(k) ** w)
                total_eig += dim_w
                eig_ok = eig_ok and dim_w == hh.weight(n, w)
            check(
                f"HH^{n} Psi_{k} eigenspaces match weight slices",
                eig_ok and total_eig == psi.rows,
            )

            cpsi = linalg.induced_map(
                plus_power_matrix(M, plus, k, n),
                plus.cohomology(n),
                plus.cohomology(n),
            )
            cws = sorted(ch.weights(n))
            check(
                f"CH^{n} Psi_{k} annihilated by weight spectrum",
                _annihilated(cpsi, [Fraction(k) ** w for w in cws]),
            )
            eig_ok = True
            total_eig = 0
            for w in cws:
                dim_w = _eigenspace_dim(cpsi, Fraction(k) ** w)
                total_eig += dim_w
                eig_ok = eig_ok and dim_w == ch.weight(n, w)
            check(
                f"CH^{n} Psi_{k} eigenspaces match weight slices",
                eig_ok and total_eig == cpsi.rows,
            )

    for n in range(cutoff + 1):
        check(
            f"HH^{n}(0) equals base cohomology",
            hh.weight(n, 0) == base.betti(n),
        )
        vanish = all(hh.weight(n, p) == 0 for p in range(n + 1, n + 3))
        vanish = vanish and all(
            ch.weight(n, p) == 0 for p in range(n + 1, n + 3)
        )
        check(f"HH^{n}(p) = CH^{n}(p) = 0 for p > {n}", vanish)

    dim_v = len(a.algebra.generators) if isinstance(a, FreeCDGA) else len(
        ctx.algebra.algebra.generators
    )
    h_total = sum(base.betti(n) for n in range(cutoff + 1))
    for w in range(0, cutoff + 1):
        partial = sum(hh.weight(n, w) for n in range(cutoff + 1))
        check(
            f"weight {w} total bounded by (dim V)^w * total base cohomology",
            partial <= (dim_v**w) * h_total,
        )
    return report


def _annihilated(m, eigenvalues):
    acc = SparseMatrix.identity(m.rows)
    for lam in eigenvalues:
        acc = (m - SparseMatrix.scalar(m.rows, lam)) @ acc
    return acc.is_zero()


def _eigenspace_dim(m, lam):
    return linalg.nullity(m - SparseMatrix.scalar(m.rows, lam))


def euler_series(a, cutoff, weight_max=None, weight_cutoff=None):
    """Per-weight Euler characteristics of HH and CH.

    chiH(w) = sum over i of (-1)^i dim HH^i(w); a coefficient is certified
    when the weight slice has no cohomology in the top vanishing window
    (so nothing beyond the cutoff can contribute).  chiC is indexed by
    the integer effective weight; the unit tower contributes to negative
    weights.
    """
    ctx = _context(a, cutoff, weight_cutoff)
    if weight_max is None:
        weight_max = cutoff
    hh = HH(ctx, cutoff)
    ch = CH(ctx, cutoff)
    g = ctx.algebra.max_generator_degree()
    window = range(max(0, cutoff - g), cutoff + 1)
    out = {"chiH": {}, "chiC": {}}
    for w in range(0, weight_max + 1):
        coeff = sum(
            (-1) ** n * hh.weight(n, w) for n in range(cutoff + 1)
        )
        certified = all(hh.weight(n, w) == 0 for n in window)
        out["chiH"][w] = {"value": coeff, "certified": certified}
    for w in range(-weight_max, weight_max + 1):
        coeff = sum(
            (-1) ** n * ch.weight(n, w) for n in range(cutoff + 1)
        )
        certified = all(ch.weight(n, w) == 0 for n in window)
        out["chiC"][w] = {"value": coeff, "certified": certified}
    return out
