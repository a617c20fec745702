"""Sparse multi-index tensors over an exact scalar domain.

Tensors carry, per axis, an extent, a variance ('u' for a module index,
'd' for a dual index) and a parity vector (one parity per index value)
so that contractions apply the Koszul sign rule of super vector spaces.
Any scalar type with ring operators and truthiness works (rationals,
truncated series).

A ContractionNetwork pairs dual axes with module axes across nodes; a
ContractionPlan orders the pairwise merges.  Execution is exact and
plan-independent: different plans are different factorizations of the
same morphism.  Plan independence requires every node to be parity-even
(each stored entry has even total parity) - juxtaposing two odd states
in different orders genuinely differs by a sign.  All structure tensors
of a metric Lie superalgebra are even, so this costs nothing here, and
``validate`` enforces it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial


class TensorError(ValueError):
    pass


def even_parities(extent: int) -> tuple[int, ...]:
    return (0,) * extent


@dataclass(frozen=True)
class SparseTensor:
    shape: tuple[int, ...]
    variance: tuple[str, ...]
    parities: tuple[tuple[int, ...], ...]
    entries: dict

    def __post_init__(self):
        if not (len(self.shape) == len(self.variance) == len(self.parities)):
            raise TensorError("axis metadata lengths differ")
        for v in self.variance:
            if v not in ("u", "d"):
                raise TensorError(f"bad variance {v!r}")
        for ext, par in zip(self.shape, self.parities):
            if len(par) != ext:
                raise TensorError("parity vector length != extent")
        for idx in self.entries:
            if len(idx) != len(self.shape) or any(
                not 0 <= i < e for i, e in zip(idx, self.shape)
            ):
                raise TensorError(f"index {idx} out of shape {self.shape}")

    @classmethod
    def make(cls, shape, variance, parities, entries) -> "SparseTensor":
        """Build a tensor, dropping stored zeros."""
        return cls(
            tuple(shape),
            tuple(variance),
            tuple(tuple(p) for p in parities),
            {tuple(k): v for k, v in entries.items() if v},
        )

    @property
    def rank(self) -> int:
        return len(self.shape)

    def is_even(self) -> bool:
        """Whether every stored entry has even total parity."""
        return all(
            sum(self.parities[k][idx[k]] for k in range(len(idx))) % 2 == 0
            for idx in self.entries
        )

    def scalar(self):
        if self.shape != ():
            raise TensorError("not a rank-0 tensor")
        return self.entries.get((), Fraction(0))

    def transpose(self, perm) -> "SparseTensor":
        """Reorder axes; each entry picks up the graded permutation sign."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.rank)):
            raise TensorError("not a permutation")
        entries = {}
        for idx, val in self.entries.items():
            sign = _perm_sign_graded(perm, [self.parities[k][idx[k]] for k in range(self.rank)])
            new_idx = tuple(idx[k] for k in perm)
            entries[new_idx] = sign * val if sign < 0 else val
        return SparseTensor(
            tuple(self.shape[k] for k in perm),
            tuple(self.variance[k] for k in perm),
            tuple(self.parities[k] for k in perm),
            entries,
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseTensor)
            and self.shape == other.shape
            and self.variance == other.variance
            and self.parities == other.parities
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseTensor(shape={self.shape}, nnz={len(self.entries)})"


def _perm_sign_graded(perm, pars) -> int:
    """Sign for permuting homogeneous factors: (-1) per odd-odd inversion.

    ``perm[k]`` is the old position placed at new slot k.
    """
    odd_new = [perm[k] for k in range(len(perm)) if pars[perm[k]]]
    inv = 0
    for i in range(len(odd_new)):
        for j in range(i + 1, len(odd_new)):
            if odd_new[i] > odd_new[j]:
                inv += 1
    return -1 if inv % 2 else 1


def _contract_entries(pars, duals, pairs):
    """Koszul sign for contracting ``pairs`` out of a word of parities.

    ``pairs`` is a list of (pos_a, pos_b); ``duals`` marks which word
    positions are dual axes.  Each contraction moves the dual element to
    sit immediately left of its partner, then removes both.  Returns the
    sign and the surviving positions in word order.
    """
    alive = [True] * len(pars)
    sign = 1
    for a, b in pairs:
        if duals[a]:
            dual, primal = a, b
        else:
            dual, primal = b, a
        p = pars[dual]
        if p:
            lo, hi = (dual, primal) if dual < primal else (primal, dual)
            crossed = sum(pars[k] for k in range(lo + 1, hi) if alive[k])
            if dual > primal:
                crossed += pars[primal]
            if crossed % 2:
                sign = -sign
        alive[a] = alive[b] = False
    return sign, [k for k in range(len(pars)) if alive[k]]


def tensor_merge(a: SparseTensor, b: SparseTensor, pairs) -> SparseTensor:
    """Contract ``pairs`` of axes (a_axis, b_axis) between two tensors.

    Remaining axes keep the order: a's survivors then b's survivors.
    """
    for ax_a, ax_b in pairs:
        if a.shape[ax_a] != b.shape[ax_b] or a.parities[ax_a] != b.parities[ax_b]:
            raise TensorError("contracted axes disagree in extent or parity")
        if {a.variance[ax_a], b.variance[ax_b]} != {"u", "d"}:
            raise TensorError("contraction needs one dual and one module axis")
    ra = a.rank
    word_pairs = sorted((ax_a, ra + ax_b) for ax_a, ax_b in pairs)
    duals_a = [v == "d" for v in a.variance]
    duals_b = [v == "d" for v in b.variance]
    duals = duals_a + duals_b
    a_con = [p for p, _ in pairs]
    b_con = [q for _, q in pairs]
    bucket: dict = {}
    for idx, val in b.entries.items():
        key = tuple(idx[q] for q in b_con)
        bucket.setdefault(key, []).append((idx, val))
    out: dict = {}
    keep = None
    for aidx, aval in a.entries.items():
        key = tuple(aidx[p] for p in a_con)
        hits = bucket.get(key)
        if not hits:
            continue
        pars_a = [a.parities[k][aidx[k]] for k in range(ra)]
        for bidx, bval in hits:
            pars = pars_a + [b.parities[k][bidx[k]] for k in range(b.rank)]
            sign, survivors = _contract_entries(pars, duals, word_pairs)
            if keep is None:
                keep = survivors
            new_idx = tuple(
                (aidx[k] if k < ra else bidx[k - ra]) for k in survivors
            )
            term = aval * bval
            if sign < 0:
                term = -term
            cur = out.get(new_idx)
            cur = term if cur is None else cur + term
            if cur:
                out[new_idx] = cur
            else:
                out.pop(new_idx, None)
    if keep is None:
        con_a = set(a_con)
        con_b = set(b_con)
        keep = [k for k in range(ra) if k not in con_a] + [
            ra + k for k in range(b.rank) if k not in con_b
        ]
    shape = tuple((a.shape[k] if k < ra else b.shape[k - ra]) for k in keep)
    variance = tuple((a.variance[k] if k < ra else b.variance[k - ra]) for k in keep)
    parities = tuple((a.parities[k] if k < ra else b.parities[k - ra]) for k in keep)
    return SparseTensor(shape, variance, parities, out)


def tensor_self_contract(t: SparseTensor, pairs) -> SparseTensor:
    """Contract axis pairs within one tensor (graded trace)."""
    for ax_a, ax_b in pairs:
        if t.shape[ax_a] != t.shape[ax_b] or t.parities[ax_a] != t.parities[ax_b]:
            raise TensorError("contracted axes disagree in extent or parity")
        if {t.variance[ax_a], t.variance[ax_b]} != {"u", "d"}:
            raise TensorError("contraction needs one dual and one module axis")
    word_pairs = sorted(tuple(sorted(p)) for p in pairs)
    duals = [v == "d" for v in t.variance]
    out: dict = {}
    keep = None
    for idx, val in t.entries.items():
        if any(idx[x] != idx[y] for x, y in word_pairs):
            continue
        pars = [t.parities[k][idx[k]] for k in range(t.rank)]
        sign, survivors = _contract_entries(pars, duals, word_pairs)
        if keep is None:
            keep = survivors
        new_idx = tuple(idx[k] for k in survivors)
        term = -val if sign < 0 else val
        cur = out.get(new_idx)
        cur = term if cur is None else cur + term
        if cur:
            out[new_idx] = cur
        else:
            out.pop(new_idx, None)
    if keep is None:
        gone = {x for p in word_pairs for x in p}
        keep = [k for k in range(t.rank) if k not in gone]
    return SparseTensor(
        tuple(t.shape[k] for k in keep),
        tuple(t.variance[k] for k in keep),
        tuple(t.parities[k] for k in keep),
        out,
    )


def tensor_outer(a: SparseTensor, b: SparseTensor) -> SparseTensor:
    return tensor_merge(a, b, [])


def symmetrize(t: SparseTensor, axes) -> SparseTensor:
    """Average over all permutations of ``axes`` with graded signs."""
    axes = list(axes)
    ref_shape = {t.shape[k] for k in axes}
    ref_par = {t.parities[k] for k in axes}
    ref_var = {t.variance[k] for k in axes}
    if len(ref_shape) > 1 or len(ref_par) > 1 or len(ref_var) > 1:
        raise TensorError("symmetrized axes must agree in extent, parity, variance")
    n = len(axes)
    acc: dict = {}
    for sigma in itertools.permutations(range(n)):
        perm = list(range(t.rank))
        for k in range(n):
            perm[axes[k]] = axes[sigma[k]]
        tt = t.transpose(perm)
        for idx, val in tt.entries.items():
            cur = acc.get(idx)
            cur = val if cur is None else cur + val
            if cur:
                acc[idx] = cur
            else:
                acc.pop(idx, None)
    w = Fraction(1, factorial(n))
    return SparseTensor(
        t.shape, t.variance, t.parities, {k: v * w for k, v in acc.items() if v}
    )


# ---------------------------------------------------------------------------
# Networks and plans


@dataclass
class ContractionNetwork:
    nodes: list
    pairings: list          # (node_i, axis_i, node_j, axis_j)
    open_axes: list         # (node, axis) in output order

    def validate(self):
        for i, node in enumerate(self.nodes):
            if not node.is_even():
                raise TensorError(
                    f"node {i} has odd-parity entries; network contraction "
                    "is only order-independent for parity-even tensors"
                )
        seen = set()
        for i, ai, j, aj in self.pairings:
            for node, ax in ((i, ai), (j, aj)):
                if not 0 <= node < len(self.nodes):
                    raise TensorError("pairing references unknown node")
                if not 0 <= ax < self.nodes[node].rank:
                    raise TensorError("pairing references unknown axis")
                if (node, ax) in seen:
                    raise TensorError(f"axis {(node, ax)} contracted twice")
                seen.add((node, ax))
            a, b = self.nodes[i], self.nodes[j]
            if a.shape[ai] != b.shape[aj] or a.parities[ai] != b.parities[aj]:
                raise TensorError("paired axes disagree in extent or parity")
            if {a.variance[ai], b.variance[aj]} != {"u", "d"}:
                raise TensorError("pairing needs one dual and one module axis")
        for node, ax in self.open_axes:
            if (node, ax) in seen:
                raise TensorError(f"axis {(node, ax)} both open and contracted")
            seen.add((node, ax))
        for node in range(len(self.nodes)):
            for ax in range(self.nodes[node].rank):
                if (node, ax) not in seen:
                    raise TensorError(f"axis {(node, ax)} neither open nor contracted")


@dataclass
class ContractionPlan:
    steps: tuple            # merge steps (i, j), j folded into i
    costs: tuple


def plan(net: ContractionNetwork) -> ContractionPlan:
    """Greedy pairwise plan: minimize the predicted open-extent product.

    Ties break lexicographically, so planning is deterministic and
    data-independent.
    """
    net.validate()
    n = len(net.nodes)
    open_prod: dict[int, int] = {}
    for i in range(n):
        prod = 1
        for e in net.nodes[i].shape:
            prod *= e
        open_prod[i] = prod
    pair_ext: dict[tuple[int, int], int] = {}
    for i, ai, j, aj in net.pairings:
        key = (min(i, j), max(i, j))
        pair_ext[key] = pair_ext.get(key, 1) * net.nodes[i].shape[ai]
    alive = set(range(n))
    steps = []
    costs = []
    while len(alive) > 1:
        best = None
        for i in sorted(alive):
            for j in sorted(alive):
                if j <= i:
                    continue
                e = pair_ext.get((i, j), 1)
                cost = open_prod[i] * open_prod[j] // (e * e)
                cand = (cost, i, j)
                if best is None or cand < best:
                    best = cand
        cost, i, j = best
        steps.append((i, j))
        costs.append(cost)
        open_prod[i] = cost
        e = pair_ext.pop((i, j), None)
        for k in list(alive):
            if k in (i, j):
                continue
            ejk = pair_ext.pop((min(j, k), max(j, k)), None)
            if ejk is not None:
                ik = (min(i, k), max(i, k))
                pair_ext[ik] = pair_ext.get(ik, 1) * ejk
        alive.remove(j)
    return ContractionPlan(tuple(steps), tuple(costs))


def execute(net: ContractionNetwork, p: ContractionPlan | None = None) -> SparseTensor:
    """Evaluate the network exactly; the result does not depend on the plan."""
    net.validate()
    if p is None:
        p = plan(net)
    # current state: node id -> (tensor, list of original (node, axis) per axis)
    state = {}
    for i, t in enumerate(net.nodes):
        state[i] = (t, [(i, ax) for ax in range(t.rank)])
    pair_lookup = {}
    for i, ai, j, aj in net.pairings:
        pair_lookup[(i, ai)] = (j, aj)
        pair_lookup[(j, aj)] = (i, ai)

    def resolve_self(node):
        t, axmap = state[node]
        pairs = []
        seen = set()
        for pos, orig in enumerate(axmap):
            mate = pair_lookup.get(orig)
            if mate is None or orig in seen:
                continue
            if mate in axmap:
                seen.add(orig)
                seen.add(mate)
                pairs.append((pos, axmap.index(mate)))
        if pairs:
            t = tensor_self_contract(t, pairs)
            gone = {x for pr in pairs for x in pr}
            axmap = [o for k, o in enumerate(axmap) if k not in gone]
            state[node] = (t, axmap)

    for i in state:
        resolve_self(i)
    for i, j in p.steps:
        ti, mi = state[i]
        tj, mj = state[j]
        pairs = []
        for pos, orig in enumerate(mi):
            mate = pair_lookup.get(orig)
            if mate is not None and mate in mj:
                pairs.append((pos, mj.index(mate)))
        t = tensor_merge(ti, tj, pairs)
        con_i = {a for a, _ in pairs}
        con_j = {b for _, b in pairs}
        axmap = [o for k, o in enumerate(mi) if k not in con_i] + [
            o for k, o in enumerate(mj) if k not in con_j
        ]
        del state[j]
        state[i] = (t, axmap)
        resolve_self(i)
    ids = sorted(state)
    t, axmap = state[ids[0]]
    for k in ids[1:]:
        t2, m2 = state[k]
        t = tensor_outer(t, t2)
        axmap = axmap + m2
    # reorder to the declared open-axis order
    if sorted(axmap) != sorted(net.open_axes):
        raise TensorError("executed axes do not match declared open axes")
    perm = [axmap.index(oa) for oa in net.open_axes]
    return t.transpose(perm)


def identity_tensor(extent: int, parities=None) -> SparseTensor:
    """Identity morphism as a (module, dual) rank-2 tensor."""
    if parities is None:
        parities = even_parities(extent)
    return SparseTensor.make(
        (extent, extent),
        ("u", "d"),
        (parities, parities),
        {(i, i): Fraction(1) for i in range(extent)},
    )
