"""Quantum structure computations in black-box groups whose order divides a
power of a known modulus m.

Everything here reduces to the hidden-subgroup solver: equality of preparable
states (conditional-swap instance over Z_2), membership through uniform
subgroup superpositions, presentations of abelian factors, and the staged
construction that turns s copies of |N> into s-1 copies of |<N, u>| -- the
building block for uniform superpositions along a polycyclic series.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd, prod

from .gcdcomb import combine_many
from .groups import BadOrderError, GroupArith, GroupBackend
from .hsp import (
    HidingOracle,
    QueryStats,
    _root_order,
    solve_hsp,
    solve_hsp_zmn,
)
from .lattice import AbelianDecomposition, IntMatrix, invariant_factor_decomposition, xgcd
from .state import (
    Register,
    RegisterLayout,
    SparseState,
    StatePrep,
    apply_classical_map,
    apply_qft,
    drop_register,
    factor_split,
    inner_product_unscaled,
    make_backend,
    measure_register,
    prepare_basis,
    prepare_zero,
    rename_register,
    tensor,
)


class PromiseError(Exception):
    """A caller-guaranteed promise (equal-or-orthogonal, hiding, ...) failed."""


@dataclass
class NotSolvable:
    """Commutator replacements exceeded the code length: no polycyclic series."""

    replacements: int


@dataclass
class BadOrder:
    """An element's order has a prime factor the working modulus lacks."""

    element: int


@dataclass
class PolycyclicSeries:
    """Elements g_1..g_h; level i is generated by g_1..g_i, each factor order
    divides the working modulus."""

    elements: list[int]
    factor_orders: list[int]

    def __len__(self):
        return len(self.elements)

    def order_bound(self) -> int:
        return prod(self.factor_orders) if self.factor_orders else 1

    def prefix(self, length: int) -> "PolycyclicSeries":
        return PolycyclicSeries(self.elements[:length], self.factor_orders[:length])


@dataclass
class Presentation:
    """Relations of a finitely generated abelian factor plus its invariant
    factor decomposition."""

    relations: IntMatrix
    decomposition: AbelianDecomposition
    exponents: tuple[int, ...]
    modulus: int
    k: int


class BlackboxContext:
    """Shared plumbing for one computation: derived arithmetic, amplitude
    backend, measurement policy, state/power caches and query accounting."""

    def __init__(
        self,
        backend: GroupBackend,
        m: int,
        *,
        amp_backend: str = "exact",
        mode: str = "deterministic",
        seed: int = 0,
    ):
        self.backend = backend
        self.m = m
        self.arith = GroupArith(backend, m)
        self.q = make_backend(amp_backend, _root_order(m))
        self.mode = mode
        self.rng = random.Random(seed)
        self.stats = QueryStats()
        self._states: dict[tuple[int, ...], SparseState] = {}
        self._pows: dict[tuple[int, int], int] = {}

    def power(self, x: int, e: int) -> int:
        key = (x, e)
        out = self._pows.get(key)
        if out is None:
            out = self.arith.power(x, e)
            self._pows[key] = out
        return out

    def group_register(self, name: str = "val") -> Register:
        return Register(name, "group", self.backend.code_space())

    def identity_state(self, name: str = "val") -> SparseState:
        layout = RegisterLayout([self.group_register(name)])
        return prepare_basis(layout, self.q, (self.arith.identity(),))


# ---------------------------------------------------------------------------
# Swap test and membership


def exact_swap_test(prep1, prep2, ctx: BlackboxContext, check_promise: bool = False) -> int:
    """1 when the two prepared states are equal up to a phase, 0 when they are
    orthogonal; exact in both cases.

    Realized as a hidden-subgroup instance over Z_2 whose oracle prepares both
    states and swaps them conditionally: the hidden subgroup is the whole group
    exactly when the states agree.
    """
    s1 = prep1.state if isinstance(prep1, StatePrep) else prep1
    s2 = prep2.state if isinstance(prep2, StatePrep) else prep2
    if len(s1.layout) != 1 or len(s2.layout) != 1:
        raise ValueError("swap test expects single-register preparations")
    dim = s1.layout.registers[0].dim
    if dim != s2.layout.registers[0].dim:
        raise ValueError("preparations act on different register sizes")
    if check_promise:
        z = inner_product_unscaled(s1, s2)
        ov2 = ctx.q.abs2(z)
        if ctx.q.is_exact:
            if ov2 != 0 and ov2 != s1.scale * s2.scale:
                raise PromiseError("states are neither equal-up-to-phase nor orthogonal")
        else:
            rel = float(ov2) / (float(s1.scale) * float(s2.scale))
            if min(abs(rel), abs(rel - 1.0)) > 1e-9:
                raise PromiseError("states are neither equal-up-to-phase nor orthogonal")

    kind = s1.layout.registers[0].kind
    regs = (Register("w1", kind, dim), Register("w2", kind, dim))
    pair = tensor(
        rename_register(s1, s1.layout.registers[0].name, "w1"),
        rename_register(s2, s2.layout.registers[0].name, "w2"),
    )
    prep = StatePrep(("w1", "w2"), pair, "swap-pair")

    def cswap(x, v):
        return (v[1], v[0]) if x[0] == 1 else v

    oracle = HidingOracle(
        2, 1, 1, regs, prep=prep, mult=cswap, mult_inv=cswap, name="cond-swap"
    )
    res = solve_hsp_zmn(
        oracle,
        mode=ctx.mode,
        rng=ctx.rng,
        backend=ctx.q,
        method="dense",
        stats=ctx.stats,
    )
    return 1 if res.subgroup.hnf.data[0][0] == 1 else 0


def left_multiplied(state: SparseState, u: int, ctx: BlackboxContext) -> SparseState:
    return apply_classical_map(state, lambda lbl: (ctx.arith.mul(u, lbl[0]),))


def superposition_membership(u: int, k_prep, ctx: BlackboxContext) -> bool:
    """Membership of u in the subgroup whose uniform superposition k_prep
    produces: left translation either fixes the superposition or moves it to an
    orthogonal coset state."""
    k_state = k_prep.state if isinstance(k_prep, StatePrep) else k_prep
    shifted = left_multiplied(k_state, u, ctx)
    return exact_swap_test(k_state, shifted, ctx) == 1


# ---------------------------------------------------------------------------
# Abelian presentations


def abelian_presentation(gens, k_prep, ctx: BlackboxContext) -> Presentation:
    """Present the factor of <gens, K> by K (K normal, generators commuting
    modulo K) by solving the hidden-subgroup instance of the relation lattice."""
    gens = [int(g) for g in gens]
    n = len(gens)
    if n == 0:
        raise ValueError("need at least one generator")
    arith = ctx.arith
    exps = []
    for g in gens:
        e = arith.order_m_exponent(g)
        if e is None:
            raise BadOrderError(f"order of {g} does not divide a power of {ctx.m}")
        exps.append(e)
    k = max(1, max(exps))
    q = ctx.m**k

    k_state = k_prep.state if isinstance(k_prep, StatePrep) else k_prep

    wcache: dict[tuple[int, ...], int] = {}

    def word(x) -> int:
        w = wcache.get(x)
        if w is None:
            w = arith.identity()
            for g, e in zip(gens, x):
                if e:
                    w = arith.mul(w, ctx.power(g, e))
            wcache[x] = w
        return w

    regs = (ctx.group_register("val"),)
    support = sorted(k_state.amps)
    classical = len(support) == 1 and support[0] == (arith.identity(),)
    if classical:
        oracle = HidingOracle(
            ctx.m, k, n, regs, label_fn=lambda x: (word(tuple(x)),), name="word"
        )
    else:
        inv_cache: dict[tuple[int, ...], int] = {}

        def word_inv(x) -> int:
            w = inv_cache.get(x)
            if w is None:
                w = arith.inverse(word(x))
                inv_cache[x] = w
            return w

        oracle = HidingOracle(
            ctx.m,
            k,
            n,
            regs,
            prep=StatePrep(("val",), k_state, "subgroup"),
            mult=lambda x, v: (arith.mul(word(tuple(x)), v[0]),),
            mult_inv=lambda x, v: (arith.mul(word_inv(tuple(x)), v[0]),),
            name="word-coset",
        )
    res = solve_hsp(
        oracle,
        mode=ctx.mode,
        seed=ctx.rng.randrange(1 << 30) if ctx.mode == "seeded" else None,
        backend=ctx.q if not isinstance(ctx.q, str) else ctx.q,
        stats=ctx.stats,
    )
    relations = res.subgroup.hnf
    decomposition = invariant_factor_decomposition(relations, n)
    return Presentation(relations, decomposition, tuple(exps), ctx.m, k)


def order_modulo(g: int, sub_state: SparseState, ctx: BlackboxContext) -> int:
    """Order of g modulo the subgroup whose superposition is given."""
    pres = abelian_presentation([g], sub_state, ctx)
    return pres.relations.data[0][0]


# ---------------------------------------------------------------------------
# Superposition pyramid


def _sample_coset_phases(state: SparseState, u: int, ctx: BlackboxContext):
    """Fourier sampling of left translation by u on one subgroup-superposition
    register: attach a digit, transform, multiply, transform, measure.  Returns
    (measured index, collapsed register state)."""
    m = ctx.m
    name = state.layout.registers[0].name
    digit = prepare_zero(RegisterLayout([Register("y", "digit", m)]), ctx.q)
    work = tensor(digit, state)
    work = apply_qft(work, "y")
    upow = [ctx.power(u, t) for t in range(m)]

    def translate(lbl):
        return (lbl[0], ctx.arith.mul(upow[lbl[0]], lbl[1]))

    work = apply_classical_map(work, translate)
    work = apply_qft(work, "y")
    ctx.stats.qft_calls += 2
    ctx.stats.f_calls += 1
    y, work = measure_register(work, "y", mode=ctx.mode, rng=ctx.rng)
    work = drop_register(work, "y")
    return y, rename_register(work, work.layout.registers[0].name, name)


def _pair_multiply(
    left: SparseState, right: SparseState, fn, ctx: BlackboxContext
) -> tuple[SparseState, SparseState]:
    """Apply a two-register content map and split the exact product back apart."""
    lname = left.layout.registers[0].name
    rname = right.layout.registers[0].name
    if lname == rname:
        right = rename_register(right, rname, rname + "_r")
        rname = rname + "_r"
    merged = tensor(left, right)
    merged = apply_classical_map(merged, fn)
    new_left, new_right = factor_split(merged, [lname])
    return new_left, new_right


def extend_superposition(
    copies, u: int, ctx: BlackboxContext, coherent: bool = False
):
    """From s copies of |N> build s-1 copies of |<N, u>| plus one garbage state.

    Each copy is Fourier-sampled against left translation by u; the sampled
    indices are measured (every later operation commutes with that measurement)
    and combined with gcd-preserving coefficients so that content
    multiplications drive the last register's index to a generator and the
    others' to zero -- the zero-index state is exactly the uniform
    superposition over the extended subgroup.

    Returns (list of s-1 subgroup states, garbage state, measured indices).
    """
    if coherent:
        return _extend_superposition_coherent(copies, u, ctx)
    s = len(copies)
    if s < 2:
        raise ValueError("need at least two copies")
    m = ctx.m
    states = []
    ys = []
    for i, st in enumerate(copies):
        st = rename_register(st, st.layout.registers[0].name, f"c{i}")
        y, out = _sample_coset_phases(st, u, ctx)
        ys.append(y)
        states.append(out)

    if any(ys):
        coeffs = combine_many(ys, m)
        ylast = ys[-1]
        for i in range(s - 1):
            if coeffs[i] % m:
                e = -coeffs[i]

                def kick(lbl, e=e):
                    return (ctx.arith.mul(ctx.power(lbl[1], e), lbl[0]), lbl[1])

                states[i], states[s - 1] = _pair_multiply(
                    states[i], states[s - 1], kick, ctx
                )
            ylast = (ylast + coeffs[i] * ys[i]) % m
        gen = ylast
        for i in range(s - 1):
            t = _discrete_ratio(ys[i], gen, m)
            if t % m:

                def kick2(lbl, t=t):
                    return (lbl[0], ctx.arith.mul(ctx.power(lbl[0], t), lbl[1]))

                states[i], states[s - 1] = _pair_multiply(
                    states[i], states[s - 1], kick2, ctx
                )
    outputs = [
        _canonical_phase(rename_register(st, st.layout.registers[0].name, "val"))
        for st in states[: s - 1]
    ]
    garbage = rename_register(
        states[s - 1], states[s - 1].layout.registers[0].name, "val"
    )
    return outputs, garbage, tuple(ys)


def _canonical_phase(state: SparseState) -> SparseState:
    """Fix the unobservable global phase: multiply by the conjugate of the
    lexicographically least amplitude, making that amplitude real positive.
    Used on extension outputs, whose amplitude profile is uniform, so the
    rescaled mass stays rational."""
    ref = min(state.amps)
    c = state.backend.conj(state.amps[ref])
    amps = {lbl: a * c for lbl, a in state.amps.items()}
    scale = state.backend.mass(amps.values())
    return SparseState(state.layout, state.backend, scale, amps)


def _discrete_ratio(target: int, base: int, m: int) -> int:
    """Least nonnegative t with t*base = target mod m (0 in the degenerate
    all-zero branch)."""
    if target % m == 0:
        return 0
    g, inv, _ = xgcd(base % m, m)
    if target % g:
        raise ArithmeticError("no discrete ratio; gcd bookkeeping is broken")
    mm = m // g
    return ((target // g) * (inv % mm)) % mm


def _extend_superposition_coherent(copies, u: int, ctx: BlackboxContext):
    """Fully unitary variant (no measurements), for cross-checking the hybrid
    path on small instances: coefficients are computed per sampled-index tuple
    inside one big classical map, and the subgroup copies are split off the
    still-entangled garbage at the end."""
    s = len(copies)
    m = ctx.m
    big = None
    for i, st in enumerate(copies):
        st = rename_register(st, st.layout.registers[0].name, f"c{i}")
        digit = prepare_zero(RegisterLayout([Register(f"y{i}", "digit", m)]), ctx.q)
        part = tensor(digit, st)
        big = part if big is None else tensor(big, part)
    upow = [ctx.power(u, t) for t in range(m)]
    for i in range(s):
        big = apply_qft(big, f"y{i}")
        yi = big.layout.index[f"y{i}"]
        ci = big.layout.index[f"c{i}"]

        def translate(lbl, yi=yi, ci=ci):
            out = list(lbl)
            out[ci] = ctx.arith.mul(upow[lbl[yi]], lbl[ci])
            return tuple(out)

        big = apply_classical_map(big, translate)
        big = apply_qft(big, f"y{i}")
        ctx.stats.qft_calls += 2
        ctx.stats.f_calls += 1

    y_idx = [big.layout.index[f"y{i}"] for i in range(s)]
    c_idx = [big.layout.index[f"c{i}"] for i in range(s)]
    plan_cache: dict[tuple[int, ...], tuple] = {}

    def plan(ys: tuple[int, ...]):
        got = plan_cache.get(ys)
        if got is None:
            if any(ys):
                coeffs = combine_many(list(ys), m)
                gen = (ys[-1] + sum(c * y for c, y in zip(coeffs, ys))) % m
                ts = [_discrete_ratio(ys[i], gen, m) for i in range(s - 1)]
            else:
                coeffs = [0] * (s - 1)
                ts = [0] * (s - 1)
            got = (coeffs, ts)
            plan_cache[ys] = got
        return got

    def kick_all(lbl):
        ys = tuple(lbl[i] for i in y_idx)
        coeffs, ts = plan(ys)
        contents = [lbl[i] for i in c_idx]
        for i in range(s - 1):
            if coeffs[i] % m:
                contents[i] = ctx.arith.mul(
                    ctx.power(contents[s - 1], -coeffs[i]), contents[i]
                )
        for i in range(s - 1):
            if ts[i] % m:
                contents[s - 1] = ctx.arith.mul(
                    ctx.power(contents[i], ts[i]), contents[s - 1]
                )
        out = list(lbl)
        for i, c in zip(c_idx, contents):
            out[i] = c
        return tuple(out)

    big = apply_classical_map(big, kick_all)
    outputs = []
    rest = big
    for i in range(s - 1):
        piece, rest = factor_split(rest, [f"c{i}"])
        outputs.append(_canonical_phase(rename_register(piece, f"c{i}", "val")))
    return outputs, rest, None


def build_group_superposition(series: PolycyclicSeries, ctx: BlackboxContext) -> StatePrep:
    """Uniform superposition over the group, built level by level: h+1 copies of
    the identity state shrink by one copy per series element."""
    h = len(series)
    states = [ctx.identity_state() for _ in range(h + 1)]
    for i in range(h):
        states, _garbage, _ys = extend_superposition(states, series.elements[i], ctx)
    return StatePrep(("val",), states[0], "group-superposition")


def _series_state(ctx: BlackboxContext, elements: tuple[int, ...]) -> SparseState:
    """|subgroup> for the subgroup generated by a series prefix; cached, built
    with the two-copy pyramid step per level."""
    cached = ctx._states.get(elements)
    if cached is not None:
        return cached
    if not elements:
        st = ctx.identity_state()
    else:
        prev = _series_state(ctx, elements[:-1])
        outs, _g, _ys = extend_superposition([prev, prev], elements[-1], ctx)
        st = outs[0]
    ctx._states[elements] = st
    return st


def series_prep(series: PolycyclicSeries, ctx: BlackboxContext, level: int | None = None) -> StatePrep:
    """Preparation of the uniform superposition over a series level."""
    elems = tuple(series.elements if level is None else series.elements[:level])
    return StatePrep(("val",), _series_state(ctx, elems), f"level-{len(elems)}")


# ---------------------------------------------------------------------------
# Polycyclic series construction


def _member(ctx: BlackboxContext, u: int, series: PolycyclicSeries) -> bool:
    state = _series_state(ctx, tuple(series.elements))
    return superposition_membership(u, state, ctx)


def _extend_series_abelian(
    ctx: BlackboxContext, series: PolycyclicSeries, new_elements
) -> PolycyclicSeries:
    """Extend a series by elements that commute with each other modulo the
    current subgroup and normalize it; each extension is refined into levels
    whose factor orders divide the working modulus."""
    elems = list(series.elements)
    orders = list(series.factor_orders)
    for g in new_elements:
        e = order_modulo(g, _series_state(ctx, tuple(elems)), ctx)
        running = e
        while running > 1:
            c = gcd(running, ctx.m)
            if c == 1:
                raise BadOrderError(
                    f"factor order {running} shares no factor with {ctx.m}"
                )
            running //= c
            elems.append(ctx.power(g, running))
            orders.append(c)
    return PolycyclicSeries(elems, orders)


def build_polycyclic_series(
    backend: GroupBackend, m: int, ctx: BlackboxContext | None = None
):
    """Bottom-up polycyclic series with factor orders dividing m.

    Returns a PolycyclicSeries, or BadOrder when some element's order has a
    prime factor outside m, or NotSolvable when commutator replacements exceed
    the code length (the certificate of non-solvability).
    """
    if ctx is None:
        ctx = BlackboxContext(backend, m)
    arith = ctx.arith
    for g in backend.generators:
        if arith.order_m_exponent(g) is None:
            return BadOrder(element=g)
    series = PolycyclicSeries([], [])
    replacements = 0
    while True:
        outside = [g for g in backend.generators if not _member(ctx, g, series)]
        if not outside:
            return series
        x = outside[0]
        while True:
            if arith.order_m_exponent(x) is None:
                return BadOrder(element=x)
            conjugates = [x]
            ext = _extend_series_abelian(ctx, series, [x])
            replaced = False
            while True:
                escape = None
                for u in conjugates:
                    for y in outside:
                        c = arith.conjugate(u, y)
                        if not _member(ctx, c, ext):
                            escape = c
                            break
                    if escape is not None:
                        break
                if escape is None:
                    series = ext
                    break
                witness = None
                for w in conjugates:
                    cc = arith.commutator(w, escape)
                    if not _member(ctx, cc, series):
                        witness = cc
                        break
                if witness is not None:
                    replacements += 1
                    if replacements > backend.l_bits:
                        return NotSolvable(replacements=replacements)
                    x = witness
                    replaced = True
                    break
                conjugates.append(escape)
                ext = _extend_series_abelian(ctx, ext, [escape])
            if not replaced:
                break


# ---------------------------------------------------------------------------
# Order, derived series, abelian factors


def group_order(series: PolycyclicSeries, ctx: BlackboxContext) -> int:
    """Product over the levels of the order of the level generator modulo the
    preceding subgroup, each found by the presentation routine."""
    total = 1
    for i, g in enumerate(series.elements):
        sub = _series_state(ctx, tuple(series.elements[:i]))
        total *= order_modulo(g, sub, ctx)
    return total


def commutator_subgroup(
    series: PolycyclicSeries, ctx: BlackboxContext
) -> PolycyclicSeries:
    """Series for the commutator subgroup of the group the series generates."""
    h = len(series)
    if h <= 1:
        return PolycyclicSeries([], [])
    nser = series.prefix(h - 1)
    g = series.elements[h - 1]
    nprime = commutator_subgroup(nser, ctx)
    current = nprime
    queue = list(nser.elements)
    while queue:
        w = queue.pop(0)
        c = ctx.arith.commutator(w, g)
        if not _member(ctx, c, current):
            current = _extend_series_abelian(ctx, current, [c])
            queue.append(c)
    return current


def derived_series(
    backend: GroupBackend, m: int, ctx: BlackboxContext | None = None
) -> list[list[int]]:
    """Generator lists of the derived series, down to the trivial group."""
    if ctx is None:
        ctx = BlackboxContext(backend, m)
    built = build_polycyclic_series(backend, m, ctx)
    if not isinstance(built, PolycyclicSeries):
        raise PromiseError(f"group is not solvable of m-power order: {built}")
    chain = [list(backend.generators)]
    current = built
    while current.elements:
        nxt = commutator_subgroup(current, ctx)
        chain.append(list(nxt.elements))
        current = nxt
    return chain


def abelian_factor_decomposition(
    backend: GroupBackend, normal_gens, m: int, ctx: BlackboxContext | None = None
) -> AbelianDecomposition:
    """Invariant factors of (whole group)/(normal subgroup), the factor assumed
    abelian: builds a series for the normal subgroup, then presents the input
    generators modulo it."""
    if ctx is None:
        ctx = BlackboxContext(backend, m)
    sub_series = _build_series_for(ctx, list(normal_gens))
    if not isinstance(sub_series, PolycyclicSeries):
        raise PromiseError(f"normal subgroup is not solvable of m-power order: {sub_series}")
    sub_state = _series_state(ctx, tuple(sub_series.elements))
    pres = abelian_presentation(backend.generators, sub_state, ctx)
    return pres.decomposition


def _build_series_for(ctx: BlackboxContext, gens: list[int]):
    """build_polycyclic_series restricted to the subgroup the given elements
    generate (conjugation closure runs over these generators only); caches,
    arithmetic and accounting are shared with the calling context."""
    if not gens:
        return PolycyclicSeries([], [])
    view = _SubgroupView(ctx.backend, gens)
    sub_ctx = BlackboxContext.__new__(BlackboxContext)
    sub_ctx.__dict__.update(ctx.__dict__)
    sub_ctx.backend = view
    return build_polycyclic_series(view, ctx.m, sub_ctx)


class _SubgroupView(GroupBackend):
    """The same oracle with a restricted generator list."""

    def __init__(self, inner: GroupBackend, gens):
        super().__init__()
        self.inner = inner
        self.kind = inner.kind
        self.l_bits = inner.l_bits
        self.generators = list(gens)

    def mul(self, a: int, b: int) -> int:
        return self.inner.mul(a, b)

    def identity_code(self) -> int:
        return self.inner.identity_code()
