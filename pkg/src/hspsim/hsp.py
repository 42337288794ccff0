"""Exact hidden-subgroup solver for Z_{m^k}^n.

The exponent-1 solver keeps a growing subgroup K of the hidden subgroup and a
growing subgroup L of its orthogonal complement.  Each round probes a vector u
from L-perp outside K: Fourier sampling plus a helper qubit feeds one exact
amplification pass per threshold index j, and the measured register either
yields a new element of the complement (nonzero pairing with u) or, if every j
fails, certifies u itself belongs to the hidden subgroup.  Exponent k > 1 is
reduced to exponent 1 by repeatedly solving inside the divide-by-m lift of the
subgroup found so far.

Two equivalent round implementations exist: a dense one that drives the sparse
state machinery through the full circuit, and a reduced one that evaluates the
same amplitudes on the pairing-value classes of the sampled register (the
amplification operator acts within that small invariant subspace).  They are
cross-checked in the test suite; the solver picks automatically by size.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product as _cartesian

from .lattice import (
    SubgroupRep,
    coset_representative,
    enumerate_elements,
    equal_or_witness,
    join,
    lift_by_m,
    perp_subgroup,
    section_map,
    subgroup_from_generators,
    trivial_subgroup,
)
from .state import (
    Circuit,
    ClassicalStep,
    HadamardStep,
    PrepStep,
    QftStep,
    Register,
    RegisterLayout,
    SparseState,
    Step,
    amplitude_amplify,
    apply_classical_map,
    make_backend,
    measure_registers,
    prepare_zero,
)

DENSE_CUTOFF = 64  # label-space size up to which the dense round is the default


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def round_flag(m: int, j: int, pairing: int, b: int) -> int:
    """Acceptance flag for one amplification pass: set when the pairing lands in
    the upper half of [0, m), or the helper qubit is on and the pairing lies in
    (0, 2^j]."""
    if 2 * pairing >= m:
        return 1
    if b == 1 and j >= 0 and 0 < pairing <= (1 << j):
        return 1
    return 0


def probe_schedule(m: int) -> list[int]:
    """Threshold indices probed per round: -1 .. floor(log2 m), shrunk to
    {-1, 0} for prime moduli."""
    if is_prime(m):
        return [-1, 0]
    return list(range(-1, m.bit_length()))


@dataclass
class CallCounter:
    forward: int = 0
    inverse: int = 0


@dataclass
class QueryStats:
    """Oracle and transform accounting for one solve."""

    f_calls: int = 0
    f_inverse_calls: int = 0
    qft_calls: int = 0
    qft_inverse_calls: int = 0
    rounds: int = 0
    j_probes: int = 0
    reduction_rounds: int = 0
    reduction_solves: int = 0

    def merge(self, other: "QueryStats") -> None:
        self.f_calls += other.f_calls
        self.f_inverse_calls += other.f_inverse_calls
        self.qft_calls += other.qft_calls
        self.qft_inverse_calls += other.qft_inverse_calls
        self.rounds += other.rounds
        self.j_probes += other.j_probes

    def to_dict(self) -> dict:
        return {
            "f_calls": self.f_calls,
            "f_inverse_calls": self.f_inverse_calls,
            "qft_calls": self.qft_calls,
            "qft_inverse_calls": self.qft_inverse_calls,
            "rounds": self.rounds,
            "j_probes": self.j_probes,
            "reduction_rounds": self.reduction_rounds,
            "reduction_solves": self.reduction_solves,
        }


@dataclass
class RoundAttempt:
    j: int
    x: tuple[int, ...]
    pairing: int


@dataclass
class RoundTrace:
    probe: tuple[int, ...]
    attempts: list[RoundAttempt] = field(default_factory=list)
    found: bool = False
    # smallest positive pairing the probe attains on the hidden complement;
    # filled in only when the true subgroup is supplied for checking
    witness_divisor: int | None = None

    def to_dict(self) -> dict:
        out = {
            "probe": list(self.probe),
            "attempts": [
                {"j": a.j, "x": list(a.x), "pairing": a.pairing} for a in self.attempts
            ],
            "found": self.found,
        }
        if self.witness_divisor is not None:
            out["witness_divisor"] = self.witness_divisor
        return out


# ---------------------------------------------------------------------------
# Oracles


class HidingOracle:
    """Reversible realization of |x>|0> -> |x>|f(x)> with call counters.

    Classical oracles are built from a label function and write the value into
    digit registers additively (self-inverse on zeroed targets for dimension
    2).  State-valued oracles supply an x-independent preparation of the value
    block plus an x-controlled bijection of it.
    """

    def __init__(
        self,
        m: int,
        k: int,
        n: int,
        value_registers,
        *,
        label_fn=None,
        prep=None,
        mult=None,
        mult_inv=None,
        counter: CallCounter | None = None,
        name: str = "",
    ):
        self.m, self.k, self.n = m, k, n
        self.value_registers = tuple(value_registers)
        self.counter = counter if counter is not None else CallCounter()
        self.name = name
        self.label_fn = label_fn
        self.prep = prep
        self._table = None
        self._hidden = None
        self._perp_sorted = None
        if label_fn is not None:
            dims = [r.dim for r in self.value_registers]

            def add_write(x, v):
                fv = self.value(x)
                return tuple((a + b) % d for a, b, d in zip(v, fv, dims))

            def sub_write(x, v):
                fv = self.value(x)
                return tuple((a - b) % d for a, b, d in zip(v, fv, dims))

            self.mult = add_write
            self.mult_inv = sub_write
        else:
            if mult is None or mult_inv is None:
                raise ValueError("state-valued oracles need mult and mult_inv")
            self.mult = mult
            self.mult_inv = mult_inv

    @property
    def is_classical(self) -> bool:
        return self.label_fn is not None

    @property
    def modulus(self) -> int:
        return self.m**self.k

    def value(self, x) -> tuple[int, ...]:
        tab = self.table()
        return tab[tuple(x)]

    def table(self) -> dict:
        if not self.is_classical:
            raise ValueError("state-valued oracle has no label table")
        if self._table is None:
            q = self.modulus
            self._table = {
                x: tuple(self.label_fn(x)) for x in _cartesian(range(q), repeat=self.n)
            }
        return self._table

    def hidden_subgroup(self) -> SubgroupRep:
        """The subgroup this oracle hides, read off the fiber of f over f(0)."""
        if self._hidden is None:
            tab = self.table()
            f0 = tab[(0,) * self.n]
            gens = [x for x, v in tab.items() if v == f0]
            self._hidden = subgroup_from_generators(gens, self.m, self.k, self.n)
        return self._hidden

    def perp_elements(self) -> list[tuple[int, ...]]:
        if self.k != 1:
            raise ValueError("complement enumeration is an exponent-1 operation")
        if self._perp_sorted is None:
            perp = perp_subgroup(self.hidden_subgroup())
            self._perp_sorted = sorted(enumerate_elements(perp))
        return self._perp_sorted

    def composed_with(self, section) -> "HidingOracle":
        """The oracle x -> f(section(x)) over Z_m^n; shares this oracle's counter."""
        if self.is_classical:
            return HidingOracle(
                self.m,
                1,
                self.n,
                self.value_registers,
                label_fn=lambda x: self.label_fn(section(x)),
                counter=self.counter,
                name=f"{self.name}.section",
            )
        return HidingOracle(
            self.m,
            1,
            self.n,
            self.value_registers,
            prep=self.prep,
            mult=lambda x, v: self.mult(section(x), v),
            mult_inv=lambda x, v: self.mult_inv(section(x), v),
            counter=self.counter,
            name=f"{self.name}.section",
        )


@dataclass(frozen=True)
class OracleStep(Step):
    oracle: HidingOracle
    inverse: bool = False

    def apply(self, state: SparseState, stats=None) -> SparseState:
        o = self.oracle
        # accounting is driven by runs that carry a stats sink; bookkeeping
        # passes (e.g. locating the reflection axis, which reports its own two
        # preparation passes) run without one and stay uncounted
        if stats is not None:
            if self.inverse:
                o.counter.inverse += 1
                stats.f_inverse_calls += 1
            else:
                o.counter.forward += 1
                stats.f_calls += 1
        layout = state.layout
        xi = [layout.index[f"x{i}"] for i in range(o.n)]
        vi = [layout.index[r.name] for r in o.value_registers]

        def fwd(lbl):
            x = tuple(lbl[i] for i in xi)
            v = tuple(lbl[i] for i in vi)
            nv = o.mult(x, v)
            out = list(lbl)
            for i, val in zip(vi, nv):
                out[i] = val
            return tuple(out)

        def bwd(lbl):
            x = tuple(lbl[i] for i in xi)
            v = tuple(lbl[i] for i in vi)
            nv = o.mult_inv(x, v)
            out = list(lbl)
            for i, val in zip(vi, nv):
                out[i] = val
            return tuple(out)

        if not self.inverse:
            if o.prep is not None:
                state = PrepStep(o.prep).apply(state)
            return apply_classical_map(state, fwd)
        state = apply_classical_map(state, bwd)
        if o.prep is not None:
            state = PrepStep(o.prep, inverse=True).apply(state)
        return state

    def inverted(self) -> "OracleStep":
        return OracleStep(self.oracle, not self.inverse)


def build_coset_oracle(rep: SubgroupRep) -> HidingOracle:
    """Test oracle hiding exactly the given subgroup: f maps x to the canonical
    representative of its coset, written into n digit registers."""
    q = rep.modulus
    regs = [Register(f"v{i}", "digit", q) for i in range(rep.n)]
    return HidingOracle(
        rep.m,
        rep.k,
        rep.n,
        regs,
        label_fn=lambda x: coset_representative(rep, x),
        name="coset",
    )


def verify_hidden(oracle: HidingOracle, rep: SubgroupRep) -> bool:
    """Machine check that a classical oracle is constant exactly on the cosets
    of the claimed subgroup (hence that the subgroup is the hidden one)."""
    tab = oracle.table()
    reps = {}
    for x, v in tab.items():
        r = coset_representative(rep, x)
        if tab[r] != v:
            return False
        reps[r] = v
    return len(set(reps.values())) == len(reps)


# ---------------------------------------------------------------------------
# Fourier sampling and the amplified round


def sampling_layout(oracle: HidingOracle, with_helpers: bool = False) -> RegisterLayout:
    regs = [Register(f"x{i}", "digit", oracle.m) for i in range(oracle.n)]
    regs += list(oracle.value_registers)
    if with_helpers:
        regs.append(Register("b", "qubit", 2))
        regs.append(Register("flag", "qubit", 2))
    return RegisterLayout(regs)


def fourier_sample(oracle: HidingOracle, backend=None, stats=None) -> SparseState:
    """Transform, query, transform: the sampled register ends supported exactly
    on the complement of the hidden subgroup."""
    if oracle.k != 1:
        raise ValueError("Fourier sampling runs over exponent-1 oracles")
    if backend is None:
        backend = make_backend("exact", root_order=_root_order(oracle.m))
    layout = sampling_layout(oracle)
    circ = sampling_circuit(oracle)
    return circ.run(prepare_zero(layout, backend), stats)


def sampling_circuit(oracle: HidingOracle) -> Circuit:
    qfts = [QftStep(f"x{i}") for i in range(oracle.n)]
    return Circuit.of(*qfts, OracleStep(oracle), *qfts)


def _root_order(m: int) -> int:
    # i and all modulus-m phases must coexist in one field
    M = 4
    g = 4 if m % 4 == 0 else (2 if m % 2 == 0 else 1)
    return 4 * m // g


def round_prep_circuit(oracle: HidingOracle, probe, j: int) -> Circuit:
    """Preparation for one amplification pass at threshold index j."""
    m, n = oracle.m, oracle.n

    def write_flag(lbl):
        pairing = sum(p * lbl[i] for i, p in enumerate(probe)) % m
        f = round_flag(m, j, pairing, lbl[-2])
        return lbl[:-1] + (lbl[-1] ^ f,)

    return Circuit.of(
        sampling_circuit(oracle),
        HadamardStep("b"),
        ClassicalStep(write_flag, write_flag, "flag"),
    )


def _flag_is_set(lbl) -> bool:
    return lbl[-1] == 1


def amplified_round_state(
    oracle: HidingOracle, probe, j: int, backend, stats=None
) -> SparseState:
    """Post-amplification state of one (probe, j) pass, built densely."""
    layout = sampling_layout(oracle, with_helpers=True)
    prep = round_prep_circuit(oracle, probe, j)
    circ = amplitude_amplify(prep, _flag_is_set)
    return circ.run(prepare_zero(layout, backend), stats)


def _dense_round(oracle, probe, js, mode, rng, backend, stats, capture):
    n = oracle.n
    trace = RoundTrace(probe=tuple(probe))
    found = []
    for j in js:
        state = amplified_round_state(oracle, probe, j, backend, stats)
        stats.j_probes += 1
        if capture is not None:
            capture("round_state", {"probe": tuple(probe), "j": j, "state": state})
        xs, _collapsed = measure_registers(
            state, [f"x{i}" for i in range(n)], mode=mode, rng=rng
        )
        pairing = sum(p * x for p, x in zip(probe, xs)) % oracle.m
        trace.attempts.append(RoundAttempt(j, xs, pairing))
        if pairing != 0:
            found.append(xs)
    trace.found = bool(found)
    return found, trace


def _reduced_round(oracle, probe, js, mode, rng, backend, stats, capture):
    """Same outcome distribution as the dense round, computed on the classes of
    the pairing value.  The amplification operator is a reflection about the
    prepared state, so the final amplitude on a label depends only on that
    label's pairing class and helper qubit; the class histogram is everything."""
    m, n = oracle.m, oracle.n
    elems = oracle.perp_elements()
    hn = len(elems)
    avals = [sum(p * y[i] for i, p in enumerate(probe)) % m for y in elems]
    na = [0] * m
    for a in avals:
        na[a] += 1
    iunit = backend.imag_unit()
    one = backend.one
    im1 = iunit - one if backend.is_exact else iunit - 1.0

    members: dict[int, list[int]] | None = None
    trace = RoundTrace(probe=tuple(probe))
    found = []
    for j in js:
        stats.j_probes += 1
        stats.f_calls += 2
        stats.f_inverse_calls += 1
        stats.qft_calls += 4 * n
        stats.qft_inverse_calls += 2 * n
        oracle.counter.forward += 2
        oracle.counter.inverse += 1

        flags = [(round_flag(m, j, a, 0), round_flag(m, j, a, 1)) for a in range(m)]
        phases = (one, iunit)
        zsum = None
        for a in range(m):
            if na[a] == 0:
                continue
            term = (phases[flags[a][0]] + phases[flags[a][1]]) * na[a]
            zsum = term if zsum is None else zsum + term
        amp = {}
        for a in range(m):
            if na[a] == 0:
                continue
            for b in (0, 1):
                amp[(a, b)] = phases[flags[a][b]] * (2 * hn) + im1 * zsum
        if backend.is_exact:
            total = 0
            for (a, b), v in amp.items():
                total += backend.abs2(v).rational_value() * na[a]
            if total != (2 * hn) ** 3:
                raise AssertionError("reduced-round normalization check failed")
        support_a = sorted(
            {
                a
                for (a, b), v in amp.items()
                if not backend.is_zero(v, (2 * hn) ** 3)
            }
        )
        if capture is not None:
            capture(
                "round_reduced",
                {
                    "probe": tuple(probe),
                    "j": j,
                    "na": list(na),
                    "amp": dict(amp),
                    "scale": (2 * hn) ** 3,
                    "support_a": list(support_a),
                },
            )
        asup = set(support_a)
        if mode == "deterministic":
            xs, pairing = next(
                (y, a) for y, a in zip(elems, avals) if a in asup
            )
        else:
            weights = [
                backend.mass([amp[(a, 0)], amp[(a, 1)]]) * na[a] for a in support_a
            ]
            if backend.is_exact:
                total = sum(weights)
                t = rng.randrange(total)
            else:
                total = float(sum(weights))
                t = rng.random() * total
            acc = 0
            a_pick = support_a[-1]
            for a, w in zip(support_a, weights):
                acc += w
                if t < acc:
                    a_pick = a
                    break
            if members is None:
                members = {}
                for i, a in enumerate(avals):
                    members.setdefault(a, []).append(i)
            xs = elems[members[a_pick][rng.randrange(na[a_pick])]]
            pairing = a_pick
        trace.attempts.append(RoundAttempt(j, xs, pairing))
        if pairing != 0:
            found.append(xs)
    trace.found = bool(found)
    return found, trace


def hsp_round(
    oracle: HidingOracle,
    probe,
    *,
    mode: str = "seeded",
    rng=None,
    backend=None,
    method: str = "auto",
    stats: QueryStats | None = None,
    capture=None,
    js=None,
):
    """Run all threshold indices for one probe vector.

    Returns (found_xs, trace): found_xs are the measured sampler outputs with
    nonzero pairing (each certainly lies in the complement of the hidden
    subgroup); an empty list certifies that the probe lies in the hidden
    subgroup.
    """
    if stats is None:
        stats = QueryStats()
    if backend is None:
        backend = make_backend("exact", _root_order(oracle.m))
    if js is None:
        js = probe_schedule(oracle.m)
    use_reduced = method == "reduced" or (
        method == "auto" and oracle.is_classical and oracle.m**oracle.n > DENSE_CUTOFF
    )
    if use_reduced and not oracle.is_classical:
        raise ValueError("reduced rounds need a classical label oracle")
    runner = _reduced_round if use_reduced else _dense_round
    return runner(oracle, probe, js, mode, rng, backend, stats, capture)


# ---------------------------------------------------------------------------
# Solvers


@dataclass
class HspResult:
    subgroup: SubgroupRep
    stats: QueryStats
    trace: list[RoundTrace]

    def __iter__(self):
        return iter((self.subgroup, self.stats))


def solve_hsp_zmn(
    oracle: HidingOracle,
    *,
    mode: str = "seeded",
    seed: int | None = None,
    rng=None,
    backend: str = "exact",
    method: str = "auto",
    capture=None,
    known_hidden: SubgroupRep | None = None,
    stats: QueryStats | None = None,
) -> HspResult:
    """Exact hidden-subgroup computation in Z_m^n (exponent 1)."""
    if oracle.k != 1:
        raise ValueError("use solve_hsp for exponent k > 1")
    m, n = oracle.m, oracle.n
    if rng is None and mode == "seeded":
        rng = random.Random(seed)
    amp_backend = (
        make_backend(backend, _root_order(m)) if isinstance(backend, str) else backend
    )
    if stats is None:
        stats = QueryStats()
    trace: list[RoundTrace] = []

    low = trivial_subgroup(m, 1, n)  # grows up to the hidden subgroup
    comp = trivial_subgroup(m, 1, n)  # grows inside the complement
    while True:
        target = perp_subgroup(comp)
        witness = equal_or_witness(low, target)
        if witness is None:
            break
        probe = tuple(w % m for w in witness)
        found, rtrace = hsp_round(
            oracle,
            probe,
            mode=mode,
            rng=rng,
            backend=amp_backend,
            method=method,
            stats=stats,
            capture=capture,
        )
        stats.rounds += 1
        trace.append(rtrace)
        if found:
            comp = join(comp, found)
        else:
            low = join(low, [probe])
        if known_hidden is not None:
            perp_known = perp_subgroup(known_hidden)
            pairings = {
                sum(p * v for p, v in zip(probe, y)) % m
                for y in enumerate_elements(perp_known)
            }
            nonzero = [p for p in pairings if p]
            rtrace.witness_divisor = min(nonzero) if nonzero else None
            for col in low.hnf.columns():
                if not _contains(known_hidden, col):
                    raise AssertionError("solver invariant broken: K escaped H")
            for col in comp.hnf.columns():
                if not _contains(perp_known, col):
                    raise AssertionError("solver invariant broken: L escaped the complement")
    return HspResult(low, stats, trace)


def _contains(rep: SubgroupRep, vec) -> bool:
    from .lattice import contains_element

    return contains_element(rep, vec)


def solve_hsp(
    oracle: HidingOracle,
    *,
    mode: str = "seeded",
    seed: int | None = None,
    backend: str = "exact",
    method: str = "auto",
    capture=None,
    stats: QueryStats | None = None,
) -> HspResult:
    """Exact hidden-subgroup computation in Z_{m^k}^n via divide-by-m rounds."""
    m, k, n = oracle.m, oracle.k, oracle.n
    if stats is None:
        stats = QueryStats()
    rng = random.Random(seed) if mode == "seeded" else None
    if k == 1:
        return solve_hsp_zmn(
            oracle,
            mode=mode,
            rng=rng,
            backend=backend,
            method=method,
            capture=capture,
            stats=stats,
        )
    trace: list[RoundTrace] = []
    current = trivial_subgroup(m, k, n)
    while True:
        lifted = lift_by_m(current)
        if lifted.hnf == current.hnf:
            break
        section = section_map(current, lifted)
        inner = oracle.composed_with(section)
        sub = solve_hsp_zmn(
            inner,
            mode=mode,
            rng=rng,
            backend=backend,
            method=method,
            capture=capture,
        )
        stats.merge(sub.stats)
        stats.reduction_solves += 1
        trace.extend(sub.trace)
        gens = [
            section(tuple(c % m for c in col)) for col in sub.subgroup.hnf.columns()
        ]
        grown = join(current, gens)
        if grown.hnf == current.hnf:
            break
        current = grown
        stats.reduction_rounds += 1
    return HspResult(current, stats, trace)
