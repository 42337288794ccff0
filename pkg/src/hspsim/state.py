"""Sparse exact quantum-state simulation over mixed-radix registers.

A state is a dictionary from basis labels (tuples, one slot per register) to
amplitudes, together with a global integer scale N: the physical state is
(1/sqrt(N)) * sum amp(label) |label>.  With the exact backend, amplitudes are
cyclotomic integers, every square root generated by the transforms is absorbed
into N, and normalization sum a*conj(a) = N is an exact identity maintained by
every primitive.  A float backend with complex-double amplitudes mirrors the
same interface for cross-checking.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import prod, sqrt

from .cyclotomic import CycloField, Cyclotomic

SUPPORT_LIMIT = 1 << 20


class SimulationError(Exception):
    pass


class NonBijectionError(SimulationError):
    """A supplied classical map collided on the support."""


class NotProductError(SimulationError):
    """The requested register split is entangled."""


class MeasurementNotDetermined(SimulationError):
    """Deterministic measurement found support straddling the announced partition."""


def _check_support(count: int) -> None:
    if count > SUPPORT_LIMIT:
        raise SimulationError(f"support {count} exceeds the hard limit {SUPPORT_LIMIT}")


# ---------------------------------------------------------------------------
# Amplitude backends


class ExactBackend:
    """Cyclotomic-integer amplitudes in Q(w), w of order M."""

    name = "exact"
    is_exact = True

    def __init__(self, root_order: int):
        if root_order % 4:
            raise ValueError("root order must be divisible by 4 (the imaginary unit must exist)")
        self.root_order = root_order
        self.field = CycloField(root_order)
        self.one = self.field.one
        self.zero = self.field.zero

    def root(self, exponent: int) -> Cyclotomic:
        return self.field.root(exponent)

    def imag_unit(self) -> Cyclotomic:
        return self.field.root(self.root_order // 4)

    def is_zero(self, amp, scale) -> bool:
        return amp.is_zero()

    def conj(self, amp):
        return amp.conjugate()

    def abs2(self, amp):
        """amp * conj(amp) as an exact field element (real, not always rational)."""
        return amp.norm2()

    def mass(self, amps):
        """Total squared magnitude of an amplitude family, as an exact rational.

        Individual squared magnitudes can be irrational; the closed families
        produced by the transforms here always sum to a rational, and a
        violation means the caller is measuring something the exact sampler
        cannot represent."""
        total = self.zero
        for a in amps:
            total = total + a.norm2()
        if not total.is_rational():
            raise SimulationError(
                "total squared amplitude is irrational; cannot sample exactly"
            )
        return total.rational_value()

    def to_complex(self, amp) -> complex:
        return amp.to_complex()


class FloatBackend:
    """Complex-double mirror of the exact backend (comparison runs only)."""

    name = "float"
    is_exact = False
    tol = 1e-10

    def __init__(self, root_order: int):
        if root_order % 4:
            raise ValueError("root order must be divisible by 4")
        self.root_order = root_order
        self.one = 1.0 + 0.0j
        self.zero = 0.0j

    def root(self, exponent: int) -> complex:
        return cmath.exp(2j * cmath.pi * exponent / self.root_order)

    def imag_unit(self) -> complex:
        return 1j

    def is_zero(self, amp, scale) -> bool:
        return abs(amp) <= self.tol * sqrt(float(scale))

    def conj(self, amp):
        return amp.conjugate()

    def abs2(self, amp):
        return amp.real * amp.real + amp.imag * amp.imag

    def mass(self, amps):
        return sum(self.abs2(a) for a in amps)

    def to_complex(self, amp) -> complex:
        return amp


def make_backend(kind: str, root_order: int):
    if kind == "exact":
        return ExactBackend(root_order)
    if kind == "float":
        return FloatBackend(root_order)
    raise ValueError(f"unknown backend {kind!r}")


# ---------------------------------------------------------------------------
# Registers


@dataclass(frozen=True)
class Register:
    """One addressable slot of the label tuple."""

    name: str
    kind: str  # "digit" (mod-d value), "qubit", or "group" (packed element code)
    dim: int

    def __post_init__(self):
        if self.kind not in ("digit", "qubit", "group"):
            raise ValueError(f"unknown register kind {self.kind!r}")
        if self.kind == "qubit" and self.dim != 2:
            raise ValueError("qubit registers have dimension 2")
        if self.dim < 1:
            raise ValueError("register dimension must be positive")


class RegisterLayout:
    """Ordered register list with name lookup."""

    def __init__(self, registers):
        regs = tuple(registers)
        names = [r.name for r in regs]
        if len(set(names)) != len(names):
            raise ValueError("register names must be unique")
        self.registers = regs
        self.index = {r.name: i for i, r in enumerate(regs)}

    def dim(self, name: str) -> int:
        return self.registers[self.index[name]].dim

    def names(self) -> list[str]:
        return [r.name for r in self.registers]

    def label_space(self) -> int:
        return prod(r.dim for r in self.registers)

    def zero_label(self) -> tuple[int, ...]:
        return (0,) * len(self.registers)

    def __len__(self):
        return len(self.registers)

    def __eq__(self, other):
        return isinstance(other, RegisterLayout) and self.registers == other.registers

    def __repr__(self):
        inner = ", ".join(f"{r.name}:{r.kind}({r.dim})" for r in self.registers)
        return f"RegisterLayout({inner})"


# ---------------------------------------------------------------------------
# States


class SparseState:
    """Sparse state with a global 1/sqrt(scale) factor."""

    __slots__ = ("layout", "backend", "scale", "amps")

    def __init__(self, layout: RegisterLayout, backend, scale, amps: dict):
        self.layout = layout
        self.backend = backend
        self.scale = scale
        self.amps = amps
        if not amps:
            raise SimulationError("state support must be nonempty")

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.amps)

    def amplitude(self, label) -> object:
        return self.amps.get(tuple(label), self.backend.zero)

    def mass(self):
        """sum a * conj(a) over the support (equals scale when normalized)."""
        return self.backend.mass(self.amps.values())

    def check_normalization(self) -> None:
        if self.backend.is_exact:
            if self.mass() != self.scale:
                raise SimulationError("normalization invariant violated")
        else:
            if abs(self.mass() - float(self.scale)) > 1e-6 * float(self.scale):
                raise SimulationError("normalization drifted beyond float tolerance")

    def complex_amplitude(self, label) -> complex:
        return self.backend.to_complex(self.amplitude(label)) / sqrt(float(self.scale))

    def dump(self) -> str:
        lines = [f"N={self.scale}"]
        for label in self.support():
            a = self.amps[label]
            if self.backend.is_exact:
                lines.append(f"{label} {list(a.coeffs)}")
            else:
                lines.append(f"{label} {a!r}")
        return "\n".join(lines)

    def copy_with(self, amps=None, scale=None) -> "SparseState":
        return SparseState(
            self.layout,
            self.backend,
            self.scale if scale is None else scale,
            dict(self.amps) if amps is None else amps,
        )


def prepare_zero(layout: RegisterLayout, backend) -> SparseState:
    return SparseState(layout, backend, 1, {layout.zero_label(): backend.one})


def prepare_basis(layout: RegisterLayout, backend, label) -> SparseState:
    label = tuple(label)
    for v, r in zip(label, layout.registers):
        if not 0 <= v < r.dim:
            raise ValueError("label out of range")
    return SparseState(layout, backend, 1, {label: backend.one})


def _pruned(backend, amps: dict, scale) -> dict:
    out = {lbl: a for lbl, a in amps.items() if not backend.is_zero(a, scale)}
    if not out:
        raise SimulationError("all amplitudes vanished (not a unitary step?)")
    return out


def apply_qft(state: SparseState, register: str, inverse: bool = False) -> SparseState:
    """Fourier transform of one digit register: |x> -> sum_y w^{xy} |y> / sqrt(d)."""
    idx = state.layout.index[register]
    reg = state.layout.registers[idx]
    if reg.kind != "digit":
        raise ValueError("Fourier transform applies to digit registers")
    d = reg.dim
    M = state.backend.root_order
    if M % d:
        raise ValueError(f"register dimension {d} does not divide the root order {M}")
    step = M // d
    roots = [state.backend.root((-step * t) if inverse else (step * t)) for t in range(d)]
    new: dict = {}
    zero = state.backend.zero
    for label, amp in state.amps.items():
        x = label[idx]
        pre = label[:idx]
        post = label[idx + 1 :]
        for y in range(d):
            ph = roots[(x * y) % d]
            nl = pre + (y,) + post
            cur = new.get(nl)
            new[nl] = amp * ph if cur is None else cur + amp * ph
    _check_support(len(new))
    scale = state.scale * d
    return SparseState(state.layout, state.backend, scale, _pruned(state.backend, new, scale))


def apply_hadamard(state: SparseState, register: str) -> SparseState:
    idx = state.layout.index[register]
    if state.layout.registers[idx].kind != "qubit":
        raise ValueError("Hadamard applies to qubit registers")
    minus_one = state.backend.root(state.backend.root_order // 2)
    new: dict = {}
    for label, amp in state.amps.items():
        x = label[idx]
        pre = label[:idx]
        post = label[idx + 1 :]
        for y in (0, 1):
            a = amp * minus_one if (x & y) else amp
            nl = pre + (y,) + post
            cur = new.get(nl)
            new[nl] = a if cur is None else cur + a
    scale = state.scale * 2
    return SparseState(state.layout, state.backend, scale, _pruned(state.backend, new, scale))


def apply_classical_map(state: SparseState, mapping) -> SparseState:
    """Permute basis labels by a bijection; collisions on the support fault."""
    new: dict = {}
    for label, amp in state.amps.items():
        nl = tuple(mapping(label))
        if nl in new:
            raise NonBijectionError(f"labels collide at {nl}")
        new[nl] = amp
    return SparseState(state.layout, state.backend, state.scale, new)


def conditional_phase_i(state: SparseState, predicate, turns: int = 1) -> SparseState:
    """Multiply amplitudes on labels satisfying the predicate by i^turns."""
    ph = state.backend.root((state.backend.root_order // 4) * (turns % 4))
    if turns % 4 == 0:
        return state.copy_with()
    new = {
        lbl: (amp * ph if predicate(lbl) else amp) for lbl, amp in state.amps.items()
    }
    return SparseState(state.layout, state.backend, state.scale, new)


def tensor(a: SparseState, b: SparseState) -> SparseState:
    if a.backend is not b.backend and a.backend.name != b.backend.name:
        raise ValueError("mixed backends")
    layout = RegisterLayout(a.layout.registers + b.layout.registers)
    _check_support(len(a.amps) * len(b.amps))
    amps = {}
    for la, va in a.amps.items():
        for lb, vb in b.amps.items():
            amps[la + lb] = va * vb
    return SparseState(layout, a.backend, a.scale * b.scale, amps)


def drop_register(state: SparseState, register: str) -> SparseState:
    """Remove a register whose value is constant across the support."""
    idx = state.layout.index[register]
    values = {lbl[idx] for lbl in state.amps}
    if len(values) != 1:
        raise SimulationError("register is not constant; cannot drop")
    layout = RegisterLayout(
        state.layout.registers[:idx] + state.layout.registers[idx + 1 :]
    )
    amps = {lbl[:idx] + lbl[idx + 1 :]: a for lbl, a in state.amps.items()}
    return SparseState(layout, state.backend, state.scale, amps)


def rename_register(state: SparseState, old: str, new: str) -> SparseState:
    regs = [
        Register(new, r.kind, r.dim) if r.name == old else r
        for r in state.layout.registers
    ]
    return SparseState(RegisterLayout(regs), state.backend, state.scale, dict(state.amps))


# ---------------------------------------------------------------------------
# Measurement


def _exact_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def measure_register(
    state: SparseState,
    register: str,
    mode: str = "seeded",
    rng=None,
    expect_partition=None,
):
    """Measure one register. Returns (outcome, collapsed state).

    seeded mode samples the exact marginal distribution (exact integer/rational
    sampling on the exact backend).  deterministic mode returns the smallest
    register value present in the support; when expect_partition is supplied,
    the support must not straddle the partition predicate, otherwise the
    measurement faults.
    """
    idx = state.layout.index[register]
    groups: dict[int, list] = {}
    for lbl, amp in state.amps.items():
        groups.setdefault(lbl[idx], []).append(amp)
    masses = {v: state.backend.mass(amps) for v, amps in groups.items()}

    if mode == "deterministic":
        if expect_partition is not None:
            classes = {bool(expect_partition(v)) for v in masses}
            if len(classes) > 1:
                raise MeasurementNotDetermined(
                    f"support of {register} straddles the announced partition"
                )
        outcome = min(masses)
    elif mode == "seeded":
        if rng is None:
            raise ValueError("seeded measurement needs an rng")
        values = sorted(masses)
        if state.backend.is_exact:
            fracs = [_exact_fraction(masses[v]) for v in values]
            den = 1
            for f in fracs:
                den = den * f.denominator // _gcd_int(den, f.denominator)
            weights = [int(f * den) for f in fracs]
            total = sum(weights)
            t = rng.randrange(total)
            acc = 0
            outcome = values[-1]
            for v, w in zip(values, weights):
                acc += w
                if t < acc:
                    outcome = v
                    break
        else:
            total = float(sum(masses[v] for v in values))
            t = rng.random() * total
            acc = 0.0
            outcome = values[-1]
            for v in values:
                acc += masses[v]
                if t < acc:
                    outcome = v
                    break
    else:
        raise ValueError(f"unknown measurement mode {mode!r}")

    kept = {lbl: a for lbl, a in state.amps.items() if lbl[idx] == outcome}
    new_scale = state.backend.mass(kept.values())
    if state.backend.is_exact and isinstance(new_scale, Fraction):
        # clear the rational scale back to an integer by rescaling amplitudes
        den = new_scale.denominator
        kept = {lbl: a * den for lbl, a in kept.items()}
        new_scale = int(new_scale * den * den)
    return outcome, SparseState(state.layout, state.backend, new_scale, kept)


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def measure_registers(state, registers, mode="seeded", rng=None):
    outcomes = []
    for reg in registers:
        out, state = measure_register(state, reg, mode=mode, rng=rng)
        outcomes.append(out)
    return tuple(outcomes), state


# ---------------------------------------------------------------------------
# Product structure


def factor_split(state: SparseState, registers) -> tuple[SparseState, SparseState]:
    """Split into (state on the named registers, state on the rest).

    Succeeds only when the amplitudes factor exactly across the partition;
    raises NotProductError otherwise.  Both factors come back normalized.
    """
    names = list(registers)
    idxs = [state.layout.index[r] for r in names]
    if not idxs or len(idxs) == len(state.layout.registers):
        raise ValueError("split must be a proper nonempty register subset")
    rest_idxs = [i for i in range(len(state.layout.registers)) if i not in idxs]

    def part(lbl, ids):
        return tuple(lbl[i] for i in ids)

    grouped: dict[tuple, dict] = {}
    for lbl, amp in state.amps.items():
        grouped.setdefault(part(lbl, idxs), {})[part(lbl, rest_idxs)] = amp

    r_keys = sorted(grouped)
    c_keys = sorted(grouped[r_keys[0]])
    c_set = set(c_keys)
    for r in r_keys:
        if set(grouped[r]) != c_set:
            raise NotProductError("support is not a rectangle")
    r0, c0 = r_keys[0], c_keys[0]
    a00 = grouped[r0][c0]
    # cross-ratio identity a(r,c) * a(r0,c0) == a(r,c0) * a(r0,c), checked exactly
    for r in r_keys:
        arc0 = grouped[r][c0]
        for c in c_keys:
            lhs = grouped[r][c] * a00
            rhs = arc0 * grouped[r0][c]
            if state.backend.is_exact:
                if not (lhs - rhs).is_zero():
                    raise NotProductError("amplitudes do not factor")
            else:
                if abs(lhs - rhs) > 1e-9 * float(state.scale):
                    raise NotProductError("amplitudes do not factor")

    left_layout = RegisterLayout([state.layout.registers[i] for i in idxs])
    right_layout = RegisterLayout([state.layout.registers[i] for i in rest_idxs])
    left_amps = {r: grouped[r][c0] for r in r_keys}
    right_amps = {c: grouped[r0][c] for c in c_keys}
    left_scale = state.backend.mass(left_amps.values())
    right_scale = state.backend.mass(right_amps.values())
    left = SparseState(left_layout, state.backend, left_scale, left_amps)
    right = SparseState(right_layout, state.backend, right_scale, right_amps)
    return left, right


def inner_product_unscaled(a: SparseState, b: SparseState):
    """sum conj(a_amp) * b_amp over the common support (scales not divided out)."""
    out = None
    for lbl, bv in b.amps.items():
        av = a.amps.get(lbl)
        if av is None:
            continue
        term = a.backend.conj(av) * bv
        out = term if out is None else out + term
    if out is None:
        out = a.backend.zero
    return out


def states_equal(a: SparseState, b: SparseState, up_to_phase: bool = False) -> bool:
    """Exact state equality (as normalized vectors); optionally up to a global phase."""
    if a.layout.names() != b.layout.names():
        return False
    z = inner_product_unscaled(a, b)
    if a.backend.is_exact:
        overlap2 = a.backend.abs2(z)
        if overlap2 != a.scale * b.scale:
            return False
        if up_to_phase:
            return True
        # phase-free equality additionally needs <a|b> real and positive;
        # z is then exactly +-sqrt(scale_a * scale_b), so a float evaluation
        # determines the sign safely
        zc = a.backend.conj(z)
        if not (z - zc).is_zero():
            return False
        return z.to_complex().real > 0
    overlap = abs(a.backend.to_complex(z)) / sqrt(float(a.scale) * float(b.scale))
    if abs(overlap - 1.0) > 1e-9:
        return False
    if up_to_phase:
        return True
    zc = a.backend.to_complex(z)
    return abs(zc.imag) < 1e-9 and zc.real > 0


def states_close(a: SparseState, b: SparseState, tol: float = 1e-9) -> bool:
    """Per-amplitude comparison after converting both sides to complex doubles."""
    labels = set(a.amps) | set(b.amps)
    return all(
        abs(a.complex_amplitude(lbl) - b.complex_amplitude(lbl)) <= tol for lbl in labels
    )


# ---------------------------------------------------------------------------
# Circuits


class Step:
    def apply(self, state: SparseState, stats=None) -> SparseState:
        raise NotImplementedError

    def inverted(self) -> "Step":
        raise NotImplementedError


@dataclass(frozen=True)
class QftStep(Step):
    register: str
    inverse: bool = False

    def apply(self, state, stats=None):
        if stats is not None:
            if self.inverse:
                stats.qft_inverse_calls += 1
            else:
                stats.qft_calls += 1
        return apply_qft(state, self.register, inverse=self.inverse)

    def inverted(self):
        return QftStep(self.register, not self.inverse)


@dataclass(frozen=True)
class HadamardStep(Step):
    register: str

    def apply(self, state, stats=None):
        return apply_hadamard(state, self.register)

    def inverted(self):
        return self


@dataclass(frozen=True)
class PhaseStep(Step):
    """Phase i^turns on labels satisfying the predicate."""

    predicate: object
    turns: int = 1
    tag: str = ""

    def apply(self, state, stats=None):
        return conditional_phase_i(state, self.predicate, turns=self.turns)

    def inverted(self):
        return PhaseStep(self.predicate, (-self.turns) % 4, self.tag)


@dataclass(frozen=True)
class ClassicalStep(Step):
    forward: object
    backward: object
    tag: str = ""

    def apply(self, state, stats=None):
        return apply_classical_map(state, self.forward)

    def inverted(self):
        return ClassicalStep(self.backward, self.forward, self.tag)


@dataclass(frozen=True)
class PrepStep(Step):
    """Inject a known state on a block of (all-zero) registers; the inverse
    factors the block back out and returns it to zero, which is exactly the
    behaviour of the preparing unitary's inverse on states where the block is
    unentangled and equal to the prepared state (the only situations in which
    this simulator applies it)."""

    prep: "StatePrep"
    inverse: bool = False

    def apply(self, state, stats=None):
        regs = list(self.prep.registers)
        idxs = [state.layout.index[r] for r in regs]
        psi = self.prep.state
        if not self.inverse:
            for lbl in state.amps:
                if any(lbl[i] != 0 for i in idxs):
                    raise SimulationError("prep target registers must be zero")
            _check_support(len(state.amps) * len(psi.amps))
            new = {}
            for lbl, amp in state.amps.items():
                base = list(lbl)
                for plbl, pamp in psi.amps.items():
                    for i, v in zip(idxs, plbl):
                        base[i] = v
                    new[tuple(base)] = amp * pamp
            return SparseState(
                state.layout, state.backend, state.scale * psi.scale, new
            )
        # inverse: the block must hold exactly the prepared state as a tensor
        # factor; rebuild the rest with the block reset to zero.
        block, rest = factor_split(state, regs)
        # the block must match psi up to nothing at all: reject even a phase
        # mismatch unless it is a pure global phase, which we transfer to rest
        if not states_equal(block, _as_layout(psi, block.layout), up_to_phase=True):
            raise SimulationError("inverse prep applied to a different block state")
        ref = min(psi.amps)
        pref = psi.amps[ref]
        new = {}
        for lbl, amp in state.amps.items():
            if tuple(lbl[i] for i in idxs) != ref:
                continue
            base = list(lbl)
            for i in idxs:
                base[i] = 0
            new[tuple(base)] = amp * state.backend.conj(pref)
        new_scale = state.backend.mass(new.values())
        return SparseState(state.layout, state.backend, new_scale, new)

    def inverted(self):
        return PrepStep(self.prep, not self.inverse)


def _as_layout(state: SparseState, layout: RegisterLayout) -> SparseState:
    if len(layout) != len(state.layout):
        raise ValueError("layout width mismatch")
    return SparseState(layout, state.backend, state.scale, dict(state.amps))


class ReflectStep(Step):
    """The operator prep . S0(i^turns) . prep^{-1} = I + (i^turns - 1)|Psi><Psi|
    with Psi = prep|0>: a phase reflection about the prepared state.

    Packaging the three factors into one step keeps the circuit applicable even
    when prep contains a state-injection step (whose inverse only acts on
    states where the injected block factors out, which mid-reflection states
    do not); the operator identity makes the result equal to the literal
    three-step composition on every input.
    """

    def __init__(self, prep: "Circuit", turns: int = 1):
        self.prep = prep
        self.turns = turns % 4
        self._psi_cache: dict = {}

    def _psi(self, layout: RegisterLayout, backend) -> SparseState:
        key = (tuple(layout.names()), backend.name)
        psi = self._psi_cache.get(key)
        if psi is None:
            psi = self.prep.run(prepare_zero(layout, backend))
            self._psi_cache[key] = psi
        return psi

    def _count_queries(self, stats) -> None:
        # one inverse and one forward pass of prep per application
        for s in self.prep.steps:
            if isinstance(s, QftStep):
                stats.qft_calls += 1
                stats.qft_inverse_calls += 1
            counter = getattr(getattr(s, "oracle", None), "counter", None)
            if counter is not None:
                counter.forward += 1
                counter.inverse += 1
                stats.f_calls += 1
                stats.f_inverse_calls += 1

    def apply(self, state: SparseState, stats=None) -> SparseState:
        if stats is not None:
            self._count_queries(stats)
        psi = self._psi(state.layout, state.backend)
        if self.turns == 0:
            return state
        backend = state.backend
        z = inner_product_unscaled(psi, state)
        phase = backend.root((backend.root_order // 4) * self.turns)
        if backend.is_exact:
            coef = (phase - backend.one) * z
        else:
            coef = (phase - 1.0) * z
        npsi = psi.scale
        new = {}
        for lbl, amp in state.amps.items():
            new[lbl] = amp * npsi
        for lbl, p in psi.amps.items():
            add = coef * p
            cur = new.get(lbl)
            new[lbl] = add if cur is None else cur + add
        scale = state.scale * npsi * npsi
        return SparseState(state.layout, backend, scale, _pruned(backend, new, scale))

    def inverted(self) -> "ReflectStep":
        return ReflectStep(self.prep, (-self.turns) % 4)


@dataclass(frozen=True)
class Circuit:
    """An invertible sequence of primitive steps."""

    steps: tuple[Step, ...]

    @classmethod
    def of(cls, *steps) -> "Circuit":
        flat = []
        for s in steps:
            if isinstance(s, Circuit):
                flat.extend(s.steps)
            else:
                flat.append(s)
        return cls(tuple(flat))

    def inverse(self) -> "Circuit":
        return Circuit(tuple(s.inverted() for s in reversed(self.steps)))

    def run(self, state: SparseState, stats=None) -> SparseState:
        for s in self.steps:
            state = s.apply(state, stats)
        return state


@dataclass
class StatePrep:
    """A preparation procedure identified with the state it produces from zeros
    on a named register block."""

    registers: tuple[str, ...]
    state: SparseState
    tag: str = ""

    def as_circuit(self) -> Circuit:
        return Circuit.of(PrepStep(self))


def amplitude_amplify(prep: Circuit, good, literal: bool = False) -> Circuit:
    """One exact amplification pass: prep, phase i on good labels, inverse prep,
    phase i on the all-zero label, prep again.

    When the good squared amplitude of prep|0> is exactly one half, the result
    has exactly zero mass outside the good labels; when it is zero, it stays
    zero.  The trailing three factors are applied as a single reflection about
    prep|0> (the identical operator); literal=True materializes them step by
    step instead, which works only when every step of prep is individually
    invertible on arbitrary states.
    """

    def all_zero(label):
        return not any(label)

    if literal:
        return Circuit.of(
            prep,
            PhaseStep(good, 1, "good"),
            prep.inverse(),
            PhaseStep(all_zero, 1, "zero"),
            prep,
        )
    return Circuit.of(prep, PhaseStep(good, 1, "good"), ReflectStep(prep, 1))
