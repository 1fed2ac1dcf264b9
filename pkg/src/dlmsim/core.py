"""Messages, learning-machine beamsplitters and the single-photon MZI event loop.

Beamsplitter model (a reconstruction; the rule is fixed here and documented in
the README):

* frequency registers ``x = (x0, x1)`` are exponential moving averages of
  which input port was hit: ``x_hit <- g*x_hit + (1 - g)``, ``x_other <- g*x_other``;
* phase registers ``Y = (Y0, Y1)`` hold ``(cos psi, sin psi)`` of the last
  message seen on each port;
* after updating, the machine forms ``a_k = sqrt(x_k) * exp(i psi_k)`` and
  applies the symmetric 50/50 unitary ``w0 = (a0 + i a1)/sqrt2``,
  ``w1 = (i a0 + a1)/sqrt2``;
* the message leaves on port 0 when a uniform draw falls below
  ``|w0|^2 / (|w0|^2 + |w1|^2)``, carrying the phase ``arg(w_out)``.

Only one message may be presented per tick; the output ports can never be
driven as inputs.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import InvalidParameter, SimultaneousInput

TWO_PI = 2.0 * math.pi
INV_SQRT2 = 1.0 / math.sqrt(2.0)
DEFAULT_GAMMA = 0.99


def reduce_phase(psi: float) -> float:
    """Reduce ``psi`` into ``[0, 2*pi)``."""
    r = psi % TWO_PI
    # tiny negative inputs round up to exactly 2*pi
    if r >= TWO_PI:
        return 0.0
    return r


class Tag(str, enum.Enum):
    DATA = "data"
    RESET = "reset"


class Detector(enum.IntEnum):
    D0 = 0
    D1 = 1


@dataclass(frozen=True)
class Message:
    """A single photon event."""

    phase: float
    tag: Tag = Tag.DATA
    port: int = 0

    def __post_init__(self) -> None:
        if self.port not in (0, 1):
            raise InvalidParameter(f"port must be 0 or 1, got {self.port!r}")
        if not math.isfinite(self.phase):
            raise InvalidParameter(f"phase must be finite, got {self.phase!r}")
        object.__setattr__(self, "phase", reduce_phase(float(self.phase)))
        object.__setattr__(self, "tag", Tag(self.tag))


@dataclass(frozen=True)
class DlmState:
    """Memory of one beamsplitter."""

    x: tuple[float, float]
    y: tuple[tuple[float, float], tuple[float, float]]
    gamma: float
    events_seen: int = 0


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not (0.0 <= gamma < 1.0):
        raise InvalidParameter(f"gamma must lie in [0, 1), got {gamma!r}")
    return gamma


def dlm_init(gamma: float = DEFAULT_GAMMA) -> DlmState:
    gamma = _check_gamma(gamma)
    return DlmState(x=(0.5, 0.5), y=((1.0, 0.0), (1.0, 0.0)), gamma=gamma, events_seen=0)


def dlm_reset_hard(state: DlmState) -> DlmState:
    """Swap in a brand-new machine with the same learning rate."""
    return dlm_init(state.gamma)


def dlm_update(state: DlmState, port: int, msg: Message) -> DlmState:
    if port != msg.port:
        raise InvalidParameter(f"message addressed to port {msg.port} offered on port {port}")
    g = state.gamma
    h = 1.0 - g
    unit = (math.cos(msg.phase), math.sin(msg.phase))
    x0, x1 = state.x
    y0, y1 = state.y
    if port == 0:
        x0 = g * x0 + h
        x1 = g * x1
        y0 = unit
    else:
        x1 = g * x1 + h
        x0 = g * x0
        y1 = unit
    return DlmState(x=(x0, x1), y=(y0, y1), gamma=g, events_seen=state.events_seen + 1)


def bs_transform(state: DlmState) -> tuple[complex, complex]:
    """Output amplitudes ``(w0, w1)`` for the current register contents."""
    x0, x1 = state.x
    (c0, s0), (c1, s1) = state.y
    r0 = math.sqrt(x0)
    r1 = math.sqrt(x1)
    a0r = r0 * c0
    a0i = r0 * s0
    a1r = r1 * c1
    a1i = r1 * s1
    w0 = complex((a0r - a1i) * INV_SQRT2, (a0i + a1r) * INV_SQRT2)
    w1 = complex((a1r - a0i) * INV_SQRT2, (a0r + a1i) * INV_SQRT2)
    return w0, w1


def _single(msgs: Message | Sequence[Message]) -> Message:
    if isinstance(msgs, Message):
        return msgs
    msgs = list(msgs)
    if len(msgs) != 1:
        raise SimultaneousInput(
            f"a beamsplitter accepts exactly one message per tick, got {len(msgs)}"
        )
    return msgs[0]


def bs_process(
    state: DlmState, msg: Message | Sequence[Message], rand_draw: float
) -> tuple[DlmState, int, Message]:
    """Feed one message through a beamsplitter.

    ``rand_draw`` is the only source of randomness; a deterministic selector
    can be substituted simply by supplying the draws.
    """
    msg = _single(msg)
    if not (0.0 <= rand_draw < 1.0):
        raise InvalidParameter(f"rand_draw must lie in [0, 1), got {rand_draw!r}")
    state = dlm_update(state, msg.port, msg)
    w0, w1 = bs_transform(state)
    p0 = w0.real * w0.real + w0.imag * w0.imag
    p1 = w1.real * w1.real + w1.imag * w1.imag
    out = 0 if rand_draw < p0 / (p0 + p1) else 1
    w = w0 if out == 0 else w1
    out_msg = Message(phase=math.atan2(w.imag, w.real), tag=msg.tag, port=out)
    return state, out, out_msg


def phase_shift(msg: Message, phi: float) -> Message:
    return replace(msg, phase=msg.phase + phi)


@dataclass(frozen=True)
class DetectorClick:
    detector: Detector
    event_index: int
    registered: bool = True


@dataclass
class MziState:
    """Two beamsplitters, two arms and the run's random generator.

    The generator is owned by this instance and advances in place; every
    other field is replaced on each step.
    """

    bs1: DlmState
    bs2: DlmState
    phase0: float
    phase1: float
    seed: int
    rng: np.random.Generator = field(repr=False)
    events: int = 0


def make_rng(seed: int) -> np.random.Generator:
    if not (0 <= seed < 2**64):
        raise InvalidParameter(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return np.random.Generator(np.random.PCG64(seed))


def mzi_init(
    gamma: float = DEFAULT_GAMMA, phase0: float = 0.0, phase1: float = 0.0, seed: int = 0
) -> MziState:
    return MziState(
        bs1=dlm_init(gamma),
        bs2=dlm_init(gamma),
        phase0=float(phase0),
        phase1=float(phase1),
        seed=int(seed),
        rng=make_rng(int(seed)),
    )


def mzi_step(
    mzi: MziState, inputs: Message | Sequence[Message], registered: bool = True
) -> tuple[MziState, DetectorClick]:
    """Push one message through bs1, the arm phase shifter and bs2."""
    msg = _single(inputs)
    d1, d2 = mzi.rng.random(2)
    bs1, out1, m1 = bs_process(mzi.bs1, msg, float(d1))
    arm = mzi.phase0 if out1 == 0 else mzi.phase1
    m1 = phase_shift(m1, arm)
    bs2, out2, _ = bs_process(mzi.bs2, m1, float(d2))
    click = DetectorClick(Detector(out2), mzi.events, registered)
    new = replace(mzi, bs1=bs1, bs2=bs2, events=mzi.events + 1)
    return new, click


def propagate(
    bs1: DlmState,
    bs2: DlmState,
    phase0: float,
    phase1: float,
    port: int,
    psi: float | Sequence[float],
    draws: Sequence[float],
) -> tuple[DlmState, DlmState, bytearray]:
    """Run a block of same-port messages through the MZI.

    Inlined equivalent of repeated :func:`mzi_step` calls, bit for bit.
    ``psi`` is one input phase for every message or one phase per message;
    ``draws`` holds two uniforms per message, bs1 first.
    Returns the updated machines and one detector index per message.
    """
    n = len(draws) // 2
    fixed = isinstance(psi, (int, float))
    if fixed:
        psi_f = reduce_phase(float(psi))
        cin, sin_ = math.cos(psi_f), math.sin(psi_f)
    g = bs1.gamma
    h = 1.0 - g
    g2 = bs2.gamma
    h2 = 1.0 - g2
    ax0, ax1 = bs1.x
    (ac0, as0), (ac1, as1) = bs1.y
    bx0, bx1 = bs2.x
    (bc0, bs0), (bc1, bs1_) = bs2.y
    cos, sin, sqrt, atan2 = math.cos, math.sin, math.sqrt, math.atan2
    two_pi = TWO_PI
    k2 = INV_SQRT2
    out = bytearray(n)
    for k in range(n):
        if not fixed:
            p = reduce_phase(float(psi[k]))
            cin, sin_ = cos(p), sin(p)
        # first beamsplitter
        if port == 0:
            ax0 = g * ax0 + h
            ax1 = g * ax1
            ac0, as0 = cin, sin_
        else:
            ax1 = g * ax1 + h
            ax0 = g * ax0
            ac1, as1 = cin, sin_
        r0 = sqrt(ax0)
        r1 = sqrt(ax1)
        a0r = r0 * ac0
        a0i = r0 * as0
        a1r = r1 * ac1
        a1i = r1 * as1
        w0r = (a0r - a1i) * k2
        w0i = (a0i + a1r) * k2
        w1r = (a1r - a0i) * k2
        w1i = (a0r + a1i) * k2
        p0 = w0r * w0r + w0i * w0i
        p1 = w1r * w1r + w1i * w1i
        if draws[2 * k] < p0 / (p0 + p1):
            ph = atan2(w0i, w0r) % two_pi
            if ph >= two_pi:
                ph = 0.0
            ph = (ph + phase0) % two_pi
            mid = 0
        else:
            ph = atan2(w1i, w1r) % two_pi
            if ph >= two_pi:
                ph = 0.0
            ph = (ph + phase1) % two_pi
            mid = 1
        if ph >= two_pi:
            ph = 0.0
        c, s = cos(ph), sin(ph)
        # second beamsplitter
        if mid == 0:
            bx0 = g2 * bx0 + h2
            bx1 = g2 * bx1
            bc0, bs0 = c, s
        else:
            bx1 = g2 * bx1 + h2
            bx0 = g2 * bx0
            bc1, bs1_ = c, s
        r0 = sqrt(bx0)
        r1 = sqrt(bx1)
        a0r = r0 * bc0
        a0i = r0 * bs0
        a1r = r1 * bc1
        a1i = r1 * bs1_
        w0r = (a0r - a1i) * k2
        w0i = (a0i + a1r) * k2
        w1r = (a1r - a0i) * k2
        w1i = (a0r + a1i) * k2
        p0 = w0r * w0r + w0i * w0i
        p1 = w1r * w1r + w1i * w1i
        out[k] = 0 if draws[2 * k + 1] < p0 / (p0 + p1) else 1
    new1 = DlmState((ax0, ax1), ((ac0, as0), (ac1, as1)), g, bs1.events_seen + n)
    new2 = DlmState((bx0, bx1), ((bc0, bs0), (bc1, bs1_)), g2, bs2.events_seen + n)
    return new1, new2, out


class Component(str, enum.Enum):
    WAVE_BS = "WaveBS"
    DLM_BS = "DlmBS"


@dataclass(frozen=True)
class SymmetryReport:
    component: Component
    symmetric: bool
    reason: str

    def to_dict(self) -> dict:
        d = asdict(self)
        d["component"] = self.component.value
        return d


WAVE_BS_UNITARY = np.array([[1.0, 1.0j], [1.0j, 1.0]]) * INV_SQRT2


def _equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-12) -> bool:
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) < tol:
        return bool(np.allclose(a, b, atol=tol))
    ratio = a[idx] / b[idx]
    if abs(abs(ratio) - 1.0) > tol:
        return False
    return bool(np.allclose(a, ratio * b, atol=tol, rtol=0.0))


def port_symmetry_check(component: Component | str) -> SymmetryReport:
    """Can the device be turned around, outputs used as inputs?

    A lossless wave beamsplitter is described by a unitary equal to its own
    transpose, so reversing it changes nothing. The learning machine only
    defines a forward map from input messages to output messages.
    """
    component = Component(component)
    if component is Component.WAVE_BS:
        u = WAVE_BS_UNITARY
        unitary = np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)
        sym = unitary and _equal_up_to_global_phase(u.T, u)
        return SymmetryReport(component, bool(sym), "TransposeSymmetric" if sym else "NotSymmetric")
    return SymmetryReport(component, False, "DirectedPorts")
