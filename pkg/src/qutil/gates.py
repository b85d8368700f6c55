"""Gate kinds, unitary matrices, inverses and basis translation templates.

Qubit ordering is little-endian throughout the package: for an instruction
with operands ``(a, b)`` the local basis index is ``bit(a) + 2 * bit(b)``.
Controlled gates use operand 0 as the control and operand 1 as the target.

Angle conventions follow the common SDK definitions:

* ``Rx/Ry/Rz(t) = exp(-i t/2 P)``
* ``P(l) = diag(1, e^{il})``
* ``R(t, f) = exp(-i t/2 (cos f X + sin f Y))``
* ``U(t, f, l) = [[cos t/2, -e^{il} sin t/2], [e^{if} sin t/2, e^{i(f+l)} cos t/2]]``
* ``CU(t, f, l, g)`` is controlled ``e^{ig} U(t, f, l)``
* ``Rxx/Ryy/Rzz(t) = exp(-i t/2 PP)``, ``Rzx(t) = exp(-i t/2 Z_0 X_1)``
* ``RxxPlusYy(t, b) = Rz_0(-b) exp(-i t/4 (XX + YY)) Rz_0(b)``
* ``RxxMinusYy(t, b) = Rz_1(-b) exp(-i t/4 (XX - YY)) Rz_1(b)``
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ParameterArityError, UnsupportedGateError, UnsupportedTranslationError

PI = math.pi


@dataclass(frozen=True)
class GateKind:
    name: str
    arity: int
    param_count: int


_ONE = [
    ("H", 0), ("I", 0), ("P", 1), ("R", 2), ("Rx", 1), ("Ry", 1), ("Rz", 1),
    ("S", 0), ("Sdg", 0), ("SX", 0), ("SXdg", 0), ("T", 0), ("Tdg", 0),
    ("U", 3), ("X", 0), ("Y", 0), ("Z", 0),
]
_TWO = [
    ("CH", 0), ("CP", 1), ("CRx", 1), ("CRy", 1), ("CRz", 1), ("CS", 0),
    ("CSdg", 0), ("CSX", 0), ("CU", 4), ("CX", 0), ("CY", 0), ("CZ", 0),
    ("DCX", 0), ("ECR", 0), ("Rxx", 1), ("RxxMinusYy", 2), ("RxxPlusYy", 2),
    ("Ryy", 1), ("Rzx", 1), ("Rzz", 1), ("SWAP", 0), ("iSWAP", 0),
]

KINDS: dict[str, GateKind] = {}
for _name, _np in _ONE:
    KINDS[_name] = GateKind(_name, 1, _np)
for _name, _np in _TWO:
    KINDS[_name] = GateKind(_name, 2, _np)

ONE_QUBIT_KINDS: tuple[str, ...] = tuple(n for n, _ in _ONE)
TWO_QUBIT_KINDS: tuple[str, ...] = tuple(n for n, _ in _TWO)

FALCON_BASIS: tuple[str, ...] = ("CX", "I", "Rz", "SX", "X")


def kind(name: str) -> GateKind:
    try:
        return KINDS[name]
    except KeyError:
        raise UnsupportedGateError(f"unknown gate kind {name!r}") from None


class BasisSet:
    """Ordered, immutable set of gate kind names a device executes natively."""

    __slots__ = ("kinds", "_set")

    def __init__(self, kinds: Iterable[str]):
        names = []
        for k in kinds:
            kind(k)
            if k not in names:
                names.append(k)
        if not names:
            raise UnsupportedTranslationError("basis set must not be empty")
        self.kinds = tuple(names)
        self._set = frozenset(names)

    def __contains__(self, name: str) -> bool:
        return name in self._set

    def __iter__(self):
        return iter(self.kinds)

    def __len__(self) -> int:
        return len(self.kinds)

    def __eq__(self, other) -> bool:
        return isinstance(other, BasisSet) and self._set == other._set

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        return f"BasisSet({list(self.kinds)!r})"


# ---------------------------------------------------------------------------
# matrices

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)
_T = np.array([[1, 0], [0, cmath.exp(1j * PI / 4)]], dtype=complex)
_SX = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2


def _rx(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(t):
    return np.array([[cmath.exp(-0.5j * t), 0], [0, cmath.exp(0.5j * t)]], dtype=complex)


def _p(lam):
    return np.array([[1, 0], [0, cmath.exp(1j * lam)]], dtype=complex)


def _r(t, f):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array(
        [[c, -1j * cmath.exp(-1j * f) * s], [-1j * cmath.exp(1j * f) * s, c]], dtype=complex
    )


def _u(t, f, lam):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array(
        [[c, -cmath.exp(1j * lam) * s], [cmath.exp(1j * f) * s, cmath.exp(1j * (f + lam)) * c]],
        dtype=complex,
    )


def _controlled(v):
    m = np.eye(4, dtype=complex)
    m[np.ix_([1, 3], [1, 3])] = v
    return m


def _pauli_rot2(pa, pb, t):
    # exp(-i t/2 Pa_0 Pb_1); kron puts operand 1 on the high bit
    return math.cos(t / 2) * np.eye(4, dtype=complex) - 1j * math.sin(t / 2) * np.kron(pb, pa)


_CX = _controlled(_X)
_CX10 = np.eye(4, dtype=complex)[:, [0, 1, 3, 2]]


def _xx_plus_yy(t, b):
    c, s = math.cos(t / 2), math.sin(t / 2)
    m = np.eye(4, dtype=complex)
    m[1, 1] = m[2, 2] = c
    m[1, 2] = -1j * s * cmath.exp(-1j * b)
    m[2, 1] = -1j * s * cmath.exp(1j * b)
    return m


def _xx_minus_yy(t, b):
    c, s = math.cos(t / 2), math.sin(t / 2)
    m = np.eye(4, dtype=complex)
    m[0, 0] = m[3, 3] = c
    m[0, 3] = -1j * s * cmath.exp(-1j * b)
    m[3, 0] = -1j * s * cmath.exp(1j * b)
    return m


_FIXED = {
    "H": _H, "I": _I2, "S": _S, "Sdg": _S.conj().T, "SX": _SX, "SXdg": _SX.conj().T,
    "T": _T, "Tdg": _T.conj().T, "X": _X, "Y": _Y, "Z": _Z,
    "CH": _controlled(_H), "CS": _controlled(_S), "CSdg": _controlled(_S.conj().T),
    "CSX": _controlled(_SX), "CX": _CX, "CY": _controlled(_Y), "CZ": _controlled(_Z),
    "DCX": _CX10 @ _CX,
    "ECR": np.array(
        [[0, 1, 0, 1j], [1, 0, -1j, 0], [0, 1j, 0, 1], [-1j, 0, 1, 0]], dtype=complex
    ) / math.sqrt(2),
    "SWAP": np.eye(4, dtype=complex)[:, [0, 2, 1, 3]],
    "iSWAP": np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex),
}
for _m in _FIXED.values():
    _m.setflags(write=False)
_FLAT_FIXED = {
    k: tuple(complex(x) for x in m.ravel()) for k, m in _FIXED.items() if m.shape == (2, 2)
}

_PARAM = {
    "P": _p, "R": _r, "Rx": _rx, "Ry": _ry, "Rz": _rz, "U": _u,
    "CP": lambda t: _controlled(_p(t)),
    "CRx": lambda t: _controlled(_rx(t)),
    "CRy": lambda t: _controlled(_ry(t)),
    "CRz": lambda t: _controlled(_rz(t)),
    "CU": lambda t, f, lam, g: _controlled(cmath.exp(1j * g) * _u(t, f, lam)),
    "Rxx": lambda t: _pauli_rot2(_X, _X, t),
    "Ryy": lambda t: _pauli_rot2(_Y, _Y, t),
    "Rzz": lambda t: _pauli_rot2(_Z, _Z, t),
    "Rzx": lambda t: _pauli_rot2(_Z, _X, t),
    "RxxPlusYy": _xx_plus_yy,
    "RxxMinusYy": _xx_minus_yy,
}


def _check_params(name: str, params: Sequence[float]) -> GateKind:
    k = kind(name)
    if len(params) != k.param_count:
        raise ParameterArityError(
            f"{name} takes {k.param_count} parameter(s), got {len(params)}"
        )
    return k


def matrix(name: str, params: Sequence[float] = ()) -> np.ndarray:
    """Return the unitary of gate ``name`` (2x2 or 4x4, little-endian)."""
    _check_params(name, params)
    if name in _FIXED:
        return _FIXED[name]
    return _PARAM[name](*params)


# ---------------------------------------------------------------------------
# inverses

_SELF_INVERSE = {"H", "I", "X", "Y", "Z", "CH", "CX", "CY", "CZ", "SWAP", "ECR"}
_DAGGER_PAIRS = {
    "S": "Sdg", "Sdg": "S", "T": "Tdg", "Tdg": "T", "SX": "SXdg", "SXdg": "SX",
    "CS": "CSdg", "CSdg": "CS",
}
_NEGATE = {"P", "Rx", "Ry", "Rz", "CP", "CRx", "CRy", "CRz", "Rxx", "Ryy", "Rzz", "Rzx"}


def inverse_of(name: str, params: Sequence[float] = ()) -> tuple[str, tuple[float, ...], tuple[int, ...]]:
    """Return ``(kind, params, slots)`` implementing the inverse gate.

    ``slots`` gives the operand order of the inverse relative to the original;
    it is the identity except for DCX, whose inverse is DCX on reversed operands.
    """
    k = _check_params(name, params)
    ident = tuple(range(k.arity))
    params = tuple(float(p) for p in params)
    if name in _SELF_INVERSE:
        return name, (), ident
    if name in _DAGGER_PAIRS:
        return _DAGGER_PAIRS[name], (), ident
    if name in _NEGATE:
        return name, (-params[0],), ident
    if name == "R":
        return "R", (-params[0], params[1]), ident
    if name == "U":
        t, f, lam = params
        return "U", (-t, -lam, -f), ident
    if name == "CU":
        t, f, lam, g = params
        return "CU", (-t, -lam, -f, -g), ident
    if name in ("RxxPlusYy", "RxxMinusYy"):
        return name, (-params[0], params[1]), ident
    if name == "CSX":
        # controlled SXdg = controlled e^{-i pi/4} U(-pi/2, -pi/2, pi/2)
        return "CU", (-PI / 2, -PI / 2, PI / 2, -PI / 4), ident
    if name == "iSWAP":
        return "RxxPlusYy", (PI, 0.0), ident
    if name == "DCX":
        return "DCX", (), (1, 0)
    raise UnsupportedGateError(f"no inverse registered for {name}")  # pragma: no cover


# ---------------------------------------------------------------------------
# one-qubit Euler decomposition

ANGLE_ATOL = 1e-11


def wrap_angle(a: float) -> float:
    """Map an angle into (-pi, pi]."""
    a = math.fmod(a, 2 * PI)
    if a <= -PI:
        a += 2 * PI
    elif a > PI:
        a -= 2 * PI
    return a


def _near(a: float, b: float) -> bool:
    return abs(wrap_angle(a - b)) < ANGLE_ATOL


def zyz_flat(u00: complex, u01: complex, u10: complex, u11: complex) -> tuple[float, float, float, float]:
    """Angles ``(theta, phi, lam, phase)`` with ``u = e^{i phase} U(theta, phi, lam)``."""
    det = u00 * u11 - u01 * u10
    coeff = 1.0 / cmath.sqrt(det) if det != 0 else 1.0
    v00, v10, v11 = u00 * coeff, u10 * coeff, u11 * coeff
    theta = 2 * math.atan2(abs(v10), abs(v00))
    ang11 = cmath.phase(v11)
    ang10 = cmath.phase(v10)
    phi = ang11 + ang10
    lam = ang11 - ang10
    phase = cmath.phase(det) / 2 - (phi + lam) / 2
    return theta, phi, lam, phase


def zyz_angles(u) -> tuple[float, float, float, float]:
    return zyz_flat(complex(u[0][0]), complex(u[0][1]), complex(u[1][0]), complex(u[1][1]))


def _euler_zsx(theta, phi, lam, basis) -> list[tuple[str, tuple[float, ...]]]:
    out: list[tuple[str, tuple[float, ...]]] = []

    def rz(a):
        a = wrap_angle(a)
        if abs(a) >= ANGLE_ATOL:
            out.append(("Rz", (a,)))

    if abs(theta) < ANGLE_ATOL:
        rz(phi + lam)
    elif abs(theta - PI / 2) < ANGLE_ATOL:
        rz(lam - PI / 2)
        out.append(("SX", ()))
        rz(phi + PI / 2)
    elif abs(theta - PI) < ANGLE_ATOL and "X" in basis:
        out.append(("X", ()))
        rz(phi - lam - PI)
    else:
        rz(lam)
        out.append(("SX", ()))
        rz(theta + PI)
        out.append(("SX", ()))
        rz(phi + PI)
    return out


def _euler_zyz(theta, phi, lam, basis):
    out = []
    for name, a in (("Rz", lam), ("Ry", theta), ("Rz", phi)):
        a = wrap_angle(a)
        if abs(a) >= ANGLE_ATOL:
            out.append((name, (a,)))
    return out


def _euler_u(theta, phi, lam, basis):
    if abs(theta) < ANGLE_ATOL and _near(phi + lam, 0.0):
        return []
    return [("U", (theta, wrap_angle(phi), wrap_angle(lam)))]


def euler_scheme(basis: BasisSet):
    """Pick the one-qubit decomposition routine supported by ``basis``."""
    if "Rz" in basis and "SX" in basis:
        return _euler_zsx
    if "U" in basis:
        return _euler_u
    if "Rz" in basis and "Ry" in basis:
        return _euler_zyz
    return None


def synthesize_1q(u, basis: BasisSet) -> list[tuple[str, tuple[float, ...]]]:
    """Decompose a 2x2 unitary into basis gates (empty list for identity)."""
    scheme = euler_scheme(basis)
    if scheme is None:
        raise UnsupportedTranslationError(f"no one-qubit Euler scheme for {basis!r}")
    theta, phi, lam, _ = zyz_angles(u) if len(u) == 2 else zyz_flat(*u)
    return scheme(theta, phi, lam, basis)


def flat_1q(name: str, params: Sequence[float] = ()) -> tuple[complex, complex, complex, complex]:
    """Row-major entries of a one-qubit gate matrix, without numpy overhead."""
    if name == "Rz":
        e = cmath.exp(-0.5j * params[0])
        return (e, 0j, 0j, 1 / e)
    f = _FLAT_FIXED.get(name)
    if f is not None:
        return f
    if name == "Rx":
        c, s = math.cos(params[0] / 2), math.sin(params[0] / 2)
        return (complex(c), -1j * s, -1j * s, complex(c))
    if name == "Ry":
        c, s = math.cos(params[0] / 2), math.sin(params[0] / 2)
        return (complex(c), complex(-s), complex(s), complex(c))
    if name == "P":
        return (1 + 0j, 0j, 0j, cmath.exp(1j * params[0]))
    if name == "U":
        t, f, lam = params
        c, s = math.cos(t / 2), math.sin(t / 2)
        return (complex(c), -cmath.exp(1j * lam) * s, cmath.exp(1j * f) * s, cmath.exp(1j * (f + lam)) * c)
    m = matrix(name, params)
    return (complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))


def mul_flat(a, b):
    """Product ``a @ b`` of two flat 2x2 matrices."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (a0 * b0 + a1 * b2, a0 * b1 + a1 * b3, a2 * b0 + a3 * b2, a2 * b1 + a3 * b3)


# ---------------------------------------------------------------------------
# two-qubit templates over {CX, local unitaries}
#
# Items are ("CX", (control, target)) or ("M", matrix, slot).

def _m(name, params, slot):
    return ("M", flat_1q(name, params), slot)


def _flat(m) -> tuple[complex, complex, complex, complex]:
    return (complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))


def _frz(t):
    return flat_1q("Rz", (t,))


def _fry(t):
    return flat_1q("Ry", (t,))


_CXI = ("CX", (0, 1))
_CXR = ("CX", (1, 0))


def _rzz_items(t):
    return [_CXI, _m("Rz", (t,), 1), _CXI]


def _controlled_items(v):
    """Two-CX construction of controlled-V via V = e^{ia} A X B X C, ABC = I."""
    theta, phi, lam, phase = zyz_flat(*v)
    # v = e^{i phase} U(theta, phi, lam) = e^{i alpha} Rz(phi) Ry(theta) Rz(lam)
    alpha = phase + (phi + lam) / 2
    a = mul_flat(_frz(phi), _fry(theta / 2))
    b = mul_flat(_fry(-theta / 2), _frz(-(lam + phi) / 2))
    c = _frz((lam - phi) / 2)
    return [("M", c, 1), _CXI, ("M", b, 1), _CXI, ("M", a, 1), ("M", flat_1q("P", (alpha,)), 0)]


def _cu_target(t, f, lam, g):
    e = cmath.exp(1j * g)
    return tuple(e * x for x in flat_1q("U", (t, f, lam)))


_CONTROLLED_TARGET = {
    "CH": lambda: flat_1q("H"), "CS": lambda: flat_1q("S"), "CSdg": lambda: flat_1q("Sdg"),
    "CSX": lambda: flat_1q("SX"),
    "CP": lambda t: flat_1q("P", (t,)),
    "CRx": lambda t: flat_1q("Rx", (t,)),
    "CRy": lambda t: flat_1q("Ry", (t,)),
    "CRz": lambda t: flat_1q("Rz", (t,)),
    "CU": _cu_target,
}

_SX_CONJ = _flat(_rz(PI / 2) @ _SX @ _rz(-PI / 2))
_SXDG_CONJ = _flat(_rz(PI / 2) @ _SX.conj().T @ _rz(-PI / 2))


def _xx_plus_yy_items(t, b):
    return [
        ("M", _frz(b), 0),
        ("M", _SX_CONJ, 1),
        _m("S", (), 0),
        _CXR,
        ("M", _fry(-t / 2), 1),
        ("M", _fry(-t / 2), 0),
        _CXR,
        _m("Sdg", (), 0),
        ("M", _SXDG_CONJ, 1),
        ("M", _frz(-b), 0),
    ]


def two_qubit_items(name: str, params: Sequence[float]) -> list[tuple]:
    """Template for a two-qubit kind using at most three CX gates."""
    if name == "CX":
        return [_CXI]
    if name == "CZ":
        return [_m("H", (), 1), _CXI, _m("H", (), 1)]
    if name == "CY":
        return [_m("Sdg", (), 1), _CXI, _m("S", (), 1)]
    if name == "SWAP":
        return [_CXI, _CXR, _CXI]
    if name == "DCX":
        return [_CXI, _CXR]
    if name == "ECR":
        return [_CXI, _m("S", (), 0), _m("X", (), 0), _m("Rx", (PI / 2,), 1)]
    if name == "iSWAP":
        return [_m("S", (), 0), _m("S", (), 1), _m("H", (), 0), _CXI, _CXR, _m("H", (), 1)]
    if name in _CONTROLLED_TARGET:
        return _controlled_items(_CONTROLLED_TARGET[name](*params))
    if name == "Rzz":
        return _rzz_items(params[0])
    if name == "Rxx":
        hh = [_m("H", (), 0), _m("H", (), 1)]
        return hh + _rzz_items(params[0]) + hh
    if name == "Ryy":
        fwd = [_m("Rx", (PI / 2,), 0), _m("Rx", (PI / 2,), 1)]
        back = [_m("Rx", (-PI / 2,), 0), _m("Rx", (-PI / 2,), 1)]
        return fwd + _rzz_items(params[0]) + back
    if name == "Rzx":
        return [_m("H", (), 1)] + _rzz_items(params[0]) + [_m("H", (), 1)]
    if name == "RxxPlusYy":
        return _xx_plus_yy_items(*params)
    if name == "RxxMinusYy":
        t, b = params
        # X_1 . RxxPlusYy(t, -b) . X_1
        return [_m("X", (), 1)] + _xx_plus_yy_items(t, -b) + [_m("X", (), 1)]
    raise UnsupportedTranslationError(f"no two-qubit template for {name}")


def _entangler(basis: BasisSet) -> str:
    if "CX" in basis:
        return "CX"
    if "CZ" in basis:
        return "CZ"
    raise UnsupportedTranslationError(f"basis {basis!r} has no supported two-qubit gate")


def lower_items(items: Sequence[tuple], basis: BasisSet) -> list[tuple[str, tuple[float, ...], tuple[int, ...]]]:
    """Merge local unitaries between entanglers and emit basis gates."""
    ent = _entangler(basis)
    pending: dict[int, tuple] = {}
    out: list[tuple[str, tuple[float, ...], tuple[int, ...]]] = []

    def push(slot, m):
        prev = pending.get(slot)
        pending[slot] = m if prev is None else mul_flat(m, prev)

    def flush(slot):
        m = pending.pop(slot, None)
        if m is not None:
            for name, ps in synthesize_1q(m, basis):
                out.append((name, ps, (slot,)))

    for item in items:
        if item[0] == "M":
            push(item[2], item[1])
            continue
        c, t = item[1]
        if ent == "CZ":
            push(t, _FLAT_FIXED["H"])
        flush(c)
        flush(t)
        out.append((ent, (), (c, t)))
        if ent == "CZ":
            push(t, _FLAT_FIXED["H"])
    for slot in sorted(pending):
        flush(slot)
    return out


@lru_cache(maxsize=4096)
def _cached_template(name: str, params: tuple[float, ...], basis: BasisSet):
    return tuple(_translate(name, params, basis))


def _translate(name, params, basis):
    k = kind(name)
    if name in basis:
        return [(name, params, tuple(range(k.arity)))]
    if k.arity == 1:
        return [(n, ps, (0,)) for n, ps in synthesize_1q(flat_1q(name, params), basis)]
    if k.arity == 2:
        return lower_items(two_qubit_items(name, params), basis)
    raise UnsupportedTranslationError(f"{name} has arity {k.arity}")


def translate_template(
    name: str, params: Sequence[float], basis: BasisSet
) -> list[tuple[str, tuple[float, ...], tuple[int, ...]]]:
    """Basis-gate sequence equivalent (up to global phase) to ``name(params)``.

    Each element is ``(kind, params, slots)`` where ``slots`` index the
    original gate's operands.
    """
    k = _check_params(name, params)
    params = tuple(float(p) for p in params)
    if k.param_count == 0:
        return list(_cached_template(name, params, basis))
    return _translate(name, params, basis)
