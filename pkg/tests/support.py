"""Shared helpers for the test suite: seeded random generators for exact
scalars, states, unit qubit pairs, and circuits, plus float rendering of
exact states via a high-precision sqrt(2)."""

import math
from fractions import Fraction

from qnet import CScalar, Circuit, Gate, QExt, QState, Term, iter_sqrt, sort_and_merge
from qnet.qstate import index_to_bits

SQRT2_HP = iter_sqrt(2, Fraction(1, 10**30))


def rand_fraction(rng, max_num=6, max_den=6, signed=True) -> Fraction:
    num = rng.randint(0, max_num)
    if signed and rng.random() < 0.5:
        num = -num
    return Fraction(num, rng.randint(1, max_den))


def rand_qext(rng, **kwargs) -> QExt:
    return QExt(rand_fraction(rng, **kwargs), rand_fraction(rng, **kwargs))


def rand_cscalar(rng) -> CScalar:
    return CScalar(rand_qext(rng), rand_qext(rng))


def rand_state(rng, nqubits) -> QState:
    """Random nonzero canonical exact state (not normalized)."""
    dim = 1 << nqubits
    coeffs = [rand_cscalar(rng) for _ in range(dim)]
    if not any(coeffs):
        coeffs[rng.randrange(dim)] = CScalar(QExt(1), QExt(0))
    terms = [Term(c, index_to_bits(i, nqubits)) for i, c in enumerate(coeffs)]
    return sort_and_merge(terms, nqubits)


_I = CScalar(QExt(0), QExt(1))
_UNIT_PHASE = CScalar(QExt(0, Fraction(1, 2)), QExt(0, Fraction(1, 2)))  # (1+i)/sqrt2


def rand_unit_pair(rng) -> tuple[CScalar, CScalar]:
    """Exact unit pair: |alpha|^2 + |beta|^2 = 1 with exact equality.

    Built from Lebesgue's identity
    (m^2+n^2+p^2+q^2)^2 = (m^2+n^2-p^2-q^2)^2 + (2mq+2np)^2 + (2nq-2mp)^2,
    then twisted by exact unit phases (i and (1+i)/sqrt2) for variety.
    """
    while True:
        m, n, p, q = (rng.randint(-3, 3) for _ in range(4))
        total = m * m + n * n + p * p + q * q
        if total:
            break
    alpha = CScalar(
        QExt(Fraction(m * m + n * n - p * p - q * q, total)),
        QExt(Fraction(2 * (m * q + n * p), total)),
    )
    beta = CScalar(QExt(Fraction(2 * (n * q - m * p), total)), QExt(0))
    if rng.random() < 0.5:
        alpha, beta = beta, alpha
    if rng.random() < 0.5:
        beta = beta * _I
    if rng.random() < 0.3:
        beta = beta * _UNIT_PHASE
    if rng.random() < 0.3:
        alpha = alpha * _UNIT_PHASE
    return alpha, beta


def scalar_to_float(x) -> float:
    if isinstance(x, QExt):
        return float(x.a + x.b * SQRT2_HP)
    return float(x)


def state_to_complex(state: QState) -> list[complex]:
    """Physical amplitudes as floats (deferred scale divided out)."""
    root = math.sqrt(scalar_to_float(state.scale_sq))
    return [
        complex(scalar_to_float(t.coeff.re), scalar_to_float(t.coeff.im)) / root
        for t in state.terms
    ]


def states_identical(a: QState, b: QState) -> bool:
    """Structural equality including scale_sq (no normalization demands)."""
    return (
        a.nqubits == b.nqubits
        and a.scale_sq == b.scale_sq
        and all(x.coeff == y.coeff for x, y in zip(a.terms, b.terms))
    )


def rand_circuit_ops(rng, nqubits, ngates) -> list[tuple]:
    kinds = ("X", "Z", "H", "I", "CN", "M")
    ops = []
    for _ in range(ngates):
        kind = rng.choice(kinds)
        if kind == "CN":
            if nqubits < 2:
                kind = "X"
            else:
                c = rng.randrange(nqubits)
                t = rng.randrange(nqubits)
                while t == c:
                    t = rng.randrange(nqubits)
                ops.append(("CN", c, t))
                continue
        ops.append((kind, rng.randrange(nqubits)))
    return ops


def ops_to_circuit(ops, nqubits) -> Circuit:
    return Circuit(tuple(Gate(op[0], tuple(op[1:])) for op in ops), nqubits)


def rand_draws(rng, count) -> list[Fraction]:
    # prime denominator: measurement thresholds reachable from small
    # rational inputs can never land exactly on a draw
    return [Fraction(rng.randint(1, 1008), 1009) for _ in range(count)]
