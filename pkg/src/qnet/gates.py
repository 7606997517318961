"""The six gate operations: X, Z, H, I, CN, and the measurement gate M.

Each gate maps a canonical state to a canonical state.  Gates never
renormalize: the interpreter normalizes between successive gates, so the
output of M in particular is left collapsed but unscaled.  All gates
preserve scale_sq.

Qubit index n lives at bit position (nqubits - 1 - n) of the basis index
(qubit 0 is the leftmost, most significant bit).
"""

from __future__ import annotations

from fractions import Fraction

from .qstate import QState, Term
from .scalar import CScalar


def _bit_mask(state: QState, n: int) -> int:
    if not 0 <= n < state.nqubits:
        raise IndexError(f"qubit index {n} out of range for {state.nqubits} qubits")
    return 1 << (state.nqubits - 1 - n)


def _rebuild(state: QState, coeffs: list[CScalar]) -> QState:
    terms = tuple(Term(c, t.bits) for c, t in zip(coeffs, state.terms))
    return QState(state.nqubits, terms, state.scale_sq, state.backend)


def gate_X(state: QState, n: int) -> QState:
    """Negation: flips qubit n in every term."""
    mask = _bit_mask(state, n)
    return _rebuild(state, [state.coeff(i ^ mask) for i in range(len(state.terms))])


def gate_Z(state: QState, n: int) -> QState:
    """Phase flip: negates the coefficient wherever qubit n is |1>."""
    mask = _bit_mask(state, n)
    return _rebuild(
        state,
        [-c if i & mask else c for i, c in enumerate(state.coeffs())],
    )


def gate_H(state: QState, n: int) -> QState:
    """Hadamard: (a, b) -> ((a+b)/sqrt(2), (a-b)/sqrt(2)) on qubit n."""
    mask = _bit_mask(state, n)
    root2 = state.backend.sqrt_two()
    coeffs = state.coeffs()
    out = list(coeffs)
    for i in range(len(coeffs)):
        if i & mask:
            continue
        lo, hi = coeffs[i], coeffs[i | mask]
        out[i] = (lo + hi) / root2
        out[i | mask] = (lo - hi) / root2
    return _rebuild(state, out)


def gate_I(state: QState, n: int) -> QState:
    """Identity (the index is still validated)."""
    _bit_mask(state, n)
    return state


def gate_CN(state: QState, c: int, n: int) -> QState:
    """Controlled not: flips qubit n in the terms where qubit c is |1>."""
    if c == n:
        raise ValueError("CN control and target must differ")
    cmask = _bit_mask(state, c)
    nmask = _bit_mask(state, n)
    return _rebuild(
        state,
        [
            state.coeff(i ^ nmask) if i & cmask else state.coeff(i)
            for i in range(len(state.terms))
        ],
    )


def gate_M(state: QState, n: int, r) -> QState:
    """Measure qubit n against random draw r in [0, 1].

    The outcome is |0> iff r < p0 (strictly), where p0 is the |0>-side
    share of the squared norm; at r = p0 the outcome is |1>.  In the
    exact backend the comparison is decided by an exact sign test, so a
    threshold can never be misjudged.  Terms on the losing side are
    zeroed; the caller is responsible for renormalizing.
    """
    r = Fraction(r)
    if not 0 <= r <= 1:
        raise ValueError("random draw must lie in [0, 1]")
    mask = _bit_mask(state, n)
    backend = state.backend
    zero_side = backend.zero
    total = backend.zero
    for i, term in enumerate(state.terms):
        nsq = term.coeff.norm_sq()
        total = total + nsq
        if not i & mask:
            zero_side = zero_side + nsq
    if backend.sign(total) == 0:
        raise ValueError("cannot measure the zero state")
    # ratio of squared norms: correct even on non-unit (deferred) states
    p0 = zero_side / total
    outcome = backend.sign(p0 - r) <= 0
    zero = CScalar(backend.zero, backend.zero)
    return _rebuild(
        state,
        [
            c if bool(i & mask) == outcome else zero
            for i, c in enumerate(state.coeffs())
        ],
    )
