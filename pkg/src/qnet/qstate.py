"""Term-list quantum states.

A state over n qubits is a sequence of terms, each pairing a complex
coefficient with one classical bit configuration (qubit 0 is the leftmost
bit).  The canonical form keeps exactly 2^n terms, one per basis vector,
in ascending bit-vector order.

States additionally carry ``scale_sq``, an exact squared scale factor:
the physical amplitude of a term is coeff / sqrt(scale_sq).  In the exact
backend this defers normalization whenever sqrt(norm^2) falls outside
Q[sqrt(2)], keeping every probability and comparison exact; the deferred
root only has to be surfaced when an actual amplitude is printed or
extracted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    EntangledError,
    NotDeterministicError,
    NotRepresentableError,
    ParseError,
)
from .scalar import (
    EXACT,
    Backend,
    CScalar,
    Scalar,
    format_cscalar,
    iter_sqrt,
    parse_cscalar,
)

# Dense canonical form: 2^n terms per state.  Raise at your own risk.
MAX_QUBITS = 16


def index_to_bits(index: int, nqubits: int) -> tuple[bool, ...]:
    """Bit configuration of a basis index, qubit 0 most significant."""
    return tuple(bool((index >> (nqubits - 1 - q)) & 1) for q in range(nqubits))


def bits_to_index(bits: Sequence[bool]) -> int:
    index = 0
    for bit in bits:
        index = (index << 1) | int(bit)
    return index


@dataclass(frozen=True)
class Term:
    """One basis-vector entry: a complex coefficient plus one boolean per qubit."""

    coeff: CScalar
    bits: tuple[bool, ...]


@dataclass(frozen=True, eq=False)
class QState:
    """Canonical term-list state (one term per basis vector, ascending)."""

    nqubits: int
    terms: tuple[Term, ...]
    scale_sq: Scalar
    backend: Backend = EXACT

    def __post_init__(self):
        if not 1 <= self.nqubits <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in 1..{MAX_QUBITS}")
        if len(self.terms) != 1 << self.nqubits:
            raise ValueError("canonical state needs one term per basis vector")
        if self.backend.sign(self.scale_sq) <= 0:
            raise ValueError("scale_sq must be positive")

    def coeff(self, index: int) -> CScalar:
        return self.terms[index].coeff

    def coeffs(self) -> list[CScalar]:
        return [t.coeff for t in self.terms]

    def __eq__(self, other) -> bool:
        """Exact coefficient-wise equality of fully normalized states.

        Comparing a state whose normalization is still deferred
        (scale_sq != 1) signals NotRepresentableError: its raw
        coefficients are not amplitudes.
        """
        if not isinstance(other, QState):
            return NotImplemented
        if self.nqubits != other.nqubits or self.backend != other.backend:
            return False
        one = self.backend.one
        if self.scale_sq != one or other.scale_sq != one:
            raise NotRepresentableError(
                "state equality is defined only for scale_sq = 1"
            )
        return all(a.coeff == b.coeff for a, b in zip(self.terms, other.terms))

    def __repr__(self) -> str:
        nonzero = [
            f"{format_cscalar(t.coeff)}|{bits_string(t.bits)}>"
            for t in self.terms
            if t.coeff
        ]
        return f"QState({' + '.join(nonzero) or '0'}, scale_sq={self.scale_sq!s})"


def bits_string(bits: Sequence[bool]) -> str:
    return "".join("1" if b else "0" for b in bits)


def sort_and_merge(terms: Iterable[Term], nqubits: int, backend: Backend = EXACT) -> QState:
    """Canonicalize an arbitrary term list.

    Coefficients of duplicate basis vectors are summed, missing basis
    vectors get explicit zero entries, and the result is sorted by
    bit-vector value; scale_sq starts at 1.
    """
    if not 1 <= nqubits <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in 1..{MAX_QUBITS}")
    zero = CScalar(backend.zero, backend.zero)
    coeffs = [zero] * (1 << nqubits)
    for term in terms:
        if len(term.bits) != nqubits:
            raise ParseError(
                f"term has {len(term.bits)} bits, expected {nqubits}"
            )
        index = bits_to_index(term.bits)
        coeffs[index] = coeffs[index] + term.coeff
    canonical = tuple(
        Term(c, index_to_bits(i, nqubits)) for i, c in enumerate(coeffs)
    )
    return QState(nqubits, canonical, backend.one, backend)


def norm_sq(state: QState) -> Scalar:
    """Sum of squared coefficient norms (independent of scale_sq)."""
    total = state.backend.zero
    for term in state.terms:
        total = total + term.coeff.norm_sq()
    return total


def is_unit(state: QState) -> bool:
    return norm_sq(state) == state.scale_sq


def normalize(state: QState) -> QState:
    """Scale a nonzero state to norm 1.

    Exact backend: the squared norm becomes the new scale_sq, then the
    in-field square root is attempted; on success every coefficient is
    divided by it and scale_sq resets to 1 (fully normalized), otherwise
    the scale stays deferred and the state is unit.  Approximate backend:
    coefficients are divided by iter_sqrt of the squared norm.
    """
    nsq = norm_sq(state)
    if state.backend.sign(nsq) == 0:
        raise ValueError("cannot normalize the zero state")
    root = state.backend.sqrt(nsq)
    if root is None:
        return QState(state.nqubits, state.terms, nsq, state.backend)
    terms = tuple(Term(t.coeff / root, t.bits) for t in state.terms)
    return QState(state.nqubits, terms, state.backend.one, state.backend)


def tensor_product(a: QState, b: QState) -> QState:
    """Combined state with a's qubits at the lower indices (leftmost bits)."""
    if a.backend != b.backend:
        raise ValueError("cannot tensor states from different backends")
    nqubits = a.nqubits + b.nqubits
    if nqubits > MAX_QUBITS:
        raise ValueError(f"qubit count must be in 1..{MAX_QUBITS}")
    terms = tuple(
        Term(ta.coeff * tb.coeff, ta.bits + tb.bits)
        for ta in a.terms
        for tb in b.terms
    )
    return QState(nqubits, terms, a.scale_sq * b.scale_sq, a.backend)


def make_qubit(alpha: CScalar, beta: CScalar, backend: Backend = EXACT) -> QState:
    """One-qubit state alpha|0> + beta|1> with scale_sq = 1."""
    alpha = backend.cscalar(alpha)
    beta = backend.cscalar(beta)
    if not alpha and not beta:
        raise ValueError("qubit coefficients must not both be zero")
    terms = (Term(alpha, (False,)), Term(beta, (True,)))
    return QState(1, terms, backend.one, backend)


def zero_qstate(nqubits: int, backend: Backend = EXACT) -> QState:
    """n-qubit state |0...0>."""
    if nqubits < 1:
        raise ValueError("qubit count must be >= 1")
    one = CScalar(backend.one, backend.zero)
    zero = CScalar(backend.zero, backend.zero)
    terms = tuple(
        Term(one if i == 0 else zero, index_to_bits(i, nqubits))
        for i in range(1 << nqubits)
    )
    return QState(nqubits, terms, backend.one, backend)


def get_deterministic_qubit(state: QState, n: int) -> bool:
    """The single value qubit n takes across all nonzero terms."""
    if not 0 <= n < state.nqubits:
        raise IndexError(f"qubit index {n} out of range")
    value: bool | None = None
    for term in state.terms:
        if term.coeff:
            if value is None:
                value = term.bits[n]
            elif term.bits[n] != value:
                raise NotDeterministicError(
                    f"qubit {n} occurs with both values"
                )
    if value is None:
        raise ValueError("zero state has no deterministic qubits")
    return value


def narrow_to_qubit(state: QState, n: int) -> QState:
    """Extract qubit n as a normalized one-qubit state.

    The coefficients are viewed as a matrix over (other-qubit
    configuration, qubit-n value); the state is separable in qubit n iff
    that matrix has rank 1, checked exactly by cross-multiplying every
    row against the first nonzero row x*.  The result inherits the phase
    of row x* and is scaled by the root of its squared norm, which in the
    exact backend must exist in-field.
    """
    if not 0 <= n < state.nqubits:
        raise IndexError(f"qubit index {n} out of range")
    pos = state.nqubits - 1 - n

    def cell(row: int, value: int) -> CScalar:
        index = ((row >> pos) << (pos + 1)) | (value << pos) | (row & ((1 << pos) - 1))
        return state.terms[index].coeff

    rows = 1 << (state.nqubits - 1)
    anchor = next(
        (x for x in range(rows) if cell(x, 0) or cell(x, 1)), None
    )
    if anchor is None:
        raise ValueError("zero state has no qubit substates")
    a0, a1 = cell(anchor, 0), cell(anchor, 1)
    for x in range(anchor + 1, rows):
        if cell(x, 0) * a1 != cell(x, 1) * a0:
            raise EntangledError(
                f"qubit {n} is entangled with the rest of the state"
            )
    root = state.backend.sqrt(a0.norm_sq() + a1.norm_sq())
    if root is None:
        raise NotRepresentableError(
            "the extracted qubit's scale has no exact representation"
        )
    return make_qubit(a0 / root, a1 / root, backend=state.backend)


# --- state file format -------------------------------------------------------
#
# One term per line:  cplx '|' bitstring      e.g.  (1/2*s2, 0) | 01
# '#' starts a comment; bitstring length must be uniform; qubit 0 is the
# leftmost character.  Input need not be canonical.


def parse_state(text: str, backend: Backend = EXACT) -> QState:
    terms: list[Term] = []
    nqubits: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("|")
        if len(parts) != 2:
            raise ParseError("expected 'cplx | bitstring'", line=lineno)
        try:
            coeff = backend.cscalar(parse_cscalar(parts[0]))
        except ParseError as exc:
            raise ParseError(str(exc), line=lineno) from None
        bits_text = parts[1].strip()
        if not bits_text or set(bits_text) - {"0", "1"}:
            raise ParseError(f"bad bitstring {bits_text!r}", line=lineno)
        if nqubits is None:
            nqubits = len(bits_text)
            if nqubits > MAX_QUBITS:
                raise ParseError(
                    f"qubit count must be in 1..{MAX_QUBITS}", line=lineno
                )
        elif len(bits_text) != nqubits:
            raise ParseError(
                f"bitstring length {len(bits_text)} != {nqubits}", line=lineno
            )
        terms.append(Term(coeff, tuple(c == "1" for c in bits_text)))
    if nqubits is None:
        raise ParseError("state file contains no terms")
    return sort_and_merge(terms, nqubits, backend)


def format_state(state: QState, sparse: bool = False) -> list[str]:
    """Render a state in the exact state-file grammar, one term per line.

    Fails when normalization is deferred: the physical amplitudes would
    need a square root outside the scalar field.
    """
    if state.scale_sq != state.backend.one:
        raise NotRepresentableError(
            "amplitudes have a deferred scale and no exact rendering"
        )
    return [
        f"{format_cscalar(t.coeff)} | {bits_string(t.bits)}"
        for t in state.terms
        if t.coeff or not sparse
    ]


def physical_amplitudes(state: QState, tol) -> list[tuple[Fraction, Fraction]]:
    """Per-basis-vector (re, im) rationals approximating coeff / sqrt(scale_sq)."""
    tol = Fraction(tol)
    guard = tol / 8
    parts = [
        (
            state.backend.as_fraction(t.coeff.re, guard),
            state.backend.as_fraction(t.coeff.im, guard),
        )
        for t in state.terms
    ]
    if state.scale_sq == state.backend.one:
        return parts
    scale = state.backend.as_fraction(state.scale_sq, guard)
    root = iter_sqrt(scale, guard)
    return [(re / root, im / root) for re, im in parts]
