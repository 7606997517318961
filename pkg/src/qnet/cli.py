"""Command-line front end.

Subcommands:

    run              execute a circuit and print the final state
    trace            same, dumping the state after every gate
    teleport         run the teleportation protocol on one input qubit
    verify-teleport  run the built-in teleportation verification suite

Exit codes: 0 success, 2 parse/validation error, 3 exact rendering hit a
non-representable amplitude, 4 random stream exhausted, 5 teleportation
check failed.  Output is deterministic: identical invocations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    EntangledError,
    NotDeterministicError,
    NotRepresentableError,
    ParseError,
    RandomStreamExhausted,
)
from .interpreter import RandomStream, parse_circuit, run_circuit, run_circuit_traced
from .qstate import (
    QState,
    bits_string,
    format_state,
    make_qubit,
    narrow_to_qubit,
    normalize,
    parse_state,
    physical_amplitudes,
    zero_qstate,
)
from .scalar import (
    EXACT,
    ApproxBackend,
    Backend,
    CScalar,
    format_cscalar,
    format_fixed,
    parse_cscalar,
    parse_rational,
)
from .teleport import (
    DEFAULT_INPUTS,
    UNIT_HYPOTHESIS_TOL,
    teleport_protocol,
    verify_teleportation,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_REPRESENTABLE = 3
EXIT_STREAM = 4
EXIT_FAIL = 5

DEFAULT_EPS = Fraction(1, 10**12)


@dataclass(frozen=True)
class RunConfig:
    circuit_path: str
    state_spec: str
    randoms: str | None
    randoms_file: str | None
    backend: Backend
    emit: str
    digits: int
    trace: bool
    sparse_output: bool
    qubits: int | None


def _backend_from_args(args) -> Backend:
    if args.backend == "exact":
        if args.eps is not None:
            raise ParseError("--eps applies only to --backend approx")
        return EXACT
    eps = parse_rational(args.eps) if args.eps is not None else DEFAULT_EPS
    if eps <= 0:
        raise ParseError("--eps must be positive")
    return ApproxBackend(eps)


def _run_config(args) -> RunConfig:
    if args.emit == "exact" and args.digits is not None:
        raise ParseError("--digits applies only to --emit decimal")
    digits = args.digits if args.digits is not None else 6
    if digits < 1:
        raise ParseError("--digits must be >= 1")
    return RunConfig(
        circuit_path=args.circuit,
        state_spec=args.state,
        randoms=args.randoms,
        randoms_file=args.randoms_file,
        backend=_backend_from_args(args),
        emit=args.emit,
        digits=digits,
        trace=args.command == "trace",
        sparse_output=args.sparse_output,
        qubits=args.qubits,
    )


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _split_top_level(text: str) -> list[str]:
    """Split on commas that are not nested inside parentheses."""
    parts: list[str] = []
    depth = 0
    current: list[str] = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def _initial_state(spec: str, backend: Backend) -> QState:
    if spec.startswith("zero:"):
        count = spec[len("zero:") :]
        if not count.isdigit() or int(count) < 1:
            raise ParseError(f"bad initial state {spec!r}")
        return zero_qstate(int(count), backend)
    if spec.startswith("qubit:"):
        parts = _split_top_level(spec[len("qubit:") :])
        if len(parts) != 2:
            raise ParseError(f"bad initial state {spec!r}: expected two cplx literals")
        alpha = backend.cscalar(parse_cscalar(parts[0]))
        beta = backend.cscalar(parse_cscalar(parts[1]))
        return make_qubit(alpha, beta, backend)
    return parse_state(_read(spec), backend)


def _random_stream(cfg: RunConfig) -> RandomStream:
    if cfg.randoms is not None and cfg.randoms_file is not None:
        raise ParseError("--randoms and --randoms-file are mutually exclusive")
    if cfg.randoms is not None:
        pieces = [p for p in cfg.randoms.split(",") if p.strip()]
        return RandomStream(parse_rational(p) for p in pieces)
    if cfg.randoms_file is not None:
        draws = []
        for raw in _read(cfg.randoms_file).splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                draws.append(parse_rational(line))
        return RandomStream(draws)
    return RandomStream(())


def render_state(state: QState, emit: str, digits: int, sparse: bool) -> list[str]:
    if emit == "exact":
        return format_state(state, sparse=sparse)
    tol = Fraction(1, 10 ** (digits + 2))
    amplitudes = physical_amplitudes(state, tol)
    lines = []
    for term, (re, im) in zip(state.terms, amplitudes):
        if sparse and not term.coeff:
            continue
        lines.append(
            f"({format_fixed(re, digits)}, {format_fixed(im, digits)})"
            f" | {bits_string(term.bits)}"
        )
    return lines


def cmd_run(cfg: RunConfig) -> int:
    circuit = parse_circuit(_read(cfg.circuit_path), cfg.qubits)
    initial = _initial_state(cfg.state_spec, cfg.backend)
    stream = _random_stream(cfg)
    if cfg.trace:
        _, events = run_circuit_traced(circuit, initial, stream)
        blocks = ["# initial"]
        blocks += render_state(normalize(initial), cfg.emit, cfg.digits, cfg.sparse_output)
        for event in events:
            label = f"# step {event.step}: {event.gate}"
            if event.draw is not None:
                label += f" r={event.draw}"
            blocks += ["", label]
            blocks += render_state(event.state, cfg.emit, cfg.digits, cfg.sparse_output)
        lines = blocks
    else:
        final = run_circuit(circuit, initial, stream)
        lines = render_state(final, cfg.emit, cfg.digits, cfg.sparse_output)
    for line in lines:
        print(line)
    return EXIT_OK


def cmd_teleport(args) -> int:
    backend = _backend_from_args(args)
    alpha = backend.cscalar(parse_cscalar(args.alpha))
    beta = backend.cscalar(parse_cscalar(args.beta))
    r1 = parse_rational(args.r1)
    r2 = parse_rational(args.r2)
    final = teleport_protocol(alpha, beta, r1, r2, backend)
    print("# final state")
    for line in format_state(final):
        print(line)
    narrowed = narrow_to_qubit(final, 2)
    expected = make_qubit(alpha, beta, backend)
    print(f"# qubit 2:  {format_cscalar(narrowed.coeff(0))} {format_cscalar(narrowed.coeff(1))}")
    print(f"# expected: {format_cscalar(expected.coeff(0))} {format_cscalar(expected.coeff(1))}")
    if isinstance(backend, ApproxBackend):
        deviation = Fraction(0)
        for got, want in zip(narrowed.coeffs(), expected.coeffs()):
            deviation = max(
                deviation, abs(got.re - want.re), abs(got.im - want.im)
            )
        passed = deviation <= max(backend.eps, UNIT_HYPOTHESIS_TOL)
        print(f"# max deviation: {format_fixed(deviation, 10)}")
    else:
        passed = narrowed == expected
        print("# max deviation: 0.0000000000" if passed else "# states differ")
    print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_verify_teleport(args) -> int:
    backend = _backend_from_args(args)
    report = verify_teleportation(DEFAULT_INPUTS, backend)
    print(f"# teleportation verification, backend {backend.name},"
          f" {len(report.cases)} cases")
    for case in report.cases:
        print(
            f"# input alpha={format_cscalar(case.alpha)}"
            f" beta={format_cscalar(case.beta)}: {case.detail}"
        )
        print(case.summary_line())
    print("PASS" if report.all_passed else "FAIL")
    return EXIT_OK if report.all_passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qnet",
        description="Quantum-circuit netlist interpreter with exact"
        " Q[sqrt(2)] and approximate rational backends.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_backend_flags(p):
        p.add_argument(
            "--backend", choices=("exact", "approx"), default="exact",
            help="scalar backend (default: exact)",
        )
        p.add_argument(
            "--eps", metavar="RAT", default=None,
            help="tolerance for the approx backend (default 1/10^12)",
        )

    for name, text in (("run", "execute a circuit"), ("trace", "execute a circuit, dumping each step")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--circuit", required=True, help="circuit file")
        p.add_argument(
            "--state", required=True,
            help="initial state: a state file path, zero:<n>, or qubit:<cplx>,<cplx>",
        )
        p.add_argument("--qubits", type=int, default=None, help="declared qubit count")
        p.add_argument("--randoms", default=None, help="comma-separated rational draws")
        p.add_argument("--randoms-file", default=None, help="file with one rational draw per line")
        add_backend_flags(p)
        p.add_argument(
            "--emit", choices=("exact", "decimal"), default="exact",
            help="output rendering (default: exact)",
        )
        p.add_argument(
            "--digits", type=int, default=None,
            help="decimal places for --emit decimal (default 6)",
        )
        p.add_argument(
            "--sparse-output", action="store_true",
            help="omit zero-coefficient terms from the output",
        )
        p.set_defaults(func=lambda args: cmd_run(_run_config(args)))

    p = sub.add_parser("teleport", help="run the teleportation protocol once")
    p.add_argument("--alpha", required=True, help="payload |0> coefficient, cplx literal")
    p.add_argument("--beta", required=True, help="payload |1> coefficient, cplx literal")
    p.add_argument("--r1", required=True, help="first measurement draw, rational")
    p.add_argument("--r2", required=True, help="second measurement draw, rational")
    add_backend_flags(p)
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("verify-teleport", help="run the built-in verification suite")
    add_backend_flags(p)
    p.set_defaults(func=cmd_verify_teleport)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"qnet: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotRepresentableError as exc:
        print(
            f"qnet: error: {exc}\n"
            "qnet: hint: try --backend approx or --emit decimal",
            file=sys.stderr,
        )
        return EXIT_NOT_REPRESENTABLE
    except RandomStreamExhausted as exc:
        print(f"qnet: error: {exc}", file=sys.stderr)
        return EXIT_STREAM
    except (
        ValueError,
        ZeroDivisionError,
        IndexError,
        EntangledError,
        NotDeterministicError,
    ) as exc:
        print(f"qnet: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
