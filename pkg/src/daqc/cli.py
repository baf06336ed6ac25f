"""Command-line frontend.

Commands: compile, verify, trotter, sweep, counts.  Every command is
deterministic given its config file; all randomness is seeded there or via
--seed.  Exit codes: 0 success, 2 verification failure, 3 config error,
4 resource limit.  Output is plain text (NO_COLOR is trivially honored).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import network, noise, refocus, topology
from .circuits import parse_number, serialize_circuit
from .errors import ConfigError, DomainError, ResourceLimitError
from .fermion import (
    FermionHamiltonian,
    SpinfulHamiltonian,
    exact_evolution,
    jordan_wigner,
    jordan_wigner_spinful,
    random_hamiltonian,
    random_spinful_hamiltonian,
)
from .qcore import unitary_distance_up_to_phase
from .refocus import CompileTarget, RefocusSchedule, compile_spread, verify_schedule
from .topology import CouplingGraph, EntityPartition

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_CONFIG = 3
EXIT_RESOURCE = 4


def parse_angle(value):
    """Accept numbers, 'p/q' rationals, and pi expressions like 'pi/4', '3*pi/2'."""
    if isinstance(value, (int, float)):
        return Fraction(value) if isinstance(value, int) else value
    text = str(value).strip().lower().replace(" ", "")
    if "pi" in text:
        factor = 1.0
        num, _, den = text.partition("/")
        if num.endswith("*pi"):
            factor *= float(num[:-3])
        elif num != "pi":
            raise ConfigError(f"cannot parse angle {value!r}")
        if den:
            factor /= float(den)
        return factor * np.pi
    try:
        return parse_number(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse angle {value!r}") from exc


def load_config(path: str | None) -> dict:
    if path is None:
        raise ConfigError("this command needs --config PATH")
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}") from exc


def build_graph(config: dict) -> CouplingGraph:
    section = config.get("topology")
    if not isinstance(section, dict):
        raise ConfigError("config needs a [topology] section")
    kind = section.get("kind")
    coupling = parse_angle(section.get("coupling", 1))
    try:
        if kind == "chain":
            graph = topology.chain(int(section["n"]), coupling)
        elif kind == "complete":
            graph = topology.complete(int(section["n"]), coupling)
        elif kind == "ladder":
            graph = topology.ladder(int(section["n_sites"]), coupling)
        elif kind == "grid":
            if "rows" in section:
                graph = topology.grid(int(section["rows"]), int(section["cols"]), coupling)
            else:
                graph = topology.grid(*topology.grid_dims(int(section["n"])), coupling)
        elif kind == "explicit":
            couplings = {}
            for item in section["edges"]:
                edge, _, alpha = str(item).partition(":")
                p, q = edge.split("-")
                couplings[(int(p), int(q))] = parse_angle(alpha if alpha else 1)
            graph = CouplingGraph(int(section["n"]), couplings)
        else:
            raise ConfigError(f"unknown topology kind {kind!r}")
        overrides = section.get("edges") if kind != "explicit" else None
        if overrides:
            mapping = {}
            for item in overrides:
                edge, _, alpha = str(item).partition(":")
                p, q = edge.split("-")
                mapping[(int(p), int(q))] = parse_angle(alpha)
            graph = graph.with_couplings(mapping)
        return graph
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad [topology] section: {exc}") from exc


def build_partition(config: dict, graph: CouplingGraph) -> EntityPartition:
    section = config.get("compile", {})
    pairs = section.get("pairs")
    if pairs is None:
        raise ConfigError("config needs [compile] pairs = [[p, q], ...]")
    partition = EntityPartition.from_pairs(graph.n_qubits, [tuple(p) for p in pairs])
    partition.validate_for(graph)
    return partition


def _resolve_seed(section: dict, args, what: str) -> int:
    if args.seed is not None:
        return args.seed
    if "seed" in section:
        return int(section["seed"])
    raise ConfigError(f"{what} requests randomness: set seed in the config or pass --seed")


def build_hamiltonian(config: dict, args):
    section = config.get("trotter")
    if not isinstance(section, dict):
        raise ConfigError("config needs a [trotter] section")
    spinful = bool(section.get("spinful", False))
    source = section.get("hamiltonian", "random")
    if source == "random":
        bound = float(section.get("bound", 0.1))
        seed = _resolve_seed(section, args, "random hamiltonian")
        if spinful:
            return random_spinful_hamiltonian(int(section["n_sites"]), bound, seed), spinful
        return random_hamiltonian(int(section["n"]), bound, seed), spinful
    if source == "explicit":
        try:
            if spinful:
                return (
                    SpinfulHamiltonian(
                        int(section["n_sites"]),
                        np.asarray(section["hopping_up"], dtype=float),
                        np.asarray(section["hopping_down"], dtype=float),
                        np.asarray(section["onsite"], dtype=float),
                    ),
                    spinful,
                )
            n = int(section["n"])
            return (
                FermionHamiltonian(
                    n,
                    np.asarray(section.get("onsite", [0.0] * n), dtype=float),
                    np.asarray(section["hopping"], dtype=float),
                    np.asarray(section["density"], dtype=float),
                ),
                spinful,
            )
        except KeyError as exc:
            raise ConfigError(f"explicit hamiltonian is missing table {exc}") from exc
    raise ConfigError(f"unknown hamiltonian source {source!r}")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_compile(args) -> int:
    config = load_config(args.config)
    graph = build_graph(config)
    partition = build_partition(config, graph)
    theta = parse_angle(config.get("compile", {}).get("target_angle", "pi/4"))
    schedule = compile_spread(graph, partition, theta)
    out = Path(args.out or "schedule.txt")
    out.write_text(schedule.to_text())
    report = verify_schedule(schedule, graph, CompileTarget.uniform(partition, theta))
    print(f"wrote {out} ({len(schedule.segments)} segments, total duration "
          f"{float(schedule.total_duration):.6g})")
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_verify(args) -> int:
    config = load_config(args.config)
    graph = build_graph(config)
    partition = build_partition(config, graph)
    theta = parse_angle(config.get("compile", {}).get("target_angle", "pi/4"))
    try:
        schedule = RefocusSchedule.from_text(Path(args.schedule).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"schedule file not found: {args.schedule}") from exc
    report = verify_schedule(schedule, graph, CompileTarget.uniform(partition, theta))
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_trotter(args) -> int:
    config = load_config(args.config)
    section = config.get("trotter", {})
    hamiltonian, spinful = build_hamiltonian(config, args)
    dt = float(section.get("dt", 0.05))
    backend = args.backend or section.get("backend", "digital")
    graph = build_graph(config) if "topology" in config else None

    if spinful:
        circuit = network.trotter_step_spinful(hamiltonian, dt, backend=backend, graph=graph)
        final_order = None
    else:
        circuit, final_order = network.trotter_step_spinless(
            hamiltonian, dt, backend=backend, graph=graph
        )
    n = circuit.n_qubits

    out = Path(args.out or "circuit.txt")
    out.write_text(serialize_circuit(circuit))
    blocks = circuit.count_analog_blocks()
    cnots = circuit.count_two_qubit_gates("cnot")
    print(f"wrote {out} (n={n}, backend={backend}, analog blocks={blocks}, cnots={cnots})")
    if final_order is not None:
        print(f"final mode order: {list(final_order.perm)}")

    if n <= 10:
        if spinful:
            h_matrix = jordan_wigner_spinful(hamiltonian)
            reversal = network.spinful_reversal_unitary(hamiltonian.n_sites)
            build = lambda step_dt: network.trotter_step_spinful(
                hamiltonian, step_dt, backend=backend, graph=graph
            )
        else:
            h_matrix = jordan_wigner(hamiltonian)
            reversal = network.mode_reversal_unitary(n)
            build = lambda step_dt: network.trotter_step_spinless(
                hamiltonian, step_dt, backend=backend, graph=graph
            )[0]
        distances = []
        for step_dt in (dt, dt / 2):
            circ = build(step_dt)
            dist = unitary_distance_up_to_phase(
                network.circuit_unitary(circ), reversal @ exact_evolution(h_matrix, step_dt)
            )
            distances.append(dist)
            print(f"distance to exact evolution at dt={step_dt:.6g}: {dist:.6e}")
        if distances[1] > 0:
            print(f"halving dt shrank the error by {distances[0] / distances[1]:.2f}x "
                  f"(first-order Trotter predicts 4x)")
    else:
        print("n > 10: skipping the exact-evolution report")
    return EXIT_OK


def _write_csv(path: Path, result: noise.SweepResult) -> None:
    path.write_text(result.to_csv())
    print(f"wrote {path}")


def _sweep_from_config(config: dict, args) -> int:
    section = config.get("sweep")
    if not isinstance(section, dict):
        raise ConfigError("config needs a [sweep] section (or use --preset)")
    try:
        cfg = noise.SweepConfig(
            n_qubits=int(section["n"]),
            variable=str(section["variable"]),
            grid=[float(x) for x in section["grid"]],
            backend=args.backend or section.get("backend", "da"),
            n_states=int(section.get("n_states", 100)),
            seed=_resolve_seed(section, args, "sweep"),
            dt=float(section.get("dt", 1.0)),
            bound=float(section.get("bound", 0.1)),
        )
    except KeyError as exc:
        raise ConfigError(f"[sweep] section is missing {exc}") from exc
    result = noise.trotter_fidelity_sweep(cfg)
    _write_csv(Path(args.out or "sweep.csv"), result)
    return EXIT_OK


def _preset_cnot(args) -> int:
    ratios = np.linspace(0.0, 1.0, 21)
    points = noise.cnot_infidelity_curve(ratios)
    closed = np.cos(np.pi / 4 * ratios) ** 2
    worst = max(abs(f - c) for (_, f), c in zip(points, closed))
    out = Path(args.out or "cnot-fidelity.csv")
    lines = ["param,mean_fidelity,stderr,n_states,seed"]
    lines += [f"{r!r},{f!r},0.0,1,0" for r, f in points]
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out}")
    print(f"max deviation from cos^2((pi/4) a'/a): {worst:.3e}")
    if worst > 1e-10:
        print("FAIL: simulated curve departs from the closed form")
        return EXIT_VERIFY
    print("pass: matches the closed form within 1e-10")
    return EXIT_OK


def _preset_omega(args) -> int:
    seed = args.seed if args.seed is not None else 42
    cfg = noise.SweepConfig(
        n_qubits=8, variable="omega", grid=list(np.linspace(0.0, 0.2, 9)),
        backend="da", n_states=20, seed=seed,
    )
    result = noise.trotter_fidelity_sweep(cfg)
    _write_csv(Path(args.out or "omega-sweep.csv"), result)
    x = np.array([r.parameter for r in result.rows])
    y = 1.0 - np.array([r.mean_fidelity for r in result.rows])
    basis = np.vstack([x ** 2, x ** 4]).T
    (c2, c4), *_ = np.linalg.lstsq(basis, y, rcond=None)
    a1 = np.polyfit(x, y, 4)[3]
    print(f"quadratic fit: 1-F = {c2:.4f} w^2 + {c4:.4f} w^4; "
          f"free-fit linear term {a1:.3e} (threshold {0.1 * c2 * x.max():.3e})")
    return EXIT_OK


def _preset_noise(args) -> int:
    seed = args.seed if args.seed is not None else 42
    grid = [0.0, 0.00025, 0.0005, 0.00075, 0.001]
    base = Path(args.out or "noise-sweep")
    for backend in ("da", "digital"):
        sections = []
        for channel in noise.CHANNEL_KINDS:
            cfg = noise.SweepConfig(
                n_qubits=6, variable=channel, grid=grid,
                backend=backend, n_states=20, seed=seed,
            )
            result = noise.trotter_fidelity_sweep(cfg)
            sections.append(f"# channel: {channel}\n" + result.to_csv())
        path = base.with_name(base.name + f"-{backend}.csv")
        path.write_text("".join(sections))
        print(f"wrote {path}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.preset:
        presets = {
            "paper-fig-cnot": _preset_cnot,
            "paper-fig-omega": _preset_omega,
            "paper-fig-noise": _preset_noise,
        }
        if args.preset not in presets:
            raise ConfigError(
                f"unknown preset {args.preset!r} (choose from {', '.join(presets)})"
            )
        return presets[args.preset](args)
    return _sweep_from_config(load_config(args.config), args)


def cmd_counts(args) -> int:
    report = refocus.entangler_count(
        args.topology, args.n, regime=args.regime, seed=args.seed or 0
    )
    label = "CNOTs" if args.topology == "digital" else "entangler applications"
    print(f"{args.topology} n={args.n} regime={report.regime} ({label} per Trotter step)")
    closed = "-" if report.closed_form is None else str(report.closed_form)
    print(f"  closed form : {closed}")
    print(f"  measured    : {report.measured}")
    print(f"  scaling     : {report.scaling}")
    if report.closed_form is not None and report.closed_form != report.measured:
        print("FAIL: measured count differs from the closed form")
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="daqc",
        description="Compile, verify, and simulate digital-analog quantum circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="TOML run configuration")
        p.add_argument("--out", help="output path")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--backend", choices=("da", "digital"), help="override the backend")
        p.add_argument("--preset", help="named experiment preset")

    p = sub.add_parser("compile", help="compile pairs + couplings into a refocusing schedule")
    common(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="verify a schedule file against a config")
    p.add_argument("schedule", help="schedule file to verify")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trotter", help="build a Trotter-step circuit and error report")
    common(p)
    p.set_defaults(func=cmd_trotter)

    p = sub.add_parser("sweep", help="fidelity sweeps (CSV output)")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("counts", help="closed-form vs measured entangler counts")
    p.add_argument("topology", choices=("chain", "grid", "all-to-all", "digital"))
    p.add_argument("n", type=int)
    p.add_argument("--regime", choices=("uniform", "spread"), default="uniform")
    common(p)
    p.set_defaults(func=cmd_counts)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
